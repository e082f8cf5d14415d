import json
import math

import pytest

from qsurf.suites import (
    Check,
    SuiteConfig,
    VerificationReport,
    emit,
    equal,
    exact,
    residual,
    run_suite,
)


def test_config_defaults_and_validation():
    cfg = SuiteConfig()
    assert cfg.q == 0.5 and math.isinf(cfg.c) and cfg.dim == 64
    for bad in ({"q": 0.0}, {"c": -1.0}, {"dim": 3}, {"tol": 0.0}, {"suite": "x"}):
        with pytest.raises(ValueError):
            SuiteConfig(**bad)


def test_from_sources():
    cfg = SuiteConfig.from_sources({"q": None, "c": "10"}, {"QSURF_Q": "0.25", "QSURF_C": "inf"})
    assert cfg.q == 0.25 and cfg.c == 10.0
    with pytest.raises(ValueError, match="QSURF_TOL"):
        SuiteConfig.from_sources({}, {"QSURF_TOL": "tiny"})


def test_check_helpers():
    assert residual("r", "a", 1e-13, 1e-12).passed
    assert not residual("r", "a", 1e-11, 1e-12).passed
    assert exact("e", "a", 0).passed and not exact("e", "a", 1e-30).passed
    assert equal("k", "a", 2, 2).passed and not equal("k", "a", 1, 2).passed


def test_empty_report_passes():
    r = VerificationReport("0", {})
    assert r.passed
    assert json.loads(emit(r))["pass"] is True
    assert b"overall: PASS" in emit(r, "text")


def test_one_failure_fails_report():
    r = VerificationReport("0", {}, [residual("a", "x", 0.0, 1.0), residual("b", "y", 2.0, 1.0)])
    assert not r.passed and [c.id for c in r.failures()] == ["b"]
    assert json.loads(emit(r))["pass"] is False
    with pytest.raises(ValueError):
        emit(r, "xml")


def test_round_trip():
    checks = [Check("s", "spectrum of A", "spectrum", [0.25, 1.0], None, True),
              residual("r", "rel", 1e-14, 1e-12), equal("n", "rank", 2, 2)]
    r = VerificationReport("0.1.0", SuiteConfig().as_dict(), checks)
    back = VerificationReport.from_dict(json.loads(emit(r)))
    assert emit(back) == emit(r)
    assert back.passed == r.passed


def test_ktheory_suite_ranks():
    r = run_suite(SuiteConfig(suite="ktheory", q=0.5, dim=64))
    ranks = {c.id: c.value for c in r.checks if c.kind == "rank"}
    assert ranks["ktheory.rp2.rank[N=64]"] == 2
    assert ranks["ktheory.disc.rank[N=64]"] == 1
    assert r.passed


def test_geometry_suite_at_c1():
    r = run_suite(SuiteConfig(suite="geometry", q=0.5, c=1.0))
    assert r.passed
    ident = [c for c in r.checks if c.id.startswith("geometry.identity")]
    assert ident and all(c.value < 1e-12 for c in ident)


def test_same_seed_same_report():
    a = emit(run_suite(SuiteConfig(suite="disc", seed=5)))
    b = emit(run_suite(SuiteConfig(suite="disc", seed=5)))
    assert a == b
