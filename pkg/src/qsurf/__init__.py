"""Normal forms and truncated representations for quantum spheres, the quantum disc and quantum RP^2."""

__version__ = "0.1.0"
