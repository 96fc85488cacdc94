"""Numerical laboratory for mixed-dispersion fourth-order Schrodinger flows
on hyperbolic space and rotationally symmetric manifolds."""

from .errors import SignalError
from .manifold import ManifoldProfile

__all__ = ["SignalError", "ManifoldProfile"]
__version__ = "0.1.0"
