"""Numerical hyperbolic/trigonometric/elliptic gamma functions and the
beta-integral identity verification harness built on top of them."""

from . import errors, hypgamma, integrals, oracle, qseries, quadrature, sums

__all__ = ["errors", "qseries", "quadrature", "hypgamma", "sums", "integrals",
           "oracle"]
__version__ = "0.1.0"
