"""Hilbert-Schmidt geometry of low-dimensional sections of quantum state
spaces: feasibility and positive-partial-transpose regions of two- and
three-parameter families of n-level density matrices, their areas, volumes
and boundary structure, equivalence-class surveys over generator pairs, and
quasi-Monte-Carlo volume estimates for the full two-qubit state space."""

__version__ = "0.1.0"

from .errors import (BlochAtlasError, ComparisonError, NumericalFailureError,
                     QuadratureError)

__all__ = [
    "BlochAtlasError",
    "ComparisonError",
    "NumericalFailureError",
    "QuadratureError",
    "__version__",
]
