"""Planar and spatial sections of the set of n-level density matrices.

A section is the affine family

    rho(c) = I/n + (1/2) * sum_i c_i g_{a_i}

spanned by two or three of the su(n) generators from ``gellmann``.  With the
normalisation tr(g_a g_b) = 2 delta_ab the coefficients c are Euclidean
coordinates for the Hilbert-Schmidt metric: |rho(c) - rho(c')|_HS = |c - c'|
up to the common factor sqrt(1/2) absorbed into the convention used
throughout, and the purity is tr rho^2 = 1/n + |c|^2 / 2.  Every section is
star-shaped around the maximally mixed state at c = 0 and is contained in
the ball of radius sqrt(2 (n-1) / n).
"""

from dataclasses import dataclass

import numpy as np

from . import gellmann, linalg


@dataclass(frozen=True)
class SectionSpec:
    """A two- or three-generator section of the n-level state space."""

    n: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(int(a) for a in self.generators)
        if len(gens) not in (2, 3):
            raise ValueError("a section takes two or three generators")
        if len(set(gens)) != len(gens):
            raise ValueError("generator indices must be distinct")
        for a in gens:
            if not 1 <= a <= self.n * self.n - 1:
                raise ValueError(
                    f"generator index {a} outside 1..{self.n * self.n - 1}")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self):
        return len(self.generators)

    def basis(self):
        """The generator matrices spanning this section, stacked."""
        return np.stack([gellmann.generator(self.n, a)
                         for a in self.generators])


def bounding_radius(n):
    """Radius of the outer ball: the largest |c| over all density matrices,
    attained by pure states."""
    return np.sqrt(2.0 * (n - 1) / n)


def density(spec, coeffs):
    """The matrix I/n + (1/2) sum_i c_i g_i of the section at coefficients c
    (Hermitian and unit trace by construction, not necessarily positive)."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (spec.dim,):
        raise ValueError(f"expected {spec.dim} coefficients")
    rho = np.eye(spec.n, dtype=complex) / spec.n
    for c, a in zip(coeffs, spec.generators):
        rho += 0.5 * c * gellmann.generator(spec.n, a)
    return rho


def purity(spec, coeffs):
    """tr rho^2 = 1/n + |c|^2 / 2 for a point of the section."""
    coeffs = np.asarray(coeffs, dtype=float)
    return 1.0 / spec.n + 0.5 * float(coeffs @ coeffs)


def is_feasible(spec, coeffs, tol=0.0):
    """Whether the section point is a density matrix: all eigenvalues
    at least -tol."""
    return linalg.min_eigenvalue(density(spec, coeffs)) >= -tol
