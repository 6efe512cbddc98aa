"""Partial transposition of density matrices.

Two equivalent views are provided.  The block form "pxq" reads the n x n
matrix (n = p*q) as a q x q array of p x p blocks and transposes every block
in place; row index r corresponds to (a, b) with r = p*a + b.  The subsystem
form carries explicit tensor-factor dimensions (d_0, ..., d_{k-1}) and
transposes any subset of factors by index arithmetic; "pxq" coincides with
dims (q, p) transposing factor 1.  Three-factor labels like "mid222"
(dims (2, 2, 2), middle factor transposed) have no two-factor block
equivalent and use the subsystem form directly.

Partial transposition is an involution, preserves Hermiticity and trace, and
is a Hilbert-Schmidt isometry; it maps diagonal entries to diagonal entries
and off-diagonal positions to off-diagonal positions.
"""

import numpy as np


def block_transpose(rho, p, q):
    """Transpose each p x p block of an n x n matrix (n = p*q) in place."""
    rho = np.asarray(rho)
    n = p * q
    if rho.shape != (n, n):
        raise ValueError(f"expected a {n} x {n} matrix for blocks {p}x{q}")
    return rho.reshape(q, p, q, p).transpose(0, 3, 2, 1).reshape(n, n)


def subsystem_transpose(rho, dims, which):
    """Transpose the tensor factors listed in which (0-based indices into
    dims) of a matrix acting on the product space of dimensions dims."""
    rho = np.asarray(rho)
    dims = tuple(int(d) for d in dims)
    n = int(np.prod(dims))
    if rho.shape != (n, n):
        raise ValueError(f"expected a {n} x {n} matrix for dims {dims}")
    k = len(dims)
    axes = list(range(2 * k))
    for i in which:
        axes[i], axes[k + i] = axes[k + i], axes[i]
    return rho.reshape(dims + dims).transpose(axes).reshape(n, n)


class TransposeMap:
    """A named partial-transpose operation on n x n matrices."""

    def __init__(self, label, dims, which):
        self.label = label
        self.dims = tuple(int(d) for d in dims)
        self.which = tuple(int(i) for i in which)
        self.n = int(np.prod(self.dims))

    def apply(self, rho):
        return subsystem_transpose(rho, self.dims, self.which)

    def __repr__(self):
        return f"TransposeMap({self.label!r}, dims={self.dims}, which={self.which})"

    def __eq__(self, other):
        return (isinstance(other, TransposeMap)
                and (self.dims, self.which) == (other.dims, other.which))

    def __hash__(self):
        return hash((self.dims, self.which))


def transpose_map(label):
    """Parse a partial-transpose label into a TransposeMap.

    "pxq" (e.g. "3x2") transposes the p x p blocks of a q x q block grid;
    "mid222" transposes the middle factor of a 2 x 2 x 2 product.
    """
    text = label.strip().lower()
    if text == "mid222":
        return TransposeMap("mid222", (2, 2, 2), (1,))
    parts = text.split("x")
    if len(parts) == 2:
        try:
            p, q = int(parts[0]), int(parts[1])
        except ValueError:
            p = q = 0
        if p >= 2 and q >= 2:
            return TransposeMap(f"{p}x{q}", (q, p), (1,))
    raise ValueError(f"unrecognised partial-transpose label {label!r}")


def is_ppt(rho, maps, tol=0.0):
    """Whether rho stays positive under every transpose map in maps."""
    from . import linalg
    return all(linalg.min_eigenvalue(m.apply(rho)) >= -tol for m in maps)
