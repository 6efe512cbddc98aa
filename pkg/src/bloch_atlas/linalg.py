"""Hermitian eigenproblems on top of the real symmetric Jacobi kernels.

Complex Hermitian matrices are reduced to real symmetric ones through the
standard embedding

    M = X + iY  ->  E = [[X, -Y], [Y, X]]   (2m x 2m),

whose spectrum is that of M with every eigenvalue doubled: if M z = w z with
z = x + iy then both (x, y) and (-y, x) are eigenvectors of E.  Eigenvalues
are therefore collapsed pairwise after sorting, and eigenvectors are pulled
back to complex form cluster by cluster.
"""

import numpy as np

from . import kernels

_HERM_TOL = 1e-12


def _as_matrix(h):
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("expected a square matrix")
    return h


def check_hermitian(h, tol=_HERM_TOL):
    """Raise ValueError unless h equals its conjugate transpose within tol
    (relative to its norm)."""
    h = _as_matrix(h)
    scale = max(np.linalg.norm(h), 1.0)
    dev = np.linalg.norm(h - h.conj().T)
    if dev > tol * scale:
        raise ValueError(f"matrix is not Hermitian: deviation {dev:.3e}")
    return h


def embed_hermitian(h):
    """Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix."""
    h = _as_matrix(h)
    x = np.real(h)
    y = np.imag(h)
    return np.block([[x, -y], [y, x]])


def collapse_doubled(w):
    """Collapse the pairwise-doubled sorted spectrum of an embedded matrix.

    The 2m sorted values come in coincident pairs; averaging consecutive
    pairs recovers the m underlying eigenvalues even when rounding mixes
    near-degenerate neighbours, because sums over clusters are preserved.
    """
    w = np.asarray(w)
    return 0.5 * (w[0::2] + w[1::2])


def eigvalsh(h, max_sweeps=64, tol_factor=1e-14):
    """Eigenvalues (ascending) of a real symmetric or complex Hermitian
    matrix, computed with the cyclic Jacobi kernel."""
    h = check_hermitian(h)
    if np.isrealobj(h) or not np.iscomplexobj(h):
        return kernels.sym_eigvals(np.real(h), max_sweeps, tol_factor)
    if np.abs(h.imag).max() == 0.0:
        return kernels.sym_eigvals(np.ascontiguousarray(h.real),
                                   max_sweeps, tol_factor)
    w2 = kernels.sym_eigvals(embed_hermitian(h), max_sweeps, tol_factor)
    return collapse_doubled(w2)


def min_eigenvalue(h, max_sweeps=64, tol_factor=1e-14):
    """Smallest eigenvalue of a Hermitian matrix."""
    return eigvalsh(h, max_sweeps, tol_factor)[0]


def _cluster_bounds(w, tol):
    """Split the sorted eigenvalue list into clusters of near-equal values."""
    bounds = [0]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] > tol:
            bounds.append(i)
    bounds.append(len(w))
    return bounds


def eigh(h, max_sweeps=64, tol_factor=1e-14):
    """Eigenvalues (ascending) and orthonormal eigenvector columns.

    Real symmetric input gives real vectors; complex Hermitian input is
    solved through the real embedding and the doubled eigenspaces are
    reduced back to complex orthonormal bases by pivoted Gram-Schmidt
    within each eigenvalue cluster.
    """
    h = check_hermitian(h)
    if not np.iscomplexobj(h) or np.abs(h.imag).max() == 0.0:
        return kernels.sym_eigen(np.ascontiguousarray(np.real(h)),
                                 max_sweeps, tol_factor)
    m = h.shape[0]
    w2, V2 = kernels.sym_eigen(embed_hermitian(h), max_sweeps, tol_factor)
    cand = V2[:m] + 1j * V2[m:]          # complex image of each real column
    scale = max(abs(w2[0]), abs(w2[-1]), 1.0)
    bounds = _cluster_bounds(w2, 1e-10 * scale)
    w = np.empty(m)
    V = np.empty((m, m), dtype=complex)
    col = 0
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        k = (hi - lo) // 2               # complex multiplicity
        pool = [cand[:, j].copy() for j in range(lo, hi)]
        for _ in range(k):
            norms = [np.linalg.norm(v) for v in pool]
            best = int(np.argmax(norms))
            v = pool[best] / norms[best]
            w[col] = w2[lo:hi].mean()
            V[:, col] = v
            col += 1
            pool = [u - v * (v.conj() @ u)
                    for j, u in enumerate(pool) if j != best]
    return w, V
