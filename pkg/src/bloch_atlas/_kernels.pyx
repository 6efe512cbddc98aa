# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True

"""Compiled numeric core: cyclic Jacobi eigensolver and radial-profile kernels.

``bloch_atlas._kernels_py`` is the pure-Python twin of this module; both
implement the same algorithms with the same conventions and are selected at
import time by ``bloch_atlas.kernels``.

All matrices handled here are real symmetric (complex Hermitian input is
embedded upstream as ``[[Re, -Im], [Im, Re]]``).  Status conventions: single
solves return a non-negative sweep count on success and -1 on nonconvergence;
batch solves return -1 on success and the index of the first failing matrix
otherwise.  Raising rich exceptions is left to the dispatch layer.
"""

import numpy as np

from libc.math cimport sqrt, acos, cos

# Largest matrix edge: Hermitian dimension cap 16, doubled by real embedding.
cdef enum:
    MAXDIM = 32

cdef double TWO_PI_3 = 2.0943951023931953  # 2*pi/3

BACKEND = "compiled"


# ---------------------------------------------------------------------------
# cyclic Jacobi core
# ---------------------------------------------------------------------------

cdef double _off_norm(double* a, int m) nogil:
    cdef double s = 0.0
    cdef int p, q
    for p in range(m - 1):
        for q in range(p + 1, m):
            s += a[p * m + q] * a[p * m + q]
    return sqrt(2.0 * s)


cdef double _frob_norm(double* a, int m) nogil:
    cdef double s = 0.0
    cdef int i
    for i in range(m * m):
        s += a[i] * a[i]
    return sqrt(s)


cdef int _jacobi_sweeps(double* a, double* v, int m, int max_sweeps,
                        double tol, double* resid) nogil:
    """Diagonalise symmetric a (row-major m*m) in place by cyclic Jacobi.

    If v is non-NULL it must contain the identity on entry; the applied
    rotations accumulate into it so its columns end up as eigenvectors.
    Returns the sweep count on convergence (off-diagonal Frobenius norm at
    most tol), -1 otherwise; *resid receives the final off-diagonal norm.
    """
    cdef int sweep, p, q, k
    cdef double off, apq, tau, t, c, s, akp, akq
    for sweep in range(max_sweeps + 1):
        off = _off_norm(a, m)
        if off <= tol:
            resid[0] = off
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p * m + q]
                if apq == 0.0:
                    continue
                tau = (a[q * m + q] - a[p * m + p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                a[p * m + p] -= t * apq
                a[q * m + q] += t * apq
                a[p * m + q] = 0.0
                a[q * m + p] = 0.0
                for k in range(m):
                    if k == p or k == q:
                        continue
                    akp = a[k * m + p]
                    akq = a[k * m + q]
                    a[k * m + p] = c * akp - s * akq
                    a[p * m + k] = a[k * m + p]
                    a[k * m + q] = s * akp + c * akq
                    a[q * m + k] = a[k * m + q]
                if v != NULL:
                    for k in range(m):
                        akp = v[k * m + p]
                        akq = v[k * m + q]
                        v[k * m + p] = c * akp - s * akq
                        v[k * m + q] = s * akp + c * akq
    resid[0] = _off_norm(a, m)
    return -1


cdef void _sort_diag(double* a, int m, double* w) nogil:
    """Insertion-sort the diagonal of a into w (ascending)."""
    cdef int i, j
    cdef double x
    for i in range(m):
        w[i] = a[i * m + i]
    for i in range(1, m):
        x = w[i]
        j = i - 1
        while j >= 0 and w[j] > x:
            w[j + 1] = w[j]
            j -= 1
        w[j + 1] = x


cdef double _min_diag(double* a, int m) nogil:
    cdef double x = a[0]
    cdef int i
    for i in range(1, m):
        if a[i * m + i] < x:
            x = a[i * m + i]
    return x


def eigvals(double[:, ::1] a, int max_sweeps=64, double tol_factor=1e-14):
    """Eigenvalues (ascending) of a real symmetric matrix.

    Returns (w, status, resid) with status = sweep count or -1.
    """
    cdef int m = a.shape[0]
    cdef double buf[MAXDIM * MAXDIM]
    cdef double wbuf[MAXDIM]
    cdef double resid = 0.0
    cdef int i, j, status
    for i in range(m):
        for j in range(m):
            buf[i * m + j] = a[i, j]
    cdef double tol = tol_factor * _frob_norm(buf, m)
    status = _jacobi_sweeps(buf, NULL, m, max_sweeps, tol, &resid)
    _sort_diag(buf, m, wbuf)
    w = np.empty(m)
    for i in range(m):
        w[i] = wbuf[i]
    return w, status, resid


def eigen(double[:, ::1] a, int max_sweeps=64, double tol_factor=1e-14):
    """Eigenvalues (ascending) and eigenvector columns of a symmetric matrix.

    Returns (w, V, status, resid).
    """
    cdef int m = a.shape[0]
    cdef double buf[MAXDIM * MAXDIM]
    cdef double vbuf[MAXDIM * MAXDIM]
    cdef double resid = 0.0
    cdef int i, j, status
    for i in range(m):
        for j in range(m):
            buf[i * m + j] = a[i, j]
            vbuf[i * m + j] = 1.0 if i == j else 0.0
    cdef double tol = tol_factor * _frob_norm(buf, m)
    status = _jacobi_sweeps(buf, vbuf, m, max_sweeps, tol, &resid)
    # sort columns by eigenvalue
    order = np.argsort([buf[i * m + i] for i in range(m)], kind="stable")
    w = np.empty(m)
    V = np.empty((m, m))
    for j in range(m):
        w[j] = buf[order[j] * m + order[j]]
        for i in range(m):
            V[i, j] = vbuf[i * m + order[j]]
    return w, V, status, resid


def eigvals_batch(double[:, :, ::1] mats, int max_sweeps=64,
                  double tol_factor=1e-14):
    """Eigenvalues (ascending) of a stack of symmetric matrices.

    Returns (W, fail_index, resid) with fail_index -1 on full success.
    """
    cdef int B = mats.shape[0]
    cdef int m = mats.shape[1]
    cdef double buf[MAXDIM * MAXDIM]
    cdef double wbuf[MAXDIM]
    cdef double resid = 0.0, worst = 0.0
    cdef int b, i, j, status, fail = -1
    W = np.empty((B, m))
    cdef double[:, ::1] Wv = W
    for b in range(B):
        for i in range(m):
            for j in range(m):
                buf[i * m + j] = mats[b, i, j]
        status = _jacobi_sweeps(buf, NULL, m, max_sweeps,
                                tol_factor * _frob_norm(buf, m), &resid)
        if status < 0 and fail < 0:
            fail = b
            worst = resid
        _sort_diag(buf, m, wbuf)
        for i in range(m):
            Wv[b, i] = wbuf[i]
    return W, fail, worst


def min_eigs_batch(double[:, :, ::1] mats, int max_sweeps=64,
                   double tol_factor=1e-14):
    """Minimum eigenvalue of each matrix in a stack of symmetric matrices."""
    cdef int B = mats.shape[0]
    cdef int m = mats.shape[1]
    cdef double buf[MAXDIM * MAXDIM]
    cdef double resid = 0.0, worst = 0.0
    cdef int b, i, j, status, fail = -1
    out = np.empty(B)
    cdef double[::1] ov = out
    for b in range(B):
        for i in range(m):
            for j in range(m):
                buf[i * m + j] = mats[b, i, j]
        status = _jacobi_sweeps(buf, NULL, m, max_sweeps,
                                tol_factor * _frob_norm(buf, m), &resid)
        if status < 0 and fail < 0:
            fail = b
            worst = resid
        ov[b] = _min_diag(buf, m)
    return out, fail, worst


# ---------------------------------------------------------------------------
# radial-profile kernels
# ---------------------------------------------------------------------------

cdef inline double _block_min(double di, double dj, double w2) nogil:
    """Smaller eigenvalue of [[di, w], [conj(w), dj]] with w2 = |w|^2."""
    cdef double mean = 0.5 * (di + dj)
    cdef double half = 0.5 * (di - dj)
    return mean - sqrt(half * half + w2)


cdef inline double _chain_min(double e1, double e2, double e3,
                              double a2, double b2) nogil:
    """Minimum eigenvalue of [[e1, a, 0], [conj(a), e2, b], [0, conj(b), e3]].

    Only |a|^2 and |b|^2 enter (no closed loop of couplings), so the
    trigonometric solution of the real symmetric case applies.
    """
    cdef double q = (e1 + e2 + e3) / 3.0
    cdef double f1 = e1 - q
    cdef double f2 = e2 - q
    cdef double f3 = e3 - q
    cdef double p2 = f1 * f1 + f2 * f2 + f3 * f3 + 2.0 * (a2 + b2)
    if p2 <= 0.0:
        return q
    cdef double p = sqrt(p2 / 6.0)
    cdef double detb = f1 * f2 * f3 - f1 * b2 - f3 * a2
    cdef double r = detb / (2.0 * p * p * p)
    if r < -1.0:
        r = -1.0
    elif r > 1.0:
        r = 1.0
    return q + 2.0 * p * cos(acos(r) / 3.0 + TWO_PI_3)


def pair_profile_smax(double[:, ::1] diagA, double[:, ::1] diagB,
                      int[::1] caseid, int[:, ::1] idx, double[:, ::1] amps,
                      double[::1] ct, double[::1] st):
    """Spectral slack -mu_min per condition for a two-generator profile.

    For each of K conditions the direction matrix at angle theta is
    D = cos(theta)*A_k + sin(theta)*B_k where A_k/B_k have real diagonals
    diagA[k]/diagB[k] and at most one strict-upper coupling each.  caseid[k]
    selects the closed form:

        0 diagonal only
        1 coupling on A only       idx[k] = (i, j, -, -), amps[k,0] = |wA|^2
        2 coupling on B only       idx[k] = (i, j, -, -), amps[k,1] = |wB|^2
        3 same pair on A and B     idx[k,0:2] = (i, j); amps[k] =
                                   (|wA|^2, |wB|^2, Re(wA * conj(wB)))
        4 disjoint pairs           idx[k] = (iA, jA, iB, jB)
        5 chained pairs            idx[k,0:3] = (outerA, shared, outerB)

    Because the minimum eigenvalue of a Hermitian matrix never exceeds its
    smallest diagonal entry, the global diagonal minimum can safely include
    the coupled rows.  Returns out with out[k, j] = -mu_min >= 0.
    """
    cdef int K = diagA.shape[0]
    cdef int n = diagA.shape[1]
    cdef int N = ct.shape[0]
    out = np.empty((K, N))
    cdef double[:, ::1] ov = out
    cdef double d[MAXDIM]
    cdef int k, j, i, case
    cdef double c, s, dmin, mu, w2, c2, s2
    with nogil:
        for j in range(N):
            c = ct[j]
            s = st[j]
            c2 = c * c
            s2 = s * s
            for k in range(K):
                dmin = c * diagA[k, 0] + s * diagB[k, 0]
                d[0] = dmin
                for i in range(1, n):
                    d[i] = c * diagA[k, i] + s * diagB[k, i]
                    if d[i] < dmin:
                        dmin = d[i]
                case = caseid[k]
                mu = dmin
                if case == 1:
                    w2 = c2 * amps[k, 0]
                    mu = _block_min(d[idx[k, 0]], d[idx[k, 1]], w2)
                elif case == 2:
                    w2 = s2 * amps[k, 1]
                    mu = _block_min(d[idx[k, 0]], d[idx[k, 1]], w2)
                elif case == 3:
                    w2 = c2 * amps[k, 0] + s2 * amps[k, 1] \
                        + 2.0 * c * s * amps[k, 2]
                    mu = _block_min(d[idx[k, 0]], d[idx[k, 1]], w2)
                elif case == 4:
                    mu = _block_min(d[idx[k, 0]], d[idx[k, 1]],
                                    c2 * amps[k, 0])
                    w2 = _block_min(d[idx[k, 2]], d[idx[k, 3]],
                                    s2 * amps[k, 1])
                    if w2 < mu:
                        mu = w2
                elif case == 5:
                    mu = _chain_min(d[idx[k, 0]], d[idx[k, 1]], d[idx[k, 2]],
                                    c2 * amps[k, 0], s2 * amps[k, 1])
                if dmin < mu:
                    mu = dmin
                ov[k, j] = -mu
    return out


def profile_smax_jacobi(double[:, ::1] EA, double[:, ::1] EB,
                        double[::1] ct, double[::1] st,
                        int max_sweeps=64, double tol_factor=1e-14):
    """Spectral slack -mu_min of cos*EA + sin*EB by full Jacobi solves.

    General-purpose twin of pair_profile_smax used for cross-validation and
    for bases without coupling structure.  Returns (out, fail_index, resid).
    """
    cdef int m = EA.shape[0]
    cdef int N = ct.shape[0]
    cdef double buf[MAXDIM * MAXDIM]
    cdef double resid = 0.0, worst = 0.0
    cdef int j, i, k, status, fail = -1
    out = np.empty(N)
    cdef double[::1] ov = out
    for j in range(N):
        for i in range(m):
            for k in range(m):
                buf[i * m + k] = ct[j] * EA[i, k] + st[j] * EB[i, k]
        status = _jacobi_sweeps(buf, NULL, m, max_sweeps,
                                tol_factor * _frob_norm(buf, m), &resid)
        if status < 0 and fail < 0:
            fail = j
            worst = resid
        ov[j] = -_min_diag(buf, m)
    return out, fail, worst


def triad_profile_smax_jacobi(double[:, ::1] EA, double[:, ::1] EB,
                              double[:, ::1] EC, double[:, ::1] U,
                              int max_sweeps=64, double tol_factor=1e-14):
    """Spectral slack -mu_min of u0*EA + u1*EB + u2*EC over directions U."""
    cdef int m = EA.shape[0]
    cdef int N = U.shape[0]
    cdef double buf[MAXDIM * MAXDIM]
    cdef double resid = 0.0, worst = 0.0
    cdef double u0, u1, u2
    cdef int j, i, k, status, fail = -1
    out = np.empty(N)
    cdef double[::1] ov = out
    for j in range(N):
        u0 = U[j, 0]
        u1 = U[j, 1]
        u2 = U[j, 2]
        for i in range(m):
            for k in range(m):
                buf[i * m + k] = u0 * EA[i, k] + u1 * EB[i, k] + u2 * EC[i, k]
        status = _jacobi_sweeps(buf, NULL, m, max_sweeps,
                                tol_factor * _frob_norm(buf, m), &resid)
        if status < 0 and fail < 0:
            fail = j
            worst = resid
        ov[j] = -_min_diag(buf, m)
    return out, fail, worst
