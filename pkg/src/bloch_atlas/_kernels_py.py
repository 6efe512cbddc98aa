"""Pure-Python numeric core, interchangeable with ``bloch_atlas._kernels``.

Same algorithms and status conventions as the compiled module: cyclic Jacobi
with the rotation t = sign(tau) / (|tau| + sqrt(1 + tau^2)), convergence when
the off-diagonal Frobenius norm drops below tol_factor times the Frobenius
norm of the input, and closed-form minimum eigenvalues for the structured
two-generator profiles.  Batch paths are vectorised with numpy, so the
floating-point evaluation order differs from the compiled core at the level
of rounding; results agree to well below the 1e-12 tolerances used upstream.
"""

import numpy as np

BACKEND = "python"

_TWO_PI_3 = 2.0943951023931953  # 2*pi/3


# ---------------------------------------------------------------------------
# cyclic Jacobi core
# ---------------------------------------------------------------------------

def _off_norm(a):
    m = a.shape[0]
    iu = np.triu_indices(m, 1)
    return np.sqrt(2.0 * (a[iu] ** 2).sum())


def _jacobi_sweeps(a, v, max_sweeps, tol):
    """Diagonalise symmetric a in place; accumulate rotations into v if given.

    Returns (status, resid): status is the sweep count on convergence,
    -1 otherwise.
    """
    m = a.shape[0]
    for sweep in range(max_sweeps + 1):
        off = _off_norm(a)
        if off <= tol:
            return sweep, off
        if sweep == max_sweeps:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                mask = np.ones(m, dtype=bool)
                mask[p] = mask[q] = False
                akp = a[mask, p].copy()
                akq = a[mask, q].copy()
                a[mask, p] = c * akp - s * akq
                a[p, mask] = a[mask, p]
                a[mask, q] = s * akp + c * akq
                a[q, mask] = a[mask, q]
                if v is not None:
                    vkp = v[:, p].copy()
                    vkq = v[:, q].copy()
                    v[:, p] = c * vkp - s * vkq
                    v[:, q] = s * vkp + c * vkq
    return -1, _off_norm(a)


def eigvals(a, max_sweeps=64, tol_factor=1e-14):
    """Eigenvalues (ascending) of a real symmetric matrix.

    Returns (w, status, resid) with status = sweep count or -1.
    """
    buf = np.array(a, dtype=float)
    tol = tol_factor * np.linalg.norm(buf)
    status, resid = _jacobi_sweeps(buf, None, max_sweeps, tol)
    return np.sort(np.diag(buf)), status, resid


def eigen(a, max_sweeps=64, tol_factor=1e-14):
    """Eigenvalues (ascending) and eigenvector columns of a symmetric matrix.

    Returns (w, V, status, resid).
    """
    buf = np.array(a, dtype=float)
    m = buf.shape[0]
    v = np.eye(m)
    tol = tol_factor * np.linalg.norm(buf)
    status, resid = _jacobi_sweeps(buf, v, max_sweeps, tol)
    w = np.diag(buf)
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order], status, resid


def _batch_jacobi(mats, max_sweeps, tol_factor):
    """Run cyclic Jacobi on a stack of symmetric matrices, vectorised over
    the batch.  Returns (a, fail_index, worst_resid) with the final
    (near-diagonal) stack in a."""
    a = np.array(mats, dtype=float)
    B, m, _ = a.shape
    tol = tol_factor * np.sqrt((a * a).sum(axis=(1, 2)))
    iu = np.triu_indices(m, 1)
    off = np.sqrt(2.0 * (a[:, iu[0], iu[1]] ** 2).sum(axis=1))
    for sweep in range(max_sweeps):
        active = off > tol
        if not active.any():
            return a, -1, 0.0
        sub = a[active]
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = sub[:, p, q]
                rot = apq != 0.0
                tau = (sub[:, q, q] - sub[:, p, p]) / np.where(
                    rot, 2.0 * apq, 1.0)
                # tau*tau may overflow to inf for near-zero pivots; the
                # rotation then degenerates to the identity, which is right.
                with np.errstate(over="ignore", divide="ignore"):
                    hyp = np.sqrt(1.0 + tau * tau)
                    t = np.where(tau >= 0.0, 1.0 / (tau + hyp),
                                 -1.0 / (-tau + hyp))
                t = np.where(rot, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                colp = sub[:, :, p].copy()
                colq = sub[:, :, q].copy()
                sub[:, :, p] = c[:, None] * colp - s[:, None] * colq
                sub[:, :, q] = s[:, None] * colp + c[:, None] * colq
                rowp = sub[:, p, :].copy()
                rowq = sub[:, q, :].copy()
                sub[:, p, :] = c[:, None] * rowp - s[:, None] * rowq
                sub[:, q, :] = s[:, None] * rowp + c[:, None] * rowq
                sub[:, p, q] = np.where(rot, 0.0, sub[:, p, q])
                sub[:, q, p] = sub[:, p, q]
        a[active] = sub
        off = np.sqrt(2.0 * (a[:, iu[0], iu[1]] ** 2).sum(axis=1))
    bad = off > tol
    if bad.any():
        return a, int(np.nonzero(bad)[0][0]), float(off[bad].max())
    return a, -1, 0.0


def eigvals_batch(mats, max_sweeps=64, tol_factor=1e-14):
    """Eigenvalues (ascending) of a stack of symmetric matrices.

    Returns (W, fail_index, resid) with fail_index -1 on full success.
    """
    a, fail, resid = _batch_jacobi(mats, max_sweeps, tol_factor)
    m = a.shape[1]
    W = np.sort(a[:, np.arange(m), np.arange(m)], axis=1)
    return W, fail, resid


def min_eigs_batch(mats, max_sweeps=64, tol_factor=1e-14):
    """Minimum eigenvalue of each matrix in a stack of symmetric matrices."""
    a, fail, resid = _batch_jacobi(mats, max_sweeps, tol_factor)
    m = a.shape[1]
    return a[:, np.arange(m), np.arange(m)].min(axis=1), fail, resid


# ---------------------------------------------------------------------------
# radial-profile kernels
# ---------------------------------------------------------------------------

def _block_min(di, dj, w2):
    """Smaller eigenvalue of [[di, w], [conj(w), dj]] with w2 = |w|^2."""
    mean = 0.5 * (di + dj)
    half = 0.5 * (di - dj)
    return mean - np.sqrt(half * half + w2)


def _chain_min(e1, e2, e3, a2, b2):
    """Minimum eigenvalue of [[e1, a, 0], [conj(a), e2, b], [0, conj(b), e3]].

    Only |a|^2 and |b|^2 enter (no closed loop of couplings), so the
    trigonometric solution of the real symmetric case applies.
    """
    q = (e1 + e2 + e3) / 3.0
    f1 = e1 - q
    f2 = e2 - q
    f3 = e3 - q
    p2 = f1 * f1 + f2 * f2 + f3 * f3 + 2.0 * (a2 + b2)
    p = np.sqrt(np.maximum(p2, 0.0) / 6.0)
    detb = f1 * f2 * f3 - f1 * b2 - f3 * a2
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(p > 0.0, detb / (2.0 * p ** 3), 0.0)
    r = np.clip(r, -1.0, 1.0)
    return np.where(p2 > 0.0,
                    q + 2.0 * p * np.cos(np.arccos(r) / 3.0 + _TWO_PI_3), q)


def pair_profile_smax(diagA, diagB, caseid, idx, amps, ct, st):
    """Spectral slack -mu_min per condition for a two-generator profile.

    Same contract as the compiled version: for each of K conditions the
    direction matrix at angle theta is D = cos(theta)*A_k + sin(theta)*B_k
    with real diagonals and at most one strict-upper coupling per generator.
    caseid selects the closed form (0 diagonal, 1/2 single coupling on A/B,
    3 same pair, 4 disjoint pairs, 5 chained pairs); see _kernels.pyx for the
    index/amplitude layout.  Returns out[k, j] = -mu_min >= 0.
    """
    K = diagA.shape[0]
    N = ct.shape[0]
    out = np.empty((K, N))
    c2 = ct * ct
    s2 = st * st
    for k in range(K):
        d = np.outer(ct, diagA[k]) + np.outer(st, diagB[k])  # (N, n)
        dmin = d.min(axis=1)
        case = int(caseid[k])
        if case == 0:
            mu = dmin
        elif case in (1, 2, 3):
            if case == 1:
                w2 = c2 * amps[k, 0]
            elif case == 2:
                w2 = s2 * amps[k, 1]
            else:
                w2 = c2 * amps[k, 0] + s2 * amps[k, 1] \
                    + 2.0 * ct * st * amps[k, 2]
            mu = _block_min(d[:, idx[k, 0]], d[:, idx[k, 1]], w2)
        elif case == 4:
            mu = np.minimum(
                _block_min(d[:, idx[k, 0]], d[:, idx[k, 1]],
                           c2 * amps[k, 0]),
                _block_min(d[:, idx[k, 2]], d[:, idx[k, 3]],
                           s2 * amps[k, 1]))
        else:
            mu = _chain_min(d[:, idx[k, 0]], d[:, idx[k, 1]],
                            d[:, idx[k, 2]],
                            c2 * amps[k, 0], s2 * amps[k, 1])
        out[k] = -np.minimum(mu, dmin)
    return out


def profile_smax_jacobi(EA, EB, ct, st, max_sweeps=64, tol_factor=1e-14):
    """Spectral slack -mu_min of cos*EA + sin*EB by full Jacobi solves.

    Returns (out, fail_index, resid)."""
    mats = (ct[:, None, None] * np.asarray(EA)[None]
            + st[:, None, None] * np.asarray(EB)[None])
    mu, fail, resid = min_eigs_batch(mats, max_sweeps, tol_factor)
    return -mu, fail, resid


def triad_profile_smax_jacobi(EA, EB, EC, U, max_sweeps=64, tol_factor=1e-14):
    """Spectral slack -mu_min of u0*EA + u1*EB + u2*EC over directions U."""
    U = np.asarray(U)
    mats = (U[:, 0, None, None] * np.asarray(EA)[None]
            + U[:, 1, None, None] * np.asarray(EB)[None]
            + U[:, 2, None, None] * np.asarray(EC)[None])
    mu, fail, resid = min_eigs_batch(mats, max_sweeps, tol_factor)
    return -mu, fail, resid
