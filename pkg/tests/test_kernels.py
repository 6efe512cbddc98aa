"""Jacobi kernels against numpy's LAPACK-backed eigensolver, on both
backends, plus the closed-form structured profile kernel against explicit
matrix assembly."""

import numpy as np
import pytest

from bloch_atlas import kernels
from bloch_atlas.errors import NumericalFailureError

BACKENDS = ["python"]
try:
    from bloch_atlas import _kernels  # noqa: F401
    BACKENDS.insert(0, "compiled")
except ImportError:
    pass


@pytest.fixture(params=BACKENDS)
def backend(request):
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(BACKENDS[0])


def _random_sym(rng, m):
    a = rng.standard_normal((m, m))
    return a + a.T


def test_eigvals_matches_lapack(backend):
    rng = np.random.default_rng(20240811)
    for m in (2, 3, 5, 8, 12, 16, 20, 32):
        a = _random_sym(rng, m)
        w = kernels.sym_eigvals(a)
        assert np.all(np.diff(w) >= 0)
        assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-12)


def test_eigen_reconstructs_matrix(backend):
    rng = np.random.default_rng(5)
    for m in (2, 4, 9, 16):
        a = _random_sym(rng, m)
        w, v = kernels.sym_eigen(a)
        assert np.allclose(v @ np.diag(w) @ v.T, a, atol=1e-11)
        assert np.allclose(v.T @ v, np.eye(m), atol=1e-12)


def test_eigvals_degenerate_and_diagonal(backend):
    # already-diagonal input converges in zero sweeps and exactly
    w = kernels.sym_eigvals(np.diag([3.0, -1.0, 2.0, -1.0]))
    assert np.array_equal(w, [-1.0, -1.0, 2.0, 3.0])
    # high multiplicity
    a = np.eye(6) * 0.25
    a[4, 5] = a[5, 4] = 0.75
    assert np.allclose(kernels.sym_eigvals(a),
                       [-0.5, 0.25, 0.25, 0.25, 0.25, 1.0], atol=1e-14)


def test_eigvals_batch_and_min(backend):
    rng = np.random.default_rng(99)
    mats = rng.standard_normal((25, 10, 10))
    mats = mats + mats.transpose(0, 2, 1)
    ref = np.linalg.eigvalsh(mats)
    assert np.allclose(kernels.sym_eigvals_batch(mats), ref, atol=1e-12)
    assert np.allclose(kernels.sym_min_eigs_batch(mats), ref[:, 0],
                       atol=1e-12)


def test_nonconvergence_raises(backend):
    a = _random_sym(np.random.default_rng(1), 8)
    with pytest.raises(NumericalFailureError) as info:
        kernels.sym_eigvals(a, max_sweeps=0)
    assert info.value.residual > 0


def test_dimension_cap(backend):
    with pytest.raises(ValueError):
        kernels.sym_eigvals(np.eye(33))


def test_backends_agree():
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend not built")
    rng = np.random.default_rng(17)
    a = _random_sym(rng, 13)
    kernels.set_backend("compiled")
    wc = kernels.sym_eigvals(a)
    kernels.set_backend("python")
    wp = kernels.sym_eigvals(a)
    kernels.set_backend(BACKENDS[0])
    assert np.allclose(wc, wp, atol=1e-13)


# ---------------------------------------------------------------------------
# structured profile kernel: every case against explicit matrices
# ---------------------------------------------------------------------------

def _structured_reference(dA, dB, couplA, couplB, ct, st):
    """Assemble cos*A + sin*B explicitly (complex couplings allowed) and
    take -lambda_min by LAPACK, as the independent oracle."""
    n = len(dA)
    A = np.diag(dA).astype(complex)
    B = np.diag(dB).astype(complex)
    for (i, j, w), M in ((couplA, A), (couplB, B)):
        if w != 0:
            M[i, j] = w
            M[j, i] = np.conj(w)
    out = np.empty(len(ct))
    for k, (c, s) in enumerate(zip(ct, st)):
        out[k] = -np.linalg.eigvalsh(c * A + s * B)[0]
    return out


def _run_structured(case, dA, dB, couplA, couplB, idx, amps, backend_name):
    th = np.linspace(0.0, 2.0 * np.pi, 41)
    ct, st = np.cos(th), np.sin(th)
    kernels.set_backend(backend_name)
    out = kernels.pair_profile_smax(
        dA[None], dB[None], np.array([case], dtype=np.intc),
        np.array([idx], dtype=np.intc), np.array([amps]), ct, st)
    kernels.set_backend(BACKENDS[0])
    ref = _structured_reference(dA, dB, couplA, couplB, ct, st)
    assert np.allclose(out[0], ref, atol=1e-13), abs(out[0] - ref).max()


@pytest.mark.parametrize("backend_name", BACKENDS)
def test_structured_cases(backend_name):
    rng = np.random.default_rng(42)
    n = 6
    dA = rng.standard_normal(n)
    dB = rng.standard_normal(n)
    wA = 0.7 - 0.3j
    wB = -0.4 + 0.9j
    # case 0: no couplings
    _run_structured(0, dA, dB, (0, 1, 0.0), (0, 1, 0.0),
                    [0, 0, 0, 0], [0.0, 0.0, 0.0], backend_name)
    # case 1: coupling on A only at (1, 4)
    _run_structured(1, dA, dB, (1, 4, wA), (0, 1, 0.0),
                    [1, 4, 0, 0], [abs(wA) ** 2, 0.0, 0.0], backend_name)
    # case 2: coupling on B only at (0, 3)
    _run_structured(2, dA, dB, (0, 1, 0.0), (0, 3, wB),
                    [0, 3, 0, 0], [0.0, abs(wB) ** 2, 0.0], backend_name)
    # case 3: same pair (2, 5) on both
    _run_structured(3, dA, dB, (2, 5, wA), (2, 5, wB), [2, 5, 0, 0],
                    [abs(wA) ** 2, abs(wB) ** 2,
                     (wA * np.conj(wB)).real], backend_name)
    # case 4: disjoint pairs (0, 2) and (3, 5)
    _run_structured(4, dA, dB, (0, 2, wA), (3, 5, wB), [0, 2, 3, 5],
                    [abs(wA) ** 2, abs(wB) ** 2, 0.0], backend_name)
    # case 5: chain sharing index 3: A couples (1, 3), B couples (3, 5)
    _run_structured(5, dA, dB, (1, 3, wA), (3, 5, wB), [1, 3, 5, 0],
                    [abs(wA) ** 2, abs(wB) ** 2, 0.0], backend_name)


@pytest.mark.parametrize("backend_name", BACKENDS)
def test_structured_many_random_chains(backend_name):
    # the chain (arrowhead) case is the most delicate closed form; hammer it
    rng = np.random.default_rng(2718)
    for _ in range(40):
        n = int(rng.integers(3, 11))
        perm = rng.permutation(n)
        i0, sh, i1 = perm[:3]
        dA = rng.standard_normal(n)
        dB = rng.standard_normal(n)
        wA = complex(*rng.standard_normal(2))
        wB = complex(*rng.standard_normal(2))
        lo, hi = (i0, sh) if i0 < sh else (sh, i0)
        lo2, hi2 = (sh, i1) if sh < i1 else (i1, sh)
        _run_structured(5, dA, dB, (lo, hi, wA), (lo2, hi2, wB),
                        [i0, sh, i1, 0],
                        [abs(wA) ** 2, abs(wB) ** 2, 0.0], backend_name)


def test_profile_jacobi_matches_structured(backend):
    # generic Jacobi route and structured route agree on a same-pair family
    rng = np.random.default_rng(31)
    n = 5
    dA = rng.standard_normal(n)
    dB = rng.standard_normal(n)
    wA, wB = 0.6 + 0.2j, -0.8 - 0.5j
    A = np.diag(dA).astype(complex)
    A[1, 3] = wA
    A[3, 1] = np.conj(wA)
    B = np.diag(dB).astype(complex)
    B[1, 3] = wB
    B[3, 1] = np.conj(wB)
    th = np.linspace(0.0, 2.0 * np.pi, 33)
    ct, st = np.cos(th), np.sin(th)
    emb = lambda h: np.block([[h.real, -h.imag], [h.imag, h.real]])
    via_jacobi = kernels.profile_smax_jacobi(emb(A), emb(B), ct, st)
    via_struct = kernels.pair_profile_smax(
        dA[None], dB[None], np.array([3], dtype=np.intc),
        np.array([[1, 3, 0, 0]], dtype=np.intc),
        np.array([[abs(wA) ** 2, abs(wB) ** 2, (wA * np.conj(wB)).real]]),
        ct, st)
    assert np.allclose(via_jacobi, via_struct[0], atol=1e-12)


def test_triad_profile(backend):
    rng = np.random.default_rng(8)
    mats = [_random_sym(rng, 6) for _ in range(3)]
    u = rng.standard_normal((20, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    out = kernels.triad_profile_smax_jacobi(*mats, u)
    ref = [-np.linalg.eigvalsh(
        u[j, 0] * mats[0] + u[j, 1] * mats[1] + u[j, 2] * mats[2])[0]
        for j in range(len(u))]
    assert np.allclose(out, ref, atol=1e-12)
