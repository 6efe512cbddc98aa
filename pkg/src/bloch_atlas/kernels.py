"""Backend selection and error-raising wrappers for the numeric core.

The compiled extension ``bloch_atlas._kernels`` is preferred; if it is not
available (no compiler at install time, or a source checkout without a build
step) the pure-Python twin ``bloch_atlas._kernels_py`` is used instead.  Both
expose the same functions with the same semantics; `get_backend()` reports
which one is active and `set_backend()` lets tests and benchmarks force one.

The raw backend functions signal nonconvergence through status codes; the
wrappers here convert those into NumericalFailureError.
"""

import numpy as np

from .errors import NumericalFailureError

try:
    from . import _kernels as _impl
except ImportError:  # pragma: no cover - depends on build environment
    from . import _kernels_py as _impl

_backends = {"python": None, "compiled": None}
_backends[_impl.BACKEND] = _impl


def get_backend():
    """Name of the active numeric backend: 'compiled' or 'python'."""
    return _impl.BACKEND


def set_backend(name):
    """Force the numeric backend ('compiled' or 'python').

    Raises ValueError if the requested backend is not importable here.
    """
    global _impl
    if name not in _backends:
        raise ValueError(f"unknown backend {name!r}")
    if _backends[name] is None:
        if name == "compiled":
            from . import _kernels as mod
        else:
            from . import _kernels_py as mod
        _backends[name] = mod
    _impl = _backends[name]


def _as_sym(a):
    a = np.ascontiguousarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if a.shape[0] > 32:
        raise ValueError("matrix dimension exceeds the kernel cap of 32")
    return a


def sym_eigvals(a, max_sweeps=64, tol_factor=1e-14):
    """Eigenvalues (ascending) of a real symmetric matrix via cyclic Jacobi."""
    a = _as_sym(a)
    w, status, resid = _impl.eigvals(a, max_sweeps, tol_factor)
    if status < 0:
        raise NumericalFailureError(
            "jacobi eigvals", resid, tol_factor * np.linalg.norm(a),
            f"{max_sweeps} sweeps on a {a.shape[0]}x{a.shape[0]} matrix")
    return w


def sym_eigen(a, max_sweeps=64, tol_factor=1e-14):
    """Eigenvalues (ascending) and eigenvector columns of a symmetric matrix."""
    a = _as_sym(a)
    w, V, status, resid = _impl.eigen(a, max_sweeps, tol_factor)
    if status < 0:
        raise NumericalFailureError(
            "jacobi eigen", resid, tol_factor * np.linalg.norm(a),
            f"{max_sweeps} sweeps on a {a.shape[0]}x{a.shape[0]} matrix")
    return w, V


def sym_eigvals_batch(mats, max_sweeps=64, tol_factor=1e-14):
    """Eigenvalues (ascending, rows) of a stack of symmetric matrices."""
    mats = np.ascontiguousarray(mats, dtype=float)
    W, fail, resid = _impl.eigvals_batch(mats, max_sweeps, tol_factor)
    if fail >= 0:
        raise NumericalFailureError(
            "jacobi eigvals (batch)", resid,
            tol_factor * np.linalg.norm(mats[fail]),
            f"matrix {fail} of {mats.shape[0]}")
    return W

def sym_min_eigs_batch(mats, max_sweeps=64, tol_factor=1e-14):
    """Minimum eigenvalues of a stack of symmetric matrices."""
    mats = np.ascontiguousarray(mats, dtype=float)
    mu, fail, resid = _impl.min_eigs_batch(mats, max_sweeps, tol_factor)
    if fail >= 0:
        raise NumericalFailureError(
            "jacobi min-eig (batch)", resid,
            tol_factor * np.linalg.norm(mats[fail]),
            f"matrix {fail} of {mats.shape[0]}")
    return mu


def pair_profile_smax(diagA, diagB, caseid, idx, amps, ct, st):
    """Structured closed-form profile kernel; see the backend docstring."""
    return _impl.pair_profile_smax(
        np.ascontiguousarray(diagA, dtype=float),
        np.ascontiguousarray(diagB, dtype=float),
        np.ascontiguousarray(caseid, dtype=np.intc),
        np.ascontiguousarray(idx, dtype=np.intc),
        np.ascontiguousarray(amps, dtype=float),
        np.ascontiguousarray(ct, dtype=float),
        np.ascontiguousarray(st, dtype=float))


def profile_smax_jacobi(EA, EB, ct, st, max_sweeps=64, tol_factor=1e-14):
    """Spectral slack profile of cos*EA + sin*EB via full Jacobi solves."""
    out, fail, resid = _impl.profile_smax_jacobi(
        np.ascontiguousarray(EA, dtype=float),
        np.ascontiguousarray(EB, dtype=float),
        np.ascontiguousarray(ct, dtype=float),
        np.ascontiguousarray(st, dtype=float),
        max_sweeps, tol_factor)
    if fail >= 0:
        raise NumericalFailureError(
            "jacobi profile", resid, tol_factor,
            f"direction {fail} of {len(out)}")
    return out


def triad_profile_smax_jacobi(EA, EB, EC, U, max_sweeps=64, tol_factor=1e-14):
    """Spectral slack profile of u0*EA + u1*EB + u2*EC via Jacobi solves."""
    out, fail, resid = _impl.triad_profile_smax_jacobi(
        np.ascontiguousarray(EA, dtype=float),
        np.ascontiguousarray(EB, dtype=float),
        np.ascontiguousarray(EC, dtype=float),
        np.ascontiguousarray(U, dtype=float),
        max_sweeps, tol_factor)
    if fail >= 0:
        raise NumericalFailureError(
            "jacobi profile (triad)", resid, tol_factor,
            f"direction {fail} of {len(out)}")
    return out
