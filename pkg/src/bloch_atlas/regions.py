"""Measures of convex predicate regions inside sections.

A region is the set of section points whose density matrix satisfies
feasibility (positive semidefiniteness) together with zero or more
positive-partial-transpose conditions.  Every such region is an affine slice
of the PSD cone intersected with linear images of itself, hence convex, and
it contains the maximally mixed state (the origin) with eigenvalue margin
1/n.  Convexity turns all measurements into radial problems: along a unit
direction u the matrix is rho(t u) = I/n + t D(u) with the traceless
direction matrix D(u) = sum_i u_i g_i / 2, so under a condition with
transpose map T the eigenvalues are 1/n + t mu_j(T(D)) and the exit radius
is exactly

    r(u) = 1 / (n * s(u)),   s(u) = -min_j mu_j(T(D(u))) > 0.

The public radial_extent operation finds the same radius by bisection on the
membership predicate (tolerance 1e-12) as an independent route; quadratures
use the spectral form through the structured closed-form kernel (two-
parameter sections, where each condition matrix is a real diagonal plus at
most two off-diagonal couplings) or batched Jacobi solves (three-parameter
sections and cross-checks).

Areas and volumes are plain Lebesgue measure in the coefficient coordinates,
which reproduces the probability tables this package targets.  Boundary
lengths and surface areas are Euclidean in the same coordinates — a declared
convention; see the reference-data notes for measurements whose original
convention is unresolved.
"""

import dataclasses

import numpy as np

from . import gellmann, kernels
from .errors import BlochAtlasError, QuadratureError
from .sections import bounding_radius

BISECT_TOL = 1e-12
MEMBER_TOL = 1e-9
INTERIOR_TOL = 1e-8
AREA_RTOL = 1e-8
VOLUME_RTOL = 1e-6
LENGTH_TOL = 1e-8
SURFACE_RTOL = 1e-6
NODES_2D = 256
CAP_2D = 2 ** 20
TRANSITION_TOL = 1e-9
TRANSITION_CAP = 60


# ---------------------------------------------------------------------------
# condition structure extraction and profile evaluation
# ---------------------------------------------------------------------------

def _couplings(m):
    """Strict-upper nonzero entries of a Hermitian matrix as (i, j, w)."""
    out = []
    n = m.shape[0]
    for i in range(n - 1):
        for j in range(i + 1, n):
            if m[i, j] != 0:
                out.append((i, j, complex(m[i, j])))
    return out


def _pair_structure(ma, mb):
    """Closed-form kernel descriptor for one condition of a pair section.

    ma/mb are the (transposed) half-generators.  Returns (caseid, idx, amps)
    or None when either matrix carries more than one coupling (no such case
    arises for single generators under partial transposition, but the Jacobi
    fallback keeps the module total)."""
    ca = _couplings(ma)
    cb = _couplings(mb)
    if len(ca) > 1 or len(cb) > 1:
        return None
    if not ca and not cb:
        return 0, (0, 0, 0, 0), (0.0, 0.0, 0.0)
    if ca and not cb:
        i, j, w = ca[0]
        return 1, (i, j, 0, 0), (abs(w) ** 2, 0.0, 0.0)
    if cb and not ca:
        i, j, w = cb[0]
        return 2, (i, j, 0, 0), (0.0, abs(w) ** 2, 0.0)
    ia, ja, wa = ca[0]
    ib, jb, wb = cb[0]
    if (ia, ja) == (ib, jb):
        return 3, (ia, ja, 0, 0), (abs(wa) ** 2, abs(wb) ** 2,
                                   (wa * np.conj(wb)).real)
    shared = {ia, ja} & {ib, jb}
    if not shared:
        return 4, (ia, ja, ib, jb), (abs(wa) ** 2, abs(wb) ** 2, 0.0)
    sh = shared.pop()
    outer_a = ja if ia == sh else ia
    outer_b = jb if ib == sh else ib
    return 5, (outer_a, sh, outer_b, 0), (abs(wa) ** 2, abs(wb) ** 2, 0.0)


def _embed_stack(mats):
    """Real symmetric forms of a list of Hermitian matrices: pass-through
    for real input, [[Re, -Im], [Im, Re]] embedding otherwise."""
    if all(np.abs(m.imag).max() == 0.0 for m in mats):
        return [np.ascontiguousarray(m.real) for m in mats]
    return [np.ascontiguousarray(
        np.block([[m.real, -m.imag], [m.imag, m.real]])) for m in mats]


class _Evaluator:
    """Per-(section, conditions) spectral-slack evaluator.

    Condition 0 is always feasibility (identity map); the remaining
    conditions apply the given transpose maps.  smax2/smax3 return the array
    s[k, j] = -mu_min over directions j for each condition k."""

    def __init__(self, spec, conditions):
        self.spec = spec
        self.conditions = tuple(conditions)
        halves = [gellmann.generator(spec.n, a) / 2.0
                  for a in spec.generators]
        per_cond = [halves] + [[m.apply(g) for g in halves]
                               for m in self.conditions]
        self.n_conditions = len(per_cond)
        if spec.dim == 2:
            self._build_pair(per_cond)
        else:
            self._bases = [_embed_stack(mats) for mats in per_cond]

    def _build_pair(self, per_cond):
        structured, fallback = [], []
        for k, (ma, mb) in enumerate(per_cond):
            desc = _pair_structure(ma, mb)
            if desc is None:
                fallback.append((k, _embed_stack([ma, mb])))
            else:
                structured.append((k, np.real(np.diag(ma)),
                                   np.real(np.diag(mb)), *desc))
        self._structured = structured
        self._fallback = fallback
        if structured:
            self._s_rows = np.array([s[0] for s in structured])
            self._diagA = np.array([s[1] for s in structured])
            self._diagB = np.array([s[2] for s in structured])
            self._caseid = np.array([s[3] for s in structured],
                                    dtype=np.intc)
            self._idx = np.array([s[4] for s in structured], dtype=np.intc)
            self._amps = np.array([s[5] for s in structured])

    def smax2(self, ct, st):
        out = np.empty((self.n_conditions, len(ct)))
        if self._structured:
            out[self._s_rows] = kernels.pair_profile_smax(
                self._diagA, self._diagB, self._caseid, self._idx,
                self._amps, ct, st)
        for k, (ea, eb) in self._fallback:
            out[k] = kernels.profile_smax_jacobi(ea, eb, ct, st)
        return out

    def smax3(self, directions):
        directions = np.asarray(directions, dtype=float)
        out = np.empty((self.n_conditions, len(directions)))
        for k, (ea, eb, ec) in enumerate(self._bases):
            out[k] = kernels.triad_profile_smax_jacobi(ea, eb, ec,
                                                       directions)
        return out

    def smax(self, directions):
        """Spectral slack per condition for unit directions (N, dim)."""
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        if self.spec.dim == 2:
            return self.smax2(np.ascontiguousarray(directions[:, 0]),
                              np.ascontiguousarray(directions[:, 1]))
        return self.smax3(directions)


class RegionPredicate:
    """Feasibility plus zero or more PPT conditions over one section."""

    def __init__(self, spec, conditions=(), tol=0.0):
        for m in conditions:
            if m.n != spec.n:
                raise ValueError(
                    f"transpose map {m.label!r} acts on {m.n}-level "
                    f"matrices, section has n={spec.n}")
        self.spec = spec
        self.conditions = tuple(conditions)
        self.tol = float(tol)
        self._ev = _Evaluator(spec, self.conditions)

    @property
    def n(self):
        return self.spec.n

    def smax(self, directions):
        """max over conditions of the spectral slack, per direction."""
        return self._ev.smax(directions).max(axis=0)

    def condition_slacks(self, directions):
        """Spectral slack matrix, one row per condition; row 0 is
        feasibility, row k >= 1 the k-th transpose condition.  The row
        achieving the maximum is the condition binding in that
        direction."""
        return self._ev.smax(directions)

    def radii(self, directions):
        """Exit radius per direction (spectral closed form)."""
        return 1.0 / (self.n * self.smax(directions))

    def margin(self, point):
        """Minimum eigenvalue over all conditions at a section point."""
        point = np.asarray(point, dtype=float)
        t = np.linalg.norm(point)
        if t == 0.0:
            return 1.0 / self.n
        return 1.0 / self.n - t * float(self.smax(point / t)[0])

    def contains(self, point):
        return self.margin(point) >= -self.tol


@dataclasses.dataclass(frozen=True)
class RadialProfile:
    """Boundary trace of a region: sorted angles, exit radii, Cartesian
    vertices, total chord length, and the refinement pass count."""

    angles: np.ndarray
    radii: np.ndarray
    points: np.ndarray
    length: float
    passes: int

    @property
    def directions(self):
        return np.column_stack([np.cos(self.angles), np.sin(self.angles)])

    def __iter__(self):
        """Unpack as (angles, radii, points, length)."""
        return iter((self.angles, self.radii, self.points, self.length))


def radial_extent_spectral(pred, direction):
    """Exit radius along one direction from the eigenvalue closed form."""
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    return float(pred.radii(u)[0])


def radial_extent(pred, direction):
    """Exit radius along one direction by bisection on the membership
    predicate over [0, bounding_radius], to absolute tolerance 1e-12.

    The spectral route (radial_extent_spectral) computes the same number in
    closed form; this definition-level route is kept as the contract
    operation and as an independent cross-check."""
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    hi = bounding_radius(pred.n)
    if pred.contains(hi * (1.0 + 1e-9) * u):
        raise BlochAtlasError(
            "predicate holds beyond the purity bound; the bounding radius "
            "or the predicate evaluation is inconsistent")
    if pred.contains(hi * u):
        return hi
    lo = 0.0
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if pred.contains(mid * u):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# areas and volumes
# ---------------------------------------------------------------------------

def _component_areas_at(ev, n_nodes):
    """Per-condition and joint areas on a fixed periodic grid.

    Each single-condition region is intersected with feasibility (row 0):
    a condition region is a set of states, so its radial support is the
    pointwise max of the condition profile and the feasibility profile."""
    theta = np.arange(n_nodes) * (2.0 * np.pi / n_nodes)
    s = ev.smax2(np.cos(theta), np.sin(theta))
    s = np.maximum(s, s[0])
    n = ev.spec.n
    r2 = 1.0 / (n * s) ** 2
    r2j = 1.0 / (n * s.max(axis=0)) ** 2
    w = 0.5 * (2.0 * np.pi / n_nodes)
    return r2.sum(axis=1) * w, float(r2j.sum() * w)


def pair_areas_on_grid(spec, conditions, n_nodes):
    """Per-condition and joint areas of a pair section on one fixed grid.

    Exposed for resolution audits: callers can re-evaluate a converged
    measurement on a doubled grid and compare."""
    return _component_areas_at(_Evaluator(spec, tuple(conditions)), n_nodes)


def measure_components(spec, conditions, rtol=AREA_RTOL, start=NODES_2D,
                       cap=CAP_2D):
    """Areas of the feasible region, each single-condition region
    (intersected with feasibility), and the joint region of a pair
    section, all from shared direction grids.

    Returns (per_condition, joint, nodes) where per_condition[0] is the
    total (feasibility-only) area.  Sharing grids makes the monotonicity
    joint <= min(per_condition) exact by construction at every refinement
    level.  Convergence: consecutive doublings must agree to rtol relative
    on every component."""
    ev = _Evaluator(spec, tuple(conditions))
    n_nodes = start
    prev_k, prev_j = _component_areas_at(ev, n_nodes)
    while n_nodes < cap:
        n_nodes *= 2
        cur_k, cur_j = _component_areas_at(ev, n_nodes)
        scale = max(cur_k.max(), 1.0)
        if (np.abs(cur_k - prev_k).max() <= rtol * scale
                and abs(cur_j - prev_j) <= rtol * scale):
            return cur_k, cur_j, n_nodes
        prev_k, prev_j = cur_k, cur_j
    raise QuadratureError(
        f"area quadrature did not converge below {rtol} within {cap} nodes")


def area_2d(pred, rtol=AREA_RTOL, start=NODES_2D, cap=CAP_2D):
    """Area of the full predicate region (feasibility and all conditions)."""
    if pred.spec.dim != 2:
        raise ValueError("area_2d needs a two-parameter section")
    _, joint, _ = measure_components(pred.spec, pred.conditions, rtol,
                                     start, cap)
    return joint


def _sphere_grid(nx, nphi):
    """Gauss-Legendre x trapezoid product grid: directions and weights."""
    x, wx = np.polynomial.legendre.leggauss(nx)
    phi = np.arange(nphi) * (2.0 * np.pi / nphi)
    sin_t = np.sqrt(1.0 - x * x)
    u = np.empty((nx, nphi, 3))
    u[:, :, 0] = sin_t[:, None] * np.cos(phi)[None, :]
    u[:, :, 1] = sin_t[:, None] * np.sin(phi)[None, :]
    u[:, :, 2] = x[:, None]
    w = np.broadcast_to(wx[:, None] * (2.0 * np.pi / nphi), (nx, nphi))
    return u.reshape(-1, 3), w.reshape(-1)


def _component_volumes_at(ev, nx, nphi):
    """Per-condition and joint volumes on a fixed product grid.

    As in _component_areas_at, single-condition regions are intersected
    with feasibility (row 0) before integration."""
    u, w = _sphere_grid(nx, nphi)
    s = ev.smax3(u)
    s = np.maximum(s, s[0])
    n = ev.spec.n
    r3 = (1.0 / (n * s)) ** 3
    r3j = (1.0 / (n * s.max(axis=0))) ** 3
    return (r3 * w).sum(axis=1) / 3.0, float((r3j * w).sum() / 3.0)


def triad_volumes_on_grid(spec, conditions, nx, nphi):
    """Per-condition and joint volumes of a triad section on one fixed
    grid; the resolution-audit counterpart of pair_areas_on_grid."""
    return _component_volumes_at(_Evaluator(spec, tuple(conditions)),
                                 nx, nphi)


def volume_components(spec, conditions, rtol=VOLUME_RTOL, start=(32, 64),
                      cap=2 ** 11):
    """Volumes of the feasible region, each single-condition region
    (intersected with feasibility), and the joint region of a triad
    section, all from shared direction grids.

    Returns (per_condition, joint, (nx, nphi)) with per_condition[0] the
    total (feasibility-only) volume; V = (1/3) * integral of r(u)^3 over
    the unit sphere by product Gauss-Legendre (cos theta) x periodic
    trapezoid (phi), doubling both node counts until every component's
    relative change drops below rtol.  Shared grids make
    joint <= min(per_condition) exact by construction."""
    if spec.dim != 3:
        raise ValueError("volume_components needs a three-parameter section")
    ev = _Evaluator(spec, tuple(conditions))
    nx, nphi = start
    prev_k, prev_j = _component_volumes_at(ev, nx, nphi)
    while nx < cap:
        nx *= 2
        nphi *= 2
        cur_k, cur_j = _component_volumes_at(ev, nx, nphi)
        scale = max(cur_k.max(), 1.0)
        if (np.abs(cur_k - prev_k).max() <= rtol * scale
                and abs(cur_j - prev_j) <= rtol * scale):
            return cur_k, cur_j, (nx, nphi)
        prev_k, prev_j = cur_k, cur_j
    raise QuadratureError(
        f"volume quadrature did not converge below {rtol} within {cap} "
        "polar nodes")


def volume_3d(pred, rtol=VOLUME_RTOL, start=(32, 64), cap=2 ** 11):
    """Volume of a three-parameter predicate region (feasibility and all
    of its conditions jointly)."""
    if pred.spec.dim != 3:
        raise ValueError("volume_3d needs a three-parameter section")
    _, joint, _ = volume_components(pred.spec, pred.conditions, rtol,
                                    start, cap)
    return joint


# ---------------------------------------------------------------------------
# boundary polylines, partitions and interfaces (2D)
# ---------------------------------------------------------------------------

def boundary_polyline_2d(pred, target_error=LENGTH_TOL, start=NODES_2D,
                         max_points=2 ** 21, max_passes=96):
    """Closed polyline tracing the predicate region's boundary.

    Adaptive theta sampling: starting from a uniform grid, every chord is
    tested against the two sub-chords through its angular midpoint, and
    chords whose length deficit is significant are split.  For a convex
    region the inscribed length grows monotonically under refinement and
    the total remaining gain is bounded by twice the sum of single-midpoint
    deficits, so refinement stops once that sum drops below half of
    target_error.  Corners (active-constraint switches) get refined
    geometrically deep while smooth arcs freeze early.

    Returns a RadialProfile with theta sorted ascending."""
    if pred.spec.dim != 2:
        raise ValueError("boundary_polyline_2d needs a two-parameter section")
    theta = np.arange(start) * (2.0 * np.pi / start)
    r = pred.radii(np.column_stack([np.cos(theta), np.sin(theta)]))
    for n_pass in range(max_passes):
        x = r * np.cos(theta)
        y = r * np.sin(theta)
        t_next = np.roll(theta, -1).copy()
        t_next[-1] += 2.0 * np.pi
        mid = 0.5 * (theta + t_next)
        rm = pred.radii(np.column_stack([np.cos(mid), np.sin(mid)]))
        xm = rm * np.cos(mid)
        ym = rm * np.sin(mid)
        xn = np.roll(x, -1)
        yn = np.roll(y, -1)
        seg = np.hypot(xn - x, yn - y)
        deficit = np.maximum(
            np.hypot(xm - x, ym - y) + np.hypot(xn - xm, yn - ym) - seg,
            0.0)
        gain = float(deficit.sum())
        if gain < 0.5 * target_error:
            return RadialProfile(theta, r, np.column_stack([x, y]),
                                 float(seg.sum()), n_pass)
        split = deficit >= max(gain / (2.0 * len(theta)), 1e-18)
        order = np.argsort(np.concatenate([theta, mid[split]]))
        theta = np.concatenate([theta, mid[split]])[order]
        r = np.concatenate([r, rm[split]])[order]
        if len(theta) > max_points:
            raise QuadratureError(
                f"boundary polyline needs more than {max_points} vertices "
                f"to settle below {target_error}")
    raise QuadratureError(
        f"boundary polyline did not settle below {target_error} in "
        f"{max_passes} refinement passes")


def _bisect_angle(flag, lo, hi):
    """Angle in (lo, hi) where the boolean classifier flag flips."""
    f_lo = flag(lo)
    for _ in range(TRANSITION_CAP):
        if hi - lo <= TRANSITION_TOL:
            break
        mid = 0.5 * (lo + hi)
        if flag(mid) == f_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _partition_boundary(pred, theta, flag_vec):
    """Split pred's boundary into arcs of constant flag value.

    theta is the converged (sorted, possibly non-uniform) polyline grid;
    flag_vec maps an array of angles to a boolean array.  Each grid interval
    is classified at its midpoint; wherever adjacent midpoints disagree the
    transition angle is bisected to 1e-9 and inserted as an extra polyline
    vertex, so tangency contacts narrower than the grid contribute zero
    length.  Returns (total_length, flagged_length) over Euclidean chords."""
    two_pi = 2.0 * np.pi
    t_next = np.roll(theta, -1).copy()
    t_next[-1] += two_pi
    mids = 0.5 * (theta + t_next)
    flags = flag_vec(mids)
    m_next = np.roll(mids, -1).copy()
    m_next[-1] += two_pi

    def scalar(t):
        return bool(flag_vec(np.array([t]))[0])

    cuts = [_bisect_angle(scalar, mids[j], m_next[j]) % two_pi
            for j in np.nonzero(flags != np.roll(flags, -1))[0]]
    angles = np.sort(np.concatenate([theta, np.asarray(cuts)])
                     if cuts else theta)
    nxt = np.roll(angles, -1).copy()
    nxt[-1] += two_pi
    sub_flags = flag_vec(0.5 * (angles + nxt))
    u = np.column_stack([np.cos(angles), np.sin(angles)])
    pts = pred.radii(u)[:, None] * u
    dp = np.roll(pts, -1, axis=0) - pts
    seg = np.hypot(dp[:, 0], dp[:, 1])
    return float(seg.sum()), float(seg[sub_flags].sum())


def boundary_partition_2d(pred, classifier, target_error=LENGTH_TOL):
    """Total boundary length of pred and the length of the portion whose
    arc midpoints lie inside the classifier region.

    Both predicates must live on the same section.  Classification compares
    exit radii (the boundary point of pred at angle theta belongs to the
    classifier iff r_pred <= r_classifier + 1e-9); transitions are located
    by bisection and tangency contacts contribute zero length."""
    if classifier.spec != pred.spec:
        raise ValueError("classifier must share the predicate's section")
    theta = boundary_polyline_2d(pred, target_error).angles

    def member(angles):
        u = np.column_stack([np.cos(angles), np.sin(angles)])
        return pred.radii(u) <= classifier.radii(u) + MEMBER_TOL

    return _partition_boundary(pred, theta, member)


def interior_interface_2d(outer, inner, target_error=LENGTH_TOL):
    """Length of the part of inner's boundary strictly inside outer.

    Arcs of the inner boundary are kept when the outer predicate's minimum
    eigenvalue at the arc midpoint exceeds 1e-8 (strict interiority)."""
    if outer.spec != inner.spec:
        raise ValueError("predicates must share one section")
    theta = boundary_polyline_2d(inner, target_error).angles

    def interior(angles):
        u = np.column_stack([np.cos(angles), np.sin(angles)])
        margins = 1.0 / outer.n - inner.radii(u) * outer.smax(u)
        return margins > INTERIOR_TOL

    _, kept = _partition_boundary(inner, theta, interior)
    return kept


# ---------------------------------------------------------------------------
# boundary surfaces (3D)
# ---------------------------------------------------------------------------

def _sphere_dirs(t, p):
    """Unit direction vectors for polar-angle arrays, flattened to (N, 3)."""
    sin_t = np.sin(t)
    return np.stack([sin_t * np.cos(p), sin_t * np.sin(p), np.cos(t)],
                    axis=-1).reshape(-1, 3)


def _ds_element(pred, tt, pp, h=1e-4):
    """Radius and star-shaped surface element at arbitrary angle arrays.

    Returns the integrand for the measure d(cos theta) dphi:
    dS = r sqrt(r^2 + r_theta^2 + (r_phi / sin theta)^2) d(cos theta) dphi,
    with the spherical gradient from Richardson-extrapolated central
    differences of step h in the polar angles."""

    def radii(t, p):
        return pred.radii(_sphere_dirs(t, p)).reshape(t.shape)

    def diff(dt, dp, step):
        return (radii(tt + dt * step, pp + dp * step)
                - radii(tt - dt * step, pp - dp * step)) / (2.0 * step)

    r = radii(tt, pp)
    r_t = (4.0 * diff(1, 0, h / 2) - diff(1, 0, h)) / 3.0
    r_p = (4.0 * diff(0, 1, h / 2) - diff(0, 1, h)) / 3.0
    sin_t = np.sin(tt)
    return r, r * np.sqrt(r * r + r_t * r_t + (r_p / sin_t) ** 2)


def _surface_level(pred, classifier, n_x, n_phi, subdiv=8):
    """Total/classified surface area on one midpoint grid level.

    The sphere is tiled with equal-area cells, uniform in (cos theta, phi),
    evaluated at cell midpoints (the sin theta of the spherical measure is
    absorbed into the cos theta variable, so a constant-radius body is
    integrated exactly).  Cells are classified at their midpoints; cells
    whose corner and midpoint classifications disagree straddle the
    classification interface and are re-integrated on a subdiv x subdiv
    sub-grid of midpoints."""
    dx = 2.0 / n_x
    dp = 2.0 * np.pi / n_phi
    xx, pp = np.meshgrid(-1.0 + (np.arange(n_x) + 0.5) * dx,
                         (np.arange(n_phi) + 0.5) * dp, indexing="ij")
    tt = np.arccos(xx)
    r, ds = _ds_element(pred, tt, pp)
    w = dx * dp
    if classifier is None:
        return float(ds.sum() * w), 0.0

    def member(r_pred, dirs):
        return r_pred.reshape(-1) <= classifier.radii(dirs) + MEMBER_TOL

    inside_mid = member(r, _sphere_dirs(tt, pp)).reshape(r.shape)
    xxc, ppc = np.meshgrid(-1.0 + np.arange(n_x + 1) * dx,
                           np.arange(n_phi) * dp, indexing="ij")
    uc = _sphere_dirs(np.arccos(np.clip(xxc, -1.0, 1.0)), ppc)
    inside_c = member(pred.radii(uc), uc).reshape(n_x + 1, n_phi)
    east = np.roll(inside_c, -1, axis=1)
    uniform = ((inside_c[:-1, :] == inside_mid)
               & (inside_c[1:, :] == inside_mid)
               & (east[:-1, :] == inside_mid)
               & (east[1:, :] == inside_mid))
    total = float(ds[uniform].sum() * w)
    classified = float(ds[uniform & inside_mid].sum() * w)
    rows, cols = np.nonzero(~uniform)
    if len(rows):
        off = (np.arange(subdiv) + 0.5) / subdiv
        xs = -1.0 + (rows[:, None, None] + off[None, :, None]) * dx
        ps = (cols[:, None, None] + off[None, None, :]) * dp
        xs = np.broadcast_to(xs, (len(rows), subdiv, subdiv)).copy()
        ps = np.broadcast_to(ps, (len(rows), subdiv, subdiv)).copy()
        ts = np.arccos(np.clip(xs, -1.0, 1.0))
        rs, dss = _ds_element(pred, ts, ps)
        ins = member(rs, _sphere_dirs(ts, ps)).reshape(rs.shape)
        w_sub = w / (subdiv * subdiv)
        total += float(dss.sum() * w_sub)
        classified += float(dss[ins].sum() * w_sub)
    return total, classified


def surface_area_3d(pred, classifier=None, rtol=SURFACE_RTOL,
                    start=(64, 128), cap=2 ** 11):
    """Euclidean area of the predicate region's boundary surface, plus the
    area of the portion lying inside the classifier region.

    Star-shaped surface element dS = r sqrt(r^2 + r_theta^2 +
    (r_phi / sin theta)^2) d(cos theta) dphi, with the spherical gradient
    from Richardson-extrapolated central differences (h = 1e-4).  The
    equal-area midpoint grid in (cos theta, phi) doubles until the total
    area settles to rtol relative change; the classified area is reported
    from the converged grid, with
    interface-straddling patches re-integrated on an 8 x 8 sub-grid (its
    accuracy is limited by midpoint classification along the interface,
    typically a few parts in 1e4 relative).

    Note the declared-convention caveat: these are Euclidean areas in
    coefficient coordinates.  They need not (and for some sections do not)
    match historical tabulations whose measurement convention is unresolved;
    see the reference data flagged unresolved_convention."""
    if pred.spec.dim != 3:
        raise ValueError("surface_area_3d needs a three-parameter section")
    if classifier is not None and classifier.spec != pred.spec:
        raise ValueError("classifier must share the predicate's section")
    n_theta, n_phi = start
    prev = None
    while n_theta <= cap:
        cur = _surface_level(pred, classifier, n_theta, n_phi)
        if prev is not None and abs(cur[0] - prev[0]) <= rtol * max(
                abs(cur[0]), 1e-300):
            return cur
        prev = cur
        n_theta *= 2
        n_phi *= 2
    raise QuadratureError(
        f"surface quadrature did not converge below {rtol} within {cap} "
        "polar nodes")


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

def grid_count_area(pred, cells=4096):
    """Brute-force area estimate: count cell centers inside the region on a
    uniform grid over the bounding box [-R, R]^2.

    For a convex region the error is rigorously below 2 * perimeter *
    cell_side.  Used as an independent oracle against area_2d."""
    if pred.spec.dim != 2:
        raise ValueError("grid_count_area needs a two-parameter section")
    radius = bounding_radius(pred.n)
    side = 2.0 * radius / cells
    centers = -radius + (np.arange(cells) + 0.5) * side
    count = 0
    for y in centers:
        rho2 = centers ** 2 + y * y
        theta = np.arctan2(y, centers)
        s = pred._ev.smax2(np.ascontiguousarray(np.cos(theta)),
                           np.ascontiguousarray(np.sin(theta))).max(axis=0)
        r = 1.0 / (pred.n * s)
        count += int((rho2 <= r * r).sum())
    return count * side * side
