"""Scenario orchestration: one section + condition set -> one result record.

A scenario is a section (two or three generators of an n-level system)
together with a set of partial-transpose conditions.  Its analysis yields
the feasible measure, the measure under each single condition, the joint
measure under all conditions, and the joint/total probability, plus an
optional boundary block (lengths for pairs, surface areas for triads).

Every probability passes a resolution audit before the result is emitted:
the measures are re-evaluated on a doubled quadrature grid and the two
probabilities must agree within the advertised tolerance.

Measure results (areas, volumes, probabilities) use Lebesgue measure in
coefficient coordinates and carry convention_note "paper_verified".
Boundary lengths and surface areas use the declared Euclidean convention
and switch the note to "unresolved_convention"; see the reference-data
documentation for the background.
"""

import dataclasses
import json

import numpy as np

from . import regions
from .errors import BlochAtlasError, NumericalFailureError, QuadratureError
from .ptrans import TransposeMap, transpose_map
from .sections import SectionSpec

PAIR_AUDIT_TOL = 1e-6
TRIAD_AUDIT_TOL = 2e-5

# Default third condition for the n=8 three-qubit "tri" decomposition: the
# middle-qubit partial transpose.  The three single-qubit transposes of a
# 2x2x2 system are "2x4" (last qubit), "mid222" (middle qubit) and the
# spectral equivalent of the first-qubit transpose, "4x2".
TRI_THIRD_CONDITION = "mid222"

_DECOMPOSITIONS = {
    4: {"2x2": ("2x2",)},
    6: {"3x2": ("3x2",), "2x3": ("2x3",), "bi": ("3x2", "2x3")},
    8: {"4x2": ("4x2",), "2x4": ("2x4",), "mid222": ("mid222",),
        "bi": ("4x2", "2x4"),
        "tri": ("4x2", "2x4", TRI_THIRD_CONDITION)},
    9: {"3x3": ("3x3",)},
    10: {"5x2": ("5x2",), "2x5": ("2x5",), "bi": ("5x2", "2x5")},
}

CSV_COLUMNS = ("n", "generators", "conditions", "total_measure",
               "joint_measure", "probability", "condition_measures",
               "boundary_total", "boundary_classified",
               "boundary_probability", "interior_length", "convention_note")


def condition_maps(n, decomposition):
    """Resolve a condition request into a tuple of TransposeMap.

    Accepts a decomposition keyword ("2x2", "bi", "tri", ...), a single
    label, a TransposeMap, or an iterable mixing labels and maps."""
    if isinstance(decomposition, TransposeMap):
        decomposition = (decomposition,)
    elif isinstance(decomposition, str):
        try:
            decomposition = _DECOMPOSITIONS[n][decomposition]
        except KeyError:
            decomposition = (decomposition,)
    maps = tuple(m if isinstance(m, TransposeMap) else transpose_map(m)
                 for m in decomposition)
    if not maps:
        raise ValueError("a scenario needs at least one condition")
    for m in maps:
        if m.n != n:
            raise ValueError(
                f"condition {m.label!r} acts on {m.n}-level systems, "
                f"scenario has n={n}")
    return maps


def decompositions(n):
    """Condition-set keywords available for an n-level system."""
    return tuple(_DECOMPOSITIONS.get(n, ()))


@dataclasses.dataclass(frozen=True)
class ScenarioResult:
    """Full analysis record of one scenario."""

    spec: SectionSpec
    conditions: tuple
    total_measure: float
    condition_measures: tuple
    joint_measure: float
    probability: float
    boundary: dict | None
    convention_note: str
    resolution: tuple
    audit_gap: float

    @property
    def n(self):
        return self.spec.n

    @property
    def generators(self):
        return self.spec.generators

    @property
    def condition_labels(self):
        return tuple(m.label for m in self.conditions)

    def to_json_dict(self):
        """Verbatim record with stable key order."""
        out = {
            "n": self.n,
            "generators": list(self.generators),
            "conditions": list(self.condition_labels),
            "total_measure": self.total_measure,
            "joint_measure": self.joint_measure,
            "probability": self.probability,
            "condition_measures": list(self.condition_measures),
            "boundary": self.boundary,
            "convention_note": self.convention_note,
            "resolution": [int(v) for v in self.resolution],
            "audit_gap": self.audit_gap,
        }
        return out

    def to_json(self, indent=None):
        return json.dumps(self.to_json_dict(), indent=indent)

    def csv_row(self):
        """Row matching CSV_COLUMNS."""
        boundary = self.boundary or {}
        return (
            self.n,
            "+".join(str(g) for g in self.generators),
            "+".join(self.condition_labels),
            repr(self.total_measure),
            repr(self.joint_measure),
            repr(self.probability),
            "+".join(repr(v) for v in self.condition_measures),
            _opt(boundary.get("total_length")),
            _opt(boundary.get("classified_length")),
            _opt(boundary.get("boundary_probability")),
            _opt(boundary.get("interior_length")),
            self.convention_note,
        )


def _opt(value):
    return "" if value is None else repr(value)


def _annotate(err, label):
    """Re-raise a numerical failure with the scenario identity attached."""
    if isinstance(err, NumericalFailureError):
        return NumericalFailureError(f"{label}: {err.routine}", err.residual,
                                     err.tolerance, err.detail)
    return type(err)(f"{label}: {err}")


def _audit(probability, audited, tol, label):
    gap = abs(probability - audited)
    if gap > tol:
        raise QuadratureError(
            f"{label}: probability audit failed — {probability!r} at the "
            f"converged grid vs {audited!r} at doubled resolution "
            f"(gap {gap:.3e} > {tol:g})")
    return gap


def _canonical(n, generators, dim):
    gens = tuple(sorted(int(g) for g in generators))
    if len(gens) != dim:
        raise ValueError(f"expected {dim} generators, got {generators!r}")
    return SectionSpec(n, gens)


def analyze_pair(n, pair, conditions, with_boundary=False, rtol=None):
    """Analyze a two-generator scenario.

    conditions may be a decomposition keyword ("2x2", "bi", ...), a label,
    or an explicit list of labels/TransposeMaps.  Measures are areas; the
    optional boundary block adds Euclidean boundary lengths of the feasible
    region, the part classified by the joint condition body, and the
    interior interface (the joint body's boundary strictly inside the
    feasible region).  rtol loosens the quadrature tolerance (and the
    matching audit tolerance) below the contract default."""
    spec = _canonical(n, pair, 2)
    maps = condition_maps(n, conditions)
    label = f"scenario n={n} pair {spec.generators} " \
            f"[{'+'.join(m.label for m in maps)}]"
    audit_tol = (PAIR_AUDIT_TOL if rtol is None
                 else max(PAIR_AUDIT_TOL, 20 * rtol))
    try:
        if rtol is None:
            per, joint, nodes = regions.measure_components(spec, maps)
        else:
            per, joint, nodes = regions.measure_components(spec, maps, rtol)
        audit_per, audit_joint = regions.pair_areas_on_grid(
            spec, maps, 2 * nodes)
        probability = joint / per[0]
        gap = _audit(probability, audit_joint / audit_per[0],
                     audit_tol, label)
        boundary = None
        if with_boundary:
            feasible = regions.RegionPredicate(spec)
            body = regions.RegionPredicate(spec, maps)
            total_len, classified = regions.boundary_partition_2d(
                feasible, body)
            boundary = {
                "total_length": total_len,
                "classified_length": classified,
                "boundary_probability": classified / total_len,
                "interior_length": regions.interior_interface_2d(
                    feasible, body),
            }
    except (QuadratureError, NumericalFailureError) as err:
        raise _annotate(err, label) from err
    return ScenarioResult(
        spec=spec, conditions=maps,
        total_measure=float(per[0]),
        condition_measures=tuple(float(v) for v in per[1:]),
        joint_measure=float(joint),
        probability=float(probability),
        boundary=boundary,
        convention_note=("unresolved_convention" if boundary
                         else "paper_verified"),
        resolution=(int(nodes),), audit_gap=float(gap))


def analyze_triad(n, triad, conditions, with_boundary_surface=False,
                  rtol=None):
    """Analyze a three-generator scenario.

    Measures are volumes; the optional boundary block adds Euclidean
    surface areas of the feasible boundary and of its portion inside the
    joint condition body (interior_length stays None — no 3D interface
    operation is defined).  rtol loosens the quadrature tolerance (and the
    matching audit tolerance) below the contract default."""
    spec = _canonical(n, triad, 3)
    maps = condition_maps(n, conditions)
    label = f"scenario n={n} triad {spec.generators} " \
            f"[{'+'.join(m.label for m in maps)}]"
    audit_tol = (TRIAD_AUDIT_TOL if rtol is None
                 else max(TRIAD_AUDIT_TOL, 20 * rtol))
    try:
        if rtol is None:
            per, joint, (nx, nphi) = regions.volume_components(spec, maps)
        else:
            per, joint, (nx, nphi) = regions.volume_components(
                spec, maps, rtol)
        audit_per, audit_joint = regions.triad_volumes_on_grid(
            spec, maps, 2 * nx, 2 * nphi)
        probability = joint / per[0]
        gap = _audit(probability, audit_joint / audit_per[0],
                     audit_tol, label)
        boundary = None
        if with_boundary_surface:
            feasible = regions.RegionPredicate(spec)
            body = regions.RegionPredicate(spec, maps)
            total_area, classified = regions.surface_area_3d(feasible, body)
            boundary = {
                "total_length": total_area,
                "classified_length": classified,
                "boundary_probability": classified / total_area,
                "interior_length": None,
            }
    except (QuadratureError, NumericalFailureError) as err:
        raise _annotate(err, label) from err
    return ScenarioResult(
        spec=spec, conditions=maps,
        total_measure=float(per[0]),
        condition_measures=tuple(float(v) for v in per[1:]),
        joint_measure=float(joint),
        probability=float(probability),
        boundary=boundary,
        convention_note=("unresolved_convention" if boundary
                         else "paper_verified"),
        resolution=(int(nx), int(nphi)), audit_gap=float(gap))


def analyze(n, generators, conditions, with_boundary=False, rtol=None):
    """Dispatch to analyze_pair or analyze_triad on the generator count."""
    generators = tuple(generators)
    if len(generators) == 2:
        return analyze_pair(n, generators, conditions, with_boundary,
                            rtol=rtol)
    if len(generators) == 3:
        return analyze_triad(n, generators, conditions, with_boundary,
                             rtol=rtol)
    raise ValueError("a scenario takes 2 or 3 generators")
