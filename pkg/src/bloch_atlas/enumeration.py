"""Equivalence-class enumeration over generator pairs.

For a fixed level count n and a fixed set of transpose conditions, every
unordered pair {a, b} of Bloch generators spans a two-parameter section.
Basis relabeling symmetries make many pairs produce bodies with identical
(total area, joint area) signatures; this module sweeps all C(n^2-1, 2)
pairs, groups them into classes by signature, and reports one
representative per class together with the class multiplicity.

The sweep runs in two phases.  A coarse pass computes every signature at
a loose quadrature tolerance (radial profiles starting from 256
directions), classes are formed by a deterministic serial reduction over
the sorted signatures, and one representative per class is recomputed at
the fine tolerance to produce the reported values.  Membership is then
re-validated: a class whose members disagree beyond the class agreement
bound is split once, by recomputing every member at the fine tolerance
and re-clustering, after which any remaining disagreement raises a hard
error (a genuine near-degeneracy that needs manual review).

A pair is *trivial* when its joint condition body fills the entire
feasible region (probability 1 within 1e-9); trivial pairs are counted
but not expanded into classes.

Counting note: classes are over unordered pairs {a, b} with a < b, so
total_pairs = C(n^2-1, 2).  Ordered-pair counting would double every
multiplicity; multiplicity tables quoted elsewhere are consistent with
the unordered convention used here.
"""

import itertools
import json
import multiprocessing
from dataclasses import dataclass
from math import comb

from . import regions
from .errors import BlochAtlasError
from .ptrans import transpose_map
from .scenarios import condition_maps
from .sections import SectionSpec

COARSE_TOL = 1e-5       # coarse-pass quadrature rtol and grouping granularity
FINE_TOL = 1e-8         # representative recomputation rtol
COARSE_START = 256      # directions in the first coarse radial profile
TRIVIAL_TOL = 1e-9      # probability within this of 1 counts as trivial
AGREEMENT_TOL = 1e-6    # pairwise member signature agreement bound

CSV_COLUMNS = ("n", "conditions", "representative", "members",
               "total_measure", "joint_measure", "probability")


@dataclass(frozen=True)
class PairClass:
    """One equivalence class of generator pairs.

    representative is the lexicographically least member; signature holds
    the (total_measure, joint_measure) of the representative recomputed at
    the fine tolerance; probability = joint/total from those values."""

    representative: tuple
    members: int
    signature: tuple
    probability: float


@dataclass(frozen=True)
class ClassTable:
    """All nontrivial pair classes for one (n, conditions) sweep.

    classes are sorted by descending member count, then representative.
    Trivial pairs (probability 1 within 1e-9) are only counted."""

    n: int
    conditions: tuple
    classes: tuple
    trivial_count: int
    total_pairs: int

    def __post_init__(self):
        counted = sum(c.members for c in self.classes) + self.trivial_count
        if counted != self.total_pairs:
            raise BlochAtlasError(
                f"class table accounts for {counted} pairs, expected "
                f"{self.total_pairs}")

    @property
    def condition_labels(self):
        return tuple(m.label for m in self.conditions)

    def to_json_dict(self):
        return {
            "n": self.n,
            "conditions": list(self.condition_labels),
            "classes": [
                {
                    "representative": list(c.representative),
                    "members": c.members,
                    "total_measure": c.signature[0],
                    "joint_measure": c.signature[1],
                    "probability": c.probability,
                }
                for c in self.classes
            ],
            "trivial_count": self.trivial_count,
            "total_pairs": self.total_pairs,
        }

    def to_json(self):
        return json.dumps(self.to_json_dict(), indent=2)

    def csv_rows(self):
        """One row per class, in table order, matching CSV_COLUMNS."""
        cond = "+".join(self.condition_labels)
        return [
            (self.n, cond,
             "+".join(str(g) for g in c.representative), c.members,
             repr(c.signature[0]), repr(c.signature[1]),
             repr(c.probability))
            for c in self.classes
        ]


def _coarse_worker(args):
    """Coarse signature of one pair; module-level so pools can pickle it.

    The pair is sorted first so the signature is exactly invariant under
    swapping the two generators (a swap reorders the section basis, which
    would otherwise perturb the quadrature sums at the last ulp)."""
    n, pair, labels, rtol = args
    maps = tuple(transpose_map(label) for label in labels)
    per, joint, _ = regions.measure_components(
        SectionSpec(n, tuple(sorted(pair))), maps,
        rtol=rtol, start=COARSE_START)
    return float(per[0]), float(joint)


def _fine_signature(n, pair, maps, rtol):
    per, joint, _ = regions.measure_components(
        SectionSpec(n, tuple(sorted(pair))), maps,
        rtol=rtol, start=COARSE_START)
    return float(per[0]), float(joint)


def _runs(items, component, tol):
    """Split (signature, pair) items into runs along one signature
    component: sort by that component and break wherever consecutive
    values differ by more than tol."""
    items = sorted(items, key=lambda it: (it[0][component], it[1]))
    runs, cur = [], [items[0]]
    for item in items[1:]:
        if item[0][component] - cur[-1][0][component] > tol:
            runs.append(cur)
            cur = [item]
        else:
            cur.append(item)
    runs.append(cur)
    return runs


def _cluster(items, tol):
    """Group (signature, pair) items so that within a group consecutive
    sorted values agree within tol on both signature components."""
    groups = []
    for run in _runs(items, 0, tol):
        groups.extend(_runs(run, 1, tol))
    return groups


def _try_class(n, maps, group, coarse_tol, fine_tol):
    """Validate one candidate class; returns (ok, PairClass or None).

    Members must agree pairwise within AGREEMENT_TOL on both signature
    components, and every member must sit within coarse_tol of the
    representative's fine signature."""
    totals = [s[0] for s, _ in group]
    joints = [s[1] for s, _ in group]
    spread = max(max(totals) - min(totals), max(joints) - min(joints))
    if spread > AGREEMENT_TOL:
        return False, None
    rep = min(pair for _, pair in group)
    fine = _fine_signature(n, rep, maps, fine_tol)
    for (total, joint), _ in group:
        if (abs(total - fine[0]) > coarse_tol
                or abs(joint - fine[1]) > coarse_tol):
            return False, None
    return True, PairClass(representative=rep, members=len(group),
                           signature=fine,
                           probability=fine[1] / fine[0])


def _validated(n, maps, group, coarse_tol, fine_tol):
    """Turn one coarse cluster into validated classes.

    On validation failure the cluster is split once: every member is
    recomputed at the fine tolerance, the refined signatures are
    re-clustered at the agreement bound, and each piece must then
    validate, else the disagreement is a hard error."""
    ok, cls = _try_class(n, maps, group, coarse_tol, fine_tol)
    if ok:
        return [cls]
    refined = [(_fine_signature(n, pair, maps, fine_tol), pair)
               for _, pair in group]
    out = []
    for piece in _cluster(refined, AGREEMENT_TOL):
        ok, cls = _try_class(n, maps, piece, coarse_tol, fine_tol)
        if not ok:
            pairs = sorted(pair for _, pair in piece)
            raise BlochAtlasError(
                "pair class validation failed after one split-and-retry: "
                f"members {pairs} keep disagreeing beyond {AGREEMENT_TOL}; "
                "near-degenerate signatures need manual review")
        out.append(cls)
    return out


def enumerate_classes(n, conditions, coarse_tol=COARSE_TOL,
                      fine_tol=FINE_TOL, parallel=None):
    """Sweep all unordered generator pairs of an n-level system and group
    them into signature classes under the given transpose conditions.

    conditions accepts anything condition_maps does (decomposition keyword,
    label, TransposeMap, or a list of these).  parallel > 1 distributes the
    coarse pass over a process pool; the result is identical to the serial
    sweep because grouping is a deterministic reduction over the sorted
    signatures."""
    maps = condition_maps(n, conditions)
    labels = tuple(m.label for m in maps)
    dim = n * n - 1
    pairs = list(itertools.combinations(range(1, dim + 1), 2))
    args = [(n, pair, labels, coarse_tol) for pair in pairs]
    if parallel is not None and parallel > 1:
        chunk = max(1, len(args) // (4 * parallel))
        with multiprocessing.Pool(parallel) as pool:
            sigs = pool.map(_coarse_worker, args, chunksize=chunk)
    else:
        sigs = [_coarse_worker(a) for a in args]

    trivial = 0
    nontrivial = []
    for pair, (total, joint) in zip(pairs, sigs):
        if joint >= total * (1.0 - TRIVIAL_TOL):
            trivial += 1
        else:
            nontrivial.append(((total, joint), pair))

    classes = []
    for group in _cluster(nontrivial, coarse_tol) if nontrivial else []:
        classes.extend(_validated(n, maps, group, coarse_tol, fine_tol))
    classes.sort(key=lambda c: (-c.members, c.representative))
    table = ClassTable(n=n, conditions=maps, classes=tuple(classes),
                       trivial_count=trivial, total_pairs=len(pairs))
    if table.total_pairs != comb(dim, 2):
        raise BlochAtlasError("pair sweep lost pairs")  # pragma: no cover
    return table
