"""SVG rendering of two-parameter sections.

A drawing shows, in the plane of the two section coefficients:

* the feasible-region outline (the section of the state-space boundary),
* the joint region satisfying every transpose condition, filled,
* the joint-region boundary split into arcs color-coded by the binding
  condition (the outline color where the joint boundary lies on the
  feasible boundary itself).

The viewport is a fixed 800 x 800 SVG 1.1 canvas; the axes span plus or
minus the section's bounding radius sqrt(2(n-1)/n), so drawings of
different sections of the same level count are directly comparable.
Rendering is deterministic: identical inputs produce identical bytes.
"""

from __future__ import annotations

import numpy as np

from . import regions
from .sections import bounding_radius

__all__ = ["section_svg", "CONDITION_COLORS", "OUTLINE_COLOR"]

VIEW = 800
MARGIN = 40

OUTLINE_COLOR = "#1f2430"
FILL_COLOR = "#9ecae1"
AXIS_COLOR = "#c8ccd4"
CONDITION_COLORS = ("#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")

_SHARE_TOL = 1e-9


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _points(xs, ys) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))


def _runs(labels):
    """Consecutive runs of equal labels on a circular index set."""
    m = len(labels)
    start = 0
    for i in range(1, m):
        if labels[i] != labels[0]:
            start = i
            break
    else:
        yield labels[0], list(range(m)) + [0]
        return
    order = list(range(start, m)) + list(range(start))
    run = [order[0]]
    for idx in order[1:]:
        if labels[idx] == labels[run[0]]:
            run.append(idx)
        else:
            yield labels[run[0]], run + [idx]
            run = [idx]
    yield labels[run[0]], run + [order[0]]


def section_svg(spec, conditions, angle_samples: int = 720) -> str:
    """Render one two-parameter section with its joint region as SVG."""
    if spec.dim != 2:
        raise ValueError("SVG rendering covers two-parameter sections only")
    conditions = tuple(conditions)
    n = spec.n
    radius = bounding_radius(n)
    scale = (VIEW / 2 - MARGIN) / radius

    theta = np.linspace(0.0, 2.0 * np.pi, angle_samples, endpoint=False)
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    body = regions.RegionPredicate(spec, conditions)
    slacks = body.condition_slacks(dirs)
    s_joint = slacks.max(axis=0)
    r_joint = 1.0 / (n * s_joint)
    r_feasible = 1.0 / (n * slacks[0])
    binding = np.where(
        slacks[0] >= s_joint * (1.0 - _SHARE_TOL), 0, slacks.argmax(axis=0))

    def to_px(r):
        x = VIEW / 2 + scale * r * dirs[:, 0]
        y = VIEW / 2 - scale * r * dirs[:, 1]
        return x, y

    jx, jy = to_px(r_joint)
    fx, fy = to_px(r_feasible)
    outline = _points(np.append(fx, fx[0]), np.append(fy, fy[0]))

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{VIEW}" height="{VIEW}" viewBox="0 0 {VIEW} {VIEW}">',
        f'<rect x="0" y="0" width="{VIEW}" height="{VIEW}" fill="#ffffff"/>',
        f'<line x1="{MARGIN}" y1="{VIEW // 2}" x2="{VIEW - MARGIN}" '
        f'y2="{VIEW // 2}" stroke="{AXIS_COLOR}" stroke-width="1"/>',
        f'<line x1="{VIEW // 2}" y1="{MARGIN}" x2="{VIEW // 2}" '
        f'y2="{VIEW - MARGIN}" stroke="{AXIS_COLOR}" stroke-width="1"/>',
        f'<text x="{VIEW - MARGIN + 4}" y="{VIEW // 2 + 4}" '
        f'font-size="13" fill="{AXIS_COLOR}">+{radius:.3f}</text>',
        f'<text x="{VIEW // 2 + 4}" y="{MARGIN - 6}" '
        f'font-size="13" fill="{AXIS_COLOR}">+{radius:.3f}</text>',
        f'<polygon points="{_points(jx, jy)}" fill="{FILL_COLOR}" '
        f'fill-opacity="0.55" stroke="none"/>',
        f'<polygon points="{outline}" fill="none" '
        f'stroke="{OUTLINE_COLOR}" stroke-width="2"/>',
    ]

    for label, idx in _runs(binding.tolist()):
        color = (OUTLINE_COLOR if label == 0
                 else CONDITION_COLORS[(label - 1) % len(CONDITION_COLORS)])
        xs = [jx[i] for i in idx]
        ys = [jy[i] for i in idx]
        parts.append(
            f'<polyline points="{_points(xs, ys)}" fill="none" '
            f'stroke="{color}" stroke-width="3"/>')

    gens = ",".join(str(g) for g in spec.generators)
    labels = [m.label for m in conditions]
    parts.append(
        f'<text x="{MARGIN}" y="{MARGIN - 14}" font-size="15" '
        f'fill="{OUTLINE_COLOR}">n={n}  generators {{{gens}}}  '
        f'conditions {"+".join(labels)}</text>')
    legend_y = VIEW - MARGIN + 22
    entries = [("feasible boundary", OUTLINE_COLOR)]
    entries += [(label, CONDITION_COLORS[k % len(CONDITION_COLORS)])
                for k, label in enumerate(labels)]
    x = MARGIN
    for text, color in entries:
        parts.append(
            f'<rect x="{x}" y="{legend_y - 11}" width="12" height="12" '
            f'fill="{color}"/>')
        parts.append(
            f'<text x="{x + 16}" y="{legend_y}" font-size="13" '
            f'fill="{OUTLINE_COLOR}">{text}</text>')
        x += 16 + 9 * len(text) + 24
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
