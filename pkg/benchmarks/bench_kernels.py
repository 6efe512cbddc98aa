"""Benchmark the compiled numeric core against its pure-Python twin.

Both backends implement identical kernels (cyclic-Jacobi eigensolves and
the closed-form pair-profile evaluator); this script times the hot paths
through the public wrappers with each backend forced in turn, checks that
the two produce matching numbers, and prints a comparison table.

Run:  python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from bloch_atlas import kernels, regions, scenarios
from bloch_atlas.sections import SectionSpec


def _timed(fn, repeat):
    best = float("inf")
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return best, value


def workloads():
    rng = np.random.default_rng(20260814)
    stack = rng.standard_normal((4096, 10, 10))
    stack = stack + np.swapaxes(stack, 1, 2)

    theta = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    structured = regions.RegionPredicate(
        SectionSpec(8, (8, 49)), scenarios.condition_maps(8, "4x2"))
    general = regions.RegionPredicate(
        SectionSpec(9, (40, 63)), scenarios.condition_maps(9, "3x3"))

    return [
        ("batch eigvals, 4096 x 10x10",
         lambda: kernels.sym_eigvals_batch(stack)),
        ("pair profile n=8 {8,49}, 4096 dirs",
         lambda: structured.smax(dirs)),
        ("pair profile n=9 {40,63}, 4096 dirs",
         lambda: general.smax(dirs)),
        ("area n=8 {8,49} with 4x2 condition",
         lambda: regions.area_2d(structured)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions (best is reported)")
    args = parser.parse_args()

    rows = []
    for name, fn in workloads():
        times = {}
        values = {}
        for backend in ("python", "compiled"):
            kernels.set_backend(backend)
            times[backend], values[backend] = _timed(fn, args.repeat)
        agreement = float(np.max(np.abs(
            np.asarray(values["python"]) - np.asarray(values["compiled"]))))
        rows.append((name, times["python"], times["compiled"], agreement))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'python':>10}  {'compiled':>10}  "
          f"{'speedup':>8}  {'max |diff|':>10}")
    for name, t_py, t_c, agreement in rows:
        print(f"{name:<{width}}  {t_py * 1e3:>8.1f}ms  {t_c * 1e3:>8.1f}ms  "
              f"{t_py / t_c:>7.1f}x  {agreement:>10.2e}")


if __name__ == "__main__":
    main()
