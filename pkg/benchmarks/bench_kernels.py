"""Compare the compiled and pure-Python Sturm-count kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--sizes 1000 4000] [--shifts 256] [--repeat 3]

Reports wall time per backend for a batch of inertia counts, for bisecting the
lowest eigenvalues, and for a full ``eigen_solve``, plus the largest relative
disagreement between the two backends.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from weyl1d._kernels import available_backends
from weyl1d.fixtures import get_fixture
from weyl1d.spectral import Discretization, assemble_elements, eigen_solve
from weyl1d.spectral.solver import _Counter


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 4000])
    ap.add_argument("--shifts", type=int, default=256)
    ap.add_argument("--eigs", type=int, default=200)
    ap.add_argument("--fixtures", nargs="+", default=["flat_pi", "circle_r1", "sinpow_N3"])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled kernels are not built; only the Python backend will be timed")
    header = f"{'fixture':<12} {'n':>6} {'operation':<14}" + "".join(f" {b:>12}" for b in backends)
    print(header + "   speedup   max rel diff")
    for name in args.fixtures:
        space = get_fixture(name).build()
        for n in args.sizes:
            disc = Discretization.auto(space, n)
            el = assemble_elements(space, disc)
            top = (math.pi / el.mesh_size) ** 2 / 16.0
            shifts = np.linspace(0.0, top, args.shifts)
            k = min(args.eigs, el.n_dofs - 1)
            ops = {
                "counts": lambda c: c.counts(shifts).astype(float),
                "bisect": lambda c: c.bisect(np.arange(k), -1e-9, top * 4.0),
            }
            for op, fn in ops.items():
                times, outs = [], []
                for b in backends:
                    counter = _Counter(el, b)
                    t, out = best_of(lambda: fn(counter), args.repeat)
                    times.append(t)
                    outs.append(np.asarray(out, dtype=float))
                _report(name, n, op, times, outs)
            times, outs = [], []
            for b in backends:
                t, spec = best_of(lambda: eigen_solve(space, disc, k, backend=b, use_cache=False),
                                  1)
                times.append(t)
                outs.append(spec.eigenvalues)
            _report(name, n, "eigen_solve", times, outs)


def _report(name, n, op, times, outs):
    line = f"{name:<12} {n:>6} {op:<14}" + "".join(f" {t:>11.4f}s" for t in times)
    if len(times) == 2:
        a, b = outs
        m = min(a.size, b.size)
        scale = np.maximum(np.abs(a[:m]), 1.0)
        diff = float(np.max(np.abs(a[:m] - b[:m]) / scale)) if m else 0.0
        line += f"   {times[1] / times[0]:>7.1f}x   {diff:.2e}"
    print(line, flush=True)


if __name__ == "__main__":
    main()
