#!/usr/bin/env python3
"""Micro-benchmarks of the hot kernels: compiled extension vs pure NumPy.

Each kernel is timed on freshly built segmented-function layouts of the
requested sizes, and an end-to-end transition solve is timed under both
backends (the pure-NumPy run happens in a subprocess with SSDE_PURE_PYTHON=1
so the import-time backend choice is exercised for real).

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --sizes 4096,65536 --repeat 100
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from ssde import SegmentedFunction, backend_name, solve_transition
from ssde import _kernels_py as pyk

try:
    from ssde import _kernels as ck
except ImportError:  # pragma: no cover - depends on the build
    ck = None


def make_function(total_nodes):
    rng = np.random.default_rng(0)
    half = total_nodes // 2
    return SegmentedFunction.from_segments(
        [0.0, 0.4, 1.0], [rng.normal(size=half + 1), rng.normal(size=half + 1)]
    )


def layout(f):
    return f.breakpoints, f.offsets, f.values, f._hs, f._ms


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_size(size, repeat):
    f = make_function(size)
    breaks, offsets, values, hs, ms = layout(f)
    rng = np.random.default_rng(1)
    xs = np.sort(rng.uniform(0.0, 1.0, size))
    out = np.empty_like(xs)
    acc = np.empty_like(values)
    other = values + 1e-9
    lo, hi = 0.0, 1.0

    cases = {
        "eval_nodes": lambda k: k.eval_nodes(breaks, offsets, values, hs, ms, xs, out),
        "cumtrapz": lambda k: k.cumtrapz(offsets, values, hs, 0.0, acc),
        "trapz": lambda k: k.trapz(offsets, values, hs),
        "sup_abs_diff": lambda k: k.sup_abs_diff(values, other),
        "affine_gather": lambda k: k.affine_gather(
            breaks, offsets, values, hs, ms, lo, hi, -0.5, 2.0, 1.0, 0.25, xs, out
        ),
    }

    print(f"\nnodes per run: {size}")
    header = f"  {'kernel':<14} {'numpy (us)':>12}"
    if ck is not None:
        header += f" {'compiled (us)':>14} {'speedup':>9}"
    print(header)
    for name, call in cases.items():
        t_py = best_time(lambda: call(pyk), repeat)
        line = f"  {name:<14} {t_py * 1e6:12.1f}"
        if ck is not None:
            t_c = best_time(lambda: call(ck), repeat)
            line += f" {t_c * 1e6:14.1f} {t_py / t_c:8.1f}x"
        print(line)


def bench_end_to_end(repeat):
    nodes = 2048
    t_here = best_time(lambda: solve_transition(nodes), max(3, repeat // 20))
    print(f"\nend-to-end transition solve, {nodes} nodes per segment")
    print(f"  {backend_name():<10} {t_here * 1e3:10.2f} ms (this process)")
    script = (
        "import timeit, ssde\n"
        f"t = min(timeit.repeat(lambda: ssde.solve_transition({nodes}), number=1, repeat=5))\n"
        "print(ssde.backend_name(), t)\n"
    )
    env = dict(os.environ, SSDE_PURE_PYTHON="1")
    proc = subprocess.run(
        [sys.executable, "-c", script], env=env, capture_output=True, text=True
    )
    if proc.returncode == 0:
        name, t_sub = proc.stdout.split()
        print(f"  {name:<10} {float(t_sub) * 1e3:10.2f} ms (SSDE_PURE_PYTHON=1 subprocess)")
    else:  # pragma: no cover - diagnostic path
        print(f"  subprocess failed: {proc.stderr.strip()}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--sizes",
        default="1024,16384,262144",
        help="comma-separated node counts to benchmark",
    )
    parser.add_argument("--repeat", type=int, default=200, help="timing repetitions")
    args = parser.parse_args(argv)

    print(f"active backend: {backend_name()}")
    if ck is None:
        print("compiled kernels not built; timing the NumPy reference only")
    for size in (int(s) for s in args.sizes.split(",")):
        bench_size(size, args.repeat)
    bench_end_to_end(args.repeat)


if __name__ == "__main__":
    main()
