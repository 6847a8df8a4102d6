"""Compare the compiled rref kernel with the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--sizes 4,8,16,32,64,128]

Prints one row per matrix size with the best time per call for each backend
and, when the extension is built, an end-to-end timing of a small CLI
command under both backends.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from hightors import _fallback

try:
    from hightors import _kernels
except ImportError:  # extension not built
    _kernels = None

P = 5


def bench_rref(kernel, size: int, repeat: int, rng: np.random.Generator) -> float:
    mats = [rng.integers(0, P, size=(size, size), dtype=np.int64) for _ in range(8)]

    def go():
        for M in mats:
            kernel(M.copy(), P)

    number = max(1, 2000 // (size * size // 16 + 1))
    return min(timeit.repeat(go, number=number, repeat=repeat)) / (number * len(mats))


def bench_cli(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["HIGHTORS_PURE"] = "1"
    cmd = [sys.executable, "-c", "import time, hightors.cli as c; t=time.perf_counter(); c.run(['check', 'theorem-b', 'gamma']); print(time.perf_counter()-t)"]
    return float(subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", default="4,8,16,32,64,128")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'size':>6} {'python (us)':>12} {'cython (us)':>12} {'speedup':>8}")
    for n in sizes:
        t_py = bench_rref(_fallback.rref_inplace, n, args.repeat, rng)
        if _kernels is None:
            print(f"{n:>6} {t_py * 1e6:>12.1f} {'n/a':>12} {'n/a':>8}")
            continue
        t_cy = bench_rref(_kernels.rref_inplace, n, args.repeat, rng)
        print(f"{n:>6} {t_py * 1e6:>12.1f} {t_cy * 1e6:>12.1f} {t_py / t_cy:>7.1f}x")
    if _kernels is not None:
        py, cy = bench_cli(True), bench_cli(False)
        print(f"\ncheck theorem-b gamma: python {py:.2f}s, cython {cy:.2f}s ({py / cy:.1f}x)")


if __name__ == "__main__":
    main()
