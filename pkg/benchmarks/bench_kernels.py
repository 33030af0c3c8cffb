"""Time the compiled lattice scan against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py``. The workload is a set of
semistable instances, so every scan visits the whole box; that is the worst
case the oracles hit.
"""
from __future__ import annotations

import argparse
import random
import time

from gitgauge import kernels


def workload(seed: int, count: int, r: int, m: int):
    rng = random.Random(seed)
    cases = []
    while len(cases) < count:
        rows = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(m)]
        # rows and their negatives together guarantee no positive direction
        rows += [[-a for a in row] for row in rows[:1]]
        cases.append(rows)
    return cases


def clock(fn, cases, radius) -> float:
    start = time.perf_counter()
    for rows in cases:
        fn(rows, radius)
    return time.perf_counter() - start


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radius", type=int, default=6)
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--rank", type=int, default=3)
    ap.add_argument("--rows", type=int, default=5)
    args = ap.parse_args()

    cases = workload(0, args.count, args.rank, args.rows)
    points = (2 * args.radius + 1) ** args.rank - 1
    print(f"{args.count} scans of {points} lattice points (r={args.rank}, B={args.radius})")
    t_py = clock(kernels.first_positive_py, cases, args.radius)
    print(f"python fallback : {t_py:8.3f} s")
    if not kernels.HAVE_EXTENSION:
        print("compiled kernel : not built")
        return
    t_c = clock(kernels.first_positive, cases, args.radius)
    print(f"compiled kernel : {t_c:8.3f} s")
    print(f"speedup         : {t_py / t_c:8.1f}x")
    agree = all(kernels.first_positive(c, args.radius) == kernels.first_positive_py(c, args.radius) for c in cases)
    print(f"identical output: {agree}")


if __name__ == "__main__":
    main()
