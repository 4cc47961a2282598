#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the two hot loops on identical inputs and verifies that the results
match bit for bit:

* pairwise combination of two large discrete elements;
* exhaustive metric enumeration over a model with many support combinations.

Run after installing the package:  python benchmarks/bench_kernels.py
"""

import random
import time

from fuzzyat._kernels import implementations


def bench_zadeh_pairs(impl, xv, xd, yv, yd, repeats=5):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = impl.zadeh_pairs(2, xv, xd, yv, yd)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_oracle(impl, supports, degrees, attacks, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = impl.oracle_accumulate(0, 2, supports, degrees, attacks)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    impls = implementations()
    if "compiled" not in impls:
        print("compiled kernels are not built; only the pure-Python timing is shown")

    rng = random.Random(42)

    # pairwise combination: 600 x 600 support points on an integer grid
    # (sums collide heavily, as with real cost/time attributes)
    n = 600
    xv = [float(i) for i in range(n)]
    xd = [rng.choice((0.25, 0.5, 1.0)) for _ in range(n)]
    yv = [float(i) for i in range(n)]
    yd = [rng.choice((0.5, 0.75, 1.0)) for _ in range(n)]

    # enumeration: 10 leaves x 4 support values = 4^10 = ~1.05M combinations,
    # suite of 12 attacks of 3 leaves each
    n_bas = 10
    supports = [sorted(float(rng.randint(0, 9)) for _ in range(4)) for _ in range(n_bas)]
    degrees = [[1.0 if i == 0 else rng.choice((0.5, 0.75)) for i in range(4)] for _ in range(n_bas)]
    attacks = [tuple(sorted(rng.sample(range(n_bas), 3))) for _ in range(12)]

    rows = []
    results = {}
    for name, impl in impls.items():
        t_pairs, r_pairs = bench_zadeh_pairs(impl, xv, xd, yv, yd)
        t_oracle, r_oracle = bench_oracle(impl, supports, degrees, attacks)
        rows.append((name, t_pairs, t_oracle))
        results[name] = (r_pairs, r_oracle)

    if len(results) == 2:
        assert results["python"] == results["compiled"], "kernel results diverge"
        print("result parity: OK (bit-identical)\n")

    print(f"{'kernel':<10} {'pairwise 600x600':>18} {'enumerate 4^10':>16}")
    for name, t_pairs, t_oracle in rows:
        print(f"{name:<10} {t_pairs * 1e3:>15.1f} ms {t_oracle * 1e3:>13.1f} ms")
    if len(rows) == 2:
        by_name = {name: (tp, to) for name, tp, to in rows}
        speed_pairs = by_name["python"][0] / by_name["compiled"][0]
        speed_oracle = by_name["python"][1] / by_name["compiled"][1]
        print(f"\nspeedup: pairwise {speed_pairs:.1f}x, enumeration {speed_oracle:.1f}x")


if __name__ == "__main__":
    main()
