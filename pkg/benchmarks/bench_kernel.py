#!/usr/bin/env python3
"""Benchmark: compiled pivot kernel vs the pure-Python twin.

Runs the same deterministic LP batch and a certification batch through both
backends and reports wall times.  Outcomes are asserted bit-identical first;
speed is meaningless if the answers drift.

Usage: python benchmarks/bench_kernel.py [--lp 400] [--certify 12]
"""

import argparse
import random
import time

import process_duality._kernel as K
from process_duality._kernel import available_backends, compiled, pivot_py


def lp_batch(n_cases, seed=7):
    from process_duality.exactlp import LinearSystem, lp_solve

    rng = random.Random(seed)
    cases = []
    for _ in range(n_cases):
        n = rng.randint(2, 4)
        le = []
        for j in range(n):
            le.append((tuple(int(j == k) for k in range(n)), rng.randint(1, 5)))
            le.append((tuple(-int(j == k) for k in range(n)), rng.randint(1, 5)))
        for _ in range(rng.randint(1, 4)):
            le.append(
                (tuple(rng.randint(-4, 4) for _ in range(n)), rng.randint(-2, 10))
            )
        cases.append(
            (tuple(rng.randint(-5, 5) for _ in range(n)), LinearSystem(n, le=tuple(le)))
        )
    return [lambda obj=obj, sys_=sys_: lp_solve(obj, sys_) for obj, sys_ in cases]


def certify_batch(n_cases, seed=11):
    from process_duality.fuzzing import check_instance, random_affine_instance

    jobs = []
    for i in range(n_cases):
        rng = random.Random(seed * 1_000_003 + i)
        dims = (rng.randint(2, 3), rng.randint(2, 3), rng.randint(1, 2))
        p = random_affine_instance(rng, dims)
        jobs.append(lambda p=p: check_instance(p))
    return jobs


def run_with(backend, jobs):
    K.pivot = backend.pivot
    K.bland_entering = backend.bland_entering
    K.bland_leaving = backend.bland_leaving
    t0 = time.perf_counter()
    results = [job() for job in jobs]
    return time.perf_counter() - t0, results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lp", type=int, default=400, help="LP batch size")
    ap.add_argument("--certify", type=int, default=12, help="certification batch size")
    args = ap.parse_args()

    if "compiled" not in available_backends():
        print("compiled kernel not built; run: python setup.py build_ext --inplace")
        return 1

    for name, maker, size in (
        ("lp_solve", lp_batch, args.lp),
        ("certify", certify_batch, args.certify),
    ):
        jobs = maker(size)
        t_pure, r_pure = run_with(pivot_py, jobs)
        t_comp, r_comp = run_with(compiled, jobs)
        assert r_pure == r_comp, "backends disagree; do not trust the timings"
        speedup = t_pure / t_comp if t_comp else float("inf")
        print(
            f"{name:10s} x{size:4d}:  pure {t_pure:7.3f}s   "
            f"compiled {t_comp:7.3f}s   speedup {speedup:4.2f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
