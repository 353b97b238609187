#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the two hot paths (winner determination, exact regret oracle) with the
kernels selected normally, then re-runs itself with KVCG_PURE=1 and prints
the speedup. Workloads are seeded, so both passes do identical work.
"""
import json
import os
import subprocess
import sys
import time
from fractions import Fraction

import kvcg
from kvcg import gen_box, gen_instance, max_welfare, regret_exact_box


def bench_winner_determination():
    instances = [gen_instance(4, 4, Fraction(2), seed) for seed in range(40)]
    t0 = time.perf_counter()
    acc = Fraction(0)
    for inst in instances:
        for _ in range(10):
            value, _ = max_welfare(list(inst.truths))
            acc += value
    return time.perf_counter() - t0, str(acc)


def bench_regret_oracle():
    cases = []
    for seed in range(12):
        m = 2 + seed % 3
        box, _ = gen_box(m, Fraction(2), seed)
        cases.append((box, box.midpoint()))
        table = [Fraction(0)] + [
            Fraction((seed * 7 + 3 * k) % 60, 4) for k in range((1 << m) - 1)]
        cases.append((box, kvcg.Valuation(m, tuple(table))))
    t0 = time.perf_counter()
    acc = Fraction(0)
    for box, v in cases:
        acc += regret_exact_box(box, v, 2).value
    return time.perf_counter() - t0, str(acc)


def run_workloads():
    wd_time, wd_sum = bench_winner_determination()
    lp_time, lp_sum = bench_regret_oracle()
    return {
        "speedups": kvcg.HAVE_SPEEDUPS,
        "winner_determination_s": wd_time,
        "winner_checksum": wd_sum,
        "regret_oracle_s": lp_time,
        "regret_checksum": lp_sum,
    }


def main():
    mine = run_workloads()
    if os.environ.get("KVCG_PURE"):
        print(json.dumps(mine))
        return
    if not mine["speedups"]:
        print("extension not built; only the pure-Python path is available")
        print(json.dumps(mine, indent=2))
        return
    env = dict(os.environ, KVCG_PURE="1")
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__)],
        env=env, capture_output=True, text=True, check=True)
    pure = json.loads(out.stdout.strip().splitlines()[-1])
    for key in ("winner_checksum", "regret_checksum"):
        if mine[key] != pure[key]:
            raise SystemExit(f"checksum mismatch on {key}: kernels disagree")
    print(f"{'workload':<28} {'compiled':>10} {'pure':>10} {'speedup':>9}")
    for label, key in (
        ("winner determination x400", "winner_determination_s"),
        ("exact regret oracle x24", "regret_oracle_s"),
    ):
        fast, slow = mine[key], pure[key]
        print(f"{label:<28} {fast:>9.3f}s {slow:>9.3f}s {slow / fast:>8.1f}x")
    print("checksums identical across both paths")


if __name__ == "__main__":
    main()
