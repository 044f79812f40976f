"""Compare the compiled and pure-Python sparse kernels, alone and on one suite.

    python benchmarks/bench_kernels.py [--repeat N] [--suite NAME]
"""
from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time

from gmpy2 import mpq

from qha import _kernels_py

try:
    from qha import _ckernels
except ImportError:
    _ckernels = None


# sparse dicts never store zeros
def random_matrix(rng, n, density):
    return {j: {i: mpq(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)) for i in range(n) if rng.random() < density}
            for j in range(n)}


def random_rows(rng, n, k):
    rows, combos = {}, {}
    for p in sorted(rng.sample(range(n), k)):
        row = {p: mpq(1)}
        for i in range(p + 1, n):
            if rng.random() < 0.02:
                row[i] = mpq(rng.choice([-2, -1, 1, 2]), rng.randint(1, 4))
        rows[p] = row
        combos[p] = {p: mpq(1)}
    return rows, combos


def bench(mod, M, vecs, rows, combos, repeat):
    t = time.perf_counter()
    for _ in range(repeat):
        for v in vecs:
            mod.matvec(M, v)
    t_mv = time.perf_counter() - t
    t = time.perf_counter()
    for _ in range(repeat):
        for v in vecs:
            mod.reduce_by(dict(v), rows, {}, combos)
    return t_mv, time.perf_counter() - t


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--suite", default="lambda", help="suite timed end to end; empty to skip")
    args = ap.parse_args()
    rng = random.Random(0)
    M = random_matrix(rng, args.size, 0.05)
    vecs = [{i: mpq(rng.choice([-2, -1, 1, 3])) for i in range(args.size) if rng.random() < 0.3} for _ in range(50)]
    rows, combos = random_rows(rng, args.size, args.size // 2)
    results = {"python": bench(_kernels_py, M, vecs, rows, combos, args.repeat)}
    if _ckernels is not None:
        results["compiled"] = bench(_ckernels, M, vecs, rows, combos, args.repeat)
    for name, (mv, rb) in results.items():
        print(f"{name:9s} matvec {mv:7.3f}s  reduce_by {rb:7.3f}s")
    if "compiled" in results:
        py, c = results["python"], results["compiled"]
        print(f"speedup   matvec {py[0] / c[0]:5.2f}x  reduce_by {py[1] / c[1]:5.2f}x")
    else:
        print("compiled kernels not built")
    if args.suite:
        for backend in ("python", "compiled"):
            print(f"suite {args.suite} [{backend}] {suite_time(args.suite, backend):7.2f}s")


def suite_time(name: str, backend: str) -> float:
    code = ("import time; from qha.suites import run_suite; from qha._kernels import BACKEND; "
            f"t = time.perf_counter(); r = run_suite({name!r}); "
            "print(BACKEND, time.perf_counter() - t, r.ok)")
    env = dict(os.environ, QHA_KERNELS=backend)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    got, secs, ok = out.stdout.split()
    if ok != "True":
        raise SystemExit(f"suite {name} failed under {got} kernels")
    return float(secs)


if __name__ == "__main__":
    main()
