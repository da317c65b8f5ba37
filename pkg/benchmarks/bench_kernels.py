"""Numba kernels against the numpy fallback.

Times the two hot loops on synthetic inputs, then the octagon oracle
suite end to end in a subprocess with and without QCLUSTER_DISABLE_NUMBA.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--skip-suite]
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from qcluster import _kernels

SUITE = """
import time
from qcluster.corpus import polygon_instances
from qcluster.suite import verify_instance
start = time.perf_counter()
n = sum(verify_instance(i, single_flips=False).oracle for i in polygon_instances(7))
print(f"{n} {time.perf_counter() - start:.3f}")
"""


def best_of(fn, repeat: int) -> float:
    fn()  # compile / warm caches
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def products_case(terms: int, m: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    lam = rng.integers(-2, 3, (m, m))
    lam = lam - lam.T
    ea, eb = rng.integers(-3, 4, (terms, m)), rng.integers(-3, 4, (terms, m))
    qa, qb = rng.integers(-6, 7, terms), rng.integers(-6, 7, terms)
    ca, cb = rng.integers(1, 4, terms), rng.integers(1, 4, terms)
    return tuple(np.ascontiguousarray(a, dtype=np.int64) for a in (ea, qa, ca, eb, qb, cb, lam))


def kernel_rows(repeat: int) -> list[tuple[str, float, float]]:
    rows = []
    for terms, m in ((16, 8), (64, 13), (256, 13)):
        args = products_case(terms, m)
        fast = best_of(lambda: _kernels.term_products(*args), repeat)
        slow = best_of(lambda: _kernels._term_products_np(*args), repeat)
        rows.append((f"term_products {terms}x{terms}, m={m}", fast, slow))
    for s in (12, 16, 18):
        right = int("10" * (s // 2), 2) & ((1 << (s - 1)) - 1)
        left = ((1 << (s - 1)) - 1) & ~right
        fast = best_of(lambda: _kernels.closed_masks(s, right, left), repeat)
        slow = best_of(lambda: _kernels._closed_masks_np(s, right, left), repeat)
        rows.append((f"closed_masks s={s}", fast, slow))
    return rows


def suite_time(disable: bool) -> tuple[int, float]:
    env = dict(os.environ)
    if disable:
        env["QCLUSTER_DISABLE_NUMBA"] = "1"
    else:
        env.pop("QCLUSTER_DISABLE_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", SUITE], env=env, check=True, capture_output=True, text=True)
    count, secs = out.stdout.split()
    return int(count), float(secs)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-suite", action="store_true")
    args = ap.parse_args()
    print(f"backend in this process: {_kernels.backend()}")
    if not _kernels.HAVE_NUMBA:
        print("numba is unavailable; both columns time the numpy path")
    print(f"{'kernel':34s} {'numba ms':>10s} {'numpy ms':>10s} {'ratio':>7s}")
    for name, fast, slow in kernel_rows(args.repeat):
        print(f"{name:34s} {fast * 1e3:10.3f} {slow * 1e3:10.3f} {slow / fast:7.2f}")
    if args.skip_suite:
        return
    print("\nheptagon oracle suite (588 instances, fresh process each):")
    for disable in (False, True):
        count, secs = suite_time(disable)
        label = "numpy fallback" if disable else "default"
        print(f"  {label:15s} {count} equal, {secs:.2f}s")


if __name__ == "__main__":
    main()
