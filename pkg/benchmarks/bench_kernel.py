"""Time the compiled kernel against the numpy fallback.

Run with ``python3 benchmarks/bench_kernel.py``.
"""

from __future__ import annotations

import time

import numpy as np

from skewseries import kernel
from skewseries.groebner import complete
from skewseries.ring import Ring, preset


def _time(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(name, P, products=200):
    rows = []
    for label, pure in (("compiled", False), ("fallback", True)):
        if not pure and kernel.compiled is None:
            continue
        R = Ring(P).use_kernel(pure)
        R.mul(R.one, R.one)  # build the engine outside the timing
        rng = np.random.default_rng(0)
        pairs = [(R.random_element(rng), R.random_element(rng)) for _ in range(products)]
        gen_rng = np.random.default_rng(1)
        t_mul = _time(lambda: [R.mul(a, b) for a, b in pairs], repeat=3)
        gens = [R.random_element(gen_rng) + R.var(1) ** 2, R.random_element(gen_rng) + R.var(R.n) ** 3]
        t_gb = _time(lambda: complete(gens), repeat=3)
        rows.append((label, t_mul, t_gb))
    for label, t_mul, t_gb in rows:
        print(f"{name:10s} {label:9s} mul x{products}: {t_mul*1e3:8.1f} ms   complete: {t_gb*1e3:8.1f} ms")
    if len(rows) == 2:
        print(f"{name:10s} speedup   mul {rows[1][1]/rows[0][1]:.2f}x   complete {rows[1][2]/rows[0][2]:.2f}x")


def main():
    print(f"active kernel: {kernel.IMPLEMENTATION}")
    bench("flagship", preset("yx-p2", precision=10, order="deglex"))
    bench("delta-x2", preset("delta-x2", precision=10, order="deglex"))
    bench("qcomm", preset("qcomm(2)", precision=10, order="deglex"))


if __name__ == "__main__":
    main()
