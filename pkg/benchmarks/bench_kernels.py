#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Run after building the extension:

    python benchmarks/bench_kernels.py

Covers the two hot paths: exact object matmul (grid verification) and the
Jacobi eigensolver (operator/trace norms).
"""

import time

import numpy as np

from jcgrid import _kernels_cy, _kernels_py
from jcgrid.numlin import EX_ZERO, ExactMatrix, ExactScalar


def _random_exact(rng, rows, cols, density=0.3):
    entries = []
    for _ in range(rows * cols):
        if rng.random() < density:
            entries.append(ExactScalar(int(rng.integers(-3, 4)), int(rng.integers(-2, 3))))
        else:
            entries.append(EX_ZERO)
    return ExactMatrix(rows, cols, entries)


def bench_matmul(kern, mats, reps):
    t0 = time.perf_counter()
    for _ in range(reps):
        for a, b in mats:
            kern.matmul(list(a.entries), a.rows, a.cols,
                        list(b.entries), b.rows, b.cols, EX_ZERO)
    return time.perf_counter() - t0


def bench_jacobi(kern, grams, reps):
    t0 = time.perf_counter()
    for _ in range(reps):
        for h in grams:
            kern.hermitian_eigenvalues(h, 1e-14)
    return time.perf_counter() - t0


def main():
    rng = np.random.default_rng(0)
    mats = [(_random_exact(rng, 16, 16), _random_exact(rng, 16, 16)) for _ in range(20)]
    grams = []
    for n in (8, 16, 24):
        for _ in range(5):
            x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            grams.append(x @ x.conj().T)

    reps = 20
    t_py = bench_matmul(_kernels_py, mats, reps)
    t_cy = bench_matmul(_kernels_cy, mats, reps)
    print(f"exact matmul   python {t_py:8.3f}s   cython {t_cy:8.3f}s   "
          f"speedup {t_py / t_cy:5.2f}x")

    reps = 30
    t_py = bench_jacobi(_kernels_py, grams, reps)
    t_cy = bench_jacobi(_kernels_cy, grams, reps)
    print(f"jacobi eigvals python {t_py:8.3f}s   cython {t_cy:8.3f}s   "
          f"speedup {t_py / t_cy:5.2f}x")


if __name__ == "__main__":
    main()
