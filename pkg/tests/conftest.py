"""Shared strategies and independent numerical oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from jcgrid.numlin import ExactMatrix, ExactScalar

_parts = st.fractions(
    min_value=Fraction(-3), max_value=Fraction(3), max_denominator=3)

exact_scalars = st.builds(ExactScalar, _parts, _parts)


def exact_matrices(rows, cols):
    return st.lists(exact_scalars, min_size=rows * cols, max_size=rows * cols).map(
        lambda e: ExactMatrix(rows, cols, e))


def square_exact(max_n=4):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: exact_matrices(n, n))


def random_exact(rng, rows, cols, density=0.5, halves=True):
    """Seeded random Gaussian-rational matrix (non-hypothesis paths)."""
    dens = [1, 2, 3] if halves else [1]
    entries = []
    for _ in range(rows * cols):
        if rng.random() < density:
            entries.append(ExactScalar(
                Fraction(int(rng.integers(-3, 4)), int(rng.choice(dens))),
                Fraction(int(rng.integers(-3, 4)), int(rng.choice(dens)))))
        else:
            entries.append(ExactScalar(0))
    return ExactMatrix(rows, cols, entries)


def svd_norms(a) -> tuple:
    """Oracle: (operator norm, trace norm) via numpy's full SVD."""
    arr = np.asarray(a, dtype=np.complex128)
    s = np.linalg.svd(arr, compute_uv=False)
    return float(s[0]) if s.size else 0.0, float(s.sum())


def power_iteration_norm(a, iters=5000) -> float:
    """Oracle: largest singular value by power iteration on the Gram matrix."""
    arr = np.asarray(a, dtype=np.complex128)
    h = arr @ arr.conj().T if arr.shape[0] <= arr.shape[1] else arr.conj().T @ arr
    n = h.shape[0]
    v = np.ones(n, dtype=np.complex128) + 0.1 * np.arange(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = h @ v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        w /= nw
        if abs(nw - lam) <= 1e-14 * max(1.0, nw):
            lam = nw
            break
        lam, v = nw, w
    return math.sqrt(lam)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
