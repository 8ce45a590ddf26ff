"""Parity between the compiled kernels and the pure-Python fallback."""

import numpy as np
import pytest

from conftest import random_exact
from jcgrid import _kernels_py
from jcgrid.numlin import EX_ZERO

cy = pytest.importorskip("jcgrid._kernels_cy")


def test_matmul_identical(rng):
    for _ in range(10):
        a = random_exact(rng, 5, 7)
        b = random_exact(rng, 7, 4)
        got_py = _kernels_py.matmul(list(a.entries), 5, 7, list(b.entries), 7, 4, EX_ZERO)
        got_cy = cy.matmul(list(a.entries), 5, 7, list(b.entries), 7, 4, EX_ZERO)
        assert got_py == got_cy


def test_kron_identical(rng):
    a = random_exact(rng, 3, 2)
    b = random_exact(rng, 2, 4)
    got_py = _kernels_py.kron(list(a.entries), 3, 2, list(b.entries), 2, 4, EX_ZERO)
    got_cy = cy.kron(list(a.entries), 3, 2, list(b.entries), 2, 4, EX_ZERO)
    assert got_py == got_cy


def test_adjoint_identical(rng):
    a = random_exact(rng, 4, 6)
    assert _kernels_py.adjoint(list(a.entries), 4, 6) == cy.adjoint(list(a.entries), 4, 6)


def test_jacobi_agreement(rng):
    for n in (1, 2, 5, 12, 20):
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = x @ x.conj().T
        a = np.asarray(_kernels_py.hermitian_eigenvalues(h, 1e-14))
        b = np.asarray(cy.hermitian_eigenvalues(h, 1e-14))
        scale = max(1.0, float(np.abs(h).max()))
        assert np.abs(a - b).max() <= 1e-10 * scale
        want = np.sort(np.linalg.eigvalsh(h))
        assert np.abs(b - want).max() <= 1e-10 * scale


def test_jacobi_zero_and_trivial():
    assert np.allclose(cy.hermitian_eigenvalues(np.zeros((3, 3), complex), 1e-14), 0.0)
    out = cy.hermitian_eigenvalues(np.array([[2.5 + 0j]]), 1e-14)
    assert np.allclose(out, [2.5])
