"""Grid constructors, the verifier, and the grid-to-matrix-unit transforms."""

import random

import pytest

from jcgrid.errors import CapacityError, TransformError
from jcgrid.grids import (Grid, conjugate_grid, hermitian_grid,
                          hermitian_to_matrix_units, random_signed_permutation,
                          rectangular_grid, spin_grid, spin_system,
                          spin_to_spin_system, symplectic_grid,
                          symplectic_to_matrix_units, verify_grid)
from jcgrid.numlin import EX_HALF, EX_I, ExactMatrix, exact_rank
from jcgrid.triple import (GridRelation, classify_relation, isotope_product,
                           ternary_product, triple_product)

E = ExactMatrix.unit


class TestRectangular:
    def test_row_grid_colinear(self):
        g = rectangular_grid(1, 3)
        ms = g.matrices()
        assert ms == [E(1, 3, 0, 0), E(1, 3, 0, 1), E(1, 3, 0, 2)]
        for i in range(3):
            for j in range(i + 1, 3):
                assert classify_relation(g.element(g.indices[i]), g.element(g.indices[j])) \
                    is GridRelation.COLINEAR

    def test_diagonal_orthogonal(self):
        g = rectangular_grid(2, 2)
        assert classify_relation(g.element((1, 1)), g.element((2, 2))) \
            is GridRelation.ORTHOGONAL

    def test_chain_product(self):
        g = rectangular_grid(2, 2)
        got = triple_product(g.matrix((1, 2)), g.matrix((1, 1)), g.matrix((2, 1)))
        assert got == g.matrix((2, 2)).scale(EX_HALF)

    def test_verify_canonical(self):
        for p in (1, 2, 3):
            for q in (1, 2, 4):
                assert verify_grid(rectangular_grid(p, q)).passed

    def test_row_scaled_variant_still_passes(self):
        # rescaling a whole row by -1 keeps every table identity
        g = rectangular_grid(2, 2)
        elems = [((i, j), g.matrix((i, j)).scale(-1 if i == 1 else 1))
                 for (i, j) in g.indices]
        assert verify_grid(Grid("rectangular", {"p": 2, "q": 2}, elems)).passed

    def test_single_flip_on_rank_one_grid_passes(self):
        g = rectangular_grid(1, 3)
        elems = [((1, 1), g.matrix((1, 1)).scale(-1)),
                 ((1, 2), g.matrix((1, 2))), ((1, 3), g.matrix((1, 3)))]
        assert verify_grid(Grid("rectangular", {"p": 1, "q": 3}, elems)).passed

    def test_fattened_unit_fails_minimality(self):
        elems = []
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)]:
            m = E(2, 2, i - 1, j - 1)
            if (i, j) == (1, 2):
                m = E(2, 2, 0, 1) + E(2, 2, 1, 0)
            elems.append(((i, j), m))
        rep = verify_grid(Grid("rectangular", {"p": 2, "q": 2}, elems))
        assert not rep.passed
        assert any(c.name == "minimality" and c.status == "fail" for c in rep.checks)

    def test_empty_grid_vacuous(self):
        assert verify_grid(Grid("rectangular", {"p": 1, "q": 1}, [])).passed


class TestHermitian:
    def test_m2_structure(self):
        g = hermitian_grid(2)
        assert len(g) == 3
        assert classify_relation(g.element((1, 2)), g.element((1, 1))) \
            is GridRelation.GOVERNS_FIRST_OVER_SECOND

    def test_chain_to_outer_index(self):
        g = hermitian_grid(4)
        got = triple_product(g.matrix((1, 2)), g.matrix((2, 3)), g.matrix((3, 4)))
        assert got == g.matrix((1, 4)).scale(EX_HALF)

    def test_partial_isometry_cube(self):
        g = hermitian_grid(3)
        u = g.matrix((1, 2))
        assert triple_product(u, u, u) == u

    def test_verify_canonical(self):
        for m in (2, 3, 4, 5, 6):
            rep = verify_grid(hermitian_grid(m))
            assert rep.passed, rep.render_text()

    def test_conjugated_passes(self):
        rng = random.Random(5)
        g = hermitian_grid(3)
        left = random_signed_permutation(3, rng)
        right = random_signed_permutation(3, rng)
        assert verify_grid(conjugate_grid(g, left, right)).passed


class TestSymplectic:
    def test_disjoint_orthogonal(self):
        g = symplectic_grid(4)
        assert classify_relation(g.element((1, 2)), g.element((3, 4))) \
            is GridRelation.ORTHOGONAL

    def test_quadrangle(self):
        g = symplectic_grid(4)
        got = triple_product(g.matrix((1, 2)), g.matrix((1, 4)), g.matrix((3, 4))).scale(2)
        assert got == g.matrix((2, 3)).scale(-1)

    def test_minimality(self):
        g = symplectic_grid(5)
        mats = g.matrices()
        for a in mats:
            for b in mats:
                got = ternary_product(a, b, a)
                assert got == (a if a == b else ExactMatrix.zeros(5, 5))

    def test_verify_canonical(self):
        for m in (4, 5, 6):
            assert verify_grid(symplectic_grid(m)).passed


class TestSpinSystem:
    def test_k2(self):
        s = spin_system(2)
        assert s[0] == ExactMatrix.from_rows([[1, 0], [0, -1]])
        assert s[1] == ExactMatrix.from_rows([[0, 1], [1, 0]])

    def test_k4_contains_chain_elements(self):
        s = spin_system(4)
        sigma3 = ExactMatrix.from_rows([[0, EX_I], [-EX_I, 0]])
        sigma1 = ExactMatrix.from_rows([[1, 0], [0, -1]])
        sigma2 = ExactMatrix.from_rows([[0, 1], [1, 0]])
        assert s[2] == sigma3.kron(sigma1)
        assert s[3] == sigma3.kron(sigma2)

    @pytest.mark.parametrize("k", range(2, 9))
    def test_anticommutation_exact(self, k):
        s = spin_system(k)
        n = s[0].rows
        two = ExactMatrix.identity(n).scale(2)
        zero = ExactMatrix.zeros(n, n)
        for i, a in enumerate(s):
            assert a.adjoint() == a
            for j, b in enumerate(s):
                assert a * b + b * a == (two if i == j else zero)

    def test_squares_are_identity(self):
        for k in range(2, 9):
            for s in spin_system(k):
                assert s * s == ExactMatrix.identity(s.rows)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            spin_system(13)
        with pytest.raises(CapacityError):
            spin_system(1)


class TestSpinGrid:
    def test_even_passes(self):
        for r in (2, 3):
            assert verify_grid(spin_grid(r, False)).passed

    def test_odd_passes(self):
        for r in (2, 3):
            assert verify_grid(spin_grid(r, True)).passed

    def test_first_quadrangle_identity(self):
        g = spin_grid(2, False)
        got = triple_product(g.matrix(("u", 1)), g.matrix(("u", 2)), g.matrix(("ut", 1)))
        assert got == g.matrix(("ut", 2)).scale(EX_HALF).scale(-1)

    def test_partner_orthogonality(self):
        g = spin_grid(3, False)
        for j in (1, 2, 3):
            u, ut = g.matrix(("u", j)), g.matrix(("ut", j))
            assert (u * ut.adjoint()).is_zero() and (u.adjoint() * ut).is_zero()

    def test_governing_element(self):
        g = spin_grid(2, True)
        u0 = g.matrix(("u0", 0))
        for i in (1, 2):
            assert triple_product(u0, g.matrix(("u", i)), u0) == -g.matrix(("ut", i))
            assert triple_product(u0, g.matrix(("ut", i)), u0) == -g.matrix(("u", i))


class TestSpinToSpinSystem:
    def test_even_anticommutators(self):
        g = spin_grid(3, False)
        v, system = spin_to_spin_system(g)
        two_v = v.mat.scale(2)
        zero = ExactMatrix.zeros(*v.shape)
        for i, x in enumerate(system):
            for j, y in enumerate(system):
                anti = isotope_product(v, x, y) + isotope_product(v, y, x)
                assert anti == (two_v if i == j else zero)

    def test_odd_has_unit_square_governor(self):
        g = spin_grid(2, True)
        v, system = spin_to_spin_system(g)
        u0 = system[-1]
        assert isotope_product(v, u0, u0) == v.mat

    def test_span_dimension(self):
        for r, odd, want in [(2, False, 4), (2, True, 5), (3, False, 6)]:
            g = spin_grid(r, odd)
            v, system = spin_to_spin_system(g)
            vecs = [v.mat.entries] + [x.entries for x in system]
            assert exact_rank(vecs) == want


class TestHermitianTransform:
    def test_canonical_units(self):
        for m in (2, 3, 4):
            fam = hermitian_to_matrix_units(hermitian_grid(m))
            for i in range(1, m + 1):
                for j in range(1, m + 1):
                    assert fam.unit(i, j) == E(m, m, i - 1, j - 1)

    def test_diagonal_units_annihilate(self):
        fam = hermitian_to_matrix_units(hermitian_grid(3))
        v = fam.v
        for i in range(1, 4):
            for j in range(1, 4):
                if i != j:
                    assert (fam.unit(i, i) * v.adjoint() * fam.unit(j, j)).is_zero()

    def test_conjugated_naturality(self):
        rng = random.Random(11)
        m = 4
        g = hermitian_grid(m)
        for _ in range(5):
            left = random_signed_permutation(m, rng)
            right = random_signed_permutation(m, rng)
            fam = hermitian_to_matrix_units(conjugate_grid(g, left, right))
            for i in range(1, m + 1):
                for j in range(1, m + 1):
                    assert fam.unit(i, j) == left * E(m, m, i - 1, j - 1) * right

    def test_wrong_kind_rejected(self):
        with pytest.raises(TransformError):
            hermitian_to_matrix_units(rectangular_grid(2, 2))


class TestSymplecticTransform:
    def test_canonical_units(self):
        fam = symplectic_to_matrix_units(symplectic_grid(5))
        for i in range(1, 6):
            for j in range(1, 6):
                assert fam.unit(i, j) == E(5, 5, i - 1, j - 1)

    def test_recovers_grid(self):
        g = symplectic_grid(5)
        fam = symplectic_to_matrix_units(g)
        for i in range(1, 6):
            for j in range(i + 1, 6):
                assert fam.unit(i, j) - fam.unit(j, i) == g.matrix((i, j))

    def test_requires_size_five(self):
        with pytest.raises(TransformError):
            symplectic_to_matrix_units(symplectic_grid(4))

    def test_conjugated_naturality(self):
        rng = random.Random(3)
        m = 5
        g = symplectic_grid(m)
        for _ in range(3):
            left = random_signed_permutation(m, rng)
            right = random_signed_permutation(m, rng)
            fam = symplectic_to_matrix_units(conjugate_grid(g, left, right))
            for i in range(1, m + 1):
                for j in range(1, m + 1):
                    assert fam.unit(i, j) == left * E(m, m, i - 1, j - 1) * right
