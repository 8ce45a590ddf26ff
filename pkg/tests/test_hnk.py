"""Combination calculus, signed-unit spaces, words, splittings, projection."""

import math
from fractions import Fraction

import numpy as np
import pytest

from jcgrid.errors import CapacityError, DimensionError
from jcgrid.grids import verify_grid
from jcgrid.hnk import (Combination, build_hnk, build_uIJ, combinations,
                        decompose_into_ones, diag_hnk, diag_rect,
                        grid_support_split, hnk_projection,
                        hnk_projection_exact, indices, ones_triple_coherence,
                        peirce_split, signature_general, signature_one,
                        split_cross_orthogonal, sum_decomposition_holds,
                        support_product, ternary_matrix_unit_image,
                        trace_formula_check, verify_uIJ_grid)
from jcgrid.numlin import ExactMatrix, ExactScalar, operator_norm
from jcgrid.triple import ternary_product

E = ExactMatrix.unit
C = Combination.of

EXAMPLE_N3K2 = [
    [[0, 0, 0], [0, 0, 1], [0, -1, 0]],
    [[0, 0, -1], [0, 0, 0], [1, 0, 0]],
    [[0, 1, 0], [-1, 0, 0], [0, 0, 0]],
]

EXAMPLE_N4K3 = [
    [[0, 0, 0, 0, 0, 0],
     [0, 0, 0, 0, 0, 1],
     [0, 0, 0, 0, -1, 0],
     [0, 0, 0, 1, 0, 0]],
    [[0, 0, 0, 0, 0, -1],
     [0, 0, 0, 0, 0, 0],
     [0, 0, 1, 0, 0, 0],
     [0, -1, 0, 0, 0, 0]],
    [[0, 0, 0, 0, 1, 0],
     [0, 0, -1, 0, 0, 0],
     [0, 0, 0, 0, 0, 0],
     [1, 0, 0, 0, 0, 0]],
    [[0, 0, 0, -1, 0, 0],
     [0, 1, 0, 0, 0, 0],
     [-1, 0, 0, 0, 0, 0],
     [0, 0, 0, 0, 0, 0]],
]


class TestCombinations:
    def test_singletons(self):
        assert [list(c) for c in combinations(3, 1)] == [[1], [2], [3]]

    def test_pairs_lexicographic(self):
        assert [list(c) for c in combinations(4, 2)] == \
            [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]]

    def test_empty(self):
        assert [list(c) for c in combinations(4, 0)] == [[]]

    def test_rank_unrank_roundtrip(self):
        for n in range(1, 7):
            for r in range(n + 1):
                for pos, c in enumerate(combinations(n, r)):
                    assert c.rank() == pos
                    assert Combination.unrank(n, r, pos) == c

    def test_validation(self):
        with pytest.raises(ValueError):
            Combination(3, (2, 1))
        with pytest.raises(ValueError):
            Combination(3, (0, 1))


class TestSignatureOne:
    def test_published_table_entries(self):
        assert signature_one(C(3, [2]), 3, C(3, [1])) == 1
        assert signature_one(C(3, [3]), 2, C(3, [1])) == -1

    def test_four_inversions(self):
        # word (3,4,1,2) has four inversions
        assert signature_one(C(4, [3, 4]), 1, C(4, [2])) == 1

    def test_partition_required(self):
        with pytest.raises(ValueError):
            signature_one(C(3, [1]), 1, C(3, [2]))


class TestBuildHnk:
    def test_example_n3_k2(self):
        sp = build_hnk(3, 2)
        for got, want in zip(sp.basis, EXAMPLE_N3K2):
            assert got == ExactMatrix.from_rows(want)

    def test_example_n4_k3(self):
        sp = build_hnk(4, 3)
        for got, want in zip(sp.basis, EXAMPLE_N4K3):
            assert got == ExactMatrix.from_rows(want)

    def test_extreme_k_row_and_column_patterns(self):
        for n in (2, 3, 4):
            rows = build_hnk(n, n)
            assert all(b.rows == 1 for b in rows.basis)
            cols = build_hnk(n, 1)
            assert all(b.cols == 1 for b in cols.basis)

    def test_trivial_space(self):
        sp = build_hnk(1, 1)
        assert sp.basis[0] == ExactMatrix.from_rows([[1]])

    def test_shapes_and_multiplicity(self):
        for n in range(1, 7):
            for k in range(1, n + 1):
                sp = build_hnk(n, k)
                assert sp.shape == (math.comb(n, n - k), math.comb(n, k - 1))
                assert sp.multiplicity == math.comb(n - 1, k - 1)
                for b in sp.basis:
                    assert b.nnz() == sp.multiplicity

    def test_capacity(self):
        with pytest.raises(CapacityError):
            build_hnk(9, 4)


class TestSupportAndIndices:
    def test_support_products_on_n3_k2(self):
        real = build_hnk(3, 2).realization()
        assert support_product(real, "right", C(3, [1, 2])) == E(3, 3, 2, 2)
        assert support_product(real, "right", C(3, [1, 2, 3])).is_zero()
        u1 = real.matrix(1)
        p = support_product(real, "right", C(3, [1]))
        assert p == u1 * u1.adjoint()
        assert p * p == p and p.adjoint() == p

    def test_indices_formula(self):
        for n in range(1, 7):
            for k in range(1, n + 1):
                assert indices(build_hnk(n, k).realization()) == (k, n - k + 1)

    def test_row_grid_indices(self):
        real = build_hnk(3, 3).realization()
        assert indices(real) == (3, 1)
        col = build_hnk(3, 1).realization()
        assert indices(col) == (1, 3)

    def test_lower_bound(self):
        for real in (diag_hnk(3, [2, 1]), diag_hnk(4, [3, 1]),
                     build_hnk(4, 2).realization()):
            i_r, i_l = indices(real)
            assert i_r + i_l >= real.n + 1


class TestBuildUIJ:
    def test_signed_unit_for_disjoint_sets(self):
        sp = build_hnk(3, 2)
        real = sp.realization()
        I, J = C(3, [2]), C(3, [1])
        w = build_uIJ(real, I, J)
        assert w.scale(signature_general(real, I, J)) == sp.unit(J, I)

    def test_overlapping_sets_give_single_unit(self):
        sp = build_hnk(3, 2)
        real = sp.realization()
        I = J = C(3, [1])
        w = build_uIJ(real, I, J)
        assert w == ternary_product(real.matrix(2), real.matrix(1), real.matrix(3))
        assert w.nnz() == 1
        assert w == sp.unit(C(3, [1]), C(3, [1]))

    def test_sum_decomposition(self):
        for n, k in [(3, 2), (4, 2), (4, 3), (5, 3)]:
            real = build_hnk(n, k).realization()
            for c in range(1, n + 1):
                assert sum_decomposition_holds(real, c)

    def test_size_mismatch(self):
        real = build_hnk(3, 2).realization()
        with pytest.raises(DimensionError):
            build_uIJ(real, C(3, [1, 2]), C(3, [1]))


class TestDecomposition:
    def test_disjoint_single_one(self):
        real = build_hnk(3, 2).realization()
        fs = decompose_into_ones(real, C(3, [2]), C(3, [3]))
        assert len(fs) == 1 and not fs[0].starred
        assert fs[0].c == 1

    def test_three_factor_case(self):
        real = build_hnk(3, 2).realization()
        fs = decompose_into_ones(real, C(3, [1]), C(3, [1]))
        assert [f.starred for f in fs] == [False, True, False]
        assert [f.c for f in fs] == [2, 1, 3]
        prod = None
        for f in fs:
            m = f.matrix(real)
            prod = m if prod is None else prod * m
        w = build_uIJ(real, C(3, [1]), C(3, [1]))
        assert prod in (w, -w)

    def test_deterministic_index_sets(self):
        real = build_hnk(4, 2).realization()
        I, J = C(4, [2]), C(4, [2, 3])
        a = decompose_into_ones(real, I, J)
        b = decompose_into_ones(real, I, J)
        assert [(f.unit, f.starred) for f in a] == [(f.unit, f.starred) for f in b]

    def test_custom_orders_give_same_word_up_to_sign(self):
        real = build_hnk(4, 2).realization()
        I, J = C(4, [1]), C(4, [1, 2])
        default = decompose_into_ones(real, I, J)
        swapped = decompose_into_ones(real, I, J, c_order=[4, 3], d_order=[1])
        def product(fs):
            out = None
            for f in fs:
                m = f.matrix(real)
                out = m if out is None else out * m
            return out
        p1, p2 = product(default), product(swapped)
        assert p1 == p2 or p1 == -p2

    def test_signature_disjoint_matches_one(self):
        real = build_hnk(4, 3).realization()
        for I in combinations(4, 2):
            for J in combinations(4, 1):
                if set(I.members) & set(J.members):
                    continue
                comp = I.union(J).complement()
                if len(comp) != 1:
                    continue
                c = comp.members[0]
                assert signature_general(real, I, J) == signature_one(I, c, J)


class TestVerifyUij:
    @pytest.mark.parametrize("n,k", [(3, 2), (4, 2), (4, 3)])
    def test_passes_with_unit_match(self, n, k):
        sp = build_hnk(n, k)
        rep = verify_uIJ_grid(sp.realization(), sp)
        assert rep.passed, rep.render_text()

    def test_sign_coherence(self):
        real = build_hnk(4, 2).realization()
        checked, failures = ones_triple_coherence(real)
        assert checked > 0 and failures == 0

    def test_capacity(self):
        with pytest.raises(CapacityError):
            verify_uIJ_grid(build_hnk(6, 3).realization())


class TestPeirceSplit:
    def test_identity_split_on_tight_space(self):
        real = build_hnk(4, 2).realization()
        p_part, q_part, p = peirce_split(real)
        assert q_part.n == 0
        for i in range(1, 5):
            assert p * real.matrix(i) == real.matrix(i)

    def test_diag_split_recovers_summands(self):
        real = diag_hnk(3, [2, 1])
        p_part, q_part, p = peirce_split(real)
        assert (indices(p_part), indices(q_part)) == ((2, 2), (1, 3))
        assert verify_grid(p_part.as_grid()).passed
        assert verify_grid(q_part.as_grid()).passed
        assert split_cross_orthogonal(real, p)
        sub = build_hnk(3, 2)
        for i in range(1, 4):
            m = p_part.matrix(i)
            top_left = ExactMatrix(3, 3, [m.entry(r, c)
                                          for r in range(3) for c in range(3)])
            assert top_left == sub.basis[i - 1]

    def test_strictly_decreasing_index(self):
        real = diag_hnk(4, [3, 1])
        p_part, q_part, _ = peirce_split(real)
        assert indices(p_part)[0] > indices(q_part)[0]


class TestDiag:
    def test_single_summand_matches_plain_space(self):
        real = diag_hnk(3, [2])
        sp = build_hnk(3, 2)
        for i in range(1, 4):
            assert real.matrix(i) == sp.basis[i - 1]

    def test_indices_exceed_tight_bound(self):
        real = diag_hnk(3, [2, 1])
        i_r, i_l = indices(real)
        assert (i_r, i_l) == (2, 3) and i_r + i_l > 4

    def test_requires_strictly_decreasing(self):
        with pytest.raises(ValueError):
            diag_hnk(3, [1, 2])
        with pytest.raises(ValueError):
            diag_hnk(3, [2, 2])


class TestDiagRect:
    @pytest.mark.parametrize("p,q", [(2, 2), (3, 2)])
    def test_verify_and_nondegeneracy(self, p, q):
        g = diag_rect(p, q)
        assert verify_grid(g).passed
        for i in range(1, p + 1):
            for j in range(1, q + 1):
                for k in range(1, q + 1):
                    a, b = g.matrix((i, k)), g.matrix((i, j))
                    assert not (a * b.adjoint()).is_zero()
                    assert not (a.adjoint() * b).is_zero()
                for l in range(1, p + 1):
                    a, b = g.matrix((i, j)), g.matrix((l, j))
                    assert not (a * b.adjoint()).is_zero()
                    assert not (a.adjoint() * b).is_zero()

    def test_split_pipeline(self):
        for p, q in [(2, 2), (3, 2)]:
            g = diag_rect(p, q)
            p_grid, q_grid, proj = grid_support_split(g)
            assert verify_grid(p_grid).passed
            assert q_grid is not None and verify_grid(q_grid).passed
            # the projected part triggers the associative closure criterion
            for i in range(1, p + 1):
                for k in range(1, q + 1):
                    for j in range(1, q + 1):
                        if k != j:
                            prod = p_grid.matrix((i, k)) * p_grid.matrix((i, j)).adjoint()
                            assert prod.is_zero()
            assert ternary_matrix_unit_image(p_grid)

    def test_requires_two_by_two(self):
        with pytest.raises(ValueError):
            diag_rect(1, 3)


class TestProjection:
    def test_fixes_basis(self):
        for n, k in [(3, 2), (4, 3), (5, 2)]:
            sp = build_hnk(n, k)
            for b in sp.basis:
                assert hnk_projection_exact(sp, b) == b

    def test_unit_maps_to_scaled_basis_element(self):
        sp = build_hnk(3, 2)
        # E at row {2}, col {3} appears in u_1 with sign epsilon({3},1,{2}) = +1
        unit = sp.unit(C(3, [2]), C(3, [3]))
        want = sp.basis[0].scale(ExactScalar(Fraction(1, sp.multiplicity)))
        assert hnk_projection_exact(sp, unit) == want

    def test_idempotent_and_contractive(self, rng):
        sp = build_hnk(4, 2)
        rows, cols = sp.shape
        for _ in range(50):
            x = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
            px = hnk_projection(sp, x).array
            ppx = hnk_projection(sp, px).array
            assert np.abs(ppx - px).max() <= 1e-12 * max(1.0, np.abs(px).max())
            assert operator_norm(px) <= operator_norm(x) * (1 + 1e-9)

    def test_shape_mismatch(self):
        sp = build_hnk(3, 2)
        with pytest.raises(DimensionError):
            hnk_projection(sp, np.zeros((2, 2)))


class TestTraceFormula:
    def test_basis_vector_case(self):
        sp = build_hnk(3, 2)
        rep = trace_formula_check(sp, [1, 0, 0])
        assert rep.lhs == pytest.approx(2.0, abs=1e-10)
        assert rep.rhs == pytest.approx(2.0, abs=1e-12)
        assert rep.multiplicity == 2 and rep.eigenvalue == 1
        assert rep.exact_verified
        assert rep.sqrt_multiplicity_value == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_exact_trace_identity(self):
        sp = build_hnk(4, 2)
        rep = trace_formula_check(sp, [1, ExactScalar(0, 1), Fraction(1, 2), -2])
        assert rep.exact_verified
        assert rep.residual <= 1e-9

    def test_zero_vector(self):
        sp = build_hnk(3, 2)
        rep = trace_formula_check(sp, [0, 0, 0])
        assert rep.lhs == 0.0 and rep.rhs == 0.0

    def test_float_coefficients(self):
        sp = build_hnk(3, 2)
        rep = trace_formula_check(sp, [0.5, -0.25j, 1.0])
        assert rep.residual <= 1e-9
