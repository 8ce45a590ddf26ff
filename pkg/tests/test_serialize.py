"""Lossless JSON round-trips and rendering formats."""

import json
from fractions import Fraction

from jcgrid.grids import hermitian_grid, spin_grid, verify_grid
from jcgrid.hnk import build_hnk
from jcgrid.numlin import ExactMatrix, ExactScalar
from jcgrid.serialize import (dumps, grid_from_json, grid_to_json,
                              hnk_basis_from_json, hnk_to_json,
                              matrix_from_json, matrix_to_csv_lines,
                              matrix_to_json, scalar_from_json, scalar_to_json)


def test_scalar_roundtrip():
    s = ExactScalar(Fraction(-7, 3), Fraction(22, 5))
    assert scalar_from_json(scalar_to_json(s)) == s
    d = scalar_to_json(ExactScalar(2))
    assert d["re"] == {"num": "2", "den": "1"}


def test_matrix_roundtrip():
    m = ExactMatrix.from_rows([
        [ExactScalar(Fraction(1, 2), -1), ExactScalar(0)],
        [ExactScalar(3), ExactScalar(0, Fraction(2, 7))]])
    assert matrix_from_json(matrix_to_json(m)) == m
    # survives a JSON text round trip too
    assert matrix_from_json(json.loads(dumps(matrix_to_json(m)))) == m


def test_grid_roundtrip_reverifies_identically():
    for g in (hermitian_grid(3), spin_grid(2, True)):
        payload = json.loads(dumps(grid_to_json(g)))
        g2 = grid_from_json(payload)
        r1 = verify_grid(g)
        r2 = verify_grid(g2)
        assert r1.to_json_dict() == r2.to_json_dict()


def test_hnk_payload_self_describing():
    sp = build_hnk(4, 3)
    payload = json.loads(dumps(hnk_to_json(sp)))
    assert payload["rows_indexed_by"] == [[1], [2], [3], [4]]
    assert payload["cols_indexed_by"][0] == [1, 2]
    basis = hnk_basis_from_json(payload)
    assert list(sp.basis) == basis


def test_csv_floats_only():
    m = ExactMatrix.from_rows([[ExactScalar(Fraction(1, 2), -1), ExactScalar(0)]])
    lines = matrix_to_csv_lines(m)
    assert lines == ["0.5,-1,0,0"]
