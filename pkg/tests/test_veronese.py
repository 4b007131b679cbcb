from math import comb

import pytest

from ribbonres.errors import DegenerateInputError, VerificationError
from ribbonres.linalg import GF, QQ, ZZ
from ribbonres.ribbon_complex import FAULT_ENV
from ribbonres.schur_module import dim_sym, ribbon_module
from ribbonres.veronese import (
    VeroneseModule,
    betti,
    build_resolution,
    reduced_differential,
    verify_exactness,
    verify_minimality,
    weights,
)


def test_module_components():
    M = VeroneseModule(2, 1, 2)
    assert [M.component_dim(j) for j in range(6)] == [0, 2, 0, 4, 0, 6]


def test_koszul_case():
    # d = 1, r = 1: the maximal ideal, resolved by exterior powers
    W = build_resolution(1, 1, 3, QQ, i_max=3, deg_max=4)
    assert [ribbon_module(s, 3).dim for s in W.shapes] == [comb(3, i + 1) for i in range(4)]
    rep = verify_exactness(W)
    assert [row["m_dim"] for row in rep["table"]] == [dim_sym(j, 3) for j in range(1, 5)]
    assert rep["table"][2]["term_dims"] == [18, 9, 1, 0]


def test_window_shapes_and_degrees():
    W = build_resolution(3, 4, 2, QQ, i_max=2)
    assert [list(s) for s in W.shapes] == [[4], [3, 4], [3, 3, 4]]
    assert W.generator_degrees == [4, 7, 10]
    assert W.deg_max == 4 + 5 * 3


def test_zero_r_is_degenerate():
    with pytest.raises(DegenerateInputError):
        build_resolution(2, 0, 2)


def test_betti_values():
    assert betti(2, 1, 2, 2) == (5, 2)
    assert betti(1, 1, 3, 2) == (3, 1)
    for ring in (QQ, GF(2), GF(3), ZZ):
        assert betti(3, 2, 3, 1, ring)[1] == ribbon_module((3, 2), 3).dim


@pytest.mark.parametrize("ring", [QQ, GF(2), GF(3), ZZ])
def test_exactness_over_rings(ring):
    rep = verify_exactness(build_resolution(2, 1, 2, ring, i_max=3, deg_max=9))
    for row in rep["table"]:
        assert row["homology"] == [0, 0, 0]
        assert row["term_dims"][0] - row["ranks"][1] == row["m_dim"]


def test_euler_characteristic_rows():
    rep = verify_exactness(build_resolution(2, 2, 2, QQ, i_max=3, deg_max=8))
    for row in rep["table"]:
        assert row["euler"] == row["m_dim"]


def test_dominant_weights_agree_with_all():
    W = build_resolution(2, 1, 3, GF(2), i_max=2, deg_max=7)
    assert verify_exactness(W, "dominant")["table"] == verify_exactness(W, "all")["table"]
    assert sum(m for _, m in weights(4, 3, "dominant")) == dim_sym(4, 3)


def test_minimality():
    rep = verify_minimality(build_resolution(3, 4, 2, ZZ, i_max=2))
    assert [s["entry_degrees"] for s in rep["steps"]] == [[3], [3]]
    W = build_resolution(2, 1, 3, GF(2), i_max=3)
    for i in range(1, 4):
        assert reduced_differential(W, i).is_zero()


def test_fault_is_caught(monkeypatch):
    monkeypatch.setenv(FAULT_ENV, "sign_flip")
    with pytest.raises(VerificationError):
        verify_exactness(build_resolution(1, 1, 2, GF(2), i_max=2, deg_max=3))


def test_powers_of_the_maximal_ideal():
    # d = 1, r = 4: hook shapes
    W = build_resolution(1, 4, 2, QQ, i_max=2, deg_max=7)
    assert [list(s) for s in W.shapes] == [[4], [1, 4], [1, 1, 4]]
    verify_exactness(W)
    assert [betti(1, 4, 3, i)[1] for i in range(3)] == [ribbon_module(s, 3).dim for s in W.shapes[:3]]
