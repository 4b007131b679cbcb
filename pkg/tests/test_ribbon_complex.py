import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ribbonres.combinatorics import compose
from ribbonres.errors import VerificationError
from ribbonres.linalg import GF, QQ, rank
from ribbonres.ribbon_complex import (
    FAULT_ENV,
    build_hg,
    check_d2_zero,
    counterexample_unrestricted,
    kernel_image_lemma,
    partial_block,
    unrestricted_d2,
    verify_hg,
)
from ribbonres.schur_module import dim_sym, ribbon_module

long_comps = st.lists(st.integers(1, 3), min_size=2, max_size=4).filter(lambda c: sum(c) <= 6)


def test_multiplication_block():
    block = partial_block((1,), 1, 2)
    assert block.matrix.shape == (3, 4)
    assert rank(block.matrix) == 3


def test_degree_zero_block_is_injective():
    block = partial_block((3, 2), 0, 2)
    assert rank(block.matrix) == ribbon_module((3, 2), 2).dim == block.matrix.ncols


def test_resolution_blocks_exist():
    for p in (0, 3, 6):
        block = partial_block((3, 3, 4), p, 2)
        assert block.matrix.ncols == dim_sym(p, 2) * ribbon_module((3, 3, 4), 2).dim


@pytest.mark.parametrize("alpha,p,n", [((1, 1), 0, 2), ((2, 2, 1), 2, 2), ((3, 2), 0, 2), ((3, 3, 2), 3, 2)])
def test_d2_examples(alpha, p, n):
    check_d2_zero(alpha, p, n)


@settings(max_examples=30)
@given(long_comps, st.integers(0, 3), st.integers(1, 3))
def test_d2_property(alpha, p, n):
    check_d2_zero(alpha, p, n)


def test_fault_injection_breaks_d2(monkeypatch):
    monkeypatch.setenv(FAULT_ENV, "sign_flip")
    with pytest.raises(VerificationError):
        check_d2_zero((1, 1), 0, 2)


def test_unrestricted_counterexamples():
    n = 2
    one, x1, x2 = (0, 0), (1, 0), (0, 1)
    assert unrestricted_d2({(one, x1, x1): 1}, n) == {(2, 0): 1}
    assert unrestricted_d2({(one, x1, x2): 1, (one, x2, x1): 1}, n) == {(1, 1): 2}
    rep = counterexample_unrestricted(n, QQ)
    assert rep["d2"] == {"[1, 1]": 2}
    rep = counterexample_unrestricted(n, GF(2))
    assert rep["witness"] == "1 (x) x1 (x) x1" and rep["notes"]
    assert counterexample_unrestricted(1)["d2"] == {"[2]": 1}


@pytest.mark.parametrize("alpha,p,q", [((1,), 1, 1), ((2, 1), 2, 2), ((2, 1), 4, 2)])
def test_kernel_lemma_examples(alpha, p, q):
    rep = kernel_image_lemma(alpha, p, q, 2)
    assert rep["kernel_dim"] == ribbon_module(compose((p,), alpha), 2).dim == rep["image_rank"]


def test_kernel_lemma_values():
    assert kernel_image_lemma((1,), 1, 1, 2)["kernel_dim"] == 1
    assert kernel_image_lemma((2, 1), 2, 2, 2)["kernel_dim"] == 2


def test_kernel_lemma_over_f2():
    kernel_image_lemma((1, 2), 3, 2, 2, GF(2))


def test_hg_examples():
    rep = verify_hg([(1,), (1,), (1,)], 2)
    assert rep["term_dims"] == [8, 12, 4]
    assert rep["cohomology"] == [0, 0, 0]
    rep = verify_hg([(1,), (1,)], 2)
    assert rep["cohomology"] == [1, 0]
    rep = verify_hg([(2,), (1,), (1,)], 2)
    assert rep["expected_h0"] == ribbon_module((2, 1, 1), 2).dim
    assert rep["cohomology"][1:] == [0, 0]


def test_hg_euler_characteristic():
    rep = verify_hg([(1, 1), (2,), (1,)], 3)
    alt = sum((-1) ** i * t for i, t in enumerate(rep["term_dims"]))
    assert alt == rep["expected_h0"] == ribbon_module((1, 1, 2, 1), 3).dim


def test_hg_differentials_square_to_zero():
    H = build_hg([(1,), (2,), (1,), (1,)], 2)
    for a, b in zip(H.differentials, H.differentials[1:]):
        assert (b @ a).is_zero()


def test_hg_length_four():
    rep = verify_hg([(1,), (1,), (1,), (1,)], 2)
    assert rep["cohomology"] == [0, 0, 0, 0]
