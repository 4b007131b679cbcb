from itertools import product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ribbonres.combinatorics import (
    Composition,
    Tableau,
    compose,
    compositions,
    count_ssyt,
    diagram_compose,
    enumerate_tableaux,
    power,
    ribbon_shape,
    skew_shape,
    transpose,
)
from ribbonres.errors import InvalidCompositionError
from ribbonres.symfunc import skew_schur

comps = st.lists(st.integers(1, 3), min_size=1, max_size=3).filter(lambda c: sum(c) <= 6)


def brute_ssyt(shape, n):
    cells = shape.reading_order
    count = 0
    for values in product(range(1, n + 1), repeat=len(cells)):
        if Tableau.from_dict(shape, dict(zip(cells, values))).is_ssyt():
            count += 1
    return count


def test_staircase_ribbon():
    shape = ribbon_shape((3, 1, 1, 2, 4))
    assert len(shape.cells) == 11
    assert shape.row_sizes == (3, 1, 1, 2, 4)
    assert shape.cells == frozenset({(1, 1), (1, 2), (1, 3), (2, 3), (3, 3), (4, 3), (4, 4),
                                     (5, 4), (5, 5), (5, 6), (5, 7)})


def test_row_and_column_ribbons():
    assert ribbon_shape((3,)).cells == frozenset({(1, 1), (1, 2), (1, 3)})
    assert ribbon_shape((1, 1)).cells == frozenset({(1, 1), (2, 1)})


@pytest.mark.parametrize("bad", [(), (2, 0), (1, -1)])
def test_invalid_compositions(bad):
    with pytest.raises(InvalidCompositionError):
        ribbon_shape(bad)


def test_compose_examples():
    assert compose((2, 1, 3), (2, 4, 2), "concat") == (2, 1, 3, 2, 4, 2)
    assert compose((2, 1, 3), (2, 4, 2), "near_concat") == (2, 1, 5, 4, 2)
    assert compose((1,), (1,), "near_concat") == (2,)


def test_power_notation():
    assert power(3, 2, 4) == (3, 3, 4)
    assert power(2, 0, 1) == (1,)


def test_compositions_are_complete():
    assert [len(list(compositions(m))) for m in range(1, 8)] == [2 ** (m - 1) for m in range(1, 8)]


def test_figure_shapes():
    D = skew_shape((3, 3, 1), (1,))
    Dp = skew_shape((4, 4, 4, 2), (2,))
    assert (len(D.cells), len(Dp.cells)) == (6, 12)
    for kind in ("disjoint_sum", "concat", "near_concat"):
        assert len(diagram_compose(D, Dp, kind).cells) == 18
    concat = diagram_compose(D, Dp, "concat")
    assert concat.draw() == "\n".join([
        "....##", "..####", "..####", "..##", ".##", "###", "#",
    ])
    near = diagram_compose(D, Dp, "near_concat")
    assert near.draw() == "\n".join([
        ".....##", "...####", "...####", ".####", "###", "#",
    ])


@given(comps, comps)
def test_ribbon_composition_matches_diagram(a, b):
    for kind in ("concat", "near_concat"):
        assert ribbon_shape(compose(a, b, kind)) == diagram_compose(ribbon_shape(a), ribbon_shape(b), kind)


@given(comps, comps, comps)
def test_mixed_associativity(a, b, c):
    assert compose(compose(a, b, "concat"), c, "near_concat") == compose(a, compose(b, c, "near_concat"), "concat")
    assert compose(compose(a, b, "near_concat"), c, "concat") == compose(a, compose(b, c, "concat"), "near_concat")


def test_ssyt_examples():
    assert len(enumerate_tableaux(ribbon_shape((2, 1)), 2, "ssyt")) == 2
    (col,) = enumerate_tableaux(ribbon_shape((1, 1)), 2, "ssyt")
    # top entry 1 over bottom entry 2
    assert col.entries[col.shape.index[(2, 1)]] == 1
    for m in range(1, 5):
        for n in range(1, 4):
            assert count_ssyt(ribbon_shape((m,)), n) == comb(n + m - 1, m)


@settings(max_examples=30)
@given(comps, st.integers(1, 3))
def test_ssyt_count_matches_brute_force(alpha, n):
    shape = ribbon_shape(alpha)
    if len(shape.cells) <= 5:
        assert count_ssyt(shape, n) == brute_ssyt(shape, n)


@settings(max_examples=30)
@given(comps, st.integers(1, 3))
def test_ssyt_count_is_principal_specialization(alpha, n):
    shape = ribbon_shape(alpha)
    assert count_ssyt(shape, n) == skew_schur(shape, n).at_ones()


def test_enumeration_is_duplicate_free_and_ordered():
    shape = ribbon_shape((2, 2, 1))
    tabs = enumerate_tableaux(shape, 3, "ssyt")
    words = [t.entries for t in tabs]
    assert words == sorted(set(words))
    assert words == [t.entries for t in enumerate_tableaux(shape, 3, "ssyt")]
    loose = enumerate_tableaux(shape, 3, "column_increasing")
    assert all(t.is_column_increasing() for t in loose)
    assert len(loose) > len(tabs)


def test_transpose():
    assert transpose(ribbon_shape((1, 1))) == ribbon_shape((2,))
    s = ribbon_shape((3, 1, 1, 2, 4))
    assert transpose(transpose(s)) == s
    for i in range(4):
        shape = ribbon_shape(power(2, i, 1))
        assert transpose(shape) == shape


@given(comps)
def test_transpose_is_involution(alpha):
    s = ribbon_shape(alpha)
    assert transpose(transpose(s)) == s
    assert len(transpose(s).cells) == len(s.cells)


def test_composition_type():
    c = Composition((2, 1))
    assert c.size == 3 and c.length == 2
    assert c.concat((1,)) == (2, 1, 1)
    assert c.near_concat((1,)) == (2, 2)
