from itertools import accumulate, permutations
from math import comb

import pytest

from ribbonres.errors import ResourceError
from ribbonres.linalg import GF, QQ, ZZ
from ribbonres.poset_homology import (
    RankSelectedPoset,
    build_order_complex,
    homology_ranks,
    specht_dim,
    verify_solomon,
    verify_tor_poset_link,
)


def reduced(P, ring=ZZ):
    return homology_ranks(build_order_complex(P), ring)


def support(H):
    return {k: r for k, (r, _) in H.items() if r}


def test_empty_poset():
    P = RankSelectedPoset.boolean(3, [])
    assert support(reduced(P)) == {-1: 1}


def test_antichain_of_three():
    P = RankSelectedPoset.boolean(3, [1])
    assert support(reduced(P)) == {0: 2}


def test_hexagon():
    # ranks 1 and 2 of B_3 form a 6-cycle
    C = build_order_complex(RankSelectedPoset.boolean(3, [1, 2]))
    assert C.face_counts() == [6, 6]
    assert support(homology_ranks(C, ZZ)) == {1: 1}


def test_middle_rank_of_b4():
    assert support(reduced(RankSelectedPoset.boolean(4, [2]))) == {0: 5}


def test_full_proper_part_of_b4():
    C = build_order_complex(RankSelectedPoset.boolean(4, [1, 2, 3]))
    assert C.face_counts() == [14, 36, 24]
    assert support(homology_ranks(C, ZZ)) == {2: 1}


@pytest.mark.parametrize("alpha,dim,rank", [((2, 2), 0, 5), ((1, 2), 0, 2), ((1, 1, 1), 1, 1), ((3,), -1, 1)])
def test_solomon_examples(alpha, dim, rank):
    rep = verify_solomon(alpha)
    assert (rep["dimension"], rep["rank"], rep["homology_rank"]) == (dim, rank, rank)


def descent_class(alpha):
    m = sum(alpha)
    wanted = set(accumulate(alpha[:-1]))
    return sum(1 for w in permutations(range(m))
               if {k + 1 for k in range(m - 1) if w[k] > w[k + 1]} == wanted)


def test_specht_dimensions():
    # permutations with a prescribed descent set
    for alpha in [(1, 2), (2, 1, 2), (3, 1, 1), (1, 1, 2, 1), (2, 2, 2)]:
        assert specht_dim(alpha) == descent_class(alpha)
    assert specht_dim((1, 1, 1, 1)) == 1
    assert specht_dim((2, 2)) == comb(4, 2) - 1
    assert specht_dim((4,)) == 1


def test_field_and_integer_homology_agree():
    P = RankSelectedPoset.boolean(5, [1, 3, 4])
    C = build_order_complex(P)
    z = {k: r for k, (r, _) in homology_ranks(C, ZZ).items()}
    for ring in (QQ, GF(2), GF(3)):
        assert {k: r for k, (r, _) in homology_ranks(C, ring).items()} == z


def test_caps():
    with pytest.raises(ResourceError):
        RankSelectedPoset.boolean(12, range(1, 12), cap=100)
    with pytest.raises(ResourceError):
        verify_solomon((4, 5))


def test_divisor_poset_below_squarefree_is_boolean():
    P = RankSelectedPoset.veronese_divisors(1, 1, (1, 1, 1, 1))
    Q = RankSelectedPoset.boolean(4, [1, 2, 3])
    assert len(P.elements) == len(Q.elements)
    assert support(reduced(P)) == support(reduced(Q))


@pytest.mark.parametrize("d,r,i", [(1, 1, 2), (2, 1, 1), (2, 2, 1), (2, 1, 2), (3, 2, 1), (1, 2, 3)])
def test_tor_poset_link(d, r, i):
    rep = verify_tor_poset_link(d, r, i, n=3)
    for row in rep["rows"]:
        assert row["poset_rank"] == row["weight_dim"]
