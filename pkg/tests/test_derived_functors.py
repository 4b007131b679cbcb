from itertools import product
from math import comb

import pytest
import sympy

from ribbonres.errors import PreconditionError, VerificationError
from ribbonres.linalg import GF, QQ, ZZ
from ribbonres.derived_functors import (
    TensorPresentation,
    greedy_part,
    hom_dims,
    hom_target_degree,
    splitting_psi,
    tensor_dims,
    tor,
    tor_expected,
    verify_tor,
)
from ribbonres.schur_module import dim_sym, monomials, ribbon_module


def in_prog(k, start, d):
    return k >= start and (k - start) % d == 0


def tensor_by_components(d, r, rp, gamma):
    """dim of (M (x)_R M')_gamma: the relations identify generators pairwise,
    so the quotient is spanned by one vector per connected component."""
    j = sum(gamma)
    gens = [b for b in product(*(range(g + 1) for g in gamma))
            if in_prog(sum(b), r, d) and in_prog(j - sum(b), rp, d)]
    parent = {b: b for b in gens}

    def find(b):
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        return b

    for b in gens:
        for c in product(*(range(g + 1) for g in gamma)):
            if sum(c) != d:
                continue
            moved = tuple(x + y for x, y in zip(b, c))
            if moved in parent:
                parent[find(moved)] = find(b)
    return len({find(b) for b in gens})


def hom_by_brute_force(d, r, rp, n, t):
    """Degree-t R-linear maps M -> M', as values on the generators S_r subject
    to the degree r + d relations of M, solved with sympy."""
    if not in_prog(r + t, rp, d):
        return 0
    gens = monomials(r, n)
    targets = monomials(r + t, n)
    big = {m: k for k, m in enumerate(monomials(r + t + d, n))}
    unknown = {(b, m): k for k, (b, m) in enumerate(product(gens, targets))}
    rows = []
    for mu in monomials(r + d, n):
        factorizations = [b for b in gens if all(x <= y for x, y in zip(b, mu))]
        for b0, b1 in zip(factorizations, factorizations[1:]):
            c0 = tuple(y - x for x, y in zip(b0, mu))
            c1 = tuple(y - x for x, y in zip(b1, mu))
            # x^c0 f(x^b0) - x^c1 f(x^b1), one equation per output monomial
            eq = {}
            for m in targets:
                eq.setdefault(big[tuple(x + y for x, y in zip(c0, m))], {})[unknown[(b0, m)]] = 1
                eq.setdefault(big[tuple(x + y for x, y in zip(c1, m))], {})[unknown[(b1, m)]] = -1
            for row in eq.values():
                dense = [0] * len(unknown)
                for k, v in row.items():
                    dense[k] += v
                rows.append(dense)
    if not rows:
        return len(unknown)
    return len(unknown) - sympy.Matrix(rows).rank()


def test_tensor_example():
    rep = tensor_dims(2, 1, 1, 2, QQ)
    dims = {row["degree"]: row["dim"] for row in rep["table"]}
    assert dims[2] == dim_sym(2, 2) + ribbon_module((1, 1), 2).dim == 4
    assert dims[4] == 5 and dims[3] == 0
    assert rep["kernel_annihilated"]["degree"] == 2


@pytest.mark.parametrize("d,r,rp,n", [(2, 1, 1, 2), (2, 1, 2, 2), (3, 2, 1, 2), (2, 2, 1, 3), (1, 2, 2, 2)])
def test_tensor_against_components(d, r, rp, n):
    rep = tensor_dims(d, r, rp, n, QQ)
    for row in rep["table"]:
        brute = sum(tensor_by_components(d, r, rp, g) for g in monomials(row["degree"], n))
        assert row["dim"] == brute


def test_tensor_generator_order_is_irrelevant():
    gamma = (2, 1, 1)
    base = TensorPresentation.build(2, 1, 1, gamma)
    size = len(base.generators)
    shuffled = TensorPresentation.build(2, 1, 1, gamma, order=list(reversed(range(size))))
    assert base.dim == shuffled.dim == tensor_by_components(2, 1, 1, gamma)


def test_tensor_over_prime_fields():
    for ring in (GF(2), GF(3), ZZ):
        assert tensor_dims(2, 1, 2, 2, ring)["table"] == tensor_dims(2, 1, 2, 2, QQ)["table"]


def test_greedy_part():
    assert greedy_part((2, 1, 1), 3) == (2, 1, 0)
    assert greedy_part((0, 3), 2) == (0, 2)


def test_splitting_variants():
    rep = splitting_psi(2, 1, 1, 2, QQ, variant="binomial")
    assert rep["checks"]["permutations"] > 0
    assert splitting_psi(2, 1, 1, 2, GF(2), variant="lex")["checks"]["phi_psi"] > 0
    with pytest.raises(PreconditionError):
        splitting_psi(2, 1, 1, 2, GF(2), variant="binomial")
    # C(3, 1) = 3 is odd, so the symmetric splitting exists over F_2
    assert comb(3, 1) % 2 == 1
    splitting_psi(2, 1, 2, 2, GF(2), variant="binomial")
    with pytest.raises(PreconditionError):
        splitting_psi(2, 1, 2, 2, GF(3), variant="binomial")


def test_tor_example():
    W = tor(2, 1, 1, 2, QQ, 1, multigraded=True)
    assert W.support == [4]
    assert W.dims[4] == ribbon_module((1, 2, 1), 2).dim == 1
    assert W.multigraded[(2, 2)] == 1


def test_tor_zero_is_tensor():
    W = tor(2, 1, 1, 2, ZZ, 0, check=False)
    table = tensor_dims(2, 1, 1, 2, QQ, deg_max=max(W.dims))["table"]
    assert W.dims == {row["degree"]: row["dim"] for row in table}


def test_tor_with_free_module_vanishes():
    # r = 0 makes M = R free
    W = tor(2, 0, 1, 2, QQ, 1)
    assert W.support == [] and tor_expected(2, 0, 1, 2, 1) == 0


def test_tor_univariate_vanishes():
    for i in (1, 2):
        assert tor(2, 1, 3, 1, QQ, i).support == []


def test_tor_over_integers_is_torsion_free():
    W = tor(2, 1, 2, 2, ZZ, 1)
    assert not W.torsion


def test_tor_three_example():
    # sigma(2, 1, 1, 1, 3) has a column of height 5
    for n in (2, 3):
        assert tor(1, 2, 3, n, QQ, 3).support == []
    assert ribbon_module((2, 1, 1, 1, 3), 5).dim == 75


def test_tor_mismatch_is_reported():
    W = tor(2, 1, 1, 2, QQ, 1, check=False)
    W.dims[4] += 1
    with pytest.raises(VerificationError):
        verify_tor(W)


def test_hom_examples():
    rep = hom_dims(2, 3, 1, 2, QQ)
    dims = {row["degree"]: row["dim"] for row in rep["table"]}
    assert hom_target_degree(2, 3, 1) == 0
    assert dims[0] == 1 and dims[2] == 3 and dims[-2] == 0


def test_hom_univariate():
    rep = hom_dims(2, 1, 3, 1, QQ)
    assert [row["dim"] for row in rep["table"]] == [1, 0, 1, 0, 1, 0, 1]


@pytest.mark.parametrize("d,r,rp,n", [(2, 3, 1, 2), (2, 1, 3, 2), (3, 2, 1, 2), (2, 2, 2, 2), (3, 4, 2, 2), (2, 1, 2, 3)])
def test_hom_against_brute_force(d, r, rp, n):
    rep = hom_dims(d, r, rp, n, QQ)
    for row in rep["table"]:
        assert row["dim"] == hom_by_brute_force(d, r, rp, n, row["degree"])


def test_hom_wraparound_degree():
    assert hom_target_degree(3, 4, 2) == (2 - 4) % 3 == 1
    assert hom_target_degree(3, 2, 4) == 2


def test_tensor_with_free_module():
    rep = tensor_dims(2, 0, 1, 2, QQ)
    assert [row["dim"] for row in rep["table"]] == [dim_sym(j, 2) if j % 2 else 0 for j in range(len(rep["table"]))]


def test_hom_of_equal_shifts_is_the_ring():
    for d, r, n in [(2, 1, 2), (3, 2, 2), (2, 2, 3)]:
        dims = {row["degree"]: row["dim"] for row in hom_dims(d, r, r, n, QQ)["table"]}
        assert dims[0] == 1 and dims[d] == dim_sym(d, n)
