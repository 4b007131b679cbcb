from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ribbonres.errors import FieldRequiredError, NotAComplexError
from ribbonres.linalg import (
    GF,
    QQ,
    ZZ,
    CoefficientRing,
    SparseMatrix,
    Subspace,
    contains,
    intersect,
    rank,
    rank_kernel_image,
    smith_form,
    smith_homology,
    solve_in_span,
)

small_ints = st.integers(-4, 4)
matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def e(i):
    return {i: 1}


def simplicial_boundaries(facets):
    """Boundary matrices of the complex generated by the facets (vertices >= 0)."""
    faces = {k: set() for k in range(3)}
    for f in facets:
        for k in range(1, len(f) + 1):
            faces[k - 1].update(combinations(sorted(f), k))
    faces = {k: sorted(v) for k, v in faces.items()}
    mats = []
    for k in (1, 2):
        idx = {s: t for t, s in enumerate(faces[k - 1])}
        cols = [{idx[s[:j] + s[j + 1:]]: (-1) ** j for j in range(len(s))} for s in faces[k]]
        mats.append(SparseMatrix(len(faces[k - 1]), len(faces[k]), cols))
    return faces, mats


def test_ring_parsing():
    assert CoefficientRing.parse("q") == QQ
    assert CoefficientRing.parse("z") == ZZ
    assert CoefficientRing.parse("fp:3") == GF(3)
    with pytest.raises(ValueError):
        CoefficientRing.parse("fp:4")
    with pytest.raises(ValueError):
        CoefficientRing.parse("r")


def test_unit_and_inverse():
    assert GF(5).inverse(2) == 3
    assert QQ.inverse(4) == Fraction(1, 4)
    assert not GF(2).is_unit(6)
    assert ZZ.is_unit(-1) and not ZZ.is_unit(2)


def test_rank_examples():
    r, ker, img = rank_kernel_image(SparseMatrix.identity(3), QQ)
    assert (r, ker.dim, img.dim) == (3, 0, 3)
    r, ker, _ = rank_kernel_image(SparseMatrix(2, 5), QQ)
    assert (r, ker.dim) == (0, 5)
    A = SparseMatrix.from_dense([[1, 2], [2, 4]])
    assert rank_kernel_image(A, QQ)[0] == 1
    assert rank_kernel_image(A, GF(2))[0] == 1


def test_integer_ring_needs_smith():
    with pytest.raises(FieldRequiredError):
        rank_kernel_image(SparseMatrix.identity(2), ZZ)


def test_solve_in_span_examples():
    B = Subspace(2, SparseMatrix(2, 1, [e(0)]))
    assert solve_in_span(B, [3, 0]) == [3]
    assert solve_in_span(B, [0, 1]) is None
    B = Subspace(2, SparseMatrix(2, 2, [{0: 1, 1: 1}, e(1)]))
    assert solve_in_span(B, [1, 0]) == [1, -1]


def test_intersection_examples():
    U = Subspace(3, SparseMatrix(3, 2, [e(0), e(1)]))
    W = Subspace(3, SparseMatrix(3, 2, [e(1), e(2)]))
    cap = intersect(U, W)
    assert cap.dim == 1 and contains(Subspace(3, SparseMatrix(3, 1, [e(1)])), cap.basis.cols)
    assert intersect(U, U).dim == 2


def test_planted_overlap():
    common = [{0: 1, 3: 2, 5: -1}, {1: 1, 2: 1}]
    U = Subspace.span(6, common + [{4: 1}, {0: 1, 5: 1}])
    W = Subspace.span(6, common + [{2: 3, 3: 1}, {5: 2, 1: 1}])
    assert U.dim == W.dim == 4
    cap = intersect(U, W)
    assert cap.dim == 2
    assert contains(U, cap.basis.cols) and contains(W, cap.basis.cols)
    assert contains(cap, common)


def test_smith_homology_examples():
    assert smith_homology(SparseMatrix(4, 0), SparseMatrix(0, 4)) == (4, [])
    # hollow triangle: edges -> vertices, nothing above
    faces, (d1, _) = simplicial_boundaries([(0, 1), (1, 2), (0, 2)])
    assert smith_homology(SparseMatrix(len(faces[1]), 0), d1) == (1, [])


def test_projective_plane_torsion():
    facets = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
              (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]
    faces, (d1, d2) = simplicial_boundaries(facets)
    assert [len(faces[k]) for k in range(3)] == [6, 15, 10]
    assert smith_homology(d2, d1) == (0, [2])
    assert smith_homology(SparseMatrix(10, 0), d2)[0] == 0
    # over F_2 the torsion turns into rank in degree 1 and 2
    assert 15 - rank(d1, GF(2)) - rank(d2, GF(2)) == 1


def test_not_a_complex():
    d = SparseMatrix.identity(2)
    with pytest.raises(NotAComplexError):
        smith_homology(d, d)


@settings(max_examples=60)
@given(matrices)
def test_smith_form_divisibility_and_rank(rows):
    A = SparseMatrix.from_dense(rows)
    diag = smith_form(A)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert len(diag) == rank(A, QQ)


@settings(max_examples=60)
@given(matrices)
def test_smith_form_matches_sympy(rows):
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    expected = sorted(abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0)
    assert smith_form(SparseMatrix.from_dense(rows)) == expected


@settings(max_examples=60)
@given(matrices, st.sampled_from([2, 3, 5]))
def test_rational_rank_dominates_modular(rows, p):
    A = SparseMatrix.from_dense(rows)
    assert rank(A, QQ) >= rank(A, GF(p))


@settings(max_examples=60)
@given(matrices, st.lists(small_ints, min_size=5, max_size=5))
def test_solve_reproduces_vector(rows, coeffs):
    A = SparseMatrix.from_dense(rows)
    v = A.apply({j: c for j, c in enumerate(coeffs[: A.ncols]) if c})
    B = Subspace(A.nrows, A)
    c = solve_in_span(B, v)
    assert c is not None
    back = A.apply({j: x for j, x in enumerate(c) if x})
    assert {k: x for k, x in back.items() if x} == {k: x for k, x in v.items() if x}


@settings(max_examples=40)
@given(matrices)
def test_rank_nullity(rows):
    A = SparseMatrix.from_dense(rows)
    for ring in (QQ, GF(2), GF(3)):
        r, ker, img = rank_kernel_image(A, ring)
        assert r + ker.dim == A.ncols
        assert img.dim == r
        assert (A.reduced(ring) @ ker.basis).is_zero_over(ring)
