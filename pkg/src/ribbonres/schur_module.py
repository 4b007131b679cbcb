"""Explicit Schur modules S^D(k^n) inside tensor products of symmetric powers.

The ambient space of a diagram D is the tensor product of S^{|row|} over its
rows, bottom row first.  A basis tuple of the ambient space is a tuple of
exponent vectors, one per row.  The image [T] of a filling T antisymmetrizes
every column and multiplies each row together.  All structure constants are
computed once over the integers; prime-field versions are reductions, which
is legitimate because the SSYT images are checked to stay independent modulo
the prime (``check_free``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import comb, prod
from typing import Iterable, Mapping, Sequence

from .combinatorics import (
    Composition,
    SkewShape,
    Tableau,
    compose,
    iter_fillings,
    ribbon_shape,
)
from .errors import ViolatedFreenessError, ViolatedSpanError, VerificationError
from .linalg import QQ, CoefficientRing, SparseMatrix, SpanSolver, Subspace, contains, intersect, rank

Monomial = tuple[int, ...]
AmbientKey = tuple[Monomial, ...]

EMPTY_SHAPE = SkewShape(frozenset())


@lru_cache(maxsize=None)
def monomials(degree: int, n: int) -> tuple[Monomial, ...]:
    """Exponent vectors of the given degree, lexicographically decreasing."""
    if n == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        out.extend((first,) + rest for rest in monomials(degree - first, n - 1))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(degree: int, n: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials(degree, n))}


def dim_sym(degree: int, n: int) -> int:
    return comb(n + degree - 1, degree) if degree >= 0 else 0


def add_exponents(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def sub_exponents(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...] | None:
    out = tuple(x - y for x, y in zip(a, b))
    return out if min(out, default=0) >= 0 else None


@dataclass(frozen=True)
class AmbientRowSpace:
    row_comp: tuple[int, ...]
    n: int

    @property
    def dim(self) -> int:
        return prod(dim_sym(k, self.n) for k in self.row_comp)

    def index(self, key: AmbientKey) -> int:
        idx = 0
        for k, mono in zip(self.row_comp, key):
            idx = idx * dim_sym(k, self.n) + monomial_index(k, self.n)[mono]
        return idx

    def key(self, index: int) -> AmbientKey:
        out = []
        for k in reversed(self.row_comp):
            size = dim_sym(k, self.n)
            out.append(monomials(k, self.n)[index % size])
            index //= size
        return tuple(reversed(out))


@lru_cache(maxsize=None)
def _signed_permutations(size: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    out = []
    for perm in permutations(range(size)):
        inversions = sum(1 for i in range(size) for j in range(i + 1, size) if perm[i] > perm[j])
        out.append((-1 if inversions % 2 else 1, perm))
    return tuple(out)


def _content(entries: Iterable[int], n: int) -> tuple[int, ...]:
    out = [0] * n
    for v in entries:
        out[v - 1] += 1
    return tuple(out)


class SchurModule:
    """S^D(k^n) with its SSYT basis, realized over the integers and cached per weight."""

    def __init__(self, shape: SkewShape, n: int):
        self.shape = shape
        self.n = n
        rows = shape.rows
        self.row_sizes = tuple(len(r) for r in rows)
        self.ambient = AmbientRowSpace(self.row_sizes, n)
        row_of = {}
        for k, row in enumerate(rows):
            for cell in row:
                row_of[shape.index[cell]] = k
        self._row_of = row_of
        self._columns = tuple(tuple(shape.index[c] for c in col) for col in shape.columns)
        self._solvers: dict = {}

    def __repr__(self) -> str:
        return f"SchurModule(rows={self.row_sizes}, n={self.n}, dim={self.dim})"

    # -- basis ---------------------------------------------------------------------

    @property
    def ssyt(self) -> tuple[tuple[int, ...], ...]:
        if not hasattr(self, "_ssyt"):
            self._ssyt = tuple(iter_fillings(self.shape, self.n, "ssyt")) if self.shape.cells else ((),)
            self._ssyt_index = {t: i for i, t in enumerate(self._ssyt)}
        return self._ssyt

    @property
    def dim(self) -> int:
        return len(self.ssyt)

    def ssyt_index(self, entries: tuple[int, ...]) -> int:
        self.ssyt
        return self._ssyt_index[entries]

    @property
    def by_content(self) -> dict[tuple[int, ...], list[int]]:
        if not hasattr(self, "_by_content"):
            groups: dict[tuple[int, ...], list[int]] = {}
            for i, t in enumerate(self.ssyt):
                groups.setdefault(_content(t, self.n), []).append(i)
            self._by_content = groups
        return self._by_content

    def content_of(self, index: int) -> tuple[int, ...]:
        return _content(self.ssyt[index], self.n)

    def tableau(self, index: int) -> Tableau:
        return Tableau(self.shape, self.ssyt[index])

    # -- images --------------------------------------------------------------------

    def image(self, entries: Sequence[int]) -> dict[AmbientKey, int]:
        n = self.n
        if any(not 1 <= v <= n for v in entries):
            raise ValueError(f"entries must lie in 1..{n}")
        base = [[0] * n for _ in self.row_sizes]
        multi = []
        for col in self._columns:
            if len(col) == 1:
                base[self._row_of[col[0]]][entries[col[0]] - 1] += 1
                continue
            vals = [entries[i] for i in col]
            if len(set(vals)) < len(vals):
                return {}
            multi.append((col, vals))
        out: dict[AmbientKey, int] = {}
        choices = [_signed_permutations(len(col)) for col, _ in multi]
        for pick in product(*choices):
            rows = [r[:] for r in base]
            sign = 1
            for (col, vals), (s, perm) in zip(multi, pick):
                sign *= s
                for cell, src in zip(col, perm):
                    rows[self._row_of[cell]][vals[src] - 1] += 1
            key = tuple(tuple(r) for r in rows)
            out[key] = out.get(key, 0) + sign
        return {k: v for k, v in out.items() if v}

    def basis_image(self, index: int) -> dict[AmbientKey, int]:
        return self.image(self.ssyt[index])

    # -- coordinates ---------------------------------------------------------------

    def solver(self, content: tuple[int, ...], ring: CoefficientRing = QQ) -> tuple[SpanSolver, list[int]]:
        key = (content, ring)
        hit = self._solvers.get(key)
        if hit is None:
            indices = self.by_content.get(content, [])
            hit = (SpanSolver([self.basis_image(i) for i in indices], ring), indices)
            self._solvers[key] = hit
        return hit

    def coordinates(self, vec: Mapping[AmbientKey, object], ring: CoefficientRing = QQ) -> dict[int, object] | None:
        """Express an ambient vector in the SSYT basis (global indices), or None."""
        if not vec:
            return {}
        by_content: dict[tuple[int, ...], dict] = {}
        for key, c in vec.items():
            w = tuple(map(sum, zip(*key))) if key else ()
            by_content.setdefault(w if key else (0,) * self.n, {})[key] = c
        out = {}
        for content, part in by_content.items():
            if not self.shape.cells:
                if list(part) != [()]:
                    return None
                out[0] = part[()]
                continue
            solver, indices = self.solver(content, ring)
            coords = solver.solve(part)
            if coords is None:
                return None
            for i, c in zip(indices, coords):
                if c:
                    out[i] = c
        return out

    def is_free(self, ring: CoefficientRing) -> bool:
        for content in self.by_content:
            solver, _ = self.solver(content, ring)
            if not solver.independent:
                return False
        return True


@lru_cache(maxsize=None)
def schur_module(shape: SkewShape, n: int) -> SchurModule:
    return SchurModule(shape, n)


def ribbon_module(alpha: Sequence[int] | None, n: int) -> SchurModule:
    """S^{sigma(alpha)}(k^n); the empty composition gives the trivial module k."""
    if alpha is None or len(alpha) == 0:
        return schur_module(EMPTY_SHAPE, n)
    return schur_module(ribbon_shape(alpha), n)


@lru_cache(maxsize=None)
def check_free(module: SchurModule, ring: CoefficientRing) -> None:
    if not module.is_free(ring):
        raise ViolatedFreenessError(
            f"SSYT images of {module.row_sizes} are dependent over {ring}", rows=list(module.row_sizes), ring=str(ring)
        )


def _integral(value, what: str):
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise ViolatedSpanError(f"non-integral coordinate while computing {what}")
        return value.numerator
    return value


# -- public operations ------------------------------------------------------------------


def filling_image(shape: SkewShape, tableau: Tableau | Sequence[int], n: int) -> dict[AmbientKey, int]:
    entries = tableau.entries if isinstance(tableau, Tableau) else tuple(tableau)
    return schur_module(shape, n).image(entries)


@dataclass
class SchurModuleRealization:
    shape: SkewShape
    n: int
    ring: CoefficientRing
    ambient: AmbientRowSpace
    basis_matrix: SparseMatrix
    module: SchurModule

    @property
    def tableaux(self) -> list[Tableau]:
        return [self.module.tableau(i) for i in range(self.module.dim)]

    @property
    def dim(self) -> int:
        return self.basis_matrix.ncols


def realize(shape: SkewShape, n: int, ring: CoefficientRing = QQ) -> SchurModuleRealization:
    module = schur_module(shape, n)
    ambient = module.ambient
    cols = []
    for i in range(module.dim):
        img = module.basis_image(i)
        cols.append({ambient.index(k): v for k, v in img.items()})
    matrix = SparseMatrix(ambient.dim, len(cols), cols).reduced(ring)
    got = rank(matrix, ring)
    if got != module.dim:
        raise ViolatedFreenessError(f"rank {got} but {module.dim} SSYT", rank=got, ssyt=module.dim)
    return SchurModuleRealization(shape, n, ring, ambient, matrix, module)


def straighten(R: SchurModuleRealization, tableau: Tableau) -> list:
    if not tableau.is_column_increasing():
        raise ValueError("straightening expects a column-increasing filling")
    vec = R.module.image(tableau.entries)
    coords = R.module.coordinates(vec, R.ring)
    if coords is None:
        raise ViolatedSpanError("image of a column-increasing filling is outside the SSYT span")
    out = [0] * R.module.dim
    for i, c in coords.items():
        out[i] = R.ring.reduce(c)
    return out


def tensor_coordinates(vec: Mapping[AmbientKey, object], modules: Sequence[SchurModule]) -> dict[tuple[int, ...], int] | None:
    """Coordinates of an ambient vector of the tensor product of ``modules``
    (rows concatenated in order) in the product SSYT basis, over Z."""
    if len(modules) == 1:
        coords = modules[0].coordinates(vec)
        if coords is None:
            return None
        return {(i,): _integral(c, "tensor coordinates") for i, c in coords.items()}
    last = modules[-1]
    cut = sum(len(m.row_sizes) for m in modules[:-1])
    groups: dict[AmbientKey, dict] = {}
    for key, c in vec.items():
        groups.setdefault(key[:cut], {})[key[cut:]] = c
    by_last: dict[int, dict] = {}
    for head, tail in groups.items():
        coords = last.coordinates(tail)
        if coords is None:
            return None
        for i, c in coords.items():
            by_last.setdefault(i, {})[head] = c
    out: dict[tuple[int, ...], int] = {}
    for i, headvec in by_last.items():
        sub = tensor_coordinates(headvec, modules[:-1])
        if sub is None:
            return None
        for idx, c in sub.items():
            c = _integral(c, "tensor coordinates")
            if c:
                out[idx + (i,)] = c
    return out


def tensor_index(indices: Sequence[int], modules: Sequence[SchurModule]) -> int:
    """Row-major position of a product basis element."""
    idx = 0
    for i, m in zip(indices, modules):
        idx = idx * m.dim + i
    return idx


def tensor_image(indices: Sequence[int], modules: Sequence[SchurModule]) -> dict[AmbientKey, int]:
    out = {(): 1}
    for i, m in zip(indices, modules):
        img = m.basis_image(i)
        out = {k1 + k2: c1 * c2 for k1, c1 in out.items() for k2, c2 in img.items()}
    return out


@lru_cache(maxsize=None)
def delta_columns(alpha: Composition, beta: Composition, n: int) -> tuple[dict[tuple[int, int], int], ...]:
    source = ribbon_module(compose(alpha, beta), n)
    parts = (ribbon_module(alpha, n), ribbon_module(beta, n))
    out = []
    for u in range(source.dim):
        coords = tensor_coordinates(source.basis_image(u), parts)
        if coords is None:
            raise ViolatedSpanError(
                f"image of SSYT {u} of {tuple(alpha) + tuple(beta)} is not in the tensor product",
                alpha=list(alpha),
                beta=list(beta),
                tableau=list(source.ssyt[u]),
            )
        out.append(coords)
    return tuple(out)


def merge_rows(key: AmbientKey, position: int) -> AmbientKey:
    """Multiply row ``position`` into row ``position + 1``."""
    merged = add_exponents(key[position], key[position + 1])
    return key[:position] + (merged,) + key[position + 2 :]


@lru_cache(maxsize=None)
def m_columns(alpha: Composition, beta: Composition, n: int) -> tuple[dict[int, int], ...]:
    left, right = ribbon_module(alpha, n), ribbon_module(beta, n)
    target = ribbon_module(compose(alpha, beta, "near_concat"), n)
    cut = len(alpha) - 1
    out = []
    for i in range(left.dim):
        li = left.basis_image(i)
        for j in range(right.dim):
            vec: dict[AmbientKey, int] = {}
            for k1, c1 in li.items():
                for k2, c2 in right.basis_image(j).items():
                    key = merge_rows(k1 + k2, cut)
                    vec[key] = vec.get(key, 0) + c1 * c2
            vec = {k: v for k, v in vec.items() if v}
            coords = target.coordinates(vec)
            if coords is None:
                raise ViolatedSpanError("product lands outside the near-concatenation module",
                                        alpha=list(alpha), beta=list(beta))
            out.append({t: _integral(c, "m") for t, c in coords.items() if c})
    return tuple(out)


def map_delta(alpha: Sequence[int], beta: Sequence[int], n: int, ring: CoefficientRing = QQ) -> SparseMatrix:
    alpha, beta = Composition(alpha), Composition(beta)
    left, right = ribbon_module(alpha, n), ribbon_module(beta, n)
    source = ribbon_module(compose(alpha, beta), n)
    for mod in (left, right, source):
        check_free(mod, ring)
    cols = [{i * right.dim + j: c for (i, j), c in col.items()} for col in delta_columns(alpha, beta, n)]
    return SparseMatrix(left.dim * right.dim, source.dim, cols).reduced(ring)


def map_m(alpha: Sequence[int], beta: Sequence[int], n: int, ring: CoefficientRing = QQ) -> SparseMatrix:
    alpha, beta = Composition(alpha), Composition(beta)
    left, right = ribbon_module(alpha, n), ribbon_module(beta, n)
    target = ribbon_module(compose(alpha, beta, "near_concat"), n)
    for mod in (left, right, target):
        check_free(mod, ring)
    return SparseMatrix(target.dim, left.dim * right.dim, list(m_columns(alpha, beta, n))).reduced(ring)


def weight_space_dim(R: SchurModuleRealization | SchurModule, a: Sequence[int], ring: CoefficientRing | None = None) -> int:
    """Rank of the span of images of all column-increasing fillings of content a."""
    module = R.module if isinstance(R, SchurModuleRealization) else R
    if ring is None:
        ring = R.ring if isinstance(R, SchurModuleRealization) else QQ
    a = tuple(a)
    if len(a) != module.n:
        raise ValueError("multidegree length must equal n")
    if sum(a) != len(module.shape):
        return 0
    vecs = [module.image(t) for t in iter_fillings(module.shape, module.n, "column_increasing", a)]
    keys = {k for v in vecs for k in v}
    index = {k: i for i, k in enumerate(sorted(keys))}
    mat = SparseMatrix(len(index), len(vecs), [{index[k]: c for k, c in v.items()} for v in vecs])
    return rank(mat, ring)


def verify_split_exact(alpha: Sequence[int], beta: Sequence[int], n: int, ring: CoefficientRing = QQ) -> dict:
    """m o Delta = 0 and rank Delta + rank m = dim of the tensor product."""
    delta = map_delta(alpha, beta, n, ring)
    mm = map_m(alpha, beta, n, ring)
    if not (mm @ delta).is_zero_over(ring):
        raise VerificationError("m o Delta is nonzero", alpha=list(alpha), beta=list(beta), n=n, ring=str(ring))
    rd, rm = rank(delta, ring), rank(mm, ring)
    middle = delta.nrows
    src = delta.ncols
    tgt = mm.nrows
    if rd != src or rm != tgt or rd + rm != middle:
        raise VerificationError(
            "sequence is not split exact",
            alpha=list(alpha), beta=list(beta), n=n, ring=str(ring),
            rank_delta=rd, rank_m=rm, middle=middle,
        )
    return {"alpha": list(alpha), "beta": list(beta), "n": n, "ring": str(ring),
            "rank_delta": rd, "rank_m": rm, "middle": middle}


def verify_intersection(alpha: Sequence[int], beta: Sequence[int], gamma: Sequence[int], n: int,
                        ring: CoefficientRing = QQ) -> dict:
    alpha, beta, gamma = Composition(alpha), Composition(beta), Composition(gamma)
    mods = [ribbon_module(x, n) for x in (alpha, beta, gamma)]
    dims = [m.dim for m in mods]
    ambient = prod(dims)
    ab = ribbon_module(compose(alpha, beta), n)
    bc = ribbon_module(compose(beta, gamma), n)
    left_cols = []
    for u, col in enumerate(delta_columns(alpha, beta, n)):
        for k in range(dims[2]):
            left_cols.append({tensor_index((i, j, k), mods): c for (i, j), c in col.items()})
    right_cols = []
    dbc = delta_columns(beta, gamma, n)
    for i in range(dims[0]):
        for u in range(bc.dim):
            right_cols.append({tensor_index((i, j, k), mods): c for (j, k), c in dbc[u].items()})
    U = Subspace(ambient, SparseMatrix(ambient, len(left_cols), left_cols).reduced(ring))
    W = Subspace(ambient, SparseMatrix(ambient, len(right_cols), right_cols).reduced(ring))
    meet = intersect(U, W, ring)
    full = ribbon_module(compose(compose(alpha, beta), gamma), n)
    expected = full.dim
    images = []
    for v in range(full.dim):
        coords = tensor_coordinates(full.basis_image(v), mods)
        if coords is None:
            raise ViolatedSpanError("full ribbon image is not in the triple tensor product")
        images.append({tensor_index(idx, mods): ring.reduce(c) for idx, c in coords.items() if ring.reduce(c)})
    if meet.dim != expected:
        raise VerificationError("intersection dimension differs", computed=meet.dim, expected=expected,
                                alpha=list(alpha), beta=list(beta), gamma=list(gamma), n=n)
    if not contains(U, images, ring) or not contains(W, images, ring) or not contains(meet, images, ring):
        raise VerificationError("intersection does not contain the full ribbon module",
                                alpha=list(alpha), beta=list(beta), gamma=list(gamma), n=n)
    if rank(SparseMatrix(ambient, len(images), images), ring) != expected:
        raise VerificationError("full ribbon module does not embed", alpha=list(alpha), n=n)
    return {"alpha": list(alpha), "beta": list(beta), "gamma": list(gamma), "n": n,
            "intersection_dim": meet.dim, "expected": expected, "dims": [U.dim, W.dim, ambient],
            "left_dim": ab.dim * dims[2], "right_dim": dims[0] * bc.dim}
