"""The complex of ribbons and the near-concatenation cochain complex.

A degree-p block of the ribbon differential for a composition alpha sends
``x^u (x) [T]`` (T an SSYT of sigma(alpha)) to the sum over the terms of [T]
of ``x^u * (first row monomial) (x) (remaining rows)``, re-expressed in the
SSYT basis of sigma(alpha without its first part).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Sequence

from .combinatorics import Composition, compose
from .errors import VerificationError, ViolatedSpanError
from .linalg import QQ, CoefficientRing, SparseMatrix, SpanSolver, homology_dim, rank, rank_kernel_image
from .schur_module import (
    SchurModule,
    add_exponents,
    check_free,
    m_columns,
    monomial_index,
    monomials,
    ribbon_module,
    sub_exponents,
    tensor_index,
)
from .symfunc import merge_commas

FAULT_ENV = "RIBBONRES_FAULT"


def _fault_active() -> bool:
    return os.environ.get(FAULT_ENV, "") == "sign_flip"


def tail(alpha: Composition) -> Composition | None:
    return Composition(alpha[1:]) if len(alpha) > 1 else None


@lru_cache(maxsize=None)
def delta_split(alpha: Composition, n: int) -> tuple[tuple[tuple[tuple[int, ...], int, int], ...], ...]:
    """For each SSYT of sigma(alpha): terms (first-row monomial, SSYT index of
    the tail, coefficient) with [T] = sum coeff * monomial (x) [T']."""
    source = ribbon_module(alpha, n)
    rest = ribbon_module(tail(alpha), n)
    out = []
    for t in range(source.dim):
        groups: dict[tuple[int, ...], dict] = {}
        for key, c in source.basis_image(t).items():
            groups.setdefault(key[0], {})[key[1:]] = c
        terms = []
        for mono in sorted(groups, reverse=True):
            coords = rest.coordinates(groups[mono])
            if coords is None:
                raise ViolatedSpanError(
                    "ribbon differential leaves the ribbon summand",
                    alpha=list(alpha), n=n, tableau=list(source.ssyt[t]),
                )
            for i, c in sorted(coords.items()):
                if c:
                    if getattr(c, "denominator", 1) != 1:
                        raise ViolatedSpanError("non-integral straightening coefficient", alpha=list(alpha))
                    terms.append((mono, i, int(c)))
        out.append(tuple(terms))
    return tuple(out)


@dataclass
class PartialBlock:
    alpha: Composition
    p: int
    n: int
    ring: CoefficientRing
    matrix: SparseMatrix

    @property
    def source_dim(self) -> int:
        return self.matrix.ncols

    @property
    def target_dim(self) -> int:
        return self.matrix.nrows


def _flip_first(cols: list[dict]) -> None:
    for col in cols:
        if col:
            k = min(col)
            col[k] = -col[k]
            return


@lru_cache(maxsize=None)
def _integer_block(alpha: Composition, p: int, n: int) -> SparseMatrix:
    source = ribbon_module(alpha, n)
    rest = ribbon_module(tail(alpha), n)
    split = delta_split(alpha, n)
    tgt_index = monomial_index(p + alpha[0], n)
    cols = []
    for u in monomials(p, n):
        for t in range(source.dim):
            col: dict[int, int] = {}
            for mono, i, c in split[t]:
                row = tgt_index[add_exponents(u, mono)] * rest.dim + i
                col[row] = col.get(row, 0) + c
            cols.append(col)
    return SparseMatrix(len(tgt_index) * rest.dim, len(cols), cols)


def partial_block(alpha: Sequence[int], p: int, n: int, ring: CoefficientRing = QQ) -> PartialBlock:
    """Degree p + |alpha| component of the ribbon differential on sigma(alpha)."""
    alpha = Composition(alpha)
    if p < 0:
        raise ValueError("p must be nonnegative")
    check_free(ribbon_module(alpha, n), ring)
    check_free(ribbon_module(tail(alpha), n), ring)
    matrix = _integer_block(alpha, p, n)
    if _fault_active():
        cols = [dict(c) for c in matrix.cols]
        _flip_first(cols)
        matrix = SparseMatrix(matrix.nrows, matrix.ncols, cols)
    return PartialBlock(alpha, p, n, ring, matrix.reduced(ring))


def weight_basis(module: SchurModule, a: Sequence[int]) -> list[int]:
    """SSYT indices T of ``module`` with content(T) <= a, i.e. the weight-a part
    of S^{|a|-|T|} (x) module is spanned by x^{a - content(T)} (x) [T]."""
    out = []
    for content, idx in module.by_content.items():
        if all(c <= x for c, x in zip(content, a)):
            out.extend(idx)
    return sorted(out)


def weight_block(alpha: Sequence[int], a: Sequence[int], n: int) -> tuple[SparseMatrix, list[int], list[int]]:
    """Weight-a piece of the ribbon differential on S (x) S^{sigma(alpha)},
    over Z.  Returns (matrix, source SSYT indices, target SSYT indices)."""
    alpha = Composition(alpha)
    a = tuple(a)
    source = ribbon_module(alpha, n)
    rest = ribbon_module(tail(alpha), n)
    src = weight_basis(source, a)
    tgt = weight_basis(rest, a)
    tpos = {t: k for k, t in enumerate(tgt)}
    split = delta_split(alpha, n)
    cols = []
    for t in src:
        col: dict[int, int] = {}
        for _, i, c in split[t]:
            row = tpos[i]
            col[row] = col.get(row, 0) + c
        cols.append({r: v for r, v in col.items() if v})
    if _fault_active():
        _flip_first(cols)
    return SparseMatrix(len(tgt), len(src), cols), src, tgt


def check_d2_zero(alpha: Sequence[int], p: int, n: int) -> dict:
    """The composite of two consecutive ribbon blocks vanishes over Z (hence over every ring)."""
    alpha = Composition(alpha)
    if len(alpha) < 2:
        raise ValueError("need at least two parts")
    first = partial_block(alpha, p, n).matrix
    second = partial_block(tail(alpha), p + alpha[0], n).matrix
    comp = second @ first
    if not comp.is_zero():
        (row, col), val = next(iter(sorted(comp.entries().items())))
        raise VerificationError(
            f"d^2 != 0 for alpha={tuple(alpha)}, p={p}, n={n}",
            alpha=list(alpha), p=p, n=n, row=row, col=col, value=val,
        )
    return {"alpha": list(alpha), "p": p, "n": n, "shape": [second.nrows, first.ncols], "nnz": [first.nnz, second.nnz]}


def unrestricted_d2(witness: dict[tuple[tuple[int, ...], ...], int], n: int) -> dict[tuple[int, ...], int]:
    """Apply the merge-first-factor map twice on S (x) T^2(S) with the
    S-factor in position 0; witness keys are (s, s1, s2) exponent triples."""
    out: dict[tuple[int, ...], int] = {}
    for (s, s1, s2), c in witness.items():
        m = add_exponents(add_exponents(s, s1), s2)
        out[m] = out.get(m, 0) + c
    return {k: v for k, v in out.items() if v}


def counterexample_unrestricted(n: int, ring: CoefficientRing = QQ) -> dict:
    """An element of S (x) T^2(S) outside the ribbon summands with nonzero d^2."""
    if n < 1:
        raise ValueError("n must be positive")
    one = (0,) * n
    x1 = (1,) + (0,) * (n - 1)
    candidates = []
    if n >= 2:
        x2 = (0, 1) + (0,) * (n - 2)
        candidates.append(("1 (x) x1 (x) x2 + 1 (x) x2 (x) x1", {(one, x1, x2): 1, (one, x2, x1): 1}))
    candidates.append(("1 (x) x1 (x) x1", {(one, x1, x1): 1}))
    notes = []
    for label, witness in candidates:
        value = {k: ring.reduce(v) for k, v in unrestricted_d2(witness, n).items() if ring.reduce(v)}
        if value:
            return {"witness": label, "d2": {str(list(k)): v for k, v in value.items()}, "ring": str(ring), "notes": notes}
        notes.append(f"{label} has d^2 = 0 over {ring}")
    raise VerificationError("no counterexample found", n=n, ring=str(ring))


def kernel_image_lemma(alpha: Sequence[int], p: int, q: int, n: int, ring: CoefficientRing = QQ) -> dict:
    alpha = Composition(alpha)
    if p <= 0 or not 0 < q <= p:
        raise ValueError("need p > 0 and 0 < q <= p")
    params = {"alpha": list(alpha), "p": p, "q": q, "n": n, "ring": str(ring)}
    block = partial_block(alpha, p, n, ring).matrix
    incoming = partial_block(compose((q,), alpha), p - q, n, ring).matrix
    r, ker, _ = rank_kernel_image(block, ring)
    expected = ribbon_module(compose((p,), alpha), n).dim
    if ker.dim != expected:
        raise VerificationError("kernel dimension mismatch", computed=ker.dim, expected=expected, **params)
    if not (block @ incoming).is_zero_over(ring):
        raise VerificationError("image is not inside the kernel", **params)
    r_in = rank(incoming, ring)
    solver = SpanSolver(incoming.cols, ring)
    missing = sum(1 for v in ker.basis.cols if solver.solve(v) is None)
    if missing or r_in != ker.dim:
        raise VerificationError("kernel is not the image", missing=missing, rank_image=r_in, **params)
    return {**params, "kernel_dim": ker.dim, "expected": expected, "image_rank": r_in}


# -- near-concatenation cochain complex ------------------------------------------------


def _sorted_subsets(size: int) -> list[frozenset[int]]:
    """Subsets of {1..size} ordered by cardinality, then binary value."""
    subsets = [frozenset(k + 1 for k in range(size) if mask >> k & 1) for mask in range(1 << size)]
    return sorted(subsets, key=lambda s: (len(s), sum(1 << (k - 1) for k in s)))


@dataclass
class HGComplex:
    alphas: list[Composition]
    n: int
    ring: CoefficientRing
    subsets: list[frozenset[int]]
    factors: dict[frozenset[int], list[Composition]]
    levels: list[list[frozenset[int]]]
    offsets: dict[frozenset[int], int]
    level_dims: list[int]
    differentials: list[SparseMatrix] = field(default_factory=list)  # integer matrices


def _term_modules(parts: Sequence[Composition], n: int) -> list[SchurModule]:
    return [ribbon_module(a, n) for a in parts]


def nabla(parts: Sequence[Composition], k: int, n: int) -> tuple[list[dict[int, int]], int]:
    """Merge factors k and k+1 of the tensor product of ribbon modules.
    Returns integer columns (indexed row-major) and the target dimension."""
    mods = _term_modules(parts, n)
    merged = list(parts[:k]) + [compose(parts[k], parts[k + 1], "near_concat")] + list(parts[k + 2 :])
    tmods = _term_modules(merged, n)
    mcols = m_columns(parts[k], parts[k + 1], n)
    right = mods[k + 1].dim
    cols = []
    for idx in product(*(range(m.dim) for m in mods)):
        col = {}
        for t, c in mcols[idx[k] * right + idx[k + 1]].items():
            new = idx[:k] + (t,) + idx[k + 2 :]
            col[tensor_index(new, tmods)] = c
        cols.append(col)
    total = 1
    for m in tmods:
        total *= m.dim
    return cols, total


def build_hg(alphas: Sequence[Sequence[int]], n: int, ring: CoefficientRing = QQ) -> HGComplex:
    alphas = [Composition(a) for a in alphas]
    ell = len(alphas)
    if ell < 1:
        raise ValueError("need at least one composition")
    subsets = _sorted_subsets(ell - 1)
    factors = {I: merge_commas(alphas, I) for I in subsets}
    for parts in factors.values():
        for mod in _term_modules(parts, n):
            check_free(mod, ring)
    levels = [[I for I in subsets if len(I) == i] for i in range(ell)]
    offsets, level_dims = {}, []
    for level in levels:
        off = 0
        for I in level:
            offsets[I] = off
            size = 1
            for m in _term_modules(factors[I], n):
                size *= m.dim
            off += size
        level_dims.append(off)
    cx = HGComplex(alphas, n, ring, subsets, factors, levels, offsets, level_dims)
    for i in range(ell - 1):
        cols = [dict() for _ in range(level_dims[i])]
        for I in levels[i]:
            for j in range(1, ell):
                if j in I:
                    continue
                J = I | {j}
                sign = -1 if sorted(J).index(j) % 2 else 1
                k = sum(1 for c in range(1, j) if c not in I)
                block, _ = nabla(factors[I], k, n)
                for local, col in enumerate(block):
                    target = cols[offsets[I] + local]
                    for row, c in col.items():
                        key = offsets[J] + row
                        target[key] = target.get(key, 0) + sign * c
        cx.differentials.append(SparseMatrix(level_dims[i + 1], level_dims[i], cols))
    return cx


def _compose_cols(first: list[dict], second: list[dict]) -> list[dict]:
    out = []
    for col in first:
        acc: dict = {}
        for mid, c in col.items():
            for row, d in second[mid].items():
                acc[row] = acc.get(row, 0) + c * d
        out.append({r: v for r, v in acc.items() if v})
    return out


def verify_hg(alphas: Sequence[Sequence[int]], n: int, ring: CoefficientRing = QQ) -> dict:
    cx = build_hg(alphas, n, ring)
    ell = len(cx.alphas)
    params = {"alphas": [list(a) for a in cx.alphas], "n": n, "ring": str(ring)}
    for i in range(len(cx.differentials) - 1):
        if not (cx.differentials[i + 1] @ cx.differentials[i]).is_zero():
            raise VerificationError(f"delta^2 != 0 at level {i}", level=i, **params)
    # commuting diamonds: merging j then j' agrees with j' then j
    for I in cx.subsets:
        free = [j for j in range(1, ell) if j not in I]
        for a in range(len(free)):
            for b in range(a + 1, len(free)):
                j1, j2 = free[a], free[b]
                paths = []
                for first, second in ((j1, j2), (j2, j1)):
                    mid = I | {first}
                    k1 = sum(1 for c in range(1, first) if c not in I)
                    k2 = sum(1 for c in range(1, second) if c not in mid)
                    c1, _ = nabla(cx.factors[I], k1, n)
                    c2, _ = nabla(cx.factors[mid], k2, n)
                    paths.append(_compose_cols(c1, c2))
                if paths[0] != paths[1]:
                    raise VerificationError("merge maps do not commute", subset=sorted(I), merges=[j1, j2], **params)
    full = cx.alphas[0]
    for a in cx.alphas[1:]:
        full = compose(full, a)
    expected_h0 = ribbon_module(full, n).dim
    dims = cx.level_dims
    mats = [d.reduced(ring) for d in cx.differentials]
    cohomology = []
    for i in range(ell):
        d_in = mats[i - 1] if i > 0 else SparseMatrix(dims[0], 0)
        d_out = mats[i] if i < len(mats) else SparseMatrix(0, dims[i])
        free_rank, torsion = homology_dim(d_in, d_out, ring)
        cohomology.append(free_rank)
        if torsion:
            raise VerificationError(f"torsion in cohomology at level {i}", level=i, torsion=torsion, **params)
    if cohomology[0] != expected_h0:
        raise VerificationError("H^0 has the wrong dimension", level=0, computed=cohomology[0], expected=expected_h0, **params)
    for i, hdim in enumerate(cohomology[1:], start=1):
        if hdim:
            raise VerificationError(f"H^{i} is nonzero", level=i, computed=hdim, **params)
    euler = sum((-1) ** i * d for i, d in enumerate(dims))
    if euler != expected_h0:
        raise VerificationError("Euler characteristic mismatch", computed=euler, expected=expected_h0, **params)
    return {**params, "term_dims": dims, "cohomology": cohomology, "expected_h0": expected_h0}
