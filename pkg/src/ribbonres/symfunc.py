"""Truncated symmetric polynomials stored on monomial orbits."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Mapping, Sequence

from .combinatorics import (
    Composition,
    SkewShape,
    as_skew_partition,
    compose,
    diagram_compose,
    iter_fillings,
    power,
    ribbon_shape,
    transpose,
)
from .errors import VerificationError

DEFAULT_MAX_DEG = 24

Partition = tuple[int, ...]


def _key(exponents: Sequence[int]) -> Partition:
    return tuple(sorted((e for e in exponents if e), reverse=True))


def partitions(total: int, max_parts: int, max_part: int | None = None) -> list[Partition]:
    """Partitions of ``total`` with at most ``max_parts`` parts, reverse-lex order."""
    if max_part is None:
        max_part = total
    if total == 0:
        return [()]
    if max_parts == 0:
        return []
    out = []
    for first in range(min(total, max_part), 0, -1):
        for rest in partitions(total - first, max_parts - 1, first):
            out.append((first,) + rest)
    return out


@lru_cache(maxsize=None)
def orbit(lam: Partition, n: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of length n whose sorted form is ``lam``."""
    padded = tuple(lam) + (0,) * (n - len(lam))
    return tuple(sorted(set(permutations(padded)), reverse=True))


def orbit_size(lam: Partition, n: int) -> int:
    padded = tuple(lam) + (0,) * (n - len(lam))
    size = factorial(n)
    for mult in Counter(padded).values():
        size //= factorial(mult)
    return size


class SymPoly:
    __slots__ = ("n", "max_deg", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[Partition, int] | None = None, max_deg: int = DEFAULT_MAX_DEG):
        self.n = n
        self.max_deg = max_deg
        self.coeffs = {}
        for lam, c in (coeffs or {}).items():
            lam = _key(lam)
            if len(lam) > n:
                raise ValueError(f"{lam} has more than {n} parts")
            if c and sum(lam) <= max_deg:
                self.coeffs[lam] = self.coeffs.get(lam, 0) + c
        self.coeffs = {k: v for k, v in self.coeffs.items() if v}

    @staticmethod
    def from_monomials(n: int, terms: Mapping[tuple[int, ...], int], max_deg: int = DEFAULT_MAX_DEG) -> SymPoly:
        """Build from a full monomial expansion, checking it is symmetric."""
        coeffs: dict[Partition, int] = {}
        for expo, c in terms.items():
            if c:
                coeffs.setdefault(_key(expo), c)
        for lam, c in coeffs.items():
            for expo in orbit(lam, n):
                if terms.get(expo, 0) != c:
                    raise VerificationError(
                        "polynomial is not symmetric", monomial=list(expo), expected=c, found=terms.get(expo, 0)
                    )
        for expo, c in terms.items():
            if c and len(expo) != n:
                raise ValueError("exponent length differs from variable count")
        return SymPoly(n, coeffs, max_deg)

    def _like(self, coeffs) -> SymPoly:
        return SymPoly(self.n, coeffs, self.max_deg)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = SymPoly(self.n, {(): other}, self.max_deg)
        return isinstance(other, SymPoly) and self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __add__(self, other) -> SymPoly:
        other = self._coerce(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return self._like(out)

    __radd__ = __add__

    def __neg__(self) -> SymPoly:
        return self._like({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other) -> SymPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> SymPoly:
        return self._coerce(other) - self

    def _coerce(self, other) -> SymPoly:
        if isinstance(other, SymPoly):
            if other.n != self.n:
                raise ValueError("variable counts differ")
            return other
        return self._like({(): other})

    def __mul__(self, other) -> SymPoly:
        if isinstance(other, int):
            return self._like({k: other * v for k, v in self.coeffs.items()})
        other = self._coerce(other)
        max_deg = min(self.max_deg, other.max_deg)
        n = self.n
        g_by_deg: dict[int, list[tuple[tuple[int, ...], int]]] = {}
        for mu, c in other.coeffs.items():
            for expo in orbit(mu, n):
                g_by_deg.setdefault(sum(mu), []).append((expo, c))
        f_degs = sorted({sum(k) for k in self.coeffs})
        out: dict[Partition, int] = {}
        for df in f_degs:
            for dg, g_terms in g_by_deg.items():
                total = df + dg
                if total > max_deg:
                    continue
                for nu in partitions(total, n):
                    padded = nu + (0,) * (n - len(nu))
                    acc = 0
                    for expo, c in g_terms:
                        diff = [a - b for a, b in zip(padded, expo)]
                        if min(diff) < 0:
                            continue
                        fc = self.coeffs.get(_key(diff))
                        if fc:
                            acc += fc * c
                    if acc:
                        out[nu] = out.get(nu, 0) + acc
        return SymPoly(n, out, max_deg)

    __rmul__ = __mul__

    def coeff(self, exponents: Sequence[int]) -> int:
        return self.coeffs.get(_key(exponents), 0)

    def at_ones(self) -> int:
        """Principal specialization x_1 = ... = x_n = 1."""
        return sum(c * orbit_size(lam, self.n) for lam, c in self.coeffs.items())

    def degree_part(self, deg: int) -> SymPoly:
        return self._like({k: v for k, v in self.coeffs.items() if sum(k) == deg})

    def is_zero(self) -> bool:
        return not self.coeffs

    def monomials(self) -> dict[tuple[int, ...], int]:
        return {expo: c for lam, c in self.coeffs.items() for expo in orbit(lam, self.n)}

    def __repr__(self) -> str:
        if not self.coeffs:
            return "SymPoly(0)"
        terms = " + ".join(f"{c}*m{list(k)}" for k, c in sorted(self.coeffs.items(), reverse=True))
        return f"SymPoly(n={self.n}: {terms})"


def h(m: int, n: int, max_deg: int = DEFAULT_MAX_DEG) -> SymPoly:
    if m < 0:
        return SymPoly(n, {}, max_deg)
    return SymPoly(n, {lam: 1 for lam in partitions(m, n)}, max_deg)


def e(m: int, n: int, max_deg: int = DEFAULT_MAX_DEG) -> SymPoly:
    if m < 0 or m > n:
        return SymPoly(n, {}, max_deg)
    return SymPoly(n, {(1,) * m: 1}, max_deg)


def coeff_at(f: SymPoly, multidegree: Sequence[int]) -> int:
    if sum(multidegree) > f.max_deg:
        raise ValueError("multidegree beyond truncation")
    if len([a for a in multidegree if a]) > f.n:
        return 0
    return f.coeff(multidegree)


@lru_cache(maxsize=None)
def h_product(parts: tuple[int, ...], n: int, max_deg: int = DEFAULT_MAX_DEG) -> SymPoly:
    if not parts:
        return SymPoly(n, {(): 1}, max_deg)
    return h_product(parts[1:], n, max_deg) * h(parts[0], n, max_deg)


def _ssyt_sum(shape: SkewShape, n: int, max_deg: int) -> SymPoly:
    terms: Counter = Counter()
    for entries in iter_fillings(shape, n, "ssyt"):
        expo = [0] * n
        for v in entries:
            expo[v - 1] += 1
        terms[tuple(expo)] += 1
    return SymPoly.from_monomials(n, terms, max_deg)


def _determinant(entry, size: int, one, zero):
    """Determinant by expansion over column subsets; ``entry(i, j)`` returns a
    ring element or None for zero."""
    memo: dict[int, object] = {}

    def minor(row: int, used: int):
        if row == size:
            return one
        if used in memo:
            return memo[used]
        total = zero
        free_before = 0
        for j in range(size):
            if used >> j & 1:
                continue
            x = entry(row, j)
            if x is not None:
                term = x * minor(row + 1, used | (1 << j))
                total = total - term if free_before % 2 else total + term
            free_before += 1
        memo[used] = total
        return total

    return minor(0, 0)


class _HMonomials:
    """Polynomials in the symbols h_1, h_2, ... with integer coefficients."""

    def __init__(self, terms: dict[tuple[int, ...], int]):
        self.terms = {k: v for k, v in terms.items() if v}

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return _HMonomials(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) - v
        return _HMonomials(out)

    def __mul__(self, other):
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2, reverse=True))
                out[k] = out.get(k, 0) + v1 * v2
        return _HMonomials(out)


def jacobi_trudi_h(lam: Sequence[int], mu: Sequence[int]) -> dict[tuple[int, ...], int]:
    """The Jacobi-Trudi determinant expanded as a combination of h-products."""
    size = len(lam)
    mu = list(mu) + [0] * (size - len(mu))

    def entry(i, j):
        k = lam[i] - mu[j] - i + j
        if k < 0:
            return None
        return _HMonomials({(k,) if k else (): 1})

    det = _determinant(entry, size, _HMonomials({(): 1}), _HMonomials({}))
    return det.terms


def _jacobi_trudi(shape: SkewShape, n: int, max_deg: int) -> SymPoly:
    lam, mu = as_skew_partition(shape)
    out = SymPoly(n, {}, max_deg)
    for parts, c in sorted(jacobi_trudi_h(lam, mu).items()):
        out = out + h_product(parts, n, max_deg) * c
    return out


@lru_cache(maxsize=None)
def skew_schur(shape: SkewShape, n: int, method: str = "ssyt_sum", max_deg: int = DEFAULT_MAX_DEG) -> SymPoly:
    if len(shape) > max_deg:
        raise ValueError(f"shape has {len(shape)} cells, beyond max_deg={max_deg}")
    if method == "ssyt_sum":
        return _ssyt_sum(shape, n, max_deg)
    if method == "jacobi_trudi":
        return _jacobi_trudi(shape, n, max_deg)
    raise ValueError(f"unknown method {method!r}")


def ribbon_schur(alpha: Sequence[int], n: int, method: str = "ssyt_sum") -> SymPoly:
    return skew_schur(ribbon_shape(alpha), n, method)


def _first_difference(f: SymPoly, g: SymPoly):
    for lam in sorted(set(f.coeffs) | set(g.coeffs)):
        if f.coeffs.get(lam, 0) != g.coeffs.get(lam, 0):
            return lam, f.coeffs.get(lam, 0), g.coeffs.get(lam, 0)
    return None


def _assert_equal(lhs: SymPoly, rhs: SymPoly, what: str, **params) -> None:
    diff = _first_difference(lhs, rhs)
    if diff is not None:
        lam, a, b = diff
        raise VerificationError(f"{what}: mismatch at monomial {list(lam)}", monomial=list(lam), lhs=a, rhs=b, **params)


def verify_product_identity(d1: SkewShape, d2: SkewShape, n: int) -> dict:
    """s_D * s_D' = s_{D.D'} + s_{D (.) D'} coefficientwise."""
    lhs = skew_schur(d1, n) * skew_schur(d2, n)
    cat = diagram_compose(d1, d2, "concat")
    near = diagram_compose(d1, d2, "near_concat")
    rhs = skew_schur(cat, n) + skew_schur(near, n)
    _assert_equal(lhs, rhs, "product identity", n=n)
    return {"n": n, "cells": [len(d1), len(d2)], "terms": len(lhs.coeffs), "value_at_ones": lhs.at_ones()}


def merge_commas(parts: Sequence[Sequence[int]], merged: set[int] | frozenset[int]) -> list[Composition]:
    """Replace the commas listed in ``merged`` (1-based, comma k sits between
    parts k and k+1) by near-concatenation."""
    out = [Composition(parts[0])]
    for k in range(1, len(parts)):
        if k in merged:
            out[-1] = compose(out[-1], parts[k], "near_concat")
        else:
            out.append(Composition(parts[k]))
    return out


def hamel_goulden_det(alphas: Sequence[Sequence[int]], n: int) -> dict:
    alphas = [Composition(a) for a in alphas]
    size = len(alphas)
    if size < 1:
        raise ValueError("need at least one composition")
    full = alphas[0]
    for a in alphas[1:]:
        full = compose(full, a)
    target = ribbon_schur(full, n)

    def block(i, j):
        piece = alphas[i]
        for a in alphas[i + 1 : j + 1]:
            piece = compose(piece, a, "near_concat")
        return ribbon_schur(piece, n)

    def entry(i, j):
        if i >= j + 2:
            return None
        if i == j + 1:
            return SymPoly(n, {(): 1})
        return block(i, j)

    det = _determinant(entry, size, SymPoly(n, {(): 1}), SymPoly(n, {}))
    _assert_equal(det, target, "determinant of near-concatenation blocks", n=n)
    alternating = SymPoly(n, {})
    for mask in range(1 << (size - 1)):
        merged = {k + 1 for k in range(size - 1) if mask >> k & 1}
        term = SymPoly(n, {(): 1})
        for piece in merge_commas(alphas, merged):
            term = term * ribbon_schur(piece, n)
        alternating = alternating - term if len(merged) % 2 else alternating + term
    _assert_equal(alternating, target, "alternating subset sum", n=n)
    return {"n": n, "length": size, "concatenation": list(full), "value_at_ones": target.at_ones()}


def verify_veronese_series(d: int, r: int, n: int, max_m: int) -> dict:
    """h_{md+r} = sum_i (-1)^i h_{d(m-i)} s_{sigma(d^i, r)} for m <= max_m."""
    if d < 1 or r < 1:
        raise ValueError("d and r must be positive")
    checked = []
    for m in range(max_m + 1):
        rhs = SymPoly(n, {})
        for i in range(m + 1):
            term = h(d * (m - i), n) * ribbon_schur(power(d, i, r), n)
            rhs = rhs - term if i % 2 else rhs + term
        lhs = h(m * d + r, n)
        diff = _first_difference(lhs, rhs)
        if diff is not None:
            raise VerificationError(
                f"series mismatch at d={d}, r={r}, m={m}", d=d, r=r, m=m, monomial=list(diff[0])
            )
        checked.append({"m": m, "degree": m * d + r, "value_at_ones": lhs.at_ones()})
    return {"d": d, "r": r, "n": n, "components": checked}


def omega_stability_check(d: int = 2, r: int = 1, i_max: int = 4) -> dict:
    fixed = []
    for i in range(i_max + 1):
        shape = ribbon_shape(power(d, i, r))
        if transpose(shape) != shape:
            raise VerificationError(f"sigma({d}^{i},{r}) is not self-transpose", d=d, r=r, i=i)
        fixed.append(list(power(d, i, r)))
    return {"d": d, "r": r, "fixed_shapes": fixed}


def verify_ribbon_oracle(alpha: Sequence[int], n: int) -> dict:
    """Tableau sum and Jacobi-Trudi determinant agree for the ribbon sigma(alpha)."""
    by_tableaux = ribbon_schur(alpha, n, "ssyt_sum")
    by_det = ribbon_schur(alpha, n, "jacobi_trudi")
    _assert_equal(by_tableaux, by_det, f"ribbon {tuple(alpha)}", alpha=list(alpha), n=n)
    return {"alpha": list(alpha), "n": n, "terms": len(by_tableaux.coeffs), "dim": by_tableaux.at_ones()}
