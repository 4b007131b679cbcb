"""Tensor product, Tor and Hom between two Veronese modules, one degree at a time.

M = S^(d, r), M' = S^(d, r') and R = S^(d).  Everything is computed from
finite pieces: the tensor product from its monomial presentation per
multidegree, Tor from the ribbon resolution of M' tensored with M, and Hom
from the first presentation step of M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterator, Sequence

from .combinatorics import Composition, power
from .errors import PreconditionError, VerificationError
from .linalg import QQ, CoefficientRing, SparseMatrix, SpanSolver, homology_dim, rank, rank_kernel_image
from .ribbon_complex import delta_split, weight_basis, weight_block
from .schur_module import add_exponents, dim_sym, monomials, ribbon_module, sub_exponents
from .symfunc import coeff_at, ribbon_schur

Exponent = tuple[int, ...]


def _field(ring: CoefficientRing) -> CoefficientRing:
    # Relations of the tensor presentation are differences of basis vectors, so
    # their Z-span is saturated and rational elimination decides Z-membership.
    return QQ if ring.kind == "z" else ring


def _in_progression(k: int, start: int, d: int) -> bool:
    return k >= start and (k - start) % d == 0


def veronese_dim(d: int, r: int, n: int, j: int) -> int:
    return dim_sym(j, n) if _in_progression(j, r, d) else 0


def _sub_exponents_all(gamma: Exponent) -> Iterator[Exponent]:
    if not gamma:
        yield ()
        return
    for head in range(gamma[0] + 1):
        for rest in _sub_exponents_all(gamma[1:]):
            yield (head,) + rest


def _bounded_monomials(degree: int, bound: Exponent) -> list[Exponent]:
    return [m for m in monomials(degree, len(bound)) if all(x <= b for x, b in zip(m, bound))]


# -- tensor product -----------------------------------------------------------------


@dataclass
class TensorPresentation:
    """The multidegree-gamma piece of M (x)_R M': generators x^b (x) x^(gamma-b)
    and relations (x^c x^a) (x) x^b - x^a (x) (x^c x^b) with |c| = d."""

    d: int
    r: int
    rprime: int
    n: int
    ring: CoefficientRing
    gamma: Exponent
    generators: list[Exponent] = field(default_factory=list)
    relations: list[dict[int, int]] = field(default_factory=list)

    @staticmethod
    def build(d: int, r: int, rprime: int, gamma: Sequence[int], ring: CoefficientRing = QQ,
              order: Sequence[int] | None = None) -> TensorPresentation:
        gamma = tuple(gamma)
        j = sum(gamma)
        gens = [b for b in _sub_exponents_all(gamma)
                if _in_progression(sum(b), r, d) and _in_progression(j - sum(b), rprime, d)]
        gens.sort(key=lambda b: (sum(b), tuple(-x for x in b)))
        if order is not None:
            gens = [gens[k] for k in order]
        pos = {b: k for k, b in enumerate(gens)}
        rels = []
        for b in gens:
            for c in _bounded_monomials(d, sub_exponents(gamma, b)):
                moved = add_exponents(b, c)
                if moved in pos:
                    rels.append({pos[moved]: 1, pos[b]: -1})
        return TensorPresentation(d, r, rprime, len(gamma), ring, gamma, gens, rels)

    @property
    def index(self) -> dict[Exponent, int]:
        return {b: k for k, b in enumerate(self.generators)}

    def solver(self) -> SpanSolver:
        if not hasattr(self, "_solver"):
            self._solver = SpanSolver(self.relations, _field(self.ring))
        return self._solver

    @property
    def dim(self) -> int:
        return len(self.generators) - self.solver().ech.rank

    def is_zero(self, vec: dict[int, object]) -> bool:
        vec = {k: v for k, v in vec.items() if self.ring.reduce(v)}
        return not vec or self.solver().solve(vec) is not None

    def multiplication(self) -> SparseMatrix:
        """phi onto the single monomial x^gamma."""
        return SparseMatrix(1, len(self.generators), [{0: 1} for _ in self.generators])


def _presentations(d, r, rprime, n, ring, j, cache):
    for gamma in monomials(j, n):
        if gamma not in cache:
            cache[gamma] = TensorPresentation.build(d, r, rprime, gamma, ring)
        yield cache[gamma]


def tensor_expected(d: int, r: int, rprime: int, n: int, j: int) -> int:
    """dim M'' in degree j plus the sigma(r, r') summand at j = r + r'."""
    top = r + rprime
    extra = 0
    if j == top and r > 0 and rprime > 0:
        extra = ribbon_module(Composition((r, rprime)), n).dim
    return veronese_dim(d, top, n, j) + extra


def tensor_dims(d: int, r: int, rprime: int, n: int, ring: CoefficientRing = QQ,
                deg_max: int | None = None) -> dict:
    if d < 1 or r < 0 or rprime < 0 or n < 1:
        raise ValueError("need d >= 1 and r, r' >= 0")
    top = r + rprime
    if deg_max is None:
        deg_max = top + 3 * d
    cache: dict = {}
    table = []
    for j in range(deg_max + 1):
        if not _in_progression(j, top, d):
            # no generator pair has total degree j
            table.append({"degree": j, "dim": 0, "expected": 0})
            continue
        dim = sum(p.dim for p in _presentations(d, r, rprime, n, ring, j, cache))
        expected = tensor_expected(d, r, rprime, n, j)
        if dim != expected:
            raise VerificationError(f"tensor product dimension mismatch in degree {j}", j=j, computed=dim, expected=expected)
        table.append({"degree": j, "dim": dim, "expected": expected})
    annihilated = _kernel_annihilated(d, r, rprime, n, ring, cache) if top + d <= deg_max else None
    return {"d": d, "r": r, "rprime": rprime, "n": n, "ring": str(ring), "deg_max": deg_max,
            "table": table, "kernel_annihilated": annihilated}


def _kernel_annihilated(d, r, rprime, n, ring, cache) -> dict:
    """Every kernel vector of phi in degree r + r', times every x^c with |c| = d,
    vanishes in M (x)_R M'."""
    top = r + rprime
    tested = 0
    for pres in _presentations(d, r, rprime, n, ring, top, cache):
        _, ker, _ = rank_kernel_image(pres.multiplication(), _field(ring))
        for vec in ker.basis.cols:
            for c in monomials(d, n):
                target = cache.get(add_exponents(pres.gamma, c))
                if target is None:
                    target = cache[add_exponents(pres.gamma, c)] = TensorPresentation.build(
                        d, r, rprime, add_exponents(pres.gamma, c), ring)
                idx = target.index
                moved: dict[int, object] = {}
                for k, v in vec.items():
                    key = idx[add_exponents(pres.generators[k], c)]
                    moved[key] = moved.get(key, 0) + v
                if not target.is_zero(moved):
                    raise VerificationError("x^c kills no kernel element", gamma=list(pres.gamma), c=list(c))
                tested += 1
    return {"degree": top, "products_checked": tested}


# -- splitting of the multiplication map ------------------------------------------------


def greedy_part(alpha: Exponent, r: int) -> Exponent:
    """The sub-exponent of degree r taking as much as possible from x_1, then x_2, ..."""
    out, left = [], r
    for a in alpha:
        take = min(a, left)
        out.append(take)
        left -= take
    if left:
        raise ValueError("alpha has degree below r")
    return tuple(out)


def _psi(alpha: Exponent, r: int, rprime: int, variant: str, ring: CoefficientRing) -> dict[Exponent, object]:
    """psi(x^alpha) as {b: coefficient} meaning sum coefficient * x^b (x) x^(alpha-b)."""
    if variant == "binomial" and sum(alpha) == r + rprime:
        total = math.comb(r + rprime, r)
        inv = ring.inverse(total) if ring.kind != "q" else Fraction(1, total)
        out = {}
        for b in _bounded_monomials(r, alpha):
            c = math.prod(math.comb(a, x) for a, x in zip(alpha, b))
            out[b] = ring.reduce(c * inv)
        return out
    return {greedy_part(alpha, r): 1}


def splitting_psi(d: int, r: int, rprime: int, n: int, ring: CoefficientRing = QQ,
                  deg_max: int | None = None, variant: str = "lex") -> dict:
    if variant not in ("lex", "binomial"):
        raise ValueError("variant must be 'lex' or 'binomial'")
    if d < 1 or r < 0 or rprime < 0:
        raise ValueError("need d >= 1 and r, r' >= 0")
    top = r + rprime
    if variant == "binomial" and not ring.is_unit(math.comb(top, r)):
        raise PreconditionError(
            f"C({top},{r}) = {math.comb(top, r)} is not invertible over {ring}"
        )
    if deg_max is None:
        deg_max = top + 2 * d
    cache: dict = {}

    def pres(gamma):
        if gamma not in cache:
            cache[gamma] = TensorPresentation.build(d, r, rprime, gamma, ring)
        return cache[gamma]

    def as_vector(terms: dict[Exponent, object], gamma: Exponent) -> dict[int, object]:
        idx = pres(gamma).index
        out: dict[int, object] = {}
        for b, c in terms.items():
            out[idx[b]] = out.get(idx[b], 0) + c
        return out

    degrees = [j for j in range(top, deg_max + 1) if _in_progression(j, top, d)]
    counts = {"phi_psi": 0, "r_linear": 0, "permutations": 0}
    for j in degrees:
        for alpha in monomials(j, n):
            psi = _psi(alpha, r, rprime, variant, ring)
            if ring.reduce(sum(psi.values()) - 1):
                raise VerificationError("phi(psi(x^alpha)) != x^alpha", alpha=list(alpha))
            counts["phi_psi"] += 1
            if j + d <= deg_max:
                for c in monomials(d, n):
                    target = add_exponents(alpha, c)
                    lhs = as_vector(_psi(target, r, rprime, variant, ring), target)
                    shifted = as_vector({add_exponents(b, c): v for b, v in psi.items()}, target)
                    diff = {k: lhs.get(k, 0) - shifted.get(k, 0) for k in set(lhs) | set(shifted)}
                    if not pres(target).is_zero(diff):
                        raise VerificationError("psi is not R-linear", alpha=list(alpha), c=list(c))
                    counts["r_linear"] += 1
            if variant == "binomial":
                for perm in permutations(range(n)):
                    act = lambda e: tuple(e[perm.index(k)] for k in range(n))  # noqa: E731
                    moved = act(alpha)
                    lhs = as_vector(_psi(moved, r, rprime, variant, ring), moved)
                    rhs = as_vector({act(b): v for b, v in psi.items()}, moved)
                    diff = {k: lhs.get(k, 0) - rhs.get(k, 0) for k in set(lhs) | set(rhs)}
                    if not pres(moved).is_zero(diff):
                        raise VerificationError("psi does not commute with a permutation",
                                                alpha=list(alpha), permutation=list(perm))
                    counts["permutations"] += 1
    return {"d": d, "r": r, "rprime": rprime, "n": n, "ring": str(ring), "variant": variant,
            "deg_max": deg_max, "checks": counts}


# -- Tor ---------------------------------------------------------------------------------


@dataclass
class TorWindow:
    d: int
    r: int
    rprime: int
    n: int
    ring: CoefficientRing
    i: int
    dims: dict[int, int] = field(default_factory=dict)
    torsion: dict[int, list[int]] = field(default_factory=dict)
    multigraded: dict[Exponent, int] | None = None

    @property
    def support(self) -> list[int]:
        return sorted(j for j, v in self.dims.items() if v)


def _tor_weight(d, r, rprime, n, ring, i, a) -> tuple[int, list[int]]:
    """Homology at M (x) S^{sigma(d^i, r')} in weight a."""
    shape = power(d, i, rprime)
    p = sum(a) - (d * i + rprime)
    if not _in_progression(p, r, d):
        return 0, []
    size = len(weight_basis(ribbon_module(shape, n), a))
    if size == 0:
        return 0, []
    if i >= 1:
        d_out = weight_block(shape, a, n)[0]
    else:
        d_out = SparseMatrix(0, size)
    if p - d >= r:
        d_in = weight_block(power(d, i + 1, rprime), a, n)[0]
    else:
        d_in = SparseMatrix(size, 0)
    h, torsion = homology_dim(d_in.reduced(ring), d_out.reduced(ring), ring)
    return h, torsion


def tor(d: int, r: int, rprime: int, n: int, ring: CoefficientRing = QQ, i: int = 1,
        deg_max: int | None = None, multigraded: bool = False, check: bool = True) -> TorWindow:
    """Tor_i^R(M, M') as the homology of M (x)_R (ribbon resolution of M')."""
    if d < 1 or r < 0 or rprime < 1:
        raise ValueError("need d, r' >= 1 and r >= 0")
    if i < 0:
        raise ValueError("i must be nonnegative")
    peak = d * i + r + rprime
    if deg_max is None:
        deg_max = max(r + rprime + 3 * d, peak + d)
    W = TorWindow(d, r, rprime, n, ring, i, multigraded={} if multigraded else None)
    for j in range(deg_max + 1):
        total, torsion = 0, []
        for a in monomials(j, n):
            h, t = _tor_weight(d, r, rprime, n, ring, i, a)
            total += h
            torsion.extend(t)
            if multigraded and j == peak:
                W.multigraded[a] = h
        W.dims[j] = total
        if torsion:
            W.torsion[j] = torsion
    if check and i >= 1:
        verify_tor(W)
    return W


def tor_expected(d: int, r: int, rprime: int, n: int, i: int) -> int:
    if r == 0:
        return 0
    return ribbon_module(Composition((r,) + (d,) * i + (rprime,)), n).dim


def verify_tor(W: TorWindow) -> dict:
    peak = W.d * W.i + W.r + W.rprime
    expected = tor_expected(W.d, W.r, W.rprime, W.n, W.i)
    for j, v in W.dims.items():
        want = expected if j == peak else 0
        if v != want:
            raise VerificationError(f"Tor_{W.i} has dimension {v} in degree {j}, expected {want}",
                                    i=W.i, j=j, computed=v, expected=want)
    if W.torsion:
        raise VerificationError("Tor has torsion over Z", torsion={str(k): v for k, v in W.torsion.items()})
    if W.multigraded is not None and W.r > 0:
        character = ribbon_schur(Composition((W.r,) + (W.d,) * W.i + (W.rprime,)), W.n)
        for a, v in W.multigraded.items():
            if v != coeff_at(character, a):
                raise VerificationError("multigraded Tor dimension differs from the character",
                                        multidegree=list(a), computed=v, expected=coeff_at(character, a))
        if sum(W.multigraded.values()) != expected:
            raise VerificationError("multigraded dimensions do not sum to the graded one")
    return {"i": W.i, "peak_degree": peak, "dim": expected, "support": W.support}


# -- Hom ---------------------------------------------------------------------------------


def hom_target_degree(d: int, r: int, rprime: int) -> int:
    """The generating degree of Hom_R(M, M') for two or more variables."""
    if r <= rprime:
        return rprime - r
    return (rprime - r) % d


def _shifts(t: int, n: int, low: int) -> Iterator[Exponent]:
    """tau in Z^n with |tau| = t and every entry >= -low."""
    for m in monomials(t + n * low, n) if t + n * low >= 0 else ():
        yield tuple(x - low for x in m)


def hom_dims(d: int, r: int, rprime: int, n: int, ring: CoefficientRing = QQ,
             t_max: int | None = None) -> dict:
    """dim Hom_R(M, M')_t = dim ker(Hom(S^r, M'_{r+t}) -> Hom(S^{sigma(d,r)}, M'_{d+r+t}))."""
    if d < 1 or r < 0 or rprime < 0 or n < 1:
        raise ValueError("need d >= 1 and r, r' >= 0")
    start = rprime - r
    low = hom_target_degree(d, r, rprime)
    if t_max is None:
        t_max = low + 3 * d
    field_ring = _field(ring)
    gens = monomials(r, n)
    split = []
    if r > 0:
        shape = Composition((d, r))
        src = ribbon_module(shape, n)
        tail_contents = [ribbon_module(Composition((r,)), n).content_of(k) for k in range(dim_sym(r, n))]
        for t_idx, terms in enumerate(delta_split(shape, n)):
            split.append((src.content_of(t_idx), [(tail_contents[k], c) for _, k, c in terms]))
    table = []
    for t in range(start, t_max + 1):
        if not _in_progression(r + t, rprime, d):
            table.append({"degree": t, "dim": 0, "expected": 0})
            continue
        dim = 0
        for tau in _shifts(t, n, r):
            unknowns = [b for b in gens if all(x + y >= 0 for x, y in zip(b, tau))]
            if not unknowns:
                continue
            pos = {b: k for k, b in enumerate(unknowns)}
            rows = []
            for content, terms in split:
                if any(x + y < 0 for x, y in zip(content, tau)):
                    continue
                row: dict[int, int] = {}
                for b, c in terms:
                    if b in pos:
                        row[pos[b]] = row.get(pos[b], 0) + c
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
            # one equation per SSYT, stored as a column
            equations = SparseMatrix(len(unknowns), len(rows), rows)
            dim += len(unknowns) - (rank(equations, field_ring) if rows else 0)
        expected = hom_expected(d, r, rprime, n, t)
        if dim != expected:
            raise VerificationError(f"Hom dimension mismatch in degree {t}", t=t, computed=dim, expected=expected)
        table.append({"degree": t, "dim": dim, "expected": expected})
    return {"d": d, "r": r, "rprime": rprime, "n": n, "ring": str(ring), "generating_degree": low,
            "t_max": t_max, "table": table}


def hom_expected(d: int, r: int, rprime: int, n: int, t: int) -> int:
    if n == 1:
        # one variable: Hom is free of rank one on the map x^r -> x^r'
        return 1 if _in_progression(t, rprime - r, d) else 0
    return veronese_dim(d, hom_target_degree(d, r, rprime), n, t)
