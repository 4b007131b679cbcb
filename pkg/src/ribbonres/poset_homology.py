"""Order complexes of rank-selected Boolean lattices and of Veronese divisor posets.

Reduced homology is computed over Z with Smith normal form, or over a field
by rank.  The empty complex has reduced homology Z in dimension -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import accumulate
from math import comb
from typing import Sequence

from .combinatorics import Composition, compositions, power
from .errors import ResourceError, VerificationError
from .linalg import QQ, CoefficientRing, SparseMatrix, rank, smith_form
from .schur_module import monomials, ribbon_module, weight_space_dim
from .symfunc import coeff_at, ribbon_schur

DEFAULT_CAP = 2500


@dataclass(frozen=True)
class RankSelectedPoset:
    """Elements with a rank, ordered by ``less``.

    Boolean case: subsets of [m] as bitmasks, rank = size.  Divisor case:
    exponent vectors below a multidegree, rank = total degree.
    """

    m: int
    ranks: tuple[int, ...]
    elements: tuple = ()
    kind: str = "boolean"

    @staticmethod
    def boolean(m: int, ranks: Sequence[int], cap: int = DEFAULT_CAP) -> RankSelectedPoset:
        ranks = tuple(sorted(set(ranks)))
        if any(not 0 <= k <= m for k in ranks):
            raise ValueError(f"ranks must lie in 0..{m}")
        count = sum(comb(m, k) for k in ranks)
        if count > cap:
            raise ResourceError(f"{count} elements exceed the cap of {cap}")
        elems = sorted((mask for mask in range(1 << m) if bin(mask).count("1") in ranks),
                       key=lambda mask: (bin(mask).count("1"), mask))
        return RankSelectedPoset(m, ranks, tuple(elems), "boolean")

    @staticmethod
    def for_composition(alpha: Sequence[int], cap: int = DEFAULT_CAP) -> RankSelectedPoset:
        """Ranks at the partial sums of alpha, strictly inside [m]."""
        alpha = Composition(alpha)
        return RankSelectedPoset.boolean(alpha.size, tuple(accumulate(alpha))[:-1], cap)

    @staticmethod
    def veronese_divisors(d: int, r: int, a: Sequence[int], cap: int = DEFAULT_CAP) -> RankSelectedPoset:
        """Monomials x^b of M = S^(d, r) strictly below x^a, ordered by divisibility."""
        a = tuple(a)
        top = sum(a)
        ranks = tuple(k for k in range(r, top, d))
        elems = [b for k in ranks for b in monomials(k, len(a)) if all(x <= y for x, y in zip(b, a))]
        if len(elems) > cap:
            raise ResourceError(f"{len(elems)} elements exceed the cap of {cap}")
        elems.sort(key=lambda b: (sum(b), tuple(-x for x in b)))
        return RankSelectedPoset(top, ranks, tuple(elems), "divisors")

    def rank_of(self, x) -> int:
        return bin(x).count("1") if self.kind == "boolean" else sum(x)

    def less(self, x, y) -> bool:
        if self.kind == "boolean":
            return x != y and x & y == x
        return x != y and all(p <= q for p, q in zip(x, y))


@dataclass
class OrderComplexChainComplex:
    poset: RankSelectedPoset
    simplices: list[list[tuple[int, ...]]] = field(default_factory=list)
    boundaries: list[SparseMatrix] = field(default_factory=list)

    @property
    def top_dim(self) -> int:
        return len(self.simplices) - 1

    def face_counts(self) -> list[int]:
        return [len(s) for s in self.simplices]

    @cached_property
    def augmentation(self) -> SparseMatrix:
        n0 = len(self.simplices[0]) if self.simplices else 0
        return SparseMatrix(1, n0, [{0: 1} for _ in range(n0)])

    def boundary(self, k: int) -> SparseMatrix:
        """C_k -> C_{k-1}; k = 0 is the augmentation onto C_{-1} = Z."""
        if k == 0:
            return self.augmentation
        return self.boundaries[k - 1]


def build_order_complex(P: RankSelectedPoset, cap: int = DEFAULT_CAP) -> OrderComplexChainComplex:
    elems = P.elements
    if len(elems) > cap:
        raise ResourceError(f"{len(elems)} elements exceed the cap of {cap}")
    above = [[j for j in range(i + 1, len(elems)) if P.less(elems[i], elems[j])] for i in range(len(elems))]
    by_size: list[list[tuple[int, ...]]] = []
    stack = [(i,) for i in reversed(range(len(elems)))]
    while stack:
        chain = stack.pop()
        while len(by_size) < len(chain):
            by_size.append([])
        by_size[len(chain) - 1].append(chain)
        for j in reversed(above[chain[-1]]):
            stack.append(chain + (j,))
    for level in by_size:
        level.sort()
    boundaries = []
    for k in range(1, len(by_size)):
        index = {s: t for t, s in enumerate(by_size[k - 1])}
        cols = []
        for s in by_size[k]:
            cols.append({index[s[:j] + s[j + 1:]]: (-1) ** j for j in range(len(s))})
        boundaries.append(SparseMatrix(len(by_size[k - 1]), len(by_size[k]), cols))
    C = OrderComplexChainComplex(P, by_size, boundaries)
    for k in range(1, len(boundaries)):
        if not (boundaries[k - 1] @ boundaries[k]).is_zero():
            raise VerificationError("boundary squared is nonzero", dim=k)
    return C


def homology_ranks(C: OrderComplexChainComplex, ring: CoefficientRing = QQ) -> dict[int, tuple[int, list[int]]]:
    """Reduced homology: dimension -> (rank, torsion invariants)."""
    sizes = [1] + C.face_counts()  # C_{-1} = Z
    maps = [C.boundary(k) for k in range(len(sizes) - 1)]  # maps[k]: C_k -> C_{k-1}
    if ring.kind == "z":
        forms = [smith_form(m) for m in maps]
        ranks = [len(f) for f in forms]
    else:
        forms = [[] for _ in maps]
        ranks = [rank(m.reduced(ring), ring) for m in maps]
    out = {}
    for pos, size in enumerate(sizes):
        dim = pos - 1
        r_out = ranks[pos - 1] if pos >= 1 else 0
        r_in = ranks[pos] if pos < len(ranks) else 0
        torsion = [f for f in forms[pos] if f > 1] if pos < len(forms) else []
        out[dim] = (size - r_out - r_in, torsion)
    return out


def _concentration(H: dict[int, tuple[int, list[int]]]) -> tuple[list[int], list[int]]:
    support = [k for k, (r, _) in H.items() if r]
    torsion = [t for _, (_, ts) in H.items() for t in ts]
    return support, torsion


def specht_dim(alpha: Sequence[int]) -> int:
    alpha = Composition(alpha)
    m = alpha.size
    return weight_space_dim(ribbon_module(alpha, m), (1,) * m)


def verify_solomon(alpha: Sequence[int], ring: CoefficientRing | None = None) -> dict:
    """Reduced homology of the rank selection at the partial sums of alpha is
    concentrated in dimension len(alpha) - 2 with rank the skew Specht dimension."""
    alpha = Composition(alpha)
    if alpha.size > 8:
        raise ResourceError("m = |alpha| is capped at 8")
    C = build_order_complex(RankSelectedPoset.for_composition(alpha))
    H = homology_ranks(C, ring or CoefficientRing("z"))
    expected_dim = len(alpha) - 2
    expected = specht_dim(alpha)
    support, torsion = _concentration(H)
    if torsion:
        raise VerificationError("order complex homology has torsion", alpha=list(alpha), torsion=torsion)
    if support != [expected_dim] or H[expected_dim][0] != expected:
        raise VerificationError(
            f"homology of the rank selection for {tuple(alpha)} is not concentrated as predicted",
            alpha=list(alpha), support=support, computed=H.get(expected_dim, (0,))[0], expected=expected,
        )
    euler = sum((-1) ** k * c for k, c in enumerate(C.face_counts()))
    if euler - 1 != (-1) ** expected_dim * expected:
        raise VerificationError("reduced Euler characteristic mismatch", alpha=list(alpha))
    return {"alpha": list(alpha), "m": alpha.size, "dimension": expected_dim, "rank": expected,
            "homology_rank": H[expected_dim][0], "faces": C.face_counts()}


def verify_tor_poset_link(d: int, r: int, i: int, n: int = 3, samples: int | None = None) -> dict:
    """Tor_i(M, k) in a multidegree a against the divisor-poset homology below x^a.

    Squarefree a = (1^m) uses the rank-selected Boolean lattice; the other
    multidegrees of total degree d*i + r in n variables use the divisor poset
    directly.  Both sides are compared with the weight space of S^{sigma(d^i, r)}.
    """
    if d < 1 or r < 1 or i < 0:
        raise ValueError("need d, r >= 1 and i >= 0")
    m = d * i + r
    if m > 8:
        raise ResourceError("m = d*i + r is capped at 8")
    shape = power(d, i, r)
    rows = []
    # squarefree weight: Boolean lattice with ranks r, r+d, ..., r+(i-1)d
    P = RankSelectedPoset.boolean(m, range(r, m, d))
    H = homology_ranks(build_order_complex(P), CoefficientRing("z"))
    support, torsion = _concentration(H)
    weight = weight_space_dim(ribbon_module(shape, m), (1,) * m)
    if torsion or support != [i - 1] or H[i - 1][0] != weight:
        raise VerificationError("squarefree poset homology differs from the weight space",
                                d=d, r=r, i=i, support=support, expected=weight)
    rows.append({"multidegree": [1] * m, "poset_rank": H[i - 1][0], "weight_dim": weight})
    # general multidegrees in n variables
    module = ribbon_module(shape, n)
    character = ribbon_schur(shape, n)
    degrees = monomials(m, n) if samples is None else monomials(m, n)[:samples]
    for a in degrees:
        Q = RankSelectedPoset.veronese_divisors(d, r, a)
        Ha = homology_ranks(build_order_complex(Q), CoefficientRing("z"))
        sup, tors = _concentration(Ha)
        # the reduced resolution has zero differentials, so Tor_i(M, k)_a is the content-a part of step i
        tor_piece = len(module.by_content.get(tuple(a), []))
        want = coeff_at(character, a)
        poset_rank = Ha.get(i - 1, (0, []))[0]
        if tors or (sup and sup != [i - 1]) or poset_rank != want or tor_piece != want:
            raise VerificationError("multidegree piece mismatch", d=d, r=r, i=i, multidegree=list(a),
                                    poset=poset_rank, tor=tor_piece, character=want, support=sup)
        rows.append({"multidegree": list(a), "poset_rank": poset_rank, "weight_dim": want})
    # one step further up, Tor_i vanishes
    for a in monomials(m + d, n)[: samples or None]:
        Ha = homology_ranks(build_order_complex(RankSelectedPoset.veronese_divisors(d, r, a)), CoefficientRing("z"))
        if Ha.get(i - 1, (0, []))[0]:
            raise VerificationError("poset homology in the wrong internal degree", multidegree=list(a), i=i)
    return {"d": d, "r": r, "i": i, "n": n, "m": m, "rows": rows}


def all_solomon(m_max: int = 7) -> list[dict]:
    return [verify_solomon(alpha) for m in range(1, m_max + 1) for alpha in compositions(m)]
