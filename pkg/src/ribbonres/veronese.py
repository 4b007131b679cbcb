"""Veronese modules and their ribbon resolutions, verified degree by degree.

R = S^(d) is the Veronese subring of S = k[x_1..x_n] and M = S^(d, r) the
module of forms of degree >= r congruent to r mod d.  Step i of the
resolution is R (x) S^{sigma(d^i, r)}, generated in degree d*i + r, and its
differential in internal degree j is the ribbon block with S-degree
p = j - d*i - r.

All checks run one torus weight at a time: every map preserves the
multidegree, and the weight-a piece of R_p (x) S^{sigma(alpha)} has a basis
indexed by the SSYT of content <= a.  With ``weights="dominant"`` only
weakly decreasing multidegrees are computed and multiplied by orbit sizes,
which is sound because permuting variables commutes with every map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .combinatorics import Composition, power
from .errors import DegenerateInputError, VerificationError
from .linalg import QQ, CoefficientRing, SparseMatrix, homology_dim, rank, smith_form
from .ribbon_complex import PartialBlock, delta_split, partial_block, weight_basis, weight_block
from .schur_module import dim_sym, monomials, ribbon_module
from .symfunc import orbit_size, partitions, ribbon_schur


@dataclass(frozen=True)
class VeroneseModule:
    d: int
    r: int
    n: int

    def supported(self, j: int) -> bool:
        return j >= self.r and (j - self.r) % self.d == 0

    def component_dim(self, j: int) -> int:
        return dim_sym(j, self.n) if self.supported(j) else 0


def weights(degree: int, n: int, mode: str = "all") -> Iterator[tuple[tuple[int, ...], int]]:
    """Multidegrees of the given total degree with the multiplicity each stands for."""
    if mode == "all":
        for a in monomials(degree, n):
            yield a, 1
    elif mode == "dominant":
        for lam in partitions(degree, n):
            yield lam + (0,) * (n - len(lam)), orbit_size(lam, n)
    else:
        raise ValueError(f"unknown weight mode {mode!r}")


@dataclass
class ResolutionWindow:
    d: int
    r: int
    n: int
    ring: CoefficientRing
    i_max: int
    deg_max: int
    shapes: list[Composition] = field(default_factory=list)
    generator_degrees: list[int] = field(default_factory=list)
    _blocks: dict = field(default_factory=dict, repr=False)

    @property
    def module(self) -> VeroneseModule:
        return VeroneseModule(self.d, self.r, self.n)

    def degrees(self) -> list[int]:
        return list(range(self.r, self.deg_max + 1, self.d))

    def term_dim(self, i: int, j: int) -> int:
        p = j - self.generator_degrees[i]
        if p < 0 or p % self.d:
            return 0
        return dim_sym(p, self.n) * ribbon_module(self.shapes[i], self.n).dim

    def block(self, i: int, j: int) -> PartialBlock | None:
        """The differential from step i to step i-1 in internal degree j (i >= 1)."""
        if not 1 <= i <= self.i_max:
            raise IndexError("block index outside the window")
        p = j - self.generator_degrees[i]
        if p < 0 or p % self.d:
            return None
        key = (i, j)
        if key not in self._blocks:
            self._blocks[key] = partial_block(self.shapes[i], p, self.n, self.ring)
        return self._blocks[key]

    @property
    def blocks(self) -> dict[tuple[int, int], PartialBlock]:
        for i in range(1, self.i_max + 1):
            for j in self.degrees():
                self.block(i, j)
        return {k: v for k, v in sorted(self._blocks.items()) if v is not None}

    def augmentation(self, j: int) -> SparseMatrix:
        """Multiplication R_{j-r} (x) S^r -> S^j."""
        src = monomials(j - self.r, self.n)
        gens = monomials(self.r, self.n)
        tgt = {m: k for k, m in enumerate(monomials(j, self.n))}
        cols = [{tgt[tuple(x + y for x, y in zip(u, g))]: 1} for u in src for g in gens]
        return SparseMatrix(len(tgt), len(cols), cols).reduced(self.ring)


def build_resolution(d: int, r: int, n: int, ring: CoefficientRing = QQ, i_max: int = 4,
                     deg_max: int | None = None) -> ResolutionWindow:
    if d < 1:
        raise ValueError("d must be positive")
    if r == 0:
        raise DegenerateInputError("r = 0 gives M = R, which is free: its resolution is R itself")
    if r < 0 or n < 1 or i_max < 0:
        raise ValueError("need r >= 1, n >= 1, i_max >= 0")
    if deg_max is None:
        deg_max = r + 5 * d
    shapes = [power(d, i, r) for i in range(i_max + 1)]
    gens = [d * i + r for i in range(i_max + 1)]
    return ResolutionWindow(d, r, n, ring, i_max, deg_max, shapes, gens)


def _weight_differential(W: ResolutionWindow, i: int, a: tuple[int, ...]) -> SparseMatrix:
    """Weight-a piece of the step-i differential (i >= 1), or of the
    augmentation when i == 0, over Z."""
    if i == 0:
        gens = weight_basis(ribbon_module(W.shapes[0], W.n), a)
        return SparseMatrix(1, len(gens), [{0: 1} for _ in gens])
    matrix, _, _ = weight_block(W.shapes[i], a, W.n)
    return matrix


def verify_exactness(W: ResolutionWindow, mode: str = "all") -> dict:
    """Exactness of R (x) S^{sigma(d^i, r)} -> ... -> M -> 0 in every degree of the window."""
    ring = W.ring
    table = []
    for j in W.degrees():
        row = {"degree": j, "term_dims": [W.term_dim(i, j) for i in range(W.i_max + 1)],
               "ranks": [0] * (W.i_max + 1), "homology": [0] * W.i_max, "m_dim": W.module.component_dim(j)}
        for a, mult in weights(j, W.n, mode):
            integer = [_weight_differential(W, i, a) for i in range(W.i_max + 1)]
            # composites are checked over Z so that a sign error is visible in every characteristic
            for i in range(W.i_max):
                if integer[i].ncols and integer[i + 1].ncols and not (integer[i] @ integer[i + 1]).is_zero():
                    raise VerificationError("image not contained in kernel", i=i, j=j, weight=list(a))
            mats = [m.reduced(ring) for m in integer]
            for i in range(W.i_max + 1):
                row["ranks"][i] += mult * (rank(mats[i], ring) if mats[i].ncols else 0)
            # augmentation onto the single monomial x^a
            aug = mats[0]
            if aug.ncols:
                if ring.kind == "z":
                    surjective = smith_form(aug) == [1]
                else:
                    surjective = rank(aug, ring) == 1
                if not surjective:
                    raise VerificationError("augmentation is not surjective", i=0, j=j, weight=list(a))
            for i in range(W.i_max):
                d_out, d_in = mats[i], mats[i + 1]
                if d_out.ncols == 0:
                    continue
                h, torsion = homology_dim(d_in if d_in.ncols else SparseMatrix(d_out.ncols, 0), d_out, ring)
                if h or torsion:
                    raise VerificationError(
                        f"homology at step {i} in degree {j}", i=i, j=j, weight=list(a), dim=h, torsion=torsion
                    )
                row["homology"][i] += mult * h
        coker = row["term_dims"][0] - row["ranks"][1] if W.i_max >= 1 else row["term_dims"][0]
        if coker != row["m_dim"]:
            raise VerificationError("cokernel of the first differential is not M", i=0, j=j,
                                    computed=coker, expected=row["m_dim"])
        if row["ranks"][0] != row["m_dim"]:
            raise VerificationError("augmentation rank differs from dim M_j", i=0, j=j)
        for i in range(W.i_max):
            kernel = row["term_dims"][i] - row["ranks"][i]
            if kernel != row["ranks"][i + 1]:
                raise VerificationError(f"ker != im at step {i}", i=i, j=j, kernel=kernel, image=row["ranks"][i + 1])
        # Euler characteristic when every step living in degree j is inside the window
        if W.d * (W.i_max + 1) + W.r > j:
            euler = sum((-1) ** i * t for i, t in enumerate(row["term_dims"]))
            if euler != row["m_dim"]:
                raise VerificationError("Euler characteristic mismatch", j=j, computed=euler, expected=row["m_dim"])
            row["euler"] = euler
        table.append(row)
    return {"d": W.d, "r": W.r, "n": W.n, "ring": str(ring), "i_max": W.i_max, "deg_max": W.deg_max,
            "shapes": [list(s) for s in W.shapes], "generator_degrees": W.generator_degrees, "table": table}


def reduced_differential(W: ResolutionWindow, i: int) -> SparseMatrix:
    """The differential of step i tensored down to k: entries of the R-matrix
    of the step-i differential that are constants (degree-0 elements of R)."""
    source = ribbon_module(W.shapes[i], W.n)
    target = ribbon_module(W.shapes[i - 1], W.n)
    cols = []
    for terms in delta_split(W.shapes[i], W.n):
        col: dict[int, int] = {}
        for mono, t, c in terms:
            if sum(mono) == 0:
                col[t] = col.get(t, 0) + c
        cols.append(col)
    return SparseMatrix(target.dim, source.dim, cols).reduced(W.ring)


def verify_minimality(W: ResolutionWindow) -> dict:
    checked = []
    for i in range(1, W.i_max + 1):
        reduced = reduced_differential(W, i)
        if not reduced.is_zero_over(W.ring):
            raise VerificationError(f"reduced differential at step {i} is nonzero", i=i, nnz=reduced.nnz)
        degrees = {sum(mono) for terms in delta_split(W.shapes[i], W.n) for mono, _, _ in terms}
        if degrees and degrees != {W.d}:
            raise VerificationError(f"matrix entries of step {i} are not of degree d", i=i, degrees=sorted(degrees))
        checked.append({"i": i, "entry_degrees": sorted(degrees), "shape": list(reduced.shape)})
    return {"d": W.d, "r": W.r, "n": W.n, "ring": str(W.ring), "steps": checked}


def betti(d: int, r: int, n: int, i: int, ring: CoefficientRing = QQ) -> tuple[int, int]:
    """(degree, dimension) of Tor_i(M, k), read off the minimal resolution."""
    if d < 1 or r < 1 or i < 0:
        raise ValueError("need d, r >= 1 and i >= 0")
    shape = power(d, i, r)
    module = ribbon_module(shape, n)
    dim = module.dim
    jt = ribbon_schur(shape, n, "jacobi_trudi").at_ones()
    if jt != dim:
        raise VerificationError("SSYT count disagrees with the Jacobi-Trudi dimension", d=d, r=r, i=i, n=n)
    W = build_resolution(d, r, n, ring, i_max=max(i, 1), deg_max=d * i + r)
    if i >= 1 and not reduced_differential(W, i).is_zero_over(ring):
        raise VerificationError("resolution is not minimal", d=d, r=r, i=i)
    return d * i + r, dim
