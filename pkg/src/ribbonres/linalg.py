"""Exact sparse linear algebra over Q, F_p and Z.

Matrices are stored column-major as dicts ``row -> value``.  Field
elimination processes columns in order and pivots on the smallest row index
still present; over Q it runs fraction-free on integers, dividing each
reduced vector by the gcd of its content to keep entries small.  Integer
homology goes through a Smith normal form that first eliminates unit pivots
sparsely and then finishes densely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import FieldRequiredError, NotAComplexError

Vector = dict  # row index (or any hashable key) -> nonzero value


@dataclass(frozen=True)
class CoefficientRing:
    kind: str  # "q", "fp" or "z"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("q", "fp", "z"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "fp":
            if self.p is None or self.p < 2 or any(self.p % k == 0 for k in range(2, int(self.p**0.5) + 1)):
                raise ValueError(f"{self.p} is not a prime")

    @staticmethod
    def parse(text: str | CoefficientRing) -> CoefficientRing:
        if isinstance(text, CoefficientRing):
            return text
        s = text.strip().lower()
        if s in ("q", "qq", "rationals"):
            return QQ
        if s in ("z", "zz", "integers"):
            return ZZ
        if s.startswith("fp:"):
            return CoefficientRing("fp", int(s[3:]))
        raise ValueError(f"cannot parse ring {text!r}; use q, z or fp:<prime>")

    @property
    def is_field(self) -> bool:
        return self.kind != "z"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "fp" else 0

    def reduce(self, x):
        if self.kind == "fp":
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return x % self.p
        return x

    def is_unit(self, x) -> bool:
        if self.kind == "z":
            return x in (1, -1)
        return self.reduce(x) != 0

    def inverse(self, x):
        if self.kind == "fp":
            return pow(x % self.p, -1, self.p)
        if self.kind == "q":
            return Fraction(1) / x
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def __str__(self) -> str:
        return f"fp:{self.p}" if self.kind == "fp" else self.kind


QQ = CoefficientRing("q")
ZZ = CoefficientRing("z")


def GF(p: int) -> CoefficientRing:
    return CoefficientRing("fp", p)


class SparseMatrix:
    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: Sequence[Mapping] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise ValueError("column count mismatch")
        self.cols = [{r: v for r, v in c.items() if v} for c in cols]
        for c in self.cols:
            for r in c:
                if not 0 <= r < nrows:
                    raise IndexError(f"row {r} outside 0..{nrows - 1}")

    @staticmethod
    def from_entries(nrows: int, ncols: int, entries: Mapping[tuple[int, int], object]) -> SparseMatrix:
        cols = [{} for _ in range(ncols)]
        for (r, c), v in entries.items():
            if v:
                cols[c][r] = v
        return SparseMatrix(nrows, ncols, cols)

    @staticmethod
    def from_dense(rows: Sequence[Sequence]) -> SparseMatrix:
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return SparseMatrix(nrows, ncols, [{i: rows[i][j] for i in range(nrows) if rows[i][j]} for j in range(ncols)])

    @staticmethod
    def identity(n: int) -> SparseMatrix:
        return SparseMatrix(n, n, [{i: 1} for i in range(n)])

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def entries(self) -> dict[tuple[int, int], object]:
        return {(i, j): v for j, col in enumerate(self.cols) for i, v in col.items()}

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def is_zero(self) -> bool:
        return not any(self.cols)

    def reduced(self, ring: CoefficientRing) -> SparseMatrix:
        if ring.kind != "fp":
            return self
        return SparseMatrix(self.nrows, self.ncols, [{r: v % ring.p for r, v in c.items()} for c in self.cols])

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for bcol in other.cols:
            acc: dict = {}
            for k, b in bcol.items():
                for i, a in self.cols[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            out.append(acc)
        return SparseMatrix(self.nrows, other.ncols, out)

    def apply(self, vec: Mapping[int, object]) -> dict:
        acc: dict = {}
        for k, b in vec.items():
            for i, a in self.cols[k].items():
                acc[i] = acc.get(i, 0) + a * b
        return {i: v for i, v in acc.items() if v}

    def transpose(self) -> SparseMatrix:
        cols = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                cols[i][j] = v
        return SparseMatrix(self.ncols, self.nrows, cols)

    def hstack(self, other: SparseMatrix) -> SparseMatrix:
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return SparseMatrix(self.nrows, self.ncols + other.ncols, self.cols + other.cols)

    def scaled(self, s) -> SparseMatrix:
        return SparseMatrix(self.nrows, self.ncols, [{r: s * v for r, v in c.items()} for c in self.cols])

    def equals(self, other: SparseMatrix, ring: CoefficientRing | None = None) -> bool:
        if self.shape != other.shape:
            return False
        ring = ring or ZZ
        for a, b in zip(self.cols, other.cols):
            keys = set(a) | set(b)
            if any(ring.reduce(a.get(k, 0) - b.get(k, 0)) for k in keys):
                return False
        return True

    def is_zero_over(self, ring: CoefficientRing) -> bool:
        return all(not ring.reduce(v) for c in self.cols for v in c.values())

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


@dataclass
class Subspace:
    ambient_dim: int
    basis: SparseMatrix

    @property
    def dim(self) -> int:
        return self.basis.ncols

    @staticmethod
    def span(ambient_dim: int, vectors: Iterable[Mapping], ring: CoefficientRing = QQ) -> Subspace:
        vecs = list(vectors)
        m = SparseMatrix(ambient_dim, len(vecs), vecs)
        _, _, image = rank_kernel_image(m, ring)
        return image


# --- field elimination -------------------------------------------------------------


def _content_gcd(*vecs: Mapping) -> int:
    g = 0
    for v in vecs:
        for x in v.values():
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def _denominator(col: Mapping) -> int:
    den = 1
    for v in col.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    return den


def _integral(col: Mapping) -> dict:
    den = _denominator(col)
    if den == 1:
        return {k: int(v) for k, v in col.items() if v}
    return {k: int(v * den) for k, v in col.items() if v}


class Echelon:
    """Incremental column echelon form over a field.

    Each stored pivot is a pair ``(b, combo)`` with ``b = A @ combo`` where
    ``A`` is the sequence of columns fed so far (combo tracked on request).
    The pivot key of ``b`` is its smallest key.
    """

    def __init__(self, ring: CoefficientRing, track: bool = False):
        if not ring.is_field:
            raise FieldRequiredError("elimination needs a field; use smith_homology over Z")
        self.ring = ring
        self.track = track
        self.pivots: dict = {}
        self.count = 0

    def _prepare(self, col: Mapping) -> dict:
        if self.ring.kind == "fp":
            out = {}
            for k, v in col.items():
                v = self.ring.reduce(v)
                if v:
                    out[k] = v
            return out
        return _integral(col)

    def _reduce(self, v: dict, combo: dict | None, scale: int | None):
        """Clear pivot keys from ``v``; ``combo`` receives ``a*combo - c*bc`` per
        step and ``scale`` the product of the multipliers ``a``."""
        pivots = self.pivots
        if self.ring.kind == "fp":
            p = self.ring.p
            while v:
                k = min(v)
                hit = pivots.get(k)
                if hit is None:
                    break
                b, bc = hit
                c = v[k]  # pivots are normalized to 1
                for key, x in b.items():
                    y = (v.get(key, 0) - c * x) % p
                    if y:
                        v[key] = y
                    else:
                        v.pop(key, None)
                if combo is not None:
                    for key, x in bc.items():
                        y = (combo.get(key, 0) - c * x) % p
                        if y:
                            combo[key] = y
                        else:
                            combo.pop(key, None)
            return v, combo, scale
        while v:
            k = min(v)
            hit = pivots.get(k)
            if hit is None:
                break
            b, bc = hit
            a, c = b[k], v[k]
            g = gcd(a, c)
            a, c = a // g, c // g
            if a < 0:
                a, c = -a, -c
            nv = {key: a * x for key, x in v.items()} if a != 1 else v
            for key, x in b.items():
                y = nv.get(key, 0) - c * x
                if y:
                    nv[key] = y
                else:
                    nv.pop(key, None)
            v = nv
            if scale is not None:
                scale *= a
            if combo is not None:
                nc = {key: a * x for key, x in combo.items()} if a != 1 else combo
                for key, x in bc.items():
                    y = nc.get(key, 0) - c * x
                    if y:
                        nc[key] = y
                    else:
                        nc.pop(key, None)
                combo = nc
            if a != 1:
                g = _content_gcd(v, combo or {}, {0: scale} if scale is not None else {})
                if g > 1:
                    v = {key: x // g for key, x in v.items()}
                    if combo is not None:
                        combo = {key: x // g for key, x in combo.items()}
                    if scale is not None:
                        scale //= g
        return v, combo, scale

    def add(self, col: Mapping, label=None):
        """Feed a column.  Returns None if it became a new pivot, otherwise a
        relation ``combo`` (label -> coefficient) with ``A @ combo == 0``."""
        label = self.count if label is None else label
        self.count += 1
        v = self._prepare(col)
        combo = None
        if self.track:
            combo = {label: _denominator(col) if self.ring.kind == "q" else 1}
        elif self.ring.kind == "q" and v:
            g = _content_gcd(v)
            if g > 1:
                v = {key: x // g for key, x in v.items()}
        v, combo, _ = self._reduce(v, combo, None)
        if v:
            k = min(v)
            if self.ring.kind == "fp":
                p = self.ring.p
                inv = pow(v[k], -1, p)
                v = {key: x * inv % p for key, x in v.items()}
                if combo is not None:
                    combo = {key: x * inv % p for key, x in combo.items()}
            self.pivots[k] = (v, combo)
            return None
        return combo if combo is not None else {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, vec: Mapping):
        """Coefficients (label -> value) with ``A @ c == vec``, or None."""
        v = self._prepare(vec)
        if self.ring.kind == "fp":
            v, combo, _ = self._reduce(v, {}, None)
            if v:
                return None
            p = self.ring.p
            return {key: -x % p for key, x in combo.items() if x % p}
        den = _denominator(vec)
        # invariant: v = scale * den * vec + A @ combo
        v, combo, scale = self._reduce(v, {}, 1)
        if v:
            return None
        div = scale * den
        out = {}
        for key, x in combo.items():
            q = Fraction(-x, div)
            out[key] = q.numerator if q.denominator == 1 else q
        return out


def rank(A: SparseMatrix, ring: CoefficientRing = QQ) -> int:
    if ring.kind == "z":
        return len(smith_form(A))
    ech = Echelon(ring)
    for col in A.cols:
        if col:
            ech.add(col)
    return ech.rank


def rank_kernel_image(A: SparseMatrix, ring: CoefficientRing = QQ) -> tuple[int, Subspace, Subspace]:
    if not ring.is_field:
        raise FieldRequiredError("rank_kernel_image needs a field; use smith_homology over Z")
    ech = Echelon(ring, track=True)
    kernel, image = [], []
    source = A.reduced(ring)
    for j, col in enumerate(source.cols):
        rel = ech.add(col, j)
        if rel is None:
            image.append(dict(col))
        else:
            kernel.append(rel)
    r = ech.rank
    return (
        r,
        Subspace(A.ncols, SparseMatrix(A.ncols, len(kernel), kernel)),
        Subspace(A.nrows, SparseMatrix(A.nrows, len(image), image)),
    )


def kernel(A: SparseMatrix, ring: CoefficientRing = QQ) -> Subspace:
    return rank_kernel_image(A, ring)[1]


class SpanSolver:
    """Repeated coordinate solves against a fixed list of vectors."""

    def __init__(self, vectors: Sequence[Mapping], ring: CoefficientRing = QQ):
        self.ring = ring
        self.size = len(vectors)
        self.ech = Echelon(ring, track=True)
        self.dependent = []
        for j, vec in enumerate(vectors):
            if self.ech.add(vec, j) is not None:
                self.dependent.append(j)

    @property
    def independent(self) -> bool:
        return not self.dependent

    def solve(self, vec: Mapping):
        c = self.ech.solve(vec)
        if c is None:
            return None
        return [c.get(j, 0) for j in range(self.size)]


def solve_in_span(B: Subspace, v: Mapping | Sequence, ring: CoefficientRing = QQ):
    if not isinstance(v, Mapping):
        if len(v) != B.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        v = {i: x for i, x in enumerate(v) if x}
    return SpanSolver(B.basis.cols, ring).solve(v)


def intersect(U: Subspace, W: Subspace, ring: CoefficientRing = QQ) -> Subspace:
    if U.ambient_dim != W.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    stacked = U.basis.hstack(W.basis)
    _, ker, _ = rank_kernel_image(stacked, ring)
    k = U.dim
    vecs = []
    for rel in ker.basis.cols:
        x = {j: c for j, c in rel.items() if j < k}
        vecs.append(U.basis.apply(x))
    if ring.kind == "fp":
        vecs = [{r: v % ring.p for r, v in vec.items() if v % ring.p} for vec in vecs]
    return Subspace(U.ambient_dim, SparseMatrix(U.ambient_dim, len(vecs), vecs))


def contains(U: Subspace, vectors: Iterable[Mapping], ring: CoefficientRing = QQ) -> bool:
    solver = SpanSolver(U.basis.cols, ring)
    return all(solver.solve(v) is not None for v in vectors)


# --- Smith normal form -------------------------------------------------------------


def _unit_eliminate(A: SparseMatrix) -> tuple[int, dict[int, dict[int, int]]]:
    """Eliminate +-1 pivots.  Returns (number of unit invariant factors, remaining rows)."""
    rows: dict[int, dict[int, int]] = {}
    colrows: dict[int, set[int]] = {}
    for j, col in enumerate(A.cols):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = int(v)
            colrows.setdefault(j, set()).add(i)
    units = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(colrows, key=lambda c: (len(colrows[c]), c)):
            if j not in colrows:
                continue
            cand = [i for i in colrows[j] if rows[i][j] in (1, -1)]
            if not cand:
                continue
            i = min(cand, key=lambda r: (len(rows[r]), r))
            prow = rows.pop(i)
            u = prow[j]
            for jj in prow:
                colrows[jj].discard(i)
            for k in sorted(colrows[j]):
                f = rows[k][j] * u
                rk = rows[k]
                for jj, x in prow.items():
                    y = rk.get(jj, 0) - f * x
                    if y:
                        if jj not in rk:
                            colrows[jj].add(k)
                        rk[jj] = y
                    elif jj in rk:
                        del rk[jj]
                        colrows[jj].discard(k)
                if not rk:
                    del rows[k]
            del colrows[j]
            for jj in list(prow):
                if jj in colrows and not colrows[jj]:
                    del colrows[jj]
            units += 1
            progress = True
    return units, rows


def _dense_smith(mat: list[list[int]]) -> list[int]:
    a = [row[:] for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // piv
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // piv
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % piv),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            best = (t, t)
            for i in range(t, m):
                if a[i][t] and abs(a[i][t]) < abs(a[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, n):
                if a[t][j] and abs(a[t][j]) < abs(a[best[0]][best[1]]):
                    best = (t, j)
            i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def smith_form(A: SparseMatrix) -> list[int]:
    """Nonzero invariant factors of an integer matrix, in divisibility order."""
    units, rows = _unit_eliminate(A)
    rest: list[int] = []
    if rows:
        rkeys = sorted(rows)
        ckeys = sorted({j for r in rows.values() for j in r})
        cidx = {j: k for k, j in enumerate(ckeys)}
        dense = [[0] * len(ckeys) for _ in rkeys]
        for a, i in enumerate(rkeys):
            for j, v in rows[i].items():
                dense[a][cidx[j]] = v
        rest = _dense_smith(dense)
    return [1] * units + sorted(rest)


def smith_homology(d_in: SparseMatrix, d_out: SparseMatrix) -> tuple[int, list[int]]:
    """Homology at the middle of ``C' --d_in--> C --d_out--> C''`` over Z."""
    if d_in.nrows != d_out.ncols:
        raise ValueError("d_in target and d_out source differ")
    if d_in.ncols and d_out.nrows and not (d_out @ d_in).is_zero():
        raise NotAComplexError("d_out @ d_in is nonzero")
    f_in = smith_form(d_in)
    r_out = len(smith_form(d_out))
    free = d_in.nrows - r_out - len(f_in)
    return free, [f for f in f_in if f > 1]


def homology_dim(d_in: SparseMatrix, d_out: SparseMatrix, ring: CoefficientRing) -> tuple[int, list[int]]:
    """(free rank, torsion) over Z, or (dimension, []) over a field."""
    if ring.kind == "z":
        return smith_homology(d_in, d_out)
    if d_in.nrows != d_out.ncols:
        raise ValueError("d_in target and d_out source differ")
    return d_in.nrows - rank(d_out, ring) - rank(d_in, ring), []
