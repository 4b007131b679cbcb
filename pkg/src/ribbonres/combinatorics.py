"""Compositions, skew diagrams, ribbons and tableau enumeration.

Cells are ``(row, col)`` pairs with row 1 at the bottom, so a composition
lists ribbon row lengths from the bottom row upwards.  Tableaux are
column-strict in the top-to-bottom direction: a cell has a strictly smaller
entry than the cell directly beneath it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import InvalidCompositionError, UnsupportedDiagramError

Cell = tuple[int, int]


class Composition(tuple):
    """Immutable tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise InvalidCompositionError("empty composition")
        if any(p < 1 for p in parts):
            raise InvalidCompositionError(f"non-positive part in {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def concat(self, other: Sequence[int]) -> Composition:
        return compose(self, other, "concat")

    def near_concat(self, other: Sequence[int]) -> Composition:
        return compose(self, other, "near_concat")

    def __repr__(self) -> str:
        return f"Composition({tuple(self)})"


def compose(alpha: Sequence[int], beta: Sequence[int], kind: str = "concat") -> Composition:
    a, b = Composition(alpha), Composition(beta)
    if kind == "concat":
        return Composition(a + b)
    if kind == "near_concat":
        return Composition(a[:-1] + (a[-1] + b[0],) + b[1:])
    raise ValueError(f"unknown composition kind {kind!r}")


def compositions(total: int) -> Iterator[Composition]:
    """All compositions of ``total``, in lexicographic order."""
    if total < 1:
        return
    for cuts in product((0, 1), repeat=total - 1):
        parts, run = [], 1
        for c in cuts:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield Composition(parts)


def power(d: int, i: int, r: int | None = None) -> Composition:
    """The composition (d, ..., d, r) with ``i`` copies of d; r omitted if None."""
    parts = [d] * i + ([] if r is None else [r])
    return Composition(parts)


@dataclass(frozen=True)
class SkewShape:
    cells: frozenset

    @staticmethod
    def of(cells: Iterable[Cell]) -> SkewShape:
        cells = list(cells)
        if not cells:
            return SkewShape(frozenset())
        r0 = min(r for r, _ in cells)
        c0 = min(c for _, c in cells)
        return SkewShape(frozenset((r - r0 + 1, c - c0 + 1) for r, c in cells))

    def __len__(self) -> int:
        return len(self.cells)

    @cached_property
    def reading_order(self) -> tuple[Cell, ...]:
        return tuple(sorted(self.cells))

    @cached_property
    def index(self) -> dict[Cell, int]:
        return {c: i for i, c in enumerate(self.reading_order)}

    @cached_property
    def rows(self) -> tuple[tuple[Cell, ...], ...]:
        """Nonempty rows bottom-to-top, each listed left-to-right."""
        by_row: dict[int, list[Cell]] = {}
        for cell in self.reading_order:
            by_row.setdefault(cell[0], []).append(cell)
        return tuple(tuple(by_row[r]) for r in sorted(by_row))

    @cached_property
    def columns(self) -> tuple[tuple[Cell, ...], ...]:
        """Nonempty columns left-to-right, each listed bottom-to-top."""
        by_col: dict[int, list[Cell]] = {}
        for cell in sorted(self.cells, key=lambda rc: (rc[1], rc[0])):
            by_col.setdefault(cell[1], []).append(cell)
        return tuple(tuple(by_col[c]) for c in sorted(by_col))

    @property
    def row_sizes(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)

    @property
    def max_row(self) -> int:
        return max(r for r, _ in self.cells)

    @property
    def max_col(self) -> int:
        return max(c for _, c in self.cells)

    @property
    def min_row(self) -> int:
        return min(r for r, _ in self.cells)

    @property
    def min_col(self) -> int:
        return min(c for _, c in self.cells)

    def shifted(self, dr: int, dc: int) -> frozenset:
        return frozenset((r + dr, c + dc) for r, c in self.cells)

    def __repr__(self) -> str:
        return f"SkewShape(rows={self.row_sizes}, cells={len(self.cells)})"

    def draw(self) -> str:
        """English-style picture, top row first."""
        if not self.cells:
            return ""
        lines = []
        for r in range(self.max_row, self.min_row - 1, -1):
            lines.append("".join("#" if (r, c) in self.cells else "." for c in range(1, self.max_col + 1)).rstrip("."))
        return "\n".join(lines)


def ribbon_shape(alpha: Sequence[int]) -> SkewShape:
    alpha = Composition(alpha)
    cells, start = [], 1
    for row, part in enumerate(alpha, start=1):
        cells.extend((row, c) for c in range(start, start + part))
        start += part - 1
    return SkewShape.of(cells)


def skew_shape(lam: Sequence[int], mu: Sequence[int] = ()) -> SkewShape:
    """The diagram lam/mu given in English notation (first part is the top row)."""
    lam = list(lam)
    mu = list(mu) + [0] * (len(lam) - len(mu))
    if len(mu) > len(lam) or any(m > l for l, m in zip(lam, mu)):
        raise UnsupportedDiagramError(f"{mu} does not fit inside {lam}")
    height = len(lam)
    cells = [(height - k, c) for k in range(height) for c in range(mu[k] + 1, lam[k] + 1)]
    return SkewShape.of(cells)


def as_skew_partition(shape: SkewShape) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Recover (lam, mu) in English order; raises if the cells are not a skew diagram."""
    if not shape.cells:
        return (), ()
    lam, mu = [], []
    top = shape.max_row
    for r in range(top, shape.min_row - 1, -1):
        cols = sorted(c for rr, c in shape.cells if rr == r)
        if not cols:
            raise UnsupportedDiagramError("diagram has an empty row")
        if cols != list(range(cols[0], cols[-1] + 1)):
            raise UnsupportedDiagramError("row is not contiguous")
        lam.append(cols[-1])
        mu.append(cols[0] - 1)
    for k in range(len(lam) - 1):
        if lam[k] < lam[k + 1] or mu[k] < mu[k + 1]:
            raise UnsupportedDiagramError("cells do not form a skew diagram")
    if skew_shape(lam, mu) != shape:
        raise UnsupportedDiagramError("cells do not form a skew diagram")
    return tuple(lam), tuple(mu)


def _require_corners(d1: SkewShape, d2: SkewShape) -> None:
    if not d1.cells or not d2.cells:
        raise UnsupportedDiagramError("empty diagram")
    if (d1.max_row, d1.max_col) not in d1.cells:
        raise UnsupportedDiagramError("first diagram has no northeast corner cell")
    if (d2.min_row, d2.min_col) not in d2.cells:
        raise UnsupportedDiagramError("second diagram has no southwest corner cell")


def diagram_compose(d1: SkewShape, d2: SkewShape, kind: str) -> SkewShape:
    if kind == "disjoint_sum":
        placed = d2.shifted(d1.max_row + 1 - d2.min_row, d1.max_col + 1 - d2.min_col)
    elif kind == "concat":
        _require_corners(d1, d2)
        placed = d2.shifted(d1.max_row + 1 - d2.min_row, d1.max_col - d2.min_col)
    elif kind == "near_concat":
        _require_corners(d1, d2)
        placed = d2.shifted(d1.max_row - d2.min_row, d1.max_col + 1 - d2.min_col)
    else:
        raise ValueError(f"unknown diagram operation {kind!r}")
    return SkewShape.of(d1.cells | placed)


def transpose(shape: SkewShape) -> SkewShape:
    # Conjugation of an English diagram, expressed in bottom-up coordinates.
    return SkewShape.of((-c, -r) for r, c in shape.cells)


@dataclass(frozen=True)
class Tableau:
    shape: SkewShape
    entries: tuple[int, ...]  # aligned with shape.reading_order

    @staticmethod
    def from_dict(shape: SkewShape, values: dict) -> Tableau:
        return Tableau(shape, tuple(values[c] for c in shape.reading_order))

    @staticmethod
    def from_rows(shape: SkewShape, rows: Sequence[Sequence[int]]) -> Tableau:
        """Entries given row by row, bottom row first."""
        flat = [v for row in rows for v in row]
        if len(flat) != len(shape.cells) or [len(r) for r in rows] != list(shape.row_sizes):
            raise ValueError("row data does not match shape")
        return Tableau(shape, tuple(flat))

    def __getitem__(self, cell: Cell) -> int:
        return self.entries[self.shape.index[cell]]

    def content(self, n: int) -> tuple[int, ...]:
        out = [0] * n
        for v in self.entries:
            out[v - 1] += 1
        return tuple(out)

    def is_column_increasing(self) -> bool:
        for col in self.shape.columns:
            vals = [self[c] for c in col]  # bottom-to-top
            if any(vals[k] <= vals[k + 1] for k in range(len(vals) - 1)):
                return False
        return True

    def is_ssyt(self) -> bool:
        if not self.is_column_increasing():
            return False
        for row in self.shape.rows:
            vals = [self[c] for c in row]
            if any(vals[k] > vals[k + 1] for k in range(len(vals) - 1)):
                return False
        return True

    def rows(self) -> list[list[int]]:
        return [[self[c] for c in row] for row in self.shape.rows]


def _constraints(shape: SkewShape):
    """For each cell in reading order: index of the nearest filled cell below it
    in its column and of the nearest cell to its left in its row (or -1)."""
    order = shape.reading_order
    idx = shape.index
    below, left = [], []
    for r, c in order:
        lower = [rr for rr, cc in shape.cells if cc == c and rr < r]
        below.append(idx[(max(lower), c)] if lower else -1)
        west = [cc for rr, cc in shape.cells if rr == r and cc < c]
        left.append(idx[(r, max(west))] if west else -1)
    return below, left


def iter_fillings(
    shape: SkewShape, n: int, kind: str = "ssyt", content: Sequence[int] | None = None
) -> Iterator[tuple[int, ...]]:
    """Entry tuples (reading order) in lexicographic order of the reading word."""
    if kind not in ("ssyt", "column_increasing"):
        raise ValueError(f"unknown tableau kind {kind!r}")
    below, left = _constraints(shape)
    row_rule = kind == "ssyt"
    size = len(below)
    remaining = list(content) if content is not None else None
    if remaining is not None and (len(remaining) != n or sum(remaining) != size):
        return
    vals = [0] * size

    def rec(k: int):
        if k == size:
            yield tuple(vals)
            return
        hi = n if below[k] < 0 else vals[below[k]] - 1
        lo = 1 if (not row_rule or left[k] < 0) else vals[left[k]]
        for v in range(lo, hi + 1):
            if remaining is not None:
                if not remaining[v - 1]:
                    continue
                remaining[v - 1] -= 1
            vals[k] = v
            yield from rec(k + 1)
            if remaining is not None:
                remaining[v - 1] += 1

    yield from rec(0)


def enumerate_tableaux(
    shape: SkewShape, n: int, kind: str = "ssyt", content: Sequence[int] | None = None
) -> list[Tableau]:
    if n < 1:
        raise ValueError("alphabet size must be positive")
    return [Tableau(shape, e) for e in iter_fillings(shape, n, kind, content)]


def count_ssyt(shape: SkewShape, n: int) -> int:
    return sum(1 for _ in iter_fillings(shape, n, "ssyt"))
