"""Multidegrees in Z^d and axis-aligned cell decompositions of Z^d.

A multidegree is a plain tuple of ``d`` integers, ordered coordinate-wise.
Everything degreewise in this package is evaluated on a *cell
decomposition*: a finite partition of Z^d into products of integer
intervals on which the generator-membership patterns of a module are
constant, so one linear-algebra computation per cell answers a question
for infinitely many degrees at once.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

from .errors import DimensionMismatch

Degree = Tuple[int, ...]
# None stands for "+infinity" in caps and upper bounds, "-infinity" in
# lower bounds, and "infinite" in lattice counts.
Extended = Optional[int]

# Interval endpoints shifted by s*t for s in this range keep a single
# decomposition usable both for homology (patterns at m-t, m, m+t) and
# for checking that the differential squares to zero (m, m+t, m+2t).
PATTERN_SHIFTS = (-2, -1, 0, 1, 2)


class DegreeOrder(Enum):
    EQUAL = "equal"
    LESS_OR_EQUAL = "less-or-equal"
    GREATER_OR_EQUAL = "greater-or-equal"
    INCOMPARABLE = "incomparable"


def compare_degrees(a: Degree, b: Degree) -> DegreeOrder:
    """Compare two multidegrees in the coordinate-wise partial order."""
    if len(a) != len(b):
        raise DimensionMismatch(f"degrees of length {len(a)} and {len(b)}")
    le = all(x <= y for x, y in zip(a, b))
    ge = all(x >= y for x, y in zip(a, b))
    if le and ge:
        return DegreeOrder.EQUAL
    if le:
        return DegreeOrder.LESS_OR_EQUAL
    if ge:
        return DegreeOrder.GREATER_OR_EQUAL
    return DegreeOrder.INCOMPARABLE


def leq(a: Degree, b: Degree) -> bool:
    return all(x <= y for x, y in zip(a, b))


def add(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Degree, b: Degree) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


def neg(a: Degree) -> Degree:
    return tuple(-x for x in a)


def scale(k: int, a: Degree) -> Degree:
    return tuple(k * x for x in a)


def zero(d: int) -> Degree:
    return (0,) * d


def unit(d: int, axis: int) -> Degree:
    return tuple(1 if i == axis else 0 for i in range(d))


def drop_axis(a: Sequence, axis: int) -> tuple:
    return tuple(a[:axis]) + tuple(a[axis + 1:])


@dataclass(frozen=True)
class Cell:
    """A product of integer intervals; ``None`` bounds are infinite.

    ``intervals[i] = (lo, hi)`` is the closed interval [lo, hi] in
    coordinate i, with lo=None meaning unbounded below and hi=None
    unbounded above.
    """

    intervals: Tuple[Tuple[Extended, Extended], ...]

    @property
    def representative(self) -> Degree:
        # Lower corner when bounded below; otherwise the upper corner,
        # and 0 for a doubly unbounded axis.
        rep = []
        for lo, hi in self.intervals:
            if lo is not None:
                rep.append(lo)
            elif hi is not None:
                rep.append(hi)
            else:
                rep.append(0)
        return tuple(rep)

    def contains(self, m: Degree) -> bool:
        return all(
            (lo is None or lo <= x) and (hi is None or x <= hi)
            for x, (lo, hi) in zip(m, self.intervals)
        )

    @property
    def is_finite(self) -> bool:
        return all(lo is not None and hi is not None for lo, hi in self.intervals)


def cell_lattice_count(cell: Cell) -> Extended:
    """Number of lattice points in the cell; None when infinite."""
    count = 1
    for lo, hi in cell.intervals:
        if lo is None or hi is None:
            return None
        count *= hi - lo + 1
    return count


@dataclass(frozen=True)
class CellDecomposition:
    """A partition of Z^d into cells induced by per-coordinate thresholds.

    Thresholds c_1 < ... < c_k in a coordinate cut Z into the intervals
    (-inf, c_1 - 1], [c_1, c_2 - 1], ..., [c_k, +inf); a coordinate with
    no thresholds contributes the single interval (-inf, +inf).  Cells
    are all products of these intervals, so they cover Z^d exactly once.
    Cells unbounded below in some coordinate lie outside the support of
    every generator pattern and always carry dimension zero.
    """

    thresholds: Tuple[Tuple[int, ...], ...]
    cells: Tuple[Cell, ...]

    @property
    def d(self) -> int:
        return len(self.thresholds)

    def cell_index(self, m: Degree) -> int:
        if len(m) != self.d:
            raise DimensionMismatch(f"degree of length {len(m)} in Z^{self.d}")
        index = 0
        for x, cuts in zip(m, self.thresholds):
            index = index * (len(cuts) + 1) + bisect_right(cuts, x)
        return index

    def cell_containing(self, m: Degree) -> Cell:
        return self.cells[self.cell_index(m)]


def _axis_intervals(cuts: Sequence[int]) -> list:
    if not cuts:
        return [(None, None)]
    intervals = [(None, cuts[0] - 1)]
    for a, b in zip(cuts, cuts[1:]):
        intervals.append((a, b - 1))
    intervals.append((cuts[-1], None))
    return intervals


def decomposition_from_thresholds(threshold_lists: Sequence[Sequence[int]]) -> CellDecomposition:
    cuts = tuple(tuple(sorted(set(axis))) for axis in threshold_lists)
    per_axis = [_axis_intervals(axis) for axis in cuts]
    cells = tuple(Cell(intervals=combo) for combo in itertools.product(*per_axis))
    return CellDecomposition(thresholds=cuts, cells=cells)


def threshold_lists(
    shifts: Sequence[Degree],
    caps: Sequence[Tuple[Extended, ...]],
    t: Degree,
) -> list:
    """Per-coordinate threshold sets at which membership patterns can flip.

    A generator with shift a and cap u occupies degree m in coordinate i
    iff a_i <= m_i <= a_i + u_i, so the indicator flips at a_i and at
    a_i + u_i + 1.  Shifting by s*t for s in PATTERN_SHIFTS covers every
    pattern the homology and square-zero checks evaluate.
    """
    if len(shifts) != len(caps):
        raise DimensionMismatch("shifts and caps must have equal length")
    d = len(t)
    lists = [set() for _ in range(d)]
    for shift, cap in zip(shifts, caps):
        for i in range(d):
            for s in PATTERN_SHIFTS:
                lists[i].add(shift[i] + s * t[i])
                if cap[i] is not None:
                    lists[i].add(shift[i] + cap[i] + 1 + s * t[i])
    return [sorted(axis) for axis in lists]


def build_cell_decomposition(
    shifts: Sequence[Degree],
    caps: Sequence[Tuple[Extended, ...]],
    t: Degree,
) -> CellDecomposition:
    """Decomposition of Z^d adapted to the given generator data."""
    return decomposition_from_thresholds(threshold_lists(shifts, caps, t))


def merge_threshold_lists(*lists_per_module) -> list:
    """Union of several per-coordinate threshold lists (a common refinement)."""
    d = len(lists_per_module[0])
    merged = [set() for _ in range(d)]
    for lists in lists_per_module:
        if len(lists) != d:
            raise DimensionMismatch("threshold lists over different dimensions")
        for i in range(d):
            merged[i].update(lists[i])
    return [sorted(axis) for axis in merged]
