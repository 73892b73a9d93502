"""Degreewise homology of box differential modules.

``homology_at`` evaluates ker/im dimensions at a single degree straight
from the generator data; ``homology_summary`` does it once per cell of a
decomposition of Z^d and aggregates support, boundedness and total
k-dimension.  The two paths share nothing beyond the component-matrix
construction, so agreement between them is a meaningful test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .degrees import (
    CellDecomposition,
    Degree,
    Extended,
    add,
    decomposition_from_thresholds,
    cell_lattice_count,
    merge_threshold_lists,
    sub,
)
from .dmcore import BoxDifferentialModule, degree_component, require_valid
from .errors import DimensionMismatch
from .exactla import homology_dim


@dataclass(frozen=True)
class HomologySummary:
    """Homology dimensions per cell, plus global verdicts.

    ``total_length`` is the total k-dimension of the homology (None when
    infinite), and ``support_box`` the smallest coordinate box containing
    every degree with nonzero homology (None when homology vanishes;
    None in an upper bound means unbounded in that direction).
    """

    decomposition: CellDecomposition
    dims: Tuple[int, ...]
    finite_length: bool
    total_length: Extended
    support_box: Optional[Tuple[Tuple[int, ...], Tuple[Extended, ...]]]

    def dim_at(self, m: Degree) -> int:
        return self.dims[self.decomposition.cell_index(m)]

    @property
    def is_zero(self) -> bool:
        return self.support_box is None


def homology_at(module: BoxDifferentialModule, m: Degree, checked: bool = False) -> int:
    """dim of ker/im at the single degree m, computed directly."""
    if checked:
        require_valid(module)
    comp = degree_component(module, m)
    return homology_dim(comp.incoming, comp.outgoing)


def homology_summary(
    module: BoxDifferentialModule,
    decomposition: Optional[CellDecomposition] = None,
    checked: bool = False,
) -> HomologySummary:
    """Evaluate homology on every cell of a decomposition adapted to the module.

    A caller may pass a refinement of the module's own decomposition
    (e.g. one merged with another module's thresholds) to compare two
    summaries cell by cell.
    """
    if checked:
        require_valid(module)
    if decomposition is None:
        decomposition = module.decomposition()
    if decomposition.d != module.ring.d:
        raise DimensionMismatch("decomposition dimension does not match module")
    t = module.diff_degree
    memo: Dict[tuple, int] = {}
    dims = []
    for cell in decomposition.cells:
        m = cell.representative
        key = (
            module.pattern_at(sub(m, t)),
            module.pattern_at(m),
            module.pattern_at(add(m, t)),
        )
        dim = memo.get(key)
        if dim is None:
            below, mid, above = key
            dim = homology_dim(
                module.component_matrix(below, mid),
                module.component_matrix(mid, above),
            )
            memo[key] = dim
        dims.append(dim)

    finite = True
    total = 0
    lows = [None] * module.ring.d
    highs = [None] * module.ring.d
    has_support = False
    unbounded_high = [False] * module.ring.d
    for cell, dim in zip(decomposition.cells, dims):
        if dim == 0:
            continue
        has_support = True
        count = cell_lattice_count(cell)
        if count is None:
            finite = False
        else:
            total += dim * count
        for i, (lo, hi) in enumerate(cell.intervals):
            # Cells with nonzero dimension are never unbounded below: any
            # degree below every generator shift has empty components.
            if lo is None:
                raise AssertionError("nonzero homology on a cell unbounded below")
            lows[i] = lo if lows[i] is None else min(lows[i], lo)
            if hi is None:
                unbounded_high[i] = True
            elif highs[i] is None or hi > highs[i]:
                highs[i] = hi
    if not has_support:
        return HomologySummary(decomposition, tuple(dims), True, 0, None)
    box = (
        tuple(lows),
        tuple(None if unbounded_high[i] else highs[i] for i in range(module.ring.d)),
    )
    return HomologySummary(
        decomposition=decomposition,
        dims=tuple(dims),
        finite_length=finite,
        total_length=total if finite else None,
        support_box=box,
    )


def bounded_in_direction(summary: HomologySummary, axis: int):
    """(bounded?, witness interval) for one coordinate direction.

    The witness is the tightest [a, b] containing the support in that
    coordinate; a zero module is bounded with empty support (None).
    """
    if summary.support_box is None:
        return True, None
    lo = summary.support_box[0][axis]
    hi = summary.support_box[1][axis]
    if hi is None:
        return False, None
    return True, (lo, hi)


def joint_decomposition(*modules: BoxDifferentialModule) -> CellDecomposition:
    """A decomposition refining each module's own (same ambient d required)."""
    d = modules[0].ring.d
    if any(m.ring.d != d for m in modules):
        raise DimensionMismatch("modules over different dimensions")
    return decomposition_from_thresholds(
        merge_threshold_lists(*[m.threshold_lists() for m in modules])
    )


def summaries_agree(a: BoxDifferentialModule, b: BoxDifferentialModule) -> bool:
    """Exact degreewise equality of homology over all of Z^d.

    Both modules are evaluated on a common refinement, so equal per-cell
    dimensions mean equal dimensions at every single degree.
    """
    decomposition = joint_decomposition(a, b)
    sa = homology_summary(a, decomposition)
    sb = homology_summary(b, decomposition)
    return sa.dims == sb.dims
