"""Gaussian cancellation, minimization and free-flag layering.

A *unit entry* is a nonzero coefficient whose monomial exponent is zero.
Cancelling one removes the two generators it joins and applies the usual
Schur-complement correction to the rest; the quotient is
quasi-isomorphic to the input, with the homology preserved degree by
degree.  A module with no unit entries is *minimal*: its differential
maps into the irrelevant-maximal-ideal multiple of the module.

A *flag order* assigns a level to each generator so that the
differential strictly lowers levels; it witnesses an exhaustive
filtration with free quotients.  Such an order exists on a given basis
exactly when the dependency digraph of the nonzero coefficients is
acyclic, in which case longest-path layering produces the least one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .dmcore import BoxDifferentialModule
from .errors import UnsupportedOperation
from .exactla import Matrix


@dataclass(frozen=True)
class CancellationStep:
    """Record of one cancellation: the pair removed plus its border data.

    ``row``/``col`` are 0-based generator indices in the module the step
    was applied to; the borders are the removed row and column restricted
    to the surviving generators, enough to replay or audit the quotient.
    """

    row: int
    col: int
    unit: object
    row_border: Tuple[object, ...]
    col_border: Tuple[object, ...]


@dataclass(frozen=True)
class FlagOrder:
    """Levels per generator; valid when every nonzero coefficient c_ij
    has level(i) < level(j)."""

    levels: Tuple[int, ...]


@dataclass(frozen=True)
class Minimization:
    module: BoxDifferentialModule
    steps: Tuple[CancellationStep, ...]
    # Set when the differential degree is componentwise nonpositive: the
    # minimal core is then a direct summand in the category of graded
    # differential modules, not merely a quasi-isomorphic quotient.
    direct_summand: bool


def _require_free(module: BoxDifferentialModule, what: str) -> None:
    if not module.is_free:
        raise UnsupportedOperation(f"{what} requires a free module (no caps)")


def find_unit_entry(module: BoxDifferentialModule) -> Optional[Tuple[int, int]]:
    """First (i, j), in row-major order, with a nonzero exponent-zero entry.

    Diagonal units are skipped: the cancellation quotient needs two
    distinct generators.  This loses nothing, because exponent-zero
    entries live in square-zero scalar blocks between equal-shift
    generators, and a nonzero square-zero block always has a nonzero
    off-diagonal entry.  Returns None exactly when the differential is
    minimal.
    """
    _require_free(module, "unit search")
    f = module.ring.field
    for i in range(module.n):
        for j in range(module.n):
            if i == j:
                continue
            if module.coeffs[i][j] != f.zero and all(e == 0 for e in module.exponent(i, j)):
                return (i, j)
    return None


def cancel(module: BoxDifferentialModule, row: int, col: int):
    """Remove the generator pair joined by the unit entry at (row, col).

    Returns (quotient, step).  The quotient keeps the remaining
    generators with coefficients c_kl - c_k,col * u^-1 * c_row,l; the
    correction rides on the same monomial as the entry it corrects, so
    no term is ever dropped.
    """
    _require_free(module, "cancellation")
    f = module.ring.field
    if row == col:
        raise UnsupportedOperation("cancellation needs two distinct generators")
    u = module.coeffs[row][col]
    if u == f.zero or any(e != 0 for e in module.exponent(row, col)):
        raise UnsupportedOperation(f"entry ({row + 1}, {col + 1}) is not a unit")
    uinv = f.inv(u)
    kept = [k for k in range(module.n) if k not in (row, col)]
    rows = []
    for k in kept:
        ck_col = module.coeffs[k][col]
        new_row = []
        for l in kept:
            c = module.coeffs[k][l]
            corr = f.mul(f.mul(ck_col, uinv), module.coeffs[row][l])
            new_row.append(f.sub(c, corr))
        rows.append(tuple(new_row))
    quotient = BoxDifferentialModule(
        ring=module.ring,
        generators=tuple(module.generators[k] for k in kept),
        diff_degree=module.diff_degree,
        coeffs=tuple(rows),
    )
    step = CancellationStep(
        row=row,
        col=col,
        unit=u,
        row_border=tuple(module.coeffs[row][l] for l in kept),
        col_border=tuple(module.coeffs[k][col] for k in kept),
    )
    return quotient, step


def minimize(module: BoxDifferentialModule) -> Minimization:
    """Cancel unit entries until none remain.

    The result has every nonzero coefficient riding on a monomial of
    positive degree; the rank drops by exactly two per step and the
    homology is preserved throughout.
    """
    _require_free(module, "minimization")
    steps: List[CancellationStep] = []
    current = module
    while True:
        pair = find_unit_entry(current)
        if pair is None:
            break
        current, step = cancel(current, *pair)
        steps.append(step)
    summand = all(x <= 0 for x in module.diff_degree)
    return Minimization(module=current, steps=tuple(steps), direct_summand=summand)


def is_minimal(module: BoxDifferentialModule) -> bool:
    f = module.ring.field
    return all(
        module.coeffs[i][j] == f.zero or any(e > 0 for e in module.exponent(i, j))
        for i in range(module.n)
        for j in range(module.n)
        if not any(e < 0 for e in module.exponent(i, j))
    ) and find_unit_entry(module) is None


def verify_flag(module: BoxDifferentialModule, order: FlagOrder) -> bool:
    """Does the level assignment make the differential strictly decreasing?"""
    _require_free(module, "flag verification")
    if len(order.levels) != module.n:
        return False
    if any(level < 0 for level in order.levels):
        return False
    f = module.ring.field
    return all(
        module.coeffs[i][j] == f.zero or order.levels[i] < order.levels[j]
        for i in range(module.n)
        for j in range(module.n)
    )


def build_flag(module: BoxDifferentialModule) -> FlagOrder:
    """Layer the generators so the differential strictly lowers levels.

    Requires a componentwise nonpositive differential degree; then any
    nonzero coefficient with positive exponent forces a strict increase
    of shifts, so cycles in the dependency digraph can only pass through
    unit entries.  Longest-path layering over the digraph succeeds
    whenever any valid assignment exists; if the digraph is cyclic the
    module has no flag order on these generators (one exists only after
    a change of basis) and an error is raised.
    """
    _require_free(module, "flag construction")
    if any(x > 0 for x in module.diff_degree):
        raise UnsupportedOperation(
            "flag construction is not guaranteed for a differential of positive "
            "degree; supply a flag order manually"
        )
    f = module.ring.field
    n = module.n
    # edge i -> j whenever c_ij != 0: level(i) must sit strictly below level(j)
    preds = [
        [i for i in range(n) if module.coeffs[i][j] != f.zero] for j in range(n)
    ]
    levels: List[Optional[int]] = [None] * n
    in_progress = [False] * n

    def assign(j: int) -> int:
        if levels[j] is not None:
            return levels[j]
        if in_progress[j]:
            raise UnsupportedOperation(
                "no flag order exists on these generators (cyclic unit entries); "
                "minimize or change basis first"
            )
        in_progress[j] = True
        level = 0
        for i in preds[j]:
            if i == j:
                raise UnsupportedOperation(
                    "no flag order exists on these generators (unit on the diagonal)"
                )
            level = max(level, assign(i) + 1)
        in_progress[j] = False
        levels[j] = level
        return level

    for j in range(n):
        assign(j)
    return FlagOrder(levels=tuple(levels))


def degree_zero_part(module: BoxDifferentialModule) -> Matrix:
    """The scalar matrix of the coefficients whose monomial exponent is zero."""
    f = module.ring.field
    n = module.n
    out = Matrix(f, n, n)
    for i in range(n):
        for j in range(n):
            c = module.coeffs[i][j]
            if c != f.zero and all(e == 0 for e in module.exponent(i, j)):
                out.set(i, j, c)
    return out
