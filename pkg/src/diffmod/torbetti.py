"""Tor against the residue field, Betti numbers, and high-low decompositions.

The Betti number of a differential module is the total k-dimension of
its Tor against k.  Three routes compute it here:

* ``graded-tor``: tensor the full Koszul complex with the module and
  take the total homology dimension (needs differential degree zero);
* ``flag-reduction``: for a module with a verified flag order, the
  residue-field tensor has differential equal to the exponent-zero
  scalar part C of the coefficients, so the Betti number is
  n - 2*rank(C);
* ``provenance``: a chain of cancellations back to a module where one of
  the other routes applies; cancellation is a quasi-isomorphism and Tor
  does not see it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .dmcore import (
    BoxDifferentialModule,
    box_tensor,
    koszul,
    slice_at,
    truncate,
)
from .errors import InternalConsistencyError, UnsupportedOperation
from .homology import HomologySummary, bounded_in_direction, homology_summary
from .structure import FlagOrder, cancel, degree_zero_part, verify_flag


@dataclass(frozen=True)
class BettiResult:
    value: int
    method: str  # "graded-tor" | "flag-reduction" | "provenance"
    # rank of the exponent-zero scalar part, when method = flag-reduction
    degree_zero_rank: Optional[int] = None


@dataclass(frozen=True)
class CancellationProvenance:
    """A cancellation chain from ``source`` down to the module at hand.

    ``steps`` are (row, col) unit positions, each relative to the module
    it is applied to.  ``source_flag`` lets the source's Betti number be
    computed by flag reduction when its differential degree is nonzero.
    """

    source: BoxDifferentialModule
    steps: Tuple[Tuple[int, int], ...]
    source_flag: Optional[FlagOrder] = None


@dataclass(frozen=True)
class HighLowDecomposition:
    axis: int
    low_value: int
    high_value: int
    truncated: BoxDifferentialModule
    low: BoxDifferentialModule
    high: BoxDifferentialModule


@dataclass(frozen=True)
class TorInequalityReport:
    axis: int
    lhs: int
    rhs_low: int
    rhs_high: int

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs_low + self.rhs_high


def tor_k(module: BoxDifferentialModule) -> HomologySummary:
    """Homology of (Koszul complex on all variables) tensor the module.

    The result is always killed by every variable, hence of finite
    length; an infinite verdict indicates corrupt input and is raised as
    an internal error. Requires differential degree zero.
    """
    if any(x != 0 for x in module.diff_degree):
        raise UnsupportedOperation("tor needs a degree-zero differential")
    resolution = koszul(module.ring, range(module.ring.d))
    summary = homology_summary(box_tensor(resolution, module))
    if not summary.finite_length:
        raise InternalConsistencyError("tor summary came out infinite")
    return summary


def replay_provenance(provenance: CancellationProvenance) -> BoxDifferentialModule:
    current = provenance.source
    for row, col in provenance.steps:
        current, _ = cancel(current, row, col)
    return current


def betti(module: BoxDifferentialModule, witness=None) -> BettiResult:
    """Betti number by the first applicable route; see the module docstring.

    With a flag-order witness on a degree-zero module both the reduction
    and the Tor computation run, and they must agree.
    """
    degree_zero = all(x == 0 for x in module.diff_degree)
    if witness is None:
        if not degree_zero:
            raise UnsupportedOperation(
                "unsupported for nonzero differential degree: supply a flag order "
                "or cancellation provenance"
            )
        return BettiResult(value=tor_k(module).total_length, method="graded-tor")
    if isinstance(witness, FlagOrder):
        if not verify_flag(module, witness):
            raise UnsupportedOperation("the supplied flag order is not valid for this module")
        scalar = degree_zero_part(module)
        r = scalar.rank()
        value = module.n - 2 * r
        if degree_zero:
            tor_value = tor_k(module).total_length
            if tor_value != value:
                raise InternalConsistencyError(
                    f"flag reduction gives {value} but tor gives {tor_value}"
                )
        return BettiResult(value=value, method="flag-reduction", degree_zero_rank=r)
    if isinstance(witness, CancellationProvenance):
        if replay_provenance(witness) != module:
            raise UnsupportedOperation(
                "provenance does not reproduce this module"
            )
        base = betti(witness.source, witness.source_flag)
        return BettiResult(value=base.value, method="provenance")
    raise TypeError(f"unsupported witness type {type(witness).__name__}")


def high_low(module: BoxDifferentialModule, axis: int) -> HighLowDecomposition:
    """Trim to the homology-supporting band in one coordinate and slice
    off its two extreme layers.

    Requires nonzero homology bounded in the chosen direction and a
    differential degree vanishing there.  The trimmed module is
    quasi-isomorphic to the input, and both layers carry nonzero
    homology.
    """
    summary = homology_summary(module)
    if summary.is_zero:
        raise UnsupportedOperation("homology is zero; nothing to decompose")
    bounded, interval = bounded_in_direction(summary, axis)
    if not bounded:
        raise UnsupportedOperation(
            f"homology is unbounded in coordinate {axis + 1}"
        )
    low_value, high_value = interval
    trimmed = truncate(truncate(module, axis, low_value, "below"), axis, high_value, "above")
    decomposition = HighLowDecomposition(
        axis=axis,
        low_value=low_value,
        high_value=high_value,
        truncated=trimmed,
        low=slice_at(trimmed, axis, low_value),
        high=slice_at(trimmed, axis, high_value),
    )
    for part, name in ((decomposition.low, "low"), (decomposition.high, "high")):
        if homology_summary(part).is_zero:
            raise InternalConsistencyError(f"{name} layer has zero homology")
    return decomposition


def check_tor_inequality(module: BoxDifferentialModule, axis: int) -> TorInequalityReport:
    """Compare the Tor length of the trimmed module against the sum over
    its two extreme layers (computed over the ring with one variable fewer)."""
    if any(x != 0 for x in module.diff_degree):
        raise UnsupportedOperation("tor needs a degree-zero differential")
    decomposition = high_low(module, axis)
    lhs = tor_k(decomposition.truncated).total_length
    rhs_low = tor_k(decomposition.low).total_length
    rhs_high = tor_k(decomposition.high).total_length
    return TorInequalityReport(axis=axis, lhs=lhs, rhs_low=rhs_low, rhs_high=rhs_high)
