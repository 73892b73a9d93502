"""Reference fixtures, randomized instance generation, and the rank-bound
experiment.

Instances are valid by construction: random complexes are built level by
level with each new column sampled from the degreewise kernel of the
previous differential, then compressed and conjugated by a random graded
automorphism.  Generation is driven by a self-contained 64-bit mixer so
identical recipes reproduce byte-identical instances on any platform.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, Optional, Tuple

from .degrees import Degree, leq, zero
from .dmcore import (
    BoxDifferentialModule,
    GradedComplex,
    RingContext,
    box_tensor,
    build_complex,
    change_basis,
    compress,
    direct_sum,
    free_module,
    koszul,
    twist,
)
from .errors import DiffmodError
from .exactla import DEFAULT_PRIME, PrimeField, Rationals
from .homology import homology_summary
from .structure import FlagOrder, cancel
from .torbetti import CancellationProvenance, betti

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z = (z + _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class Stream:
    """Deterministic 64-bit generator (splitmix-style); platform independent."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix64(self._state)

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.next() % (hi - lo + 1)

    def chance(self, numerator: int, denominator: int) -> bool:
        return self.next() % denominator < numerator

    def choice(self, seq):
        return seq[self.next() % len(seq)]

    def scalar(self, field, lo=-2, hi=2):
        return field.of(self.randint(lo, hi))

    def nonzero_scalar(self, field):
        value = self.randint(1, 3) * self.choice((1, -1))
        return field.of(value)


def derive_seed(seed: int, *tags: int) -> int:
    acc = _mix64(seed & _MASK)
    for tag in tags:
        acc = _mix64(acc ^ (tag & _MASK))
    return acc


# -- fixtures --------------------------------------------------------------


@dataclass(frozen=True)
class Fixture:
    """A module with its known invariants attached."""

    name: str
    module: BoxDifferentialModule
    rank: int
    betti: int
    homology_length: int
    support: Optional[Degree] = None  # single supporting degree when length 1
    flag: Optional[FlagOrder] = None
    provenance: Optional[CancellationProvenance] = None


def deg0_scorpion(field) -> BoxDifferentialModule:
    """Rank-4 module over k[x,y] with degree-zero differential: a Koszul
    shape on x, y with an extra xy-entry joining the ends; homology is k
    in degree (0, 0) but the module is not a compression of a complex."""
    ring = RingContext(d=2, field=field)
    shifts = [(0, 0), (1, 0), (0, 1), (1, 1)]
    return free_module(
        ring, shifts, (0, 0),
        {(0, 1): 1, (0, 2): 1, (0, 3): 1, (1, 3): -1, (2, 3): 1},
    )


def scorpion(field) -> BoxDifferentialModule:
    """Rank-4 module over k[x,y] with differential degree (1,1) and a unit
    entry joining the outer generators; homology is k in degree (0, 0)."""
    ring = RingContext(d=2, field=field)
    shifts = [(0, 0), (0, -1), (-1, 0), (-1, -1)]
    return free_module(
        ring, shifts, (1, 1),
        {(0, 1): 1, (0, 2): 1, (0, 3): 1, (1, 3): -1, (2, 3): 1},
    )


def fixtures(field=None) -> List[Fixture]:
    """The named reference modules with their expected invariants."""
    if field is None:
        field = Rationals()
    out: List[Fixture] = []

    deg0 = deg0_scorpion(field)
    out.append(Fixture(
        name="deg0-scorpion", module=deg0, rank=4, betti=4,
        homology_length=1, support=(0, 0), flag=FlagOrder((0, 1, 1, 2)),
    ))

    scorp = scorpion(field)
    scorp_flag = FlagOrder((0, 1, 1, 2))
    out.append(Fixture(
        name="scorpion", module=scorp, rank=4, betti=2,
        homology_length=1, support=(0, 0), flag=scorp_flag,
    ))

    minimized, _ = cancel(scorp, 0, 3)
    out.append(Fixture(
        name="minimized-scorpion", module=minimized, rank=2, betti=2,
        homology_length=1, support=(0, 0),
        provenance=CancellationProvenance(
            source=scorp, steps=((0, 3),), source_flag=scorp_flag,
        ),
    ))

    for d in range(1, 5):
        ring = RingContext(d=d, field=field)
        module = compress(koszul(ring, range(d)))
        out.append(Fixture(
            name=f"koszul-{d}", module=module, rank=2 ** d, betti=2 ** d,
            homology_length=1, support=zero(d),
            flag=FlagOrder(tuple(sum(g.shift) for g in module.generators)),
        ))
    return out


def fixtures_by_name(field=None) -> Dict[str, Fixture]:
    return {f.name: f for f in fixtures(field)}


# -- random instances -------------------------------------------------------


@dataclass(frozen=True)
class InstanceRecipe:
    """Deterministic description of one generated instance."""

    d: int
    field: object
    strategy: str  # compressed-random-complex | conjugated-fixture | direct-sum | koszul-product
    seed: int
    levels: int = 3
    width: int = 3
    shift_span: int = 2
    fixture: Optional[str] = None  # for conjugated-fixture

    @property
    def label(self) -> str:
        return f"{self.strategy}#{self.seed & _MASK:016x}"


def random_complex(ring: RingContext, rng: Stream, levels: int, width: int, shift_span: int) -> GradedComplex:
    """A valid complex of free modules with every column of each
    differential drawn from the degreewise kernel of the previous one."""
    d = ring.d
    f = ring.field
    base_width = rng.randint(1, width)
    base_shifts = [
        tuple(rng.randint(0, shift_span) for _ in range(d)) for _ in range(base_width)
    ]
    level_data = [(base_shifts, [])]
    prev_prev_shifts: List[Degree] = []
    prev_shifts = base_shifts
    prev_matrix: List[List[object]] = []
    for _ in range(1, levels + 1):
        new_shifts = []
        new_columns = []
        for _attempt in range(width * 3):
            if len(new_shifts) >= width and not rng.chance(1, 3):
                break
            anchor = rng.choice(prev_shifts)
            shift = tuple(a + rng.randint(0, 1) + (rng.randint(0, 1) if rng.chance(1, 3) else 0)
                          for a in anchor)
            column = _sample_kernel_column(
                f, prev_prev_shifts, prev_shifts, prev_matrix, shift, rng
            )
            if column is not None:
                new_shifts.append(shift)
                new_columns.append(column)
        if not new_shifts:
            break
        matrix = [
            [new_columns[j][i] for j in range(len(new_shifts))]
            for i in range(len(prev_shifts))
        ]
        level_data.append((new_shifts, matrix))
        prev_prev_shifts = prev_shifts
        prev_shifts = new_shifts
        prev_matrix = matrix
    return build_complex(ring, level_data)


def _sample_kernel_column(field, below_shifts, mid_shifts, matrix, shift, rng):
    """A nonzero degree-``shift`` element of ker(matrix), as coefficients
    against the mid-level generators; None when the kernel is zero."""
    from .exactla import Matrix

    mid_basis = [j for j, a in enumerate(mid_shifts) if leq(a, shift)]
    if not mid_basis:
        return None
    below_basis = [i for i, a in enumerate(below_shifts) if leq(a, shift)]
    component = Matrix(field, len(below_basis), len(mid_basis))
    for cj, j in enumerate(mid_basis):
        for ci, i in enumerate(below_basis):
            component.set(ci, cj, matrix[i][j])
    kernel = component.kernel_basis()
    if kernel.cols == 0:
        return None
    column = [field.zero] * len(mid_shifts)
    picked = sorted({rng.randint(0, kernel.cols - 1) for _ in range(rng.randint(1, 2))})
    for k in picked:
        c = rng.nonzero_scalar(field)
        for bi, j in enumerate(mid_basis):
            column[j] = field.add(column[j], field.mul(c, kernel.get(bi, k)))
    return column


def random_conjugation(module: BoxDifferentialModule, rng: Stream) -> BoxDifferentialModule:
    """Conjugate by a random graded automorphism: nonzero scalars on the
    diagonal plus entries between strictly increasing shifts.  This
    leaves unit entries in place up to scale, so layerability of the
    generators is preserved."""
    n = module.n
    f = module.ring.field
    g = [[f.zero] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = rng.nonzero_scalar(f)
    for i in range(n):
        for j in range(n):
            a, b = module.generators[i].shift, module.generators[j].shift
            if i != j and a != b and leq(a, b) and rng.chance(1, 3):
                g[i][j] = rng.scalar(f)
    return change_basis(module, g)


def generate(recipe: InstanceRecipe) -> BoxDifferentialModule:
    """Build the instance a recipe describes; always valid, always with
    degree-zero differential."""
    ring = RingContext(d=recipe.d, field=recipe.field)
    rng = Stream(derive_seed(recipe.seed))
    if recipe.strategy == "compressed-random-complex":
        module = compress(random_complex(ring, rng, recipe.levels, recipe.width, recipe.shift_span))
        return random_conjugation(module, rng)
    if recipe.strategy == "conjugated-fixture":
        name = recipe.fixture or f"koszul-{recipe.d}"
        fixture = fixtures_by_name(recipe.field)[name]
        if fixture.module.ring.d != recipe.d:
            raise DiffmodError(f"fixture {name} lives over d={fixture.module.ring.d}")
        shifted = twist(fixture.module, tuple(rng.randint(-1, 1) for _ in range(recipe.d)))
        return random_conjugation(shifted, rng)
    if recipe.strategy == "direct-sum":
        left = generate(InstanceRecipe(
            d=recipe.d, field=recipe.field, strategy="compressed-random-complex",
            seed=derive_seed(recipe.seed, 1), levels=recipe.levels,
            width=max(1, recipe.width - 1), shift_span=recipe.shift_span,
        ))
        right = generate(InstanceRecipe(
            d=recipe.d, field=recipe.field, strategy="conjugated-fixture",
            seed=derive_seed(recipe.seed, 2),
        ))
        offset = tuple(rng.randint(-2, 2) for _ in range(recipe.d))
        return direct_sum(left, twist(right, offset))
    if recipe.strategy == "koszul-product":
        inner = generate(InstanceRecipe(
            d=recipe.d, field=recipe.field, strategy="compressed-random-complex",
            seed=derive_seed(recipe.seed, 3), levels=max(1, recipe.levels - 1),
            width=max(1, recipe.width - 1), shift_span=max(1, recipe.shift_span - 1),
        ))
        count = rng.randint(1, recipe.d)
        axes = sorted(rng.choice(_axis_subsets(recipe.d, count)))
        return box_tensor(koszul(ring, axes), inner)
    raise DiffmodError(f"unknown strategy {recipe.strategy!r}")


def _axis_subsets(d: int, size: int):
    import itertools

    return list(itertools.combinations(range(d), size))


# -- bound experiment --------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    instance: str
    d: int
    rank: int
    betti: int
    homology_length: int
    bound: int
    satisfied: bool
    runtime: float


@dataclass
class ExperimentResult:
    d: int
    seed: int
    requested: int
    reports: List[BoundReport] = dataclass_field(default_factory=list)
    skipped_zero: int = 0
    skipped_infinite: int = 0
    violations: List[Tuple[BoundReport, BoxDifferentialModule]] = dataclass_field(default_factory=list)

    @property
    def min_betti(self) -> Optional[int]:
        return min((r.betti for r in self.reports), default=None)


_STRATEGY_CYCLE = (
    "koszul-product",
    "conjugated-fixture",
    "compressed-random-complex",
    "direct-sum",
    "koszul-product",
    "compressed-random-complex",
)


def experiment_pool(count: int, d: int, seed: int, field) -> List[Tuple[str, BoxDifferentialModule]]:
    """Degree-zero fixtures over the right ring, then ``count`` generated
    instances; deterministic in (count, d, seed, field)."""
    pool: List[Tuple[str, BoxDifferentialModule]] = []
    for fixture in fixtures(field):
        if fixture.module.ring.d == d and all(x == 0 for x in fixture.module.diff_degree):
            pool.append((f"fixture:{fixture.name}", fixture.module))
    width = 3 if d <= 2 else 2
    for idx in range(count):
        recipe = InstanceRecipe(
            d=d,
            field=field,
            strategy=_STRATEGY_CYCLE[idx % len(_STRATEGY_CYCLE)],
            seed=derive_seed(seed, idx),
            width=width,
            levels=3 if d <= 2 else 2,
        )
        pool.append((recipe.label, generate(recipe)))
    return pool


def run_bound_experiment(count: int, d: int, seed: int, field=None) -> ExperimentResult:
    """Check betti >= 2^d on every generated instance with nonzero
    finite-length homology; violations carry the offending module."""
    if d < 1:
        raise DiffmodError("the experiment needs at least one variable")
    if field is None:
        field = PrimeField(DEFAULT_PRIME)
    result = ExperimentResult(d=d, seed=seed, requested=count)
    bound = 2 ** d
    for label, module in experiment_pool(count, d, seed, field):
        started = time.perf_counter()
        summary = homology_summary(module)
        if not summary.finite_length:
            result.skipped_infinite += 1
            continue
        if summary.total_length == 0:
            result.skipped_zero += 1
            continue
        value = betti(module).value
        report = BoundReport(
            instance=label,
            d=d,
            rank=module.n,
            betti=value,
            homology_length=summary.total_length,
            bound=bound,
            satisfied=value >= bound,
            runtime=time.perf_counter() - started,
        )
        result.reports.append(report)
        if not report.satisfied:
            result.violations.append((report, module))
    return result
