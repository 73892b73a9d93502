"""Finely graded differential modules with monomial-matrix differentials.

A module here is a finite direct sum of shifted copies of
R = k[x_1,...,x_d], each optionally truncated by per-coordinate exponent
caps, together with a square-zero endomorphism ``delta`` that is
homogeneous of a fixed degree ``t``.  Because the grading is fine, every
homogeneous map is determined by one scalar per generator pair: the
entry (i, j) of ``coeffs`` is the coefficient c_ij in

    delta(e_j) = sum_i c_ij * x^(shift_j + t - shift_i) * e_i.

The k-basis of the module in degree m consists of the pairs (j, e) with
e = m - shift_j, 0 <= e <= cap_j coordinate-wise; the degreewise
component of ``delta`` is then a scalar matrix between such bases, and
all homological computations reduce to exact linear algebra on these
components, one cell of a decomposition of Z^d at a time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import degrees
from .degrees import Degree, Extended, add, build_cell_decomposition, drop_axis, leq, sub, zero
from .errors import DimensionMismatch, NotAComplexError, UnsupportedOperation
from .exactla import Matrix

INFINITE_CAP = None


@dataclass(frozen=True)
class RingContext:
    """The ambient polynomial ring: d variables over an exact field."""

    d: int
    field: object

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("number of variables must be nonnegative")


@dataclass(frozen=True)
class GeneratorSpec:
    """One generator: a copy of R shifted into degree ``shift``.

    A finite cap in coordinate i keeps only the basis monomials with
    exponent at most cap_i there; all-None caps give a free summand.
    """

    shift: Degree
    cap: Tuple[Extended, ...]

    def __post_init__(self):
        if len(self.shift) != len(self.cap):
            raise DimensionMismatch("shift and cap of different lengths")
        if any(c is not None and c < 0 for c in self.cap):
            raise ValueError("finite caps must be nonnegative")

    @property
    def is_free(self) -> bool:
        return all(c is None for c in self.cap)


def free_generator(shift: Degree) -> GeneratorSpec:
    return GeneratorSpec(shift=tuple(shift), cap=(INFINITE_CAP,) * len(shift))


@dataclass(frozen=True)
class BoxDifferentialModule:
    ring: RingContext
    generators: Tuple[GeneratorSpec, ...]
    diff_degree: Degree
    coeffs: Tuple[Tuple[object, ...], ...]

    def __post_init__(self):
        n = len(self.generators)
        if len(self.diff_degree) != self.ring.d:
            raise DimensionMismatch("differential degree has wrong length")
        for g in self.generators:
            if len(g.shift) != self.ring.d:
                raise DimensionMismatch("generator shift has wrong length")
        if len(self.coeffs) != n or any(len(row) != n for row in self.coeffs):
            raise DimensionMismatch("coefficient matrix must be n x n")

    @property
    def n(self) -> int:
        return len(self.generators)

    @property
    def is_free(self) -> bool:
        return all(g.is_free for g in self.generators)

    def exponent(self, i: int, j: int) -> Degree:
        """Monomial exponent carried by the (i, j) coefficient."""
        return add(sub(self.generators[j].shift, self.generators[i].shift), self.diff_degree)

    def member(self, j: int, m: Degree) -> bool:
        """Does generator j contribute a basis element in degree m?"""
        g = self.generators[j]
        for x, a, c in zip(m, g.shift, g.cap):
            e = x - a
            if e < 0 or (c is not None and e > c):
                return False
        return True

    def pattern_at(self, m: Degree) -> Tuple[int, ...]:
        return tuple(j for j in range(self.n) if self.member(j, m))

    def threshold_lists(self) -> list:
        return degrees.threshold_lists(
            [g.shift for g in self.generators],
            [g.cap for g in self.generators],
            self.diff_degree,
        )

    def decomposition(self):
        return build_cell_decomposition(
            [g.shift for g in self.generators],
            [g.cap for g in self.generators],
            self.diff_degree,
        )

    def component_matrix(self, src: Sequence[int], dst: Sequence[int]) -> Matrix:
        """The scalar matrix of delta between the given basis patterns."""
        out = Matrix(self.ring.field, len(dst), len(src))
        pos = {g: i for i, g in enumerate(dst)}
        for col, j in enumerate(src):
            row_of = self.coeffs
            for i in dst:
                c = row_of[i][j]
                if c != self.ring.field.zero:
                    out.set(pos[i], col, c)
        return out


def build_module(
    ring: RingContext,
    generators: Sequence[GeneratorSpec],
    diff_degree: Degree,
    entries,
) -> BoxDifferentialModule:
    """Construct a module, coercing raw coefficient entries into the field.

    ``entries`` is either a full n x n array of raw scalars or a mapping
    {(i, j): scalar} of the nonzero coefficients (0-based indices).
    """
    n = len(generators)
    f = ring.field
    rows = [[f.zero] * n for _ in range(n)]
    if isinstance(entries, dict):
        for (i, j), value in entries.items():
            rows[i][j] = f.of(value)
    else:
        for i, row in enumerate(entries):
            for j, value in enumerate(row):
                rows[i][j] = f.of(value)
    return BoxDifferentialModule(
        ring=ring,
        generators=tuple(generators),
        diff_degree=tuple(diff_degree),
        coeffs=tuple(tuple(row) for row in rows),
    )


def free_module(ring: RingContext, shifts: Sequence[Degree], diff_degree: Degree, entries) -> BoxDifferentialModule:
    return build_module(ring, [free_generator(s) for s in shifts], diff_degree, entries)


@dataclass(frozen=True)
class ComponentData:
    """Degreewise slice of a module around degree m: the two maps whose
    kernel-mod-image is the homology there."""

    degree: Degree
    basis_below: Tuple[int, ...]
    basis_mid: Tuple[int, ...]
    basis_above: Tuple[int, ...]
    incoming: Matrix
    outgoing: Matrix


def degree_component(module: BoxDifferentialModule, m: Degree) -> ComponentData:
    t = module.diff_degree
    below = module.pattern_at(sub(m, t))
    mid = module.pattern_at(m)
    above = module.pattern_at(add(m, t))
    return ComponentData(
        degree=tuple(m),
        basis_below=below,
        basis_mid=mid,
        basis_above=above,
        incoming=module.component_matrix(below, mid),
        outgoing=module.component_matrix(mid, above),
    )


@dataclass(frozen=True)
class Violation:
    kind: str  # "monomial" or "square"
    entry: Tuple[int, int]  # 0-based generator pair
    degree: Optional[Degree]
    message: str


def validate(module: BoxDifferentialModule) -> List[Violation]:
    """All the ways the data fails to be a differential module (empty = ok).

    Checks that every nonzero coefficient carries an existing monomial
    and that the differential squares to zero in every degree, one cell
    representative at a time.
    """
    out: List[Violation] = []
    f = module.ring.field
    for i in range(module.n):
        for j in range(module.n):
            c = module.coeffs[i][j]
            if c != f.zero and any(e < 0 for e in module.exponent(i, j)):
                out.append(Violation(
                    kind="monomial",
                    entry=(i, j),
                    degree=None,
                    message=(
                        f"entry ({i + 1}, {j + 1}) carries exponent "
                        f"{module.exponent(i, j)} with a negative coordinate"
                    ),
                ))
    t = module.diff_degree
    seen: Dict[tuple, Optional[tuple]] = {}
    for cell in module.decomposition().cells:
        m = cell.representative
        p0 = module.pattern_at(m)
        p1 = module.pattern_at(add(m, t))
        p2 = module.pattern_at(add(m, add(t, t)))
        key = (p0, p1, p2)
        if key in seen:
            bad = seen[key]
        else:
            first = module.component_matrix(p0, p1)
            second = module.component_matrix(p1, p2)
            product = second.mul(first)
            bad = None
            if not product.is_zero():
                for r in range(product.rows):
                    for c in range(product.cols):
                        if product.get(r, c) != f.zero:
                            bad = (p2[r], p0[c])
                            break
                    if bad:
                        break
            seen[key] = bad
        if bad is not None:
            out.append(Violation(
                kind="square",
                entry=bad,
                degree=m,
                message=(
                    f"delta^2 is nonzero in degree {m}: basis element of "
                    f"generator {bad[1] + 1} hits generator {bad[0] + 1}"
                ),
            ))
    return out


def require_valid(module: BoxDifferentialModule) -> None:
    violations = validate(module)
    if violations:
        raise NotAComplexError("; ".join(v.message for v in violations[:3]))


# -- elementary constructions --------------------------------------------


def twist(module: BoxDifferentialModule, n: Degree) -> BoxDifferentialModule:
    """Shift the grading: degree m of the result is degree m + n of the input."""
    gens = tuple(
        GeneratorSpec(shift=sub(g.shift, n), cap=g.cap) for g in module.generators
    )
    return BoxDifferentialModule(module.ring, gens, module.diff_degree, module.coeffs)


def direct_sum(a: BoxDifferentialModule, b: BoxDifferentialModule) -> BoxDifferentialModule:
    if a.ring != b.ring:
        raise DimensionMismatch("direct sum over different rings")
    if a.diff_degree != b.diff_degree:
        raise DimensionMismatch("direct sum of differentials of different degrees")
    f = a.ring.field
    n, m = a.n, b.n
    rows = [[f.zero] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            rows[i][j] = a.coeffs[i][j]
    for i in range(m):
        for j in range(m):
            rows[n + i][n + j] = b.coeffs[i][j]
    return BoxDifferentialModule(
        ring=a.ring,
        generators=a.generators + b.generators,
        diff_degree=a.diff_degree,
        coeffs=tuple(tuple(row) for row in rows),
    )


def change_basis(module: BoxDifferentialModule, g) -> BoxDifferentialModule:
    """Conjugate the differential by a degree-zero monomial automorphism.

    ``g`` is an n x n array of scalars, entry (i, j) riding on the
    monomial x^(shift_j - shift_i); it must vanish unless
    shift_i <= shift_j, and must be invertible.  Such maps compose by
    plain scalar matrix multiplication, so the conjugate g.delta.g^-1 is
    again a monomial matrix of the same differential degree and the
    homology is unchanged.
    """
    if not module.is_free:
        raise UnsupportedOperation("change of basis requires a free module")
    f = module.ring.field
    n = module.n
    gm = Matrix.from_rows(f, [[f.of(x) for x in row] for row in g]) if n else Matrix(f, 0, 0)
    if gm.rows != n or gm.cols != n:
        raise DimensionMismatch("basis-change matrix must be n x n")
    for i in range(n):
        for j in range(n):
            if gm.get(i, j) != f.zero and not leq(module.generators[i].shift, module.generators[j].shift):
                raise UnsupportedOperation(
                    f"basis-change entry ({i + 1}, {j + 1}) does not carry a monomial"
                )
    ginv = gm.inverse()  # raises ZeroDivisionError when singular
    cm = Matrix(f, n, n, [c for row in module.coeffs for c in row])
    new = gm.mul(cm).mul(ginv)
    rows = [tuple(new.row(i)) for i in range(n)]
    return BoxDifferentialModule(module.ring, module.generators, module.diff_degree, tuple(rows))


# -- complexes ------------------------------------------------------------


@dataclass(frozen=True)
class ComplexLevel:
    """One homological level: free generators plus the map to the level below.

    ``matrix_to_previous[i][j]`` is the scalar coefficient of the map
    from this level's generator j to the previous level's generator i,
    riding on the monomial x^(shift_j - prev_shift_i).  The lowest level
    carries an empty matrix.
    """

    generators: Tuple[GeneratorSpec, ...]
    matrix_to_previous: Tuple[Tuple[object, ...], ...]


@dataclass(frozen=True)
class GradedComplex:
    ring: RingContext
    levels: Tuple[ComplexLevel, ...]

    @property
    def ranks(self) -> Tuple[int, ...]:
        return tuple(len(level.generators) for level in self.levels)


def build_complex(ring: RingContext, level_data) -> GradedComplex:
    """level_data: list of (shifts, matrix_rows) from the bottom level up."""
    f = ring.field
    levels = []
    for idx, (shifts, matrix_rows) in enumerate(level_data):
        gens = tuple(free_generator(s) for s in shifts)
        if idx == 0:
            matrix = ()
        else:
            prev_n = len(level_data[idx - 1][0])
            matrix = tuple(
                tuple(f.of(x) for x in row) for row in matrix_rows
            )
            if len(matrix) != prev_n or any(len(row) != len(gens) for row in matrix):
                raise DimensionMismatch(f"level {idx} matrix has wrong shape")
        levels.append(ComplexLevel(generators=gens, matrix_to_previous=matrix))
    return GradedComplex(ring=ring, levels=tuple(levels))


def validate_complex(complex_: GradedComplex) -> List[str]:
    """Monomial existence plus vanishing of consecutive composites.

    Differentials of a graded complex are degree-zero monomial matrices,
    and those compose by plain scalar multiplication, so the composite
    check is a scalar matrix product.
    """
    problems = []
    f = complex_.ring.field
    levels = complex_.levels
    for idx in range(1, len(levels)):
        prev = levels[idx - 1].generators
        here = levels[idx].generators
        matrix = levels[idx].matrix_to_previous
        for i, pgen in enumerate(prev):
            for j, gen in enumerate(here):
                if matrix[i][j] != f.zero and not leq(pgen.shift, gen.shift):
                    problems.append(
                        f"level {idx} entry ({i + 1}, {j + 1}) does not carry a monomial"
                    )
    for idx in range(2, len(levels)):
        a = Matrix.from_rows(f, [list(r) for r in levels[idx].matrix_to_previous]) \
            if levels[idx].matrix_to_previous else Matrix(f, len(levels[idx - 1].generators), 0)
        b = Matrix.from_rows(f, [list(r) for r in levels[idx - 1].matrix_to_previous])
        if a.rows and b.rows and not b.mul(a).is_zero():
            problems.append(f"composite of differentials at level {idx} is nonzero")
    return problems


def compress(complex_: GradedComplex) -> BoxDifferentialModule:
    """Sum the levels of a complex into one degree-zero differential module."""
    problems = validate_complex(complex_)
    if problems:
        raise NotAComplexError("; ".join(problems))
    ring = complex_.ring
    f = ring.field
    gens: List[GeneratorSpec] = []
    offsets = []
    for level in complex_.levels:
        offsets.append(len(gens))
        gens.extend(level.generators)
    n = len(gens)
    rows = [[f.zero] * n for _ in range(n)]
    for idx in range(1, len(complex_.levels)):
        matrix = complex_.levels[idx].matrix_to_previous
        above = offsets[idx]
        below = offsets[idx - 1]
        for i, row in enumerate(matrix):
            for j, c in enumerate(row):
                rows[below + i][above + j] = c
    return BoxDifferentialModule(
        ring=ring,
        generators=tuple(gens),
        diff_degree=zero(ring.d),
        coeffs=tuple(tuple(row) for row in rows),
    )


def compression_levels(complex_: GradedComplex) -> Tuple[int, ...]:
    """Homological level of each generator of ``compress(complex_)``."""
    out = []
    for idx, level in enumerate(complex_.levels):
        out.extend([idx] * len(level.generators))
    return tuple(out)


def koszul(ring: RingContext, axes: Sequence[int]) -> GradedComplex:
    """The Koszul complex on the variables x_i for i in ``axes`` (0-based).

    Level n is free on the size-n subsets S of ``axes`` in lexicographic
    order, shifted by the sum of the corresponding unit degrees; the
    differential sends e_S to sum over i in S of
    (-1)^(pos(i,S)+1) x_i e_(S minus i), with pos counting from 1 in
    increasing order.
    """
    axes = sorted(axes)
    if len(set(axes)) != len(axes):
        raise ValueError("duplicate axes")
    if axes and (axes[0] < 0 or axes[-1] >= ring.d):
        raise ValueError("axis out of range")
    f = ring.field
    level_data = []
    prev_subsets: List[tuple] = []
    for size in range(len(axes) + 1):
        subsets = list(itertools.combinations(axes, size))
        shifts = [
            tuple(sum(1 for a in s if a == i) for i in range(ring.d)) for s in subsets
        ]
        if size == 0:
            matrix = []
        else:
            index_prev = {s: i for i, s in enumerate(prev_subsets)}
            matrix = [[f.zero] * len(subsets) for _ in prev_subsets]
            for j, s in enumerate(subsets):
                for pos, axis in enumerate(s, start=1):
                    target = tuple(a for a in s if a != axis)
                    sign = f.one if pos % 2 == 1 else f.neg(f.one)
                    matrix[index_prev[target]][j] = sign
        level_data.append((shifts, matrix))
        prev_subsets = subsets
    return build_complex(ring, level_data)


def box_tensor(complex_: GradedComplex, module: BoxDifferentialModule) -> BoxDifferentialModule:
    """Tensor a complex with a degree-zero differential module.

    The result is free on pairs (complex generator at level n, module
    generator j), ordered lexicographically by (level, complex
    generator, module generator), with differential
    boundary x id + (-1)^n id x delta.
    """
    if complex_.ring != module.ring:
        raise DimensionMismatch("tensor over different rings")
    if any(x != 0 for x in module.diff_degree):
        raise UnsupportedOperation(
            "tensor with a complex needs a degree-zero differential"
        )
    ring = module.ring
    f = ring.field
    gens: List[GeneratorSpec] = []
    offsets = []
    nm = module.n
    for level in complex_.levels:
        offsets.append(len(gens))
        for cgen in level.generators:
            for mgen in module.generators:
                gens.append(GeneratorSpec(shift=add(cgen.shift, mgen.shift), cap=mgen.cap))
    n = len(gens)
    rows = [[f.zero] * n for _ in range(n)]
    for lvl, level in enumerate(complex_.levels):
        sign = f.one if lvl % 2 == 0 else f.neg(f.one)
        base = offsets[lvl]
        for fidx in range(len(level.generators)):
            col0 = base + fidx * nm
            # module part, scaled by (-1)^level
            for i in range(nm):
                for j in range(nm):
                    c = module.coeffs[i][j]
                    if c != f.zero:
                        rows[col0 + i][col0 + j] = f.mul(sign, c)
        if lvl == 0:
            continue
        matrix = level.matrix_to_previous
        prev_base = offsets[lvl - 1]
        for i, row in enumerate(matrix):
            for j, c in enumerate(row):
                if c != f.zero:
                    for k in range(nm):
                        rows[prev_base + i * nm + k][base + j * nm + k] = c
    return BoxDifferentialModule(
        ring=ring,
        generators=tuple(gens),
        diff_degree=zero(ring.d),
        coeffs=tuple(tuple(row) for row in rows),
    )


# -- slicing and truncation ----------------------------------------------


def _require_zero_diff_axis(module: BoxDifferentialModule, axis: int) -> None:
    if not (0 <= axis < module.ring.d):
        raise ValueError(f"axis {axis} out of range for d={module.ring.d}")
    if module.diff_degree[axis] != 0:
        raise UnsupportedOperation(
            f"differential degree is nonzero in coordinate {axis + 1}"
        )


def slice_at(module: BoxDifferentialModule, axis: int, value: int) -> BoxDifferentialModule:
    """The degree-``value`` layer in one coordinate, over d-1 variables.

    Because the differential degree vanishes in the sliced coordinate,
    delta maps each layer to itself, so the layer is a differential
    module over the smaller ring (annihilated by the dropped variable).
    A generator contributes whenever its exponent range meets the
    hyperplane m_axis = value, entering at layer offset
    value - shift_axis; every coefficient between surviving generators
    restricts to the layer, its monomial exponent in the dropped
    coordinate being exactly the difference of the two offsets.
    """
    _require_zero_diff_axis(module, axis)
    f = module.ring.field
    kept = []
    for j, g in enumerate(module.generators):
        e = value - g.shift[axis]
        if e >= 0 and (g.cap[axis] is None or e <= g.cap[axis]):
            kept.append(j)
    small_ring = RingContext(d=module.ring.d - 1, field=f)
    gens = tuple(
        GeneratorSpec(
            shift=drop_axis(module.generators[j].shift, axis),
            cap=drop_axis(module.generators[j].cap, axis),
        )
        for j in kept
    )
    rows = tuple(
        tuple(module.coeffs[i][j] for j in kept) for i in kept
    )
    return BoxDifferentialModule(
        ring=small_ring,
        generators=gens,
        diff_degree=drop_axis(module.diff_degree, axis),
        coeffs=rows,
    )


def truncate(module: BoxDifferentialModule, axis: int, bound: int, side: str) -> BoxDifferentialModule:
    """Keep only the part of the module with m_axis >= bound or <= bound.

    ``below`` forms the submodule spanned by basis elements of degree at
    least ``bound`` in the coordinate (shifts are raised and caps
    shortened accordingly); ``above`` forms the quotient by the part
    strictly above ``bound`` (caps are clipped).  Both are closed under
    the differential because its degree vanishes in this coordinate, and
    all surviving coefficients transfer unchanged.
    """
    _require_zero_diff_axis(module, axis)
    if side not in ("below", "above"):
        raise ValueError("side must be 'below' or 'above'")
    kept = []
    gens = []
    for j, g in enumerate(module.generators):
        shift = list(g.shift)
        cap = list(g.cap)
        if side == "below":
            raise_by = max(0, bound - shift[axis])
            shift[axis] += raise_by
            if cap[axis] is not None:
                cap[axis] -= raise_by
                if cap[axis] < 0:
                    continue
        else:
            limit = bound - shift[axis]
            if limit < 0:
                continue
            if cap[axis] is None or cap[axis] > limit:
                cap[axis] = limit
        kept.append(j)
        gens.append(GeneratorSpec(shift=tuple(shift), cap=tuple(cap)))
    rows = tuple(
        tuple(module.coeffs[i][j] for j in kept) for i in kept
    )
    return BoxDifferentialModule(
        ring=module.ring,
        generators=tuple(gens),
        diff_degree=module.diff_degree,
        coeffs=rows,
    )


def drop_generators(module: BoxDifferentialModule, remove) -> BoxDifferentialModule:
    """Quotient by the span of the given generators (0-based indices).

    Only valid when that span is a differential submodule, e.g. the
    bottom layer of a flag.
    """
    remove = set(remove)
    kept = [j for j in range(module.n) if j not in remove]
    return BoxDifferentialModule(
        ring=module.ring,
        generators=tuple(module.generators[j] for j in kept),
        diff_degree=module.diff_degree,
        coeffs=tuple(tuple(module.coeffs[i][j] for j in kept) for i in kept),
    )
