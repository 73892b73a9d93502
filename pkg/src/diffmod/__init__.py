"""Exact homological algebra for Z^d-graded differential modules over
polynomial rings, with a verification harness for the 2^d rank bound."""

from .degrees import (
    Cell,
    CellDecomposition,
    Degree,
    DegreeOrder,
    build_cell_decomposition,
    cell_lattice_count,
    compare_degrees,
)
from .dmcore import (
    BoxDifferentialModule,
    ComplexLevel,
    GeneratorSpec,
    GradedComplex,
    RingContext,
    box_tensor,
    build_complex,
    build_module,
    change_basis,
    compress,
    degree_component,
    direct_sum,
    free_generator,
    free_module,
    koszul,
    slice_at,
    truncate,
    twist,
    validate,
)
from .errors import (
    DiffmodError,
    DimensionMismatch,
    InternalConsistencyError,
    NotAComplexError,
    UnsupportedOperation,
)
from .exactla import DEFAULT_PRIME, Matrix, PrimeField, Rationals, homology_dim, parse_field
from .harness import (
    BoundReport,
    Fixture,
    InstanceRecipe,
    fixtures,
    fixtures_by_name,
    generate,
    run_bound_experiment,
)
from .homology import (
    HomologySummary,
    bounded_in_direction,
    homology_at,
    homology_summary,
    summaries_agree,
)
from .structure import (
    CancellationStep,
    FlagOrder,
    Minimization,
    build_flag,
    cancel,
    find_unit_entry,
    minimize,
    verify_flag,
)
from .torbetti import (
    BettiResult,
    CancellationProvenance,
    HighLowDecomposition,
    betti,
    check_tor_inequality,
    high_low,
    tor_k,
)

__version__ = "0.1.0"
