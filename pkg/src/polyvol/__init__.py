"""Monte-Carlo volume estimation for convex polytopes in H-representation.

Pipeline: ellipsoid rounding sandwiches the polytope between balls,
concentric-ball subdivision splits the volume into bounded ratios, and
hit-and-run sampling estimates the ratios from the outside in, reusing
every sample point that lands in an inner body.
"""

from .errors import (
    EmptyPolytopeError,
    EstimationError,
    GenerationError,
    NotPositiveDefiniteError,
    ParseError,
    PolyvolError,
    RoundingError,
    UnboundedPolytopeError,
    ValidationError,
)
from .estimator import (
    DEFAULT_SEED,
    EstimateReport,
    EstimationConfig,
    PhaseLedger,
    ball_index,
    derive_seed,
    estimate_volume,
    expected_reuse_savings,
    required_step_size,
    unit_ball_volume,
)
from .generators import (
    ShearSpec,
    apply_shear,
    gen_cross,
    gen_cube,
    gen_cuboid_sheared,
    gen_ran,
    gen_rh,
    random_shear,
)
from .linprog import LpOutcome, lp_maximize
from .polytope import (
    Point,
    Polytope,
    emit_polytope,
    load_polytope,
    parse_polytope,
    save_polytope,
)
from .rounding import (
    Ellipsoid,
    RoundedPolytope,
    cholesky,
    init_ellipsoid,
    round_polytope,
)
from .sampling import (
    Chord,
    WalkContext,
    chord_coordinate,
    chord_direction,
    step_coordinate,
    step_hypersphere,
    walk,
)
from .verification import (
    OracleEstimate,
    SplitCheck,
    TrialStatistics,
    WalkBenchmark,
    accuracy_comparison,
    comparison_table,
    oracle_volume,
    run_trials,
    split_check,
    trial_statistics,
    walk_benchmark,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SEED",
    "Chord",
    "Ellipsoid",
    "EmptyPolytopeError",
    "EstimateReport",
    "EstimationConfig",
    "EstimationError",
    "GenerationError",
    "LpOutcome",
    "NotPositiveDefiniteError",
    "OracleEstimate",
    "ParseError",
    "PhaseLedger",
    "Point",
    "Polytope",
    "PolyvolError",
    "RoundedPolytope",
    "RoundingError",
    "ShearSpec",
    "SplitCheck",
    "TrialStatistics",
    "UnboundedPolytopeError",
    "ValidationError",
    "WalkBenchmark",
    "WalkContext",
    "accuracy_comparison",
    "apply_shear",
    "ball_index",
    "cholesky",
    "chord_coordinate",
    "chord_direction",
    "comparison_table",
    "derive_seed",
    "emit_polytope",
    "estimate_volume",
    "expected_reuse_savings",
    "gen_cross",
    "gen_cube",
    "gen_cuboid_sheared",
    "gen_ran",
    "gen_rh",
    "init_ellipsoid",
    "load_polytope",
    "lp_maximize",
    "oracle_volume",
    "parse_polytope",
    "random_shear",
    "required_step_size",
    "round_polytope",
    "run_trials",
    "save_polytope",
    "split_check",
    "step_coordinate",
    "step_hypersphere",
    "trial_statistics",
    "unit_ball_volume",
    "walk",
    "walk_benchmark",
]
