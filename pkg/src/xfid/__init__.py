"""Closed-form purity, concurrence and teleportation fidelity for
two-qubit X-states, with inverse relations per rank class, a dense
matrix oracle for every closed form, and a sweep engine that emits the
figure datasets as deterministic CSV.
"""

from .errors import (
    ConsistencyError,
    DomainError,
    InfeasibleTargetError,
    NonHermitianError,
    NotPSDError,
    ShapeError,
    ValidationError,
    XFidError,
)
from .metrics import (
    BELL_LABELS,
    MetricsReport,
    bell_density,
    concurrence_closed,
    concurrence_oracle,
    fidelity_closed,
    fidelity_oracle,
    purity_closed,
    purity_oracle,
    report,
    uhlmann_bell_oracle,
    uhlmann_closed,
    uhlmann_oracle,
)
from .relations import (
    InverseSolveResult,
    RelationInput,
    pure_fidelity,
    rank2_fidelity,
    rank3_kind1_fidelity,
    rank3_kind1_fidelity_ycase,
    rank3_kind2_fidelity,
    rank4_fidelity_xcase,
    rank4_fidelity_ycase_xconc,
    rank4_quartic_solve,
    solve_rank1,
    solve_rank2,
    solve_rank3_kind1,
    solve_rank3_kind1_ycase,
    solve_rank3_kind2,
    solve_rank4_xcase,
    solve_rank4_ycase,
    solve_theta_rank2k3,
    synthesize_state,
)
from .sweeps import (
    SweepResult,
    SweepRow,
    SweepSpec,
    angles_from_e_f,
    csv_text,
    emit_csv,
    figure_preset,
    run_sweep,
)
from .verify import VerifyReport, run_verification
from .xstate import (
    DerivedCoefficients,
    Kind,
    RankClass,
    XParams,
    classify_rank,
    derived_coefficients,
    from_density,
    to_density,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BELL_LABELS",
    "ConsistencyError",
    "DerivedCoefficients",
    "DomainError",
    "InfeasibleTargetError",
    "InverseSolveResult",
    "Kind",
    "MetricsReport",
    "NonHermitianError",
    "NotPSDError",
    "RankClass",
    "RelationInput",
    "ShapeError",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "ValidationError",
    "VerifyReport",
    "XFidError",
    "XParams",
    "angles_from_e_f",
    "bell_density",
    "classify_rank",
    "concurrence_closed",
    "concurrence_oracle",
    "csv_text",
    "derived_coefficients",
    "emit_csv",
    "fidelity_closed",
    "fidelity_oracle",
    "figure_preset",
    "from_density",
    "pure_fidelity",
    "purity_closed",
    "purity_oracle",
    "rank2_fidelity",
    "rank3_kind1_fidelity",
    "rank3_kind1_fidelity_ycase",
    "rank3_kind2_fidelity",
    "rank4_fidelity_xcase",
    "rank4_fidelity_ycase_xconc",
    "rank4_quartic_solve",
    "report",
    "run_sweep",
    "run_verification",
    "solve_rank1",
    "solve_rank2",
    "solve_rank3_kind1",
    "solve_rank3_kind1_ycase",
    "solve_rank3_kind2",
    "solve_rank4_xcase",
    "solve_rank4_ycase",
    "solve_theta_rank2k3",
    "synthesize_state",
    "to_density",
    "uhlmann_bell_oracle",
    "uhlmann_closed",
    "uhlmann_oracle",
    "validate",
    "__version__",
]
