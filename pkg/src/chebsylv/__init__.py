"""Elementary Chebyshev-Sylvester bounds on the prime counting function."""

from .kernel import (
    CapacityError,
    OutOfRangeError,
    SieveTables,
    build_sieve,
    chebyshev_T,
    check_convolution_identities,
    lcm_identity_check,
    log_prefix,
    pi_count,
    psi,
    psi_pi_bracket,
)
from .scheme import (
    BUILTINS,
    BaseBounds,
    EProfile,
    Scheme,
    SchemeError,
    base_bounds,
    cancellation_check,
    constant_A,
    e_profile,
    parse_scheme,
    render_scheme,
    resolve_scheme,
)
from .selection import (
    DominationError,
    SelectionError,
    TermSelection,
    UnitJump,
    jump_stream,
    select_terms,
    selection_coefficients,
    selection_rows,
    selection_step_function,
)
from .iteration import (
    AffineRecurrence,
    IterationError,
    IterationResult,
    build_recurrence,
    convergence,
    fixed_point,
    hybrid_recurrence,
    iterate,
)
from .sweep import OptimizeResult, SweepRow, optimize_rho, sweep_rho
from .verify import (
    VerificationReport,
    verify_V_identities,
    verify_asymptotic_A,
    verify_final_bounds,
    verify_psi_pi,
    verify_selection_bounds,
)

__all__ = [
    "AffineRecurrence",
    "BUILTINS",
    "BaseBounds",
    "CapacityError",
    "DominationError",
    "EProfile",
    "IterationError",
    "IterationResult",
    "OptimizeResult",
    "OutOfRangeError",
    "Scheme",
    "SchemeError",
    "SelectionError",
    "SieveTables",
    "SweepRow",
    "TermSelection",
    "UnitJump",
    "VerificationReport",
    "base_bounds",
    "build_recurrence",
    "build_sieve",
    "cancellation_check",
    "chebyshev_T",
    "check_convolution_identities",
    "constant_A",
    "convergence",
    "e_profile",
    "fixed_point",
    "hybrid_recurrence",
    "iterate",
    "jump_stream",
    "lcm_identity_check",
    "log_prefix",
    "optimize_rho",
    "parse_scheme",
    "pi_count",
    "psi",
    "psi_pi_bracket",
    "render_scheme",
    "resolve_scheme",
    "select_terms",
    "selection_coefficients",
    "selection_rows",
    "selection_step_function",
    "sweep_rho",
    "verify_V_identities",
    "verify_asymptotic_A",
    "verify_final_bounds",
    "verify_psi_pi",
    "verify_selection_bounds",
]

__version__ = "0.1.0"
