"""zrt package initialization.

This package computes the renormalized zero resolvent h of one-dimensional Lévy processes by
Fourier inversion, checks the conditions under which it exists, and verifies the associated
martingale decompositions (Doob–Meyer for r_q, Tanaka for h) by Monte Carlo simulation.
"""

import logging

from .conditions import (
    ConditionCheck,
    ConditionReport,
    Verdict,
    check_A,
    check_B,
    condition_report,
    condition_table,
    regularity_diagnostics,
)
from .decomposition import (
    verify_doob_meyer,
    verify_hitting_laplace,
    verify_killed_invariance,
    verify_resolvent_identity,
    verify_tanaka,
)
from .exceptions import (
    ZrtError,
    ModelError,
    SymbolEvaluationError,
    QuadratureError,
    ConditionViolation,
    SimulationError,
    ConfigError,
)
from .levy_models import (
    Family,
    LevyModel,
    brownian,
    custom_triplet,
    integrable_drift,
    spectrally_negative,
    stable,
    stable_closed_form_h,
    symbol_eval,
    tempered_stable,
    truncated_stable,
)
from .pathsim import PathSample, Scheme, SimConfig, empirical_cf, sample_path, simulate_paths
from .localtime import OccupationEstimate, discounted_local_time, occupation_local_time
from .quadrature import QuadratureResult, QuadratureSpec, integrate_semi_infinite
from .refine import RefinementPolicy, refine_function
from .resolvent import (
    KernelGrid,
    ResolventQuery,
    h_q,
    h_q_convergence_scan,
    renormalized_zero_resolvent,
    resolvent_at_zero,
    resolvent_density,
)
from .verifier import DecompositionReport, Verifier, VerifyConfig

__version__ = "0.1.0"

__all__ = [
    "ConditionCheck",
    "ConditionReport",
    "Verdict",
    "check_A",
    "check_B",
    "condition_report",
    "condition_table",
    "regularity_diagnostics",
    "verify_doob_meyer",
    "verify_hitting_laplace",
    "verify_killed_invariance",
    "verify_resolvent_identity",
    "verify_tanaka",
    "ZrtError",
    "ModelError",
    "SymbolEvaluationError",
    "QuadratureError",
    "ConditionViolation",
    "SimulationError",
    "ConfigError",
    "Family",
    "LevyModel",
    "brownian",
    "custom_triplet",
    "integrable_drift",
    "spectrally_negative",
    "stable",
    "stable_closed_form_h",
    "symbol_eval",
    "tempered_stable",
    "truncated_stable",
    "PathSample",
    "Scheme",
    "SimConfig",
    "empirical_cf",
    "sample_path",
    "simulate_paths",
    "OccupationEstimate",
    "discounted_local_time",
    "occupation_local_time",
    "QuadratureResult",
    "QuadratureSpec",
    "integrate_semi_infinite",
    "RefinementPolicy",
    "refine_function",
    "KernelGrid",
    "ResolventQuery",
    "h_q",
    "h_q_convergence_scan",
    "renormalized_zero_resolvent",
    "resolvent_at_zero",
    "resolvent_density",
    "DecompositionReport",
    "Verifier",
    "VerifyConfig",
]


def initialize_logging() -> None:
    """Initialize logging for the zrt package."""
    logging.getLogger("zrt").addHandler(logging.NullHandler())


initialize_logging()
