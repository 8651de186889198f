"""This module defines one-shot functions for the Monte Carlo decomposition checks.

When running several checks on the same ensemble, consider using the `Verifier` class, which
shares paths and kernel grids between them.
"""

from dataclasses import replace
from typing import Optional, Sequence

from .levy_models import LevyModel
from .verifier import (
    DecompositionReport,
    DecompositionSample,
    QuantityTest,
    TREND_Q_GRID,
    Verifier,
    VerifyConfig,
    mean_test,
)

__all__ = [
    "DecompositionReport",
    "DecompositionSample",
    "QuantityTest",
    "mean_test",
    "verify_doob_meyer",
    "verify_hitting_laplace",
    "verify_killed_invariance",
    "verify_resolvent_identity",
    "verify_tanaka",
]


def verify_doob_meyer(
    *,
    model: LevyModel,
    q: float,
    x: float,
    config: Optional[VerifyConfig] = None,
    keep_samples: bool = False,
) -> DecompositionReport:
    """Test that r_q(x − X_t) − r_q(x − X_0) − q ∫₀^t r_q(x − X_s) ds + L̂^x_t is a martingale.

    Args:
        model: The Lévy model.
        q: The discount rate, q > 0.
        x: The level.
        config: The VerifyConfig (default is VerifyConfig()).
        keep_samples: Keep the per-path samples in the report (default is False).

    Returns:
        The DecompositionReport with the zero-mean and midpoint-increment tests.

    Raises:
        ConfigError: If q ≤ 0.
        ConditionViolation: If condition (A) does not hold.
    """
    return Verifier(model=model, config=config).doob_meyer(q=q, x=x, keep_samples=keep_samples)


def verify_tanaka(
    *,
    model: LevyModel,
    x: float,
    config: Optional[VerifyConfig] = None,
    trend_q: Sequence[float] = TREND_Q_GRID,
    keep_samples: bool = False,
) -> DecompositionReport:
    """Test the Tanaka formula h(X_t − x) = h(X_0 − x) + Ñ_t + L^x_t.

    Args:
        model: The Lévy model.
        x: The level.
        config: The VerifyConfig (default is VerifyConfig()).
        trend_q: The q values of the −M^q → Ñ trend (default is (1, 0.1, 0.01)).
        keep_samples: Keep the per-path samples in the report (default is False).

    Returns:
        The DecompositionReport.

    Raises:
        ConditionViolation: If (A) or (B) does not hold.
    """
    return Verifier(model=model, config=config).tanaka(
        x=x, trend_q=trend_q, keep_samples=keep_samples
    )


def _started_at(config: Optional[VerifyConfig], x0: float) -> VerifyConfig:
    base = config if config is not None else VerifyConfig()
    return replace(base, sim=replace(base.sim, x0=x0))


def verify_resolvent_identity(
    *,
    model: LevyModel,
    q: float,
    x: float,
    y: float,
    config: Optional[VerifyConfig] = None,
) -> DecompositionReport:
    """Test E_y[∫₀^∞ e^{−qt} dL^x_t] = r_q(x − y) with paths started at y."""
    return Verifier(model=model, config=_started_at(config, y)).resolvent_identity(q=q, x=x)


def verify_killed_invariance(
    *,
    model: LevyModel,
    x0: float,
    kill_radius: float,
    config: Optional[VerifyConfig] = None,
    time_index: Optional[int] = None,
) -> DecompositionReport:
    """Test E_x0[h(X_t); t < T₀] = h(x0) with killing in the δ_K-neighbourhood of 0."""
    return Verifier(model=model, config=_started_at(config, x0)).killed_invariance(
        kill_radius=kill_radius, time_index=time_index
    )


def verify_hitting_laplace(
    *,
    model: LevyModel,
    q: float,
    x0: float,
    kill_radius: float,
    config: Optional[VerifyConfig] = None,
) -> DecompositionReport:
    """Test E_x0[e^{−q T₀}] = r_q(−x0) / r_q(0) with killing in the δ_K-neighbourhood of 0."""
    return Verifier(model=model, config=_started_at(config, x0)).hitting_laplace(
        q=q, kill_radius=kill_radius
    )
