"""Occupation-density estimates of local time from discretized paths.

The local time at level x is estimated by the ε-occupation functional

    L̂^x_t = (1/2ε) ∫₀^t 1{|X_s − x| < ε} ds,

discretized with left-point Riemann sums on the path grid. ε is always explicit.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence
import logging
import math

import numpy as np

from .custom_data_types import FloatArray
from .exceptions import ConfigError
from .output import write_csv
from .pathsim import PathSample

logger = logging.getLogger("zrt.localtime")

EPSILON_REFINEMENT_FACTORS = (1.0, 0.5, 0.25)


@dataclass(frozen=True)
class OccupationEstimate:
    """L̂^x_t of one path; value = (Δt / 2ε) · n_hits on a uniform grid."""

    x: float
    t: float
    eps: float
    value: float
    n_hits: int


def _check_eps(eps: float) -> None:
    if not eps > 0.0:
        raise ConfigError(f"eps must be positive, got {eps}")


def _grid_index(paths: PathSample, t: float) -> int:
    """Number of grid points t_i with t_i < t."""
    if t > paths.t_grid[-1] * (1.0 + 1e-12):
        raise ConfigError(f"t={t} exceeds the path horizon {paths.t_grid[-1]}")
    return int(np.searchsorted(paths.t_grid, t, side="left"))


def _dt(paths: PathSample) -> float:
    return float(paths.t_grid[1] - paths.t_grid[0])


def hit_indicators(states: FloatArray, x: float, eps: float) -> FloatArray:
    """1{|X_{t_i} − x| < ε} on every grid point, as floats."""
    return (np.abs(states - x) < eps).astype(np.float64)


def occupation_local_time(
    paths: PathSample,
    x: float,
    t: float,
    eps: float,
    *,
    row: int = 0,
    start: float = 0.0,
) -> OccupationEstimate:
    """L̂^x over [start, t) for one path of the sample.

    Args:
        paths: The simulated paths.
        x: The level.
        t: The end time (at most the horizon).
        eps: The half-width ε > 0 of the occupation window.
        row: The row of `paths.states` to use (default is 0).
        start: The start time (default is 0).

    Returns:
        The OccupationEstimate over [start, t).

    Raises:
        ConfigError: If ε ≤ 0 or t exceeds the horizon.
    """
    _check_eps(eps)
    lo, hi = _grid_index(paths, start), _grid_index(paths, t)
    n_hits = int(np.count_nonzero(np.abs(paths.states[row, lo:hi] - x) < eps))
    return OccupationEstimate(
        x=x, t=t, eps=eps, value=_dt(paths) / (2.0 * eps) * n_hits, n_hits=n_hits
    )


def local_time_matrix(paths: PathSample, x: float, eps: float) -> FloatArray:
    """L̂^x_{t_k} for every path and every grid time t_k (column 0 is 0)."""
    _check_eps(eps)
    hits = hit_indicators(paths.states[:, :-1], x, eps)
    result = np.zeros_like(paths.states)
    np.cumsum(hits, axis=1, out=result[:, 1:])
    return result * (_dt(paths) / (2.0 * eps))


def terminal_local_time(paths: PathSample, x: float, eps: float) -> FloatArray:
    """L̂^x_T for every path."""
    _check_eps(eps)
    counts = np.count_nonzero(np.abs(paths.states[:, :-1] - x) < eps, axis=1)
    return counts * (_dt(paths) / (2.0 * eps))


@dataclass(frozen=True)
class DiscountedEstimate:
    """Σ e^{−q t_i} ΔL̂ per path with the reported horizon truncation bound."""

    values: FloatArray
    truncation_bound: float


def discounted_local_time(paths: PathSample, x: float, q: float, eps: float) -> DiscountedEstimate:
    """Stieltjes sums of e^{−qt} against L̂^x over the grid.

    The truncation bound extends the mean local time rate over [0, T] beyond the horizon:
    e^{−qT} · (mean L̂^x_T / T) / q.

    Raises:
        ConfigError: If q ≤ 0 or ε ≤ 0.
    """
    _check_eps(eps)
    if not q > 0.0:
        raise ConfigError(f"q must be positive, got {q}")
    times = paths.t_grid[:-1]
    hits = hit_indicators(paths.states[:, :-1], x, eps)
    values = (hits @ np.exp(-q * times)) * (_dt(paths) / (2.0 * eps))
    horizon = float(paths.t_grid[-1])
    rate = float(np.mean(np.sum(hits, axis=1))) * _dt(paths) / (2.0 * eps) / horizon
    bound = math.exp(-q * horizon) * rate / q
    if bound > 1e-3 * max(float(np.mean(values)), 1e-12):
        logger.warning("Discounted local time at x=%s, q=%s truncated with bound %s", x, q, bound)
    return DiscountedEstimate(values=values, truncation_bound=bound)


def default_epsilon(paths: PathSample) -> float:
    """ε = max(Δt^0.4, 10 · median |ΔX|) / 2."""
    increments = np.abs(np.diff(paths.states, axis=1))
    typical = float(np.median(increments)) if increments.size else 0.0
    return max(_dt(paths) ** 0.4, 10.0 * typical) / 2.0


@dataclass(frozen=True)
class RefinementRow:
    eps: float
    mean: float
    std_error: float


def epsilon_refinement(
    paths: PathSample,
    x: float,
    t: float,
    eps: Optional[float] = None,
    *,
    factors: Sequence[float] = EPSILON_REFINEMENT_FACTORS,
) -> list[RefinementRow]:
    """Ensemble mean of L̂^x_t along ε, ε/2, ε/4 (ε defaults to `default_epsilon`)."""
    base = eps if eps is not None else default_epsilon(paths)
    hi = _grid_index(paths, t)
    rows = []
    for factor in factors:
        width = base * factor
        _check_eps(width)
        counts = np.count_nonzero(np.abs(paths.states[:, :hi] - x) < width, axis=1)
        values = counts * (_dt(paths) / (2.0 * width))
        std_error = (
            float(np.std(values, ddof=1)) / math.sqrt(values.size) if values.size > 1 else math.inf
        )
        rows.append(RefinementRow(eps=width, mean=float(np.mean(values)), std_error=std_error))
    logger.info("Epsilon refinement at x=%s, t=%s: %s", x, t, rows)
    return rows


def write_local_time_csv(
    paths: PathSample, x: float, eps: float, destination: Path
) -> Path:
    """Rows (path_id, x, eps, L̂^x_T)."""
    values = terminal_local_time(paths, x, eps)
    return write_csv(
        destination,
        ["path_id", "x", "eps", "local_time"],
        ((path_id, x, eps, value) for path_id, value in zip(paths.path_ids, values.tolist())),
    )
