"""Simulation of discretized Lévy paths with reproducible, per-path random streams.

Two schemes are available:
- EXACT_INCREMENT: exact increments for the stable family (Chambers–Mallows–Stuck) and for
  Brownian motion with drift (Gaussian increments).
- COMPOUND_POISSON_APPROX: jumps larger than the cutoff δ_J are drawn as a compound Poisson
  process, smaller jumps are replaced by a Gaussian with their variance, and the drift absorbs
  the compensator of the jumps in δ_J < |y| ≤ 1.

Path i of a run always uses the stream `SeedSequence(seed, spawn_key=(i,))`, so a path does not
depend on how the run is batched or parallelized.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Optional, Sequence
import logging
import math

import numpy as np
from scipy import integrate

from .custom_data_types import FloatArray, JumpDensityFunction
from .exceptions import ConfigError, SimulationError
from .levy_models import Family, JumpMeasure, LevyModel, StableParams, log_scale_quad
from .output import write_csv

logger = logging.getLogger("zrt.pathsim")

DEFAULT_SMALL_JUMP_CUTOFF = 1e-3
MAX_JUMPS_PER_PATH = 10_000_000
_TABLE_SIZE = 4096
_TAIL_DECADES = 12.0


class Scheme(Enum):
    """The Scheme enum names the way increments are generated.

    The schemes include:
    - EXACT_INCREMENT: Exact increments (stable family and Brownian motion with drift only).
    - COMPOUND_POISSON_APPROX: Compound Poisson large jumps plus Gaussian small jumps.
    """

    EXACT_INCREMENT = 1
    COMPOUND_POISSON_APPROX = 2


@dataclass(frozen=True)
class SimConfig:
    """Time grid, ensemble size and scheme parameters of a simulation run.

    Raises:
        ConfigError: If any parameter is out of range.
    """

    n_steps: int = 1000
    horizon: float = 1.0
    n_paths: int = 1000
    x0: float = 0.0
    seed: int = 0
    small_jump_cutoff: float = DEFAULT_SMALL_JUMP_CUTOFF
    gaussian_compensation: bool = True
    scheme: Optional[Scheme] = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.n_steps < 1 or self.n_paths < 1:
            raise ConfigError(
                f"need n_steps >= 1 and n_paths >= 1, got {self.n_steps}, {self.n_paths}"
            )
        if not (self.horizon > 0.0 and math.isfinite(self.horizon)):
            raise ConfigError(f"horizon must be positive and finite, got {self.horizon}")
        if not self.small_jump_cutoff > 0.0:
            raise ConfigError(f"small_jump_cutoff must be positive, got {self.small_jump_cutoff}")
        if self.seed < 0 or self.workers < 1:
            raise ConfigError(f"need seed >= 0 and workers >= 1, got {self.seed}, {self.workers}")

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    def t_grid(self) -> FloatArray:
        return np.linspace(0.0, self.horizon, self.n_steps + 1)


@dataclass(frozen=True)
class PathSample:
    """A batch of simulated paths; row k of `states` is path `path_ids[k]`."""

    t_grid: FloatArray = field(repr=False)
    states: FloatArray = field(repr=False)
    path_ids: Sequence[int]
    seed: int
    model: LevyModel
    scheme: Scheme

    @property
    def n_paths(self) -> int:
        return int(self.states.shape[0])

    @property
    def terminal(self) -> FloatArray:
        return self.states[:, -1]


def default_scheme(model: LevyModel) -> Scheme:
    if model.family in (Family.STABLE, Family.BROWNIAN_WITH_DRIFT):
        return Scheme.EXACT_INCREMENT
    return Scheme.COMPOUND_POISSON_APPROX


def stable_increments(
    rng: np.random.Generator, params: StableParams, dt: float, size: int
) -> FloatArray:
    """Chambers–Mallows–Stuck draws with characteristic function exp(dt·η(u)).

    For 1 < α < 2 this is the parameterisation with E[X] = 0 and log-characteristic function
    −σ^α |u|^α (1 − iβ sgn(u) tan(πα/2)), with σ^α = d·dt.
    """
    alpha, beta = params.alpha, params.beta
    v = math.pi * (rng.random(size) - 0.5)
    w = rng.standard_exponential(size)
    theta = math.atan(beta * math.tan(math.pi * alpha / 2.0)) / alpha
    scale = (params.d * dt) ** (1.0 / alpha)
    t1 = np.sin(alpha * (v + theta)) / (math.cos(alpha * theta) * np.cos(v)) ** (1.0 / alpha)
    t2 = (np.cos(alpha * theta + (alpha - 1.0) * v) / w) ** ((1.0 - alpha) / alpha)
    return scale * t1 * t2


@dataclass(frozen=True)
class _JumpTable:
    """Inverse CDF of one side of ν restricted to |y| > δ, tabulated in log y."""

    intensity: float
    log_sizes: FloatArray = field(repr=False)
    cumulative: FloatArray = field(repr=False)

    def draw(self, rng: np.random.Generator, size: int) -> FloatArray:
        levels = rng.random(size) * self.cumulative[-1]
        return np.exp(np.interp(levels, self.cumulative, self.log_sizes))


def _side_table(density: JumpDensityFunction, cutoff: float, jumps: JumpMeasure) -> _JumpTable:
    upper = jumps.support
    if upper == math.inf:
        if jumps.tail_rate > 0.0:
            upper = max(cutoff, 1.0) + 40.0 / jumps.tail_rate
        else:
            tail = jumps.tail_index if math.isfinite(jumps.tail_index) else 2.0
            upper = max(cutoff, 1.0) * 10.0 ** (_TAIL_DECADES / tail)
    if upper <= cutoff:
        return _JumpTable(0.0, np.zeros(2), np.zeros(2))
    log_sizes = np.linspace(math.log(cutoff), math.log(upper), _TABLE_SIZE)
    sizes = np.exp(log_sizes)
    weights = sizes * np.asarray(density(sizes), dtype=np.float64)
    cumulative = integrate.cumulative_trapezoid(weights, log_sizes, initial=0.0)
    return _JumpTable(float(cumulative[-1]), log_sizes, cumulative)


def _log_quad(func: JumpDensityFunction, power: int, lower: float, upper: float) -> float:
    """∫_lower^upper y^power func(y) dy by quadrature in log y."""
    if upper <= lower:
        return 0.0
    value, _ = log_scale_quad(
        lambda y: y**power * np.asarray(func(y)),
        math.log(lower) if lower > 0.0 else -math.inf,
        math.log(upper),
    )
    return value


@dataclass(frozen=True)
class CompoundPoissonParts:
    """Drift, Gaussian variance rate and jump tables of the approximation with cutoff δ_J."""

    drift: float
    variance_rate: float
    positive: _JumpTable
    negative: _JumpTable

    @property
    def intensity(self) -> float:
        return self.positive.intensity + self.negative.intensity


@lru_cache(maxsize=64)
def compound_poisson_parts(
    model: LevyModel, cutoff: float, gaussian_compensation: bool
) -> CompoundPoissonParts:
    """Split the triplet at δ_J = cutoff.

    The drift is b − ∫_{δ_J < |y| ≤ 1} y ν(dy), consistent with the 1{|y| ≤ 1} truncation of the
    Lévy–Khintchine formula. The Gaussian variance rate is a + ∫_{|y| ≤ δ_J} y² ν(dy) when
    `gaussian_compensation` is set, a otherwise.
    """
    jumps = model.jumps
    if jumps is None:
        empty = _JumpTable(0.0, np.zeros(2), np.zeros(2))
        return CompoundPoissonParts(model.b, model.a, empty, empty)
    inner = min(cutoff, jumps.support)
    one = min(1.0, jumps.support)
    compensator = _log_quad(jumps.positive_density, 1, cutoff, one) - _log_quad(
        jumps.negative_density, 1, cutoff, one
    )
    small_variance = (
        _log_quad(jumps.positive_density, 2, 0.0, inner)
        + _log_quad(jumps.negative_density, 2, 0.0, inner)
        if gaussian_compensation
        else 0.0
    )
    parts = CompoundPoissonParts(
        drift=model.b - compensator,
        variance_rate=model.a + small_variance,
        positive=_side_table(jumps.positive_density, cutoff, jumps),
        negative=_side_table(jumps.negative_density, cutoff, jumps),
    )
    logger.debug(
        "Compound Poisson parts for cutoff %s: drift %s, variance rate %s, intensity %s",
        cutoff,
        parts.drift,
        parts.variance_rate,
        parts.intensity,
    )
    return parts


def _path_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _increments(
    model: LevyModel, cfg: SimConfig, scheme: Scheme, index: int
) -> FloatArray:
    rng = _path_rng(cfg.seed, index)
    dt, n = cfg.dt, cfg.n_steps
    if scheme == Scheme.EXACT_INCREMENT:
        if isinstance(model.params, StableParams):
            return stable_increments(rng, model.params, dt, n)
        return model.b * dt + math.sqrt(model.a * dt) * rng.standard_normal(n)
    parts = compound_poisson_parts(model, cfg.small_jump_cutoff, cfg.gaussian_compensation)
    steps = parts.drift * dt + math.sqrt(parts.variance_rate * dt) * rng.standard_normal(n)
    for table, sign in ((parts.positive, 1.0), (parts.negative, -1.0)):
        if table.intensity == 0.0:
            continue
        counts = rng.poisson(table.intensity * dt, n)
        total = int(counts.sum())
        if total:
            sizes = table.draw(rng, total)
            steps += sign * np.bincount(
                np.repeat(np.arange(n), counts), weights=sizes, minlength=n
            )
    return steps


def _check_pairing(model: LevyModel, cfg: SimConfig) -> Scheme:
    scheme = cfg.scheme if cfg.scheme is not None else default_scheme(model)
    if scheme == Scheme.EXACT_INCREMENT and model.family not in (
        Family.STABLE,
        Family.BROWNIAN_WITH_DRIFT,
    ):
        raise SimulationError(
            f"exact increments are only available for the stable family and Brownian motion, "
            f"not {model.family.name}"
        )
    if scheme == Scheme.COMPOUND_POISSON_APPROX:
        parts = compound_poisson_parts(model, cfg.small_jump_cutoff, cfg.gaussian_compensation)
        expected = parts.intensity * cfg.horizon
        if not math.isfinite(expected) or expected > MAX_JUMPS_PER_PATH:
            raise SimulationError(
                f"cutoff {cfg.small_jump_cutoff} gives {expected} expected jumps per path, "
                f"more than {MAX_JUMPS_PER_PATH}; raise the cutoff"
            )
    return scheme


def _path(model: LevyModel, cfg: SimConfig, scheme: Scheme, index: int) -> FloatArray:
    states = np.empty(cfg.n_steps + 1)
    if model.family == Family.BROWNIAN_WITH_DRIFT and model.a == 0.0:
        states[:] = cfg.x0 + model.b * cfg.t_grid()
        return states
    states[0] = cfg.x0
    np.cumsum(_increments(model, cfg, scheme, index), out=states[1:])
    states[1:] += cfg.x0
    return states


def simulate_paths(
    model: LevyModel, cfg: SimConfig, *, path_ids: Optional[Sequence[int]] = None
) -> PathSample:
    """Simulate the given paths (all `cfg.n_paths` paths by default).

    Raises:
        SimulationError: On an invalid scheme/family pairing or a jump budget overflow.
    """
    scheme = _check_pairing(model, cfg)
    ids = list(range(cfg.n_paths)) if path_ids is None else list(path_ids)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
            rows = list(executor.map(lambda i: _path(model, cfg, scheme, i), ids))
    else:
        rows = [_path(model, cfg, scheme, i) for i in ids]
    states = np.vstack(rows) if rows else np.empty((0, cfg.n_steps + 1))
    return PathSample(
        t_grid=cfg.t_grid(),
        states=states,
        path_ids=ids,
        seed=cfg.seed,
        model=model,
        scheme=scheme,
    )


def sample_path(model: LevyModel, cfg: SimConfig, *, path_id: int = 0) -> PathSample:
    """A single path of the run described by `cfg`."""
    return simulate_paths(model, cfg, path_ids=[path_id])


def iter_path_batches(
    model: LevyModel, cfg: SimConfig, *, batch_size: int = 1000
) -> Iterator[PathSample]:
    """All paths of the run, in index order, `batch_size` at a time."""
    if batch_size < 1:
        raise ConfigError(f"batch_size must be positive, got {batch_size}")
    for start in range(0, cfg.n_paths, batch_size):
        yield simulate_paths(
            model, cfg, path_ids=range(start, min(start + batch_size, cfg.n_paths))
        )


@dataclass(frozen=True)
class CharacteristicEstimate:
    u: float
    value: complex
    std_error: float


def empirical_cf(paths: PathSample, u: float) -> CharacteristicEstimate:
    """Monte Carlo estimate of E[exp(iu X_T)] with its standard error."""
    phases = np.exp(1j * u * paths.terminal)
    n = phases.size
    if n < 2:
        return CharacteristicEstimate(u, complex(np.mean(phases)), math.inf)
    std_error = math.sqrt(
        (float(np.var(phases.real, ddof=1)) + float(np.var(phases.imag, ddof=1))) / n
    )
    return CharacteristicEstimate(u, complex(np.mean(phases)), std_error)


def write_paths_csv(paths: PathSample, destination: Path) -> Path:
    """Dump rows (path_id, t, x) for debugging."""
    times = paths.t_grid.tolist()
    rows = (
        (path_id, t, x)
        for path_id, row in zip(paths.path_ids, paths.states)
        for t, x in zip(times, row.tolist())
    )
    return write_csv(destination, ["path_id", "t", "x"], rows)
