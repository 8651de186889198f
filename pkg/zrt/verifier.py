"""This module defines the Verifier class, which runs the Monte Carlo checks of the martingale
decompositions of r_q(x − X_t) and h(X_t − x).

For a model, a simulation configuration and an ε for the occupation estimator L̂, a Verifier
simulates the ensemble in batches, evaluates the kernels along the paths through `KernelGrid`
interpolants spanning the path envelope, and summarizes every tested quantity by its mean,
standard error and z-score.

By default the kernels are box-smoothed over [w − ε, w + ε], which makes

    M^q_t = r^ε_q(x − X_t) − r^ε_q(x − X_0) − q ∫₀^t r^ε_q(x − X_s) ds + L̂^x_t,
    Ñ_t   = h^ε(X_t − x) − h^ε(X_0 − x) − L̂^x_t

exact martingales for the ε-occupation functional in continuous time. Point kernels are used
for the classical agreement checks, which carry a declared bias margin.

Typical usage example:
```python
from zrt import levy_models
from zrt.pathsim import SimConfig
from zrt.verifier import Verifier, VerifyConfig

verifier = Verifier(
    model=levy_models.brownian(),
    config=VerifyConfig(sim=SimConfig(n_steps=2000, n_paths=2000, seed=7), eps=0.05),
)
report = verifier.doob_meyer(q=1.0, x=0.0)
print(report.verdict)
```
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Optional, Sequence
import logging
import math

import numpy as np
from scipy import integrate

from .conditions import Verdict
from .custom_data_types import FloatArray, JsonType
from .exceptions import ConfigError
from .levy_models import LevyModel
from .localtime import default_epsilon, hit_indicators
from .pathsim import PathSample, SimConfig, iter_path_batches, simulate_paths
from .quadrature import QuadratureSpec
from .resolvent import (
    DEFAULT_SPEC,
    KernelGrid,
    renormalized_zero_resolvent,
    require_conditions,
    resolvent_antiderivative_grid,
    resolvent_density,
    ResolventQuery,
    zero_resolvent_antiderivative_grid,
)

logger = logging.getLogger("zrt.verify")

Z_THRESHOLD = 4.0
MIN_PATHS = 30
TREND_Q_GRID = (1.0, 0.1, 0.01)
_IN_MEMORY_LIMIT = 20_000_000


@dataclass(frozen=True)
class VerifyConfig:
    """Parameters of a verification run.

    Attributes:
        sim: The simulation configuration (x0 is the starting point).
        eps: Half-width ε of the occupation window (None picks `default_epsilon` from a pilot).
        z_threshold: Largest accepted |z-score| (default is 4).
        bias_margin: Relative margin for classical agreement checks (default is 0.03).
        tolerance: Relative tolerance of the killed-process checks (default is 0.10).
        mollified: Use box-smoothed kernels in the martingale tests (default is True).
        grid_nodes: Nodes of each KernelGrid (default is 2048).
        batch_size: Paths simulated at a time (default is 500).
        force: Compute although a condition is only numerically unverified (default is False).
        spec: Quadrature parameters of the kernels.
    """

    sim: SimConfig = field(default_factory=SimConfig)
    eps: Optional[float] = None
    z_threshold: float = Z_THRESHOLD
    bias_margin: float = 0.03
    tolerance: float = 0.10
    mollified: bool = True
    grid_nodes: int = 2048
    batch_size: int = 500
    force: bool = False
    spec: QuadratureSpec = DEFAULT_SPEC

    def __post_init__(self) -> None:
        if self.eps is not None and not self.eps > 0.0:
            raise ConfigError(f"eps must be positive, got {self.eps}")
        if not (self.z_threshold > 0.0 and self.bias_margin >= 0.0 and self.tolerance >= 0.0):
            raise ConfigError("z_threshold must be positive, bias_margin and tolerance >= 0")
        if self.grid_nodes < 16 or self.batch_size < 1:
            raise ConfigError(
                f"need grid_nodes >= 16 and batch_size >= 1, "
                f"got {self.grid_nodes}, {self.batch_size}"
            )


@dataclass(frozen=True)
class QuantityTest:
    """Mean-zero test of one per-path quantity.

    The verdict is PASS iff |mean| ≤ threshold · std_error + margin, which for margin 0 is
    |z_score| ≤ threshold.
    """

    name: str
    n_paths: int
    mean: float
    std_error: float
    z_score: float
    verdict: Verdict
    margin: float = 0.0

    def as_dict(self) -> dict[str, JsonType]:
        return {
            "name": self.name,
            "n_paths": self.n_paths,
            "mean": self.mean,
            "std_error": self.std_error,
            "z_score": self.z_score,
            "margin": self.margin,
            "verdict": self.verdict.name,
        }


@dataclass(frozen=True)
class DecompositionSample:
    """Per-path terms of both decompositions at the horizon.

    m_q is NaN when no q was tested and n_tilde is NaN when h was not needed.
    """

    path_id: int
    x: float
    q: Optional[float]
    m_q: float
    n_tilde: float
    l_hat: float
    h_terminal: float
    h_initial: float


@dataclass(frozen=True)
class DecompositionReport:
    """Outcome of a verification run."""

    operation: str
    n_paths: int
    eps: float
    tests: tuple[QuantityTest, ...]
    diagnostics: dict[str, JsonType] = field(default_factory=dict, compare=False)
    samples: tuple[DecompositionSample, ...] = field(default=(), repr=False, compare=False)

    @property
    def verdict(self) -> Verdict:
        verdicts = {test.verdict for test in self.tests}
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if Verdict.INCONCLUSIVE in verdicts or not verdicts:
            return Verdict.INCONCLUSIVE
        return Verdict.PASS

    def __getitem__(self, name: str) -> QuantityTest:
        for test in self.tests:
            if test.name == name:
                return test
        raise KeyError(name)

    def as_dict(self) -> dict[str, JsonType]:
        return {
            "operation": self.operation,
            "n_paths": self.n_paths,
            "eps": self.eps,
            "verdict": self.verdict.name,
            "tests": [test.as_dict() for test in self.tests],
            "diagnostics": self.diagnostics,
        }


def mean_test(
    name: str, values: FloatArray, *, threshold: float = Z_THRESHOLD, margin: float = 0.0
) -> QuantityTest:
    """Test E[values] = 0 from the sample mean and its standard error."""
    values = np.asarray(values, dtype=np.float64)
    n = int(values.size)
    mean = float(np.mean(values)) if n else math.nan
    if n < MIN_PATHS or not math.isfinite(mean):
        std_error = float(np.std(values, ddof=1)) / math.sqrt(n) if n > 1 else math.inf
        return QuantityTest(name, n, mean, std_error, math.nan, Verdict.INCONCLUSIVE, margin)
    std_error = float(np.std(values, ddof=1)) / math.sqrt(n)
    if std_error > 0.0:
        z_score = mean / std_error
    else:
        z_score = 0.0 if mean == 0.0 else math.copysign(math.inf, mean)
    passed = abs(mean) <= threshold * std_error + margin
    return QuantityTest(
        name, n, mean, std_error, z_score, Verdict.PASS if passed else Verdict.FAIL, margin
    )


class Verifier:
    """The Verifier class runs the Monte Carlo checks for one model and one configuration.

    Kernel grids are built on first use over the envelope of the simulated paths and reused by
    later checks. Paths are regenerated batch by batch from their seeds whenever the ensemble
    is too large to keep in memory, so every check sees the same paths.

    The Verifier class takes the following parameters:
        model: The Lévy model.
        config: The VerifyConfig (default is VerifyConfig()).
    """

    def __init__(self, *, model: LevyModel, config: Optional[VerifyConfig] = None):
        self.model = model
        self.config = config if config is not None else VerifyConfig()
        self._batches: Optional[list[PathSample]] = None
        self._envelope: Optional[tuple[float, float]] = None
        self._eps: Optional[float] = self.config.eps
        self._grids: dict[tuple[str, Optional[float]], KernelGrid] = {}
        logger.info(
            "Verifier created: id: %s, model: %s, sim: %s, eps: %s, mollified: %s, "
            "grid_nodes: %s",
            id(self),
            self.model.family.name,
            self.config.sim,
            self.config.eps,
            self.config.mollified,
            self.config.grid_nodes,
        )

    @property
    def sim(self) -> SimConfig:
        return self.config.sim

    def batches(self, sim: Optional[SimConfig] = None) -> Iterator[PathSample]:
        """Path batches of the configured run (or of `sim`), in index order."""
        if sim is not None and sim != self.sim:
            yield from iter_path_batches(self.model, sim, batch_size=self.config.batch_size)
            return
        if self._batches is not None:
            yield from self._batches
            return
        keep = self.sim.n_paths * (self.sim.n_steps + 1) <= _IN_MEMORY_LIMIT
        kept = []
        for batch in iter_path_batches(self.model, self.sim, batch_size=self.config.batch_size):
            if keep:
                kept.append(batch)
            yield batch
        if keep:
            self._batches = kept

    @property
    def eps(self) -> float:
        if self._eps is None:
            pilot = simulate_paths(
                self.model, self.sim, path_ids=range(min(self.sim.n_paths, 100))
            )
            self._eps = default_epsilon(pilot)
            logger.info("Verifier %s uses default eps %s", id(self), self._eps)
        return self._eps

    def envelope(self) -> tuple[float, float]:
        """The range of all path values of the configured run."""
        if self._envelope is None:
            lower, upper = math.inf, -math.inf
            for batch in self.batches():
                lower = min(lower, float(np.min(batch.states)))
                upper = max(upper, float(np.max(batch.states)))
            self._envelope = (lower, upper)
        return self._envelope

    def _grid_range(self, x: float, *, reflect: bool) -> tuple[float, float]:
        lower, upper = self.envelope()
        pad = 2.0 * self.eps + 0.05 * (upper - lower) + 0.1
        if reflect:
            return x - upper - pad, x - lower + pad
        return lower - x - pad, upper - x + pad

    def resolvent_grid(self, q: float, x: float) -> KernelGrid:
        """KernelGrid of R_q over the values taken by x − X."""
        key = (f"R@{x}", q)
        if key not in self._grids:
            lower, upper = self._grid_range(x, reflect=True)
            self._grids[key] = resolvent_antiderivative_grid(
                self.model,
                q,
                lower,
                upper,
                nodes=self.config.grid_nodes,
                workers=self.sim.workers,
                force=self.config.force,
                spec=self.config.spec,
            )
        return self._grids[key]

    def zero_resolvent_grid(self, x: float) -> KernelGrid:
        """KernelGrid of H over the values taken by X − x."""
        key = (f"H@{x}", None)
        if key not in self._grids:
            lower, upper = self._grid_range(x, reflect=False)
            self._grids[key] = zero_resolvent_antiderivative_grid(
                self.model,
                lower,
                upper,
                nodes=self.config.grid_nodes,
                workers=self.sim.workers,
                force=self.config.force,
                spec=self.config.spec,
            )
        return self._grids[key]

    def _kernel(self, grid: KernelGrid, *, mollified: bool) -> Callable[[FloatArray], FloatArray]:
        if mollified:
            eps = self.eps
            return lambda w: grid.smoothed(w, eps)
        return grid.derivative

    def _local_time(self, batch: PathSample, x: float, upto: int) -> FloatArray:
        dt = float(batch.t_grid[1] - batch.t_grid[0])
        counts = np.count_nonzero(np.abs(batch.states[:, :upto] - x) < self.eps, axis=1)
        return counts * (dt / (2.0 * self.eps))

    def _martingale_tests(
        self, prefix: str, terminal: FloatArray, midpoint: FloatArray, midpoint_state: FloatArray,
        x: float,
    ) -> list[QuantityTest]:
        increment = terminal - midpoint
        threshold = self.config.z_threshold
        return [
            mean_test(f"{prefix}_mean", terminal, threshold=threshold),
            mean_test(f"{prefix}_increment", increment, threshold=threshold),
            mean_test(
                f"{prefix}_increment_tanh",
                increment * np.tanh(midpoint_state - x),
                threshold=threshold,
            ),
        ]

    def _m_q(
        self, batch: PathSample, q: float, x: float, *, mollified: bool
    ) -> tuple[FloatArray, FloatArray, FloatArray]:
        """M^q at the horizon and at the midpoint of the grid, and q ∫₀^T r_q(x − X_s) ds."""
        kernel = self._kernel(self.resolvent_grid(q, x), mollified=mollified)
        last = batch.states.shape[1] - 1
        mid = batch.states.shape[1] // 2
        values = kernel(x - batch.states)
        integral = q * integrate.cumulative_trapezoid(values, batch.t_grid, axis=1, initial=0.0)
        terminal = (
            values[:, -1] - values[:, 0] - integral[:, -1] + self._local_time(batch, x, last)
        )
        midpoint = (
            values[:, mid] - values[:, 0] - integral[:, mid] + self._local_time(batch, x, mid)
        )
        return terminal, midpoint, integral[:, -1]

    def _n_tilde(
        self, batch: PathSample, x: float, *, mollified: bool
    ) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
        """Ñ at the horizon and the midpoint, h(X_T − x) and h(X_0 − x), per path."""
        kernel = self._kernel(self.zero_resolvent_grid(x), mollified=mollified)
        mid = batch.states.shape[1] // 2
        ends = kernel(batch.states[:, [0, mid, -1]] - x)
        last = batch.states.shape[1] - 1
        terminal = ends[:, 2] - ends[:, 0] - self._local_time(batch, x, last)
        midpoint = ends[:, 1] - ends[:, 0] - self._local_time(batch, x, mid)
        return terminal, midpoint, ends[:, 2], ends[:, 0]

    def doob_meyer(self, *, q: float, x: float, keep_samples: bool = False) -> DecompositionReport:
        """Test that M^q is a martingale: zero mean and midpoint-increment orthogonality.

        Raises:
            ConfigError: If q ≤ 0.
            ConditionViolation: If condition (A) does not hold.
        """
        if not q > 0.0:
            raise ConfigError(f"the Doob–Meyer decomposition needs q > 0, got {q}")
        require_conditions(self.model, need_b=False, force=self.config.force)
        logger.info("Doob-Meyer check: verifier: %s, q: %s, x: %s", id(self), q, x)
        terminal, midpoint, states, samples = [], [], [], []
        for batch in self.batches():
            m_terminal, m_midpoint, _ = self._m_q(batch, q, x, mollified=self.config.mollified)
            terminal.append(m_terminal)
            midpoint.append(m_midpoint)
            states.append(batch.states[:, batch.states.shape[1] // 2])
            if keep_samples:
                l_hat = self._local_time(batch, x, batch.states.shape[1] - 1)
                samples.extend(
                    DecompositionSample(i, x, q, m, math.nan, l, math.nan, math.nan)
                    for i, m, l in zip(batch.path_ids, m_terminal.tolist(), l_hat.tolist())
                )
        tests = self._martingale_tests(
            "M", np.concatenate(terminal), np.concatenate(midpoint), np.concatenate(states), x
        )
        report = DecompositionReport(
            operation="doob-meyer",
            n_paths=self.sim.n_paths,
            eps=self.eps,
            tests=tuple(tests),
            diagnostics={"q": q, "x": x, "mollified": self.config.mollified},
            samples=tuple(samples),
        )
        self._log_report(report)
        return report

    def tanaka(
        self, *, x: float, trend_q: Sequence[float] = TREND_Q_GRID, keep_samples: bool = False
    ) -> DecompositionReport:
        """Test that Ñ is a martingale, the classical Tanaka agreement and the q ↓ 0 trend.

        The agreement check compares E[h(X_T − x)] − h(X_0 − x) with E[L̂^x_T] using the
        point kernel h, within threshold · SE plus bias_margin · E[L̂^x_T] plus the mean gap
        between the point and the box-smoothed kernel at X_0 and X_T. The trend is the mean
        of |−M^q_T − Ñ_T| along `trend_q`, which should decrease, reported with the mean of
        q ∫₀^T r_q(x − X_s) ds, which vanishes as q ↓ 0.

        Raises:
            ConditionViolation: If (A) or (B) does not hold.
        """
        require_conditions(self.model, need_b=True, force=self.config.force)
        logger.info("Tanaka check: verifier: %s, x: %s", id(self), x)
        n_terminal, n_midpoint, states, point_gap, l_hat, h_end, bias = [], [], [], [], [], [], []
        trend_sums = dict.fromkeys(trend_q, 0.0)
        discounted_sums = dict.fromkeys(trend_q, 0.0)
        samples = []
        for batch in self.batches():
            smooth = self._n_tilde(batch, x, mollified=True)
            point = self._n_tilde(batch, x, mollified=False)
            terminal, midpoint, h_terminal, h_initial = smooth if self.config.mollified else point
            n_terminal.append(terminal)
            n_midpoint.append(midpoint)
            states.append(batch.states[:, batch.states.shape[1] // 2])
            local = self._local_time(batch, x, batch.states.shape[1] - 1)
            l_hat.append(local)
            point_gap.append(point[0])
            h_end.append(point[2] - point[3])
            bias.append(np.abs(smooth[2] - point[2]) + np.abs(smooth[3] - point[3]))
            for q in trend_q:
                m_terminal, _, discounted = self._m_q(
                    batch, q, x, mollified=self.config.mollified
                )
                trend_sums[q] += float(np.sum(np.abs(-m_terminal - terminal)))
                discounted_sums[q] += float(np.sum(discounted))
            if keep_samples:
                samples.extend(
                    DecompositionSample(i, x, None, math.nan, n, l, ht, h0)
                    for i, n, l, ht, h0 in zip(
                        batch.path_ids,
                        terminal.tolist(),
                        local.tolist(),
                        h_terminal.tolist(),
                        h_initial.tolist(),
                    )
                )
        mean_local = float(np.mean(np.concatenate(l_hat)))
        smoothing_bias = float(np.mean(np.concatenate(bias)))
        tests = self._martingale_tests(
            "N_tilde",
            np.concatenate(n_terminal),
            np.concatenate(n_midpoint),
            np.concatenate(states),
            x,
        )
        tests.append(
            mean_test(
                "tanaka_agreement",
                np.concatenate(point_gap),
                threshold=self.config.z_threshold,
                margin=self.config.bias_margin * abs(mean_local) + smoothing_bias,
            )
        )
        trend = [trend_sums[q] / self.sim.n_paths for q in trend_q]
        decreasing = all(later <= earlier for earlier, later in zip(trend, trend[1:]))
        if not decreasing:
            logger.warning("-M^q does not approach N_tilde along q=%s: %s", list(trend_q), trend)
        report = DecompositionReport(
            operation="tanaka",
            n_paths=self.sim.n_paths,
            eps=self.eps,
            tests=tuple(tests),
            diagnostics={
                "x": x,
                "mollified": self.config.mollified,
                "mean_local_time": mean_local,
                "mean_h_increment": float(np.mean(np.concatenate(h_end))),
                "smoothing_bias": smoothing_bias,
                "trend_q": list(trend_q),
                "trend_mean_abs_gap": trend,
                "trend_decreasing": decreasing,
                "trend_mean_discounted_term": [
                    discounted_sums[q] / self.sim.n_paths for q in trend_q
                ],
            },
            samples=tuple(samples),
        )
        self._log_report(report)
        return report

    def resolvent_identity(self, *, q: float, x: float) -> DecompositionReport:
        """Compare the mean discounted local time at x of paths started at x0 with r_q(x − x0).

        The test passes when the gap to the point kernel r_q(x − x0) is within
        threshold · SE + bias_margin · r_q(x − x0) + |r^ε_q(x − x0) − r_q(x − x0)|. The gap to
        the box-smoothed kernel r^ε_q, the exact target of the ε-occupation estimator, is
        reported as a second test whose only margin is the horizon truncation.
        """
        if not q > 0.0:
            raise ConfigError(f"q must be positive, got {q}")
        require_conditions(self.model, need_b=False, force=self.config.force)
        y = self.sim.x0
        point = resolvent_density(
            ResolventQuery(model=self.model, q=q, x=x - y, force=self.config.force),
            spec=self.config.spec,
        ).value
        smoothed = float(self.resolvent_grid(q, x).smoothed(np.array([x - y]), self.eps)[0])
        values = []
        horizon = self.sim.horizon
        for batch in self.batches():
            times = batch.t_grid[:-1]
            dt = float(batch.t_grid[1] - batch.t_grid[0])
            hits = hit_indicators(batch.states[:, :-1], x, self.eps)
            values.append((hits @ np.exp(-q * times)) * (dt / (2.0 * self.eps)))
        discounted = np.concatenate(values)
        tests = (
            mean_test(
                "resolvent_point",
                discounted - point,
                threshold=self.config.z_threshold,
                margin=self.config.bias_margin * abs(point) + abs(smoothed - point),
            ),
            mean_test(
                "resolvent_smoothed",
                discounted - smoothed,
                threshold=self.config.z_threshold,
                margin=math.exp(-q * horizon) * abs(smoothed),
            ),
        )
        report = DecompositionReport(
            operation="resolvent-id",
            n_paths=self.sim.n_paths,
            eps=self.eps,
            tests=tests,
            diagnostics={
                "q": q,
                "x": x,
                "y": y,
                "mean_discounted_local_time": float(np.mean(discounted)),
                "r_q": point,
                "r_q_smoothed": smoothed,
                "truncation_bound": math.exp(-q * horizon) * point,
            },
        )
        self._log_report(report)
        return report

    def _killed(
        self, kill_radius: float, stat: Callable[[PathSample, FloatArray], FloatArray]
    ) -> FloatArray:
        """stat(batch, kill_index) over all paths; kill_index is the first grid index with
        |X| < kill_radius, or the grid size when the path is never killed."""
        out = []
        for batch in self.batches():
            near = np.abs(batch.states) < kill_radius
            killed = near.any(axis=1)
            first = np.where(killed, near.argmax(axis=1), batch.states.shape[1])
            out.append(stat(batch, first))
        return np.concatenate(out)

    def killed_invariance(
        self, *, kill_radius: float, time_index: Optional[int] = None
    ) -> DecompositionReport:
        """Compare E[h(X_t) 1{not killed by t}] with h(x0) under δ_K-neighbourhood killing.

        Discrete monitoring under-kills, so the estimate is biased upward. The check passes
        within threshold · SE + tolerance · h(x0); the estimates for δ_K and δ_K/2 are reported as
        the refinement trend.

        Raises:
            ConfigError: If |x0| ≤ δ_K or δ_K ≤ 0.
            ConditionViolation: If (A) or (B) does not hold.
        """
        x0 = self.sim.x0
        if not (kill_radius > 0.0 and abs(x0) > kill_radius):
            raise ConfigError(f"need 0 < kill_radius < |x0|, got {kill_radius} and x0={x0}")
        require_conditions(self.model, need_b=True, force=self.config.force)
        index = self.sim.n_steps if time_index is None else time_index
        if not 0 <= index <= self.sim.n_steps:
            raise ConfigError(f"time_index must lie in [0, {self.sim.n_steps}], got {index}")
        h = self.zero_resolvent_grid(0.0).derivative
        reference = float(h(np.array([x0]))[0])
        estimates = {}
        for radius in (kill_radius, kill_radius / 2.0):
            estimates[radius] = self._killed(
                radius,
                lambda batch, first: np.where(first > index, h(batch.states[:, index]), 0.0),
            )
        quadrature = renormalized_zero_resolvent(
            self.model, x0, force=self.config.force, spec=self.config.spec
        ).h
        means = [float(np.mean(values)) for values in estimates.values()]
        gaps = [abs(mean - reference) for mean in means]
        report = DecompositionReport(
            operation="killed",
            n_paths=self.sim.n_paths,
            eps=self.eps,
            tests=(
                mean_test(
                    "killed_invariance",
                    estimates[kill_radius] - reference,
                    threshold=self.config.z_threshold,
                    margin=self.config.tolerance * abs(reference),
                ),
            ),
            diagnostics={
                "x0": x0,
                "t": float(self.sim.t_grid()[index]),
                "h_x0": reference,
                "h_x0_quadrature": quadrature,
                "kill_radii": list(estimates),
                "estimates": means,
                "refinement_moves_toward_h": gaps[1] <= gaps[0],
            },
        )
        self._log_report(report)
        return report

    def hitting_laplace(self, *, q: float, kill_radius: float) -> DecompositionReport:
        """Compare E_x0[e^{−q T₀}] estimated by δ_K-neighbourhood killing with r_q(−x0)/r_q(0)."""
        if not q > 0.0:
            raise ConfigError(f"q must be positive, got {q}")
        x0 = self.sim.x0
        if not (kill_radius > 0.0 and abs(x0) > kill_radius):
            raise ConfigError(f"need 0 < kill_radius < |x0|, got {kill_radius} and x0={x0}")
        require_conditions(self.model, need_b=False, force=self.config.force)
        t_grid = np.append(self.sim.t_grid(), math.inf)
        at_x = resolvent_density(
            ResolventQuery(model=self.model, q=q, x=-x0, force=self.config.force),
            spec=self.config.spec,
        ).value
        at_zero = resolvent_density(
            ResolventQuery(model=self.model, q=q, x=0.0, force=self.config.force),
            spec=self.config.spec,
        ).value
        target = at_x / at_zero
        estimates = {
            radius: self._killed(radius, lambda _, first: np.exp(-q * t_grid[first]))
            for radius in (kill_radius, kill_radius / 2.0)
        }
        means = [float(np.mean(values)) for values in estimates.values()]
        report = DecompositionReport(
            operation="hitting-laplace",
            n_paths=self.sim.n_paths,
            eps=self.eps,
            tests=(
                mean_test(
                    "hitting_laplace",
                    estimates[kill_radius] - target,
                    threshold=self.config.z_threshold,
                    margin=self.config.tolerance * target + math.exp(-q * self.sim.horizon),
                ),
            ),
            diagnostics={
                "q": q,
                "x0": x0,
                "target": target,
                "kill_radii": list(estimates),
                "estimates": means,
            },
        )
        self._log_report(report)
        return report

    def with_sim(self, sim: SimConfig) -> "Verifier":
        """A Verifier for the same model and settings with another simulation configuration."""
        return Verifier(model=self.model, config=replace(self.config, sim=sim))

    def _log_report(self, report: DecompositionReport) -> None:
        for test in report.tests:
            if test.verdict == Verdict.PASS:
                logger.info("%s %s: %s", report.operation, test.name, test.as_dict())
            else:
                logger.warning("%s %s: %s", report.operation, test.name, test.as_dict())

