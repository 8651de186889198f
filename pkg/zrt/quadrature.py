"""One-dimensional integration on [0, ∞) for Fourier inversion integrands.

The integrands met here have two difficulties: an integrable singularity at u = 0 and a slowly
decaying, possibly oscillating tail. `integrate_semi_infinite` splits [0, ∞) into

- a head [0, u₁], integrated after the substitution u = v^p that flattens a declared
  singularity u^e (p = 1 / (1 + e)), which is a graded mesh in u;
- a middle part up to the first oscillation node past u₁;
- a tail, where the non-oscillating part is integrated in log u with a power-law remainder
  estimate. An oscillating part is first averaged over shifts by half periods (a continuous
  Euler transform), which keeps its integral exact and leaves a smooth remainder.

All panels are integrated with vectorized Gauss–Legendre pairs (20 and 10 nodes) whose
difference is the reported error, refined by bisection until the tolerance is met.

`integrability_probe` decides whether ∫|f| is finite by integrating over dyadic shells towards
the singular endpoints and reading the decay of the shell integrals.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional
import logging
import math

import numpy as np
from scipy import special

from .custom_data_types import FloatArray, JsonType, RealFunction
from .exceptions import ConfigError

logger = logging.getLogger("zrt.quadrature")

_FINE_NODES, _FINE_WEIGHTS = np.polynomial.legendre.leggauss(20)
_COARSE_NODES, _COARSE_WEIGHTS = np.polynomial.legendre.leggauss(10)
_PROBE_NODES, _PROBE_WEIGHTS = np.polynomial.legendre.leggauss(16)
_TAIL_DECADES = 8
_EULER_ORDER = 8
_CANCELLATION_FLOOR = 64.0 * np.finfo(np.float64).eps
_FLAT_RATIO = 1e-9
_SLOWEST_RATIO_GAP = 1e-4
_GEOMETRIC_DECAY = 0.75


class Acceleration(Enum):
    """The Acceleration enum selects how the oscillating tail is summed.

    - NONE: Plain partial sums over half periods; the last panel bounds the remainder.
    - ALTERNATING_SERIES: Continuous Euler transform over half periods, valid whether or not
      the integrand oscillates around 0.
    """

    NONE = 1
    ALTERNATING_SERIES = 2


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration strategy parameters.

    Attributes:
        abs_tol: Absolute tolerance (default is 1e-10).
        rel_tol: Relative tolerance (default is 1e-10).
        split_point: Boundary u₁ between the singular head and the tail (default is 1.0).
        max_tail_periods: Maximum number of oscillation periods summed in the tail.
        acceleration: Summation of the oscillating tail.
        max_panels: Maximum number of panels for each adaptive part.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    split_point: float = 1.0
    max_tail_periods: int = 2048
    acceleration: Acceleration = Acceleration.ALTERNATING_SERIES
    max_panels: int = 8192

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ConfigError(f"tolerances must be positive: {self}")
        if not self.split_point > 0.0:
            raise ConfigError(f"split point must be positive: {self}")
        if self.max_tail_periods < 1 or self.max_panels < 1:
            raise ConfigError(f"budgets must be at least 1: {self}")

    def with_budget(self, budget: int) -> "QuadratureSpec":
        """A copy whose tail and panel budgets are scaled to `budget` tail periods."""
        return replace(self, max_tail_periods=budget, max_panels=4 * budget)

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class QuadratureResult:
    """Value of an integral with its error estimate.

    `converged` is True only when `error_estimate` meets the tolerance of the spec used.
    """

    value: float
    error_estimate: float
    tail_truncation_bound: float = 0.0
    converged: bool = True
    function_evals: int = 0

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            tail_truncation_bound=self.tail_truncation_bound + other.tail_truncation_bound,
            converged=self.converged and other.converged,
            function_evals=self.function_evals + other.function_evals,
        )

    def scaled(self, factor: float) -> "QuadratureResult":
        return QuadratureResult(
            value=factor * self.value,
            error_estimate=abs(factor) * self.error_estimate,
            tail_truncation_bound=abs(factor) * self.tail_truncation_bound,
            converged=self.converged,
            function_evals=self.function_evals,
        )


def _gauss_pair(
    f: RealFunction, lower: FloatArray, upper: FloatArray
) -> tuple[FloatArray, FloatArray]:
    """20- and 10-point Gauss–Legendre values on each panel [lower[i], upper[i]]."""
    mid = 0.5 * (lower + upper)[:, None]
    half = 0.5 * (upper - lower)
    fine_values = np.asarray(f((mid + half[:, None] * _FINE_NODES).ravel()), dtype=np.float64)
    coarse_values = np.asarray(
        f((mid + half[:, None] * _COARSE_NODES).ravel()), dtype=np.float64
    )
    fine = half * (fine_values.reshape(-1, _FINE_NODES.size) @ _FINE_WEIGHTS)
    coarse = half * (coarse_values.reshape(-1, _COARSE_NODES.size) @ _COARSE_WEIGHTS)
    return fine, coarse


def _adaptive_gauss(
    f: RealFunction, edges: FloatArray, tol: float, max_panels: int
) -> QuadratureResult:
    """Adaptive bisection of the initial panels until each panel meets its share of `tol`."""
    lower = np.asarray(edges[:-1], dtype=np.float64)
    upper = np.asarray(edges[1:], dtype=np.float64)
    span = float(upper[-1] - lower[0])
    value = 0.0
    error = 0.0
    evals = 0
    panels = lower.size
    converged = True
    while lower.size:
        fine, coarse = _gauss_pair(f, lower, upper)
        evals += lower.size * (_FINE_NODES.size + _COARSE_NODES.size)
        if not (np.all(np.isfinite(fine)) and np.all(np.isfinite(coarse))):
            logger.warning("Non-finite integrand values on [%s, %s]", lower.min(), upper.max())
            return QuadratureResult(math.nan, math.inf, 0.0, False, evals)
        diff = np.abs(fine - coarse)
        width = upper - lower
        done = (diff <= tol * width / span) | (width <= 1e-13 * span)
        if panels + int(np.count_nonzero(~done)) > max_panels:
            done[:] = True
            converged = False
        value += float(np.sum(fine[done]))
        error += float(np.sum(diff[done]))
        mid = 0.5 * (lower + upper)[~done]
        lower, upper = (
            np.concatenate([lower[~done], mid]),
            np.concatenate([mid, upper[~done]]),
        )
        panels += lower.size // 2
    return QuadratureResult(
        value=value,
        error_estimate=error,
        converged=converged and error <= tol,
        function_evals=evals,
    )


def _head(
    f: RealFunction, end: float, singularity_exponent: float, tol: float, max_panels: int
) -> QuadratureResult:
    power = min(max(1.0 / (1.0 + singularity_exponent), 1.0), 10.0)
    graded = lambda v: power * v ** (power - 1.0) * f(v**power)  # noqa: E731
    edges = np.linspace(0.0, end ** (1.0 / power), 9)
    return _adaptive_gauss(graded, edges, tol, max_panels)


def _middle(
    f: RealFunction, start: float, end: float, half_period: Optional[float], tol: float,
    max_panels: int,
) -> QuadratureResult:
    if end <= start:
        return QuadratureResult(0.0, 0.0)
    edges = [start * 2.0**k for k in range(int(math.log2(end / start)) + 1)]
    if half_period is not None:
        edges.extend(np.arange(start, end, half_period).tolist())
    edges.append(end)
    grid = np.unique(np.asarray(edges, dtype=np.float64))
    return _adaptive_gauss(f, grid, tol, max_panels)


def _smooth_tail(
    s: RealFunction, start: float, tol: float, max_panels: int
) -> QuadratureResult:
    """∫_start^∞ s(u) du in τ = log(u / start) plus a power-law remainder estimate.

    A tail below 1e-3 of the tolerance at the end of the log range is dropped without a power
    fit.
    """
    log_span = _TAIL_DECADES * math.log(10.0)
    end = start * math.exp(log_span)
    substituted = lambda tau: s(start * np.exp(tau)) * start * np.exp(tau)  # noqa: E731
    body = _adaptive_gauss(substituted, np.linspace(0.0, log_span, 33), tol, max_panels)
    at = np.asarray(s(np.array([end / 4.0, end / 2.0, end])), dtype=np.float64)
    bound = float(np.max(np.abs(at))) * end
    if bound <= 1e-3 * tol:
        return QuadratureResult(
            value=body.value,
            error_estimate=body.error_estimate + bound,
            tail_truncation_bound=bound,
            converged=body.converged,
            function_evals=body.function_evals + 3,
        )
    if at[2] == 0.0:
        return body
    with np.errstate(divide="ignore", invalid="ignore"):
        power = math.log2(abs(at[1] / at[2]))
        previous_power = math.log2(abs(at[0] / at[1]))
    if not (math.isfinite(power) and power > 1.0):
        logger.warning("Tail of the integrand does not decay faster than 1/u: power %s", power)
        return QuadratureResult(body.value, math.inf, math.inf, False, body.function_evals + 3)
    remainder = float(at[2]) * end / (power - 1.0)
    remainder_error = abs(remainder) * abs(power - previous_power) / (power - 1.0)
    return QuadratureResult(
        value=body.value + remainder,
        error_estimate=body.error_estimate + remainder_error,
        tail_truncation_bound=abs(remainder),
        converged=body.converged and remainder_error <= tol,
        function_evals=body.function_evals + 3,
    )


def _euler_weights(order: int) -> FloatArray:
    """Weights w_j of the first half-period integrals left over by `order` averaging steps."""
    weights = np.zeros(order)
    for k in range(order):
        j = np.arange(k + 1)
        weights[: k + 1] += 0.5 ** (k + 1) * special.comb(k, j)
    return weights


def _euler_tail(
    g: RealFunction, start: float, half_period: float, tol: float, max_panels: int
) -> QuadratureResult:
    """∫_start^∞ g by the continuous Euler transform over half periods h.

    With g_{k+1}(u) = (g_k(u) + g_k(u + h)) / 2 the integral splits exactly into
    ∫_start^∞ g_K plus a weighted sum of the first K half-period integrals of g. Averaging
    cancels the oscillation, so g_K is left to the smooth tail.
    """
    order = _EULER_ORDER
    weights = _euler_weights(order)
    coefficients = special.comb(order, np.arange(order + 1)) / 2.0**order

    def weighted(u: FloatArray) -> FloatArray:
        index = np.clip(((u - start) / half_period).astype(np.int64), 0, order - 1)
        return weights[index] * np.asarray(g(u), dtype=np.float64)

    def averaged(u: FloatArray) -> FloatArray:
        u = np.asarray(u, dtype=np.float64)
        total = np.zeros_like(u)
        magnitude = np.zeros_like(u)
        for j, c in enumerate(coefficients):
            term = c * np.asarray(g(u + j * half_period), dtype=np.float64)
            total += term
            magnitude += np.abs(term)
        # the shifts u + jh carry a phase error of order eps * u / h
        floor = _CANCELLATION_FLOOR * (1.0 + u * math.pi / half_period) * magnitude
        return np.where(np.abs(total) <= floor, 0.0, total)

    edges = start + half_period * np.arange(order + 1, dtype=np.float64)
    leading = _adaptive_gauss(weighted, edges, tol / 2.0, max_panels)
    return leading + _smooth_tail(averaged, start, tol / 2.0, max_panels)


def _oscillating_tail(
    g: RealFunction, start: float, half_period: float, tol: float, spec: QuadratureSpec
) -> QuadratureResult:
    if spec.acceleration == Acceleration.ALTERNATING_SERIES:
        return _euler_tail(g, start, half_period, tol, spec.max_panels)
    terms: list[float] = []
    quadrature_error = 0.0
    evals = 0
    batch = 32
    while True:
        first = len(terms)
        edges = start + half_period * np.arange(first, first + batch + 1, dtype=np.float64)
        fine, coarse = _gauss_pair(g, edges[:-1], edges[1:])
        evals += batch * (_FINE_NODES.size + _COARSE_NODES.size)
        if not np.all(np.isfinite(fine)):
            return QuadratureResult(math.nan, math.inf, math.inf, False, evals)
        terms.extend(fine.tolist())
        quadrature_error += float(np.sum(np.abs(fine - coarse)))
        change = 0.5 * abs(terms[-1])
        if change <= tol or len(terms) >= 2 * spec.max_tail_periods:
            break
        batch = len(terms)
    return QuadratureResult(
        value=float(np.sum(terms)),
        error_estimate=quadrature_error + change,
        tail_truncation_bound=change,
        converged=change <= tol,
        function_evals=evals,
    )


def integrate_semi_infinite(
    f: RealFunction,
    spec: QuadratureSpec,
    oscillation_period: Optional[float] = None,
    *,
    smooth_part: Optional[RealFunction] = None,
    singularity_exponent: float = 0.0,
) -> QuadratureResult:
    """Integrate f over [0, ∞).

    Args:
        f: The integrand, vectorized over numpy arrays.
        spec: The integration parameters.
        oscillation_period: Period of the oscillation of f in the tail (default is None,
            meaning f does not oscillate).
        smooth_part: The non-oscillating component of f in the tail, integrated separately
            (default is None). Ignored without an oscillation period.
        singularity_exponent: Exponent e > -1 such that f behaves like u^e near 0
            (default is 0).

    Returns:
        The QuadratureResult; `converged` is False when the budget ran out before the
        tolerance was met.

    Raises:
        ConfigError: If the period or the singularity exponent is invalid.
    """
    if not singularity_exponent > -1.0:
        raise ConfigError(f"singularity exponent must exceed -1, got {singularity_exponent}")
    if oscillation_period is not None and not oscillation_period > 0.0:
        raise ConfigError(f"oscillation period must be positive, got {oscillation_period}")
    tol = spec.abs_tol
    split = spec.split_point
    head = _head(f, split, singularity_exponent, tol / 4.0, spec.max_panels)
    if oscillation_period is None:
        result = head + _smooth_tail(f, split, tol / 4.0, spec.max_panels)
    else:
        half = 0.5 * oscillation_period
        start = half * min(max(math.ceil(split / half), 4), 64)
        start = max(start, split)
        middle = _middle(f, split, start, half, tol / 4.0, spec.max_panels)
        if smooth_part is None:
            tail = _oscillating_tail(f, start, half, tol / 2.0, spec)
        else:
            smooth = smooth_part
            oscillating = lambda u: f(u) - smooth(u)  # noqa: E731
            tail = _oscillating_tail(oscillating, start, half, tol / 4.0, spec) + _smooth_tail(
                smooth, start, tol / 4.0, spec.max_panels
            )
        result = head + middle + tail
    converged = math.isfinite(result.value) and result.error_estimate <= spec.tolerance(
        result.value
    )
    if not converged:
        logger.debug(
            "Quadrature not converged: value: %s, error: %s, tail bound: %s, evals: %d",
            result.value,
            result.error_estimate,
            result.tail_truncation_bound,
            result.function_evals,
        )
    return replace(result, converged=converged)


class ProbeVerdict(Enum):
    """The ProbeVerdict enum is the tri-state outcome of an integrability probe.

    - FINITE: The shell integrals decay geometrically or faster than n^(-1.5).
    - DIVERGING: The shell integrals do not shrink, or decay no faster than n^(-1.1).
    - INCONCLUSIVE: The trend is borderline within the budget.
    """

    FINITE = 1
    DIVERGING = 2
    INCONCLUSIVE = 3


@dataclass(frozen=True)
class ShellTrend:
    """Shell integrals towards one endpoint of the probed domain.

    `local_exponents` holds s such that the shell integrals behave like n^(-s) in the shell
    number n. They decide the verdict only when the ratios of consecutive shells creep
    towards 1; a constant ratio below 1 is summable whatever s reads.
    """

    endpoint: float
    shell_integrals: tuple[float, ...]
    ratios: tuple[float, ...]
    local_exponents: tuple[float, ...]
    verdict: ProbeVerdict
    tail_estimate: float

    def as_dict(self) -> dict[str, JsonType]:
        return {
            "endpoint": self.endpoint,
            "shell_integrals": list(self.shell_integrals),
            "ratios": list(self.ratios),
            "local_exponents": list(self.local_exponents),
            "verdict": self.verdict.name,
            "tail_estimate": self.tail_estimate,
        }


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of `integrability_probe`."""

    finite_estimate: float
    verdict: ProbeVerdict
    evidence: tuple[ShellTrend, ...] = field(default_factory=tuple)
    bulk_integral: float = 0.0

    @property
    def diverging(self) -> bool:
        return self.verdict == ProbeVerdict.DIVERGING

    def as_dict(self) -> dict[str, JsonType]:
        return {
            "finite_estimate": self.finite_estimate,
            "verdict": self.verdict.name,
            "bulk_integral": self.bulk_integral,
            "evidence": [trend.as_dict() for trend in self.evidence],
        }


def _log_integral(f: RealFunction, lower: FloatArray, upper: FloatArray) -> FloatArray:
    """∫|f| over each [lower[i], upper[i]] (0 < lower < upper) in the variable log u."""
    pieces = 2
    log_lower = np.log(lower)[:, None]
    step = ((np.log(upper) - np.log(lower)) / pieces)[:, None]
    starts = log_lower + step * np.arange(pieces)[None, :]
    t = starts[:, :, None] + 0.5 * step[:, :, None] * (1.0 + _PROBE_NODES[None, None, :])
    u = np.exp(t)
    values = np.abs(np.asarray(f(u.ravel()), dtype=np.float64)).reshape(u.shape) * u
    return 0.5 * step[:, 0] * np.einsum("ijk,k->i", values, _PROBE_WEIGHTS)


def _classify(endpoint: float, shells: FloatArray) -> ShellTrend:
    """Read the decay of the shell integrals over the second half of the shells.

    Geometric decay (constant ratio r < 1) is summable. Polynomial decay n^(-s) shows as
    1 - r shrinking like s / n, and is summable when s is clearly above 1.
    """
    integrals = tuple(float(v) for v in shells)
    if not np.all(np.isfinite(shells)):
        return ShellTrend(endpoint, integrals, (), (), ProbeVerdict.INCONCLUSIVE, math.nan)
    first = shells.size // 2
    window = shells[first:]
    if np.all(window[-2:] == 0.0):
        return ShellTrend(endpoint, integrals, (), (), ProbeVerdict.FINITE, 0.0)
    if np.any(window[:-1] == 0.0):
        return ShellTrend(endpoint, integrals, (), (), ProbeVerdict.INCONCLUSIVE, math.nan)
    ratios = window[1:] / window[:-1]
    numbers = np.arange(first + 1, shells.size, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        exponents = np.log(ratios) / np.log(numbers / (numbers + 1.0))
    last = float(window[-1])
    gaps = 1.0 - ratios
    verdict = ProbeVerdict.INCONCLUSIVE
    tail = math.nan
    if np.all(ratios >= 1.0 - _FLAT_RATIO):
        verdict, tail = ProbeVerdict.DIVERGING, math.inf
    elif np.all(ratios < 1.0):
        decay = float(np.mean(gaps[-2:]) / np.mean(gaps[:2]))
        if decay >= _GEOMETRIC_DECAY:
            ratio = float(ratios[-1])
            if np.max(ratios) < 1.0 - _SLOWEST_RATIO_GAP:
                verdict, tail = ProbeVerdict.FINITE, last * ratio / (1.0 - ratio)
        else:
            exponent = float(np.mean(exponents[-2:]))
            if exponent >= 1.5:
                verdict = ProbeVerdict.FINITE
                tail = last * shells.size / (exponent - 1.0)
            elif exponent <= 1.1:
                verdict, tail = ProbeVerdict.DIVERGING, math.inf
    return ShellTrend(
        endpoint,
        integrals,
        tuple(float(r) for r in ratios),
        tuple(float(s) for s in exponents),
        verdict,
        tail,
    )


def integrability_probe(
    f: RealFunction, domain: tuple[float, float], budget: int = 24
) -> ProbeResult:
    """Decide numerically whether ∫_domain |f| is finite.

    The domain is cut at an anchor point (1 for [0, ∞), otherwise the finite endpoint) and
    exhausted by `budget` dyadic shells towards 0 and towards ∞. A side is finite when the
    shell integrals decay geometrically or at least like n^(-1.5) in the shell number n,
    diverging when they stop shrinking or decay no faster than n^(-1.1), and inconclusive
    otherwise. Only the second half of the shells is read.

    Args:
        f: The function, vectorized over numpy arrays.
        domain: The interval (lower, upper) with 0 <= lower < upper <= ∞.
        budget: The number of shells per unbounded or singular side (default is 24).

    Returns:
        The ProbeResult with the finite estimate (∞ when diverging, NaN when inconclusive).

    Raises:
        ConfigError: If the domain or the budget is invalid.
    """
    lower, upper = domain
    if not 0.0 <= lower < upper or budget < 8:
        raise ConfigError(f"invalid probe domain {domain} or budget {budget}")
    if lower == 0.0 and upper == math.inf:
        anchor = 1.0
    elif lower == 0.0:
        anchor = upper
    else:
        anchor = lower
    trends = []
    bulk = 0.0
    if lower == 0.0:
        k = np.arange(budget, dtype=np.float64)
        inner = _log_integral(f, anchor * 2.0 ** (-k - 1.0), anchor * 2.0 ** (-k))
        trends.append(_classify(0.0, inner))
        bulk += float(np.sum(inner))
    if upper == math.inf:
        k = np.arange(budget, dtype=np.float64)
        outer = _log_integral(f, anchor * 2.0**k, anchor * 2.0 ** (k + 1.0))
        trends.append(_classify(math.inf, outer))
        bulk += float(np.sum(outer))
    if lower > 0.0 and upper < math.inf:
        edges = np.geomspace(lower, upper, 65)
        bulk = float(np.sum(_log_integral(f, edges[:-1], edges[1:])))
    verdicts = [trend.verdict for trend in trends]
    if ProbeVerdict.DIVERGING in verdicts:
        verdict, estimate = ProbeVerdict.DIVERGING, math.inf
    elif ProbeVerdict.INCONCLUSIVE in verdicts:
        verdict, estimate = ProbeVerdict.INCONCLUSIVE, math.nan
    else:
        verdict = ProbeVerdict.FINITE
        estimate = bulk + sum(trend.tail_estimate for trend in trends)
    logger.debug(
        "Integrability probe on %s: verdict: %s, estimate: %s", domain, verdict.name, estimate
    )
    return ProbeResult(
        finite_estimate=estimate,
        verdict=verdict,
        evidence=tuple(trends),
        bulk_integral=bulk,
    )
