"""This module defines the catalog of Lévy processes and evaluates their Lévy symbols.

A model is described by its Lévy–Khintchine triplet (b, a, ν) where the symbol reads

    η(u) = i b u − a u² / 2 + ∫ (e^{iuy} − 1 − i u y 1{|y| ≤ 1}) ν(dy).

The stable family is evaluated by its closed form. Brownian motion with drift has no jump part.
Truncated stable, tempered stable and custom jump measures go through one numerical code path
that integrates the jump part with `scipy.integrate.quad`.

Typical usage example:
```python
from zrt import levy_models

model = levy_models.stable(alpha=1.5, d=1.0, beta=0.5)
value = levy_models.symbol_eval(model, 2.0)
print(value.re, value.im)
```
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Callable, Optional, Union
import logging
import math
import warnings

import numpy as np
import numpy.typing as npt
from scipy import integrate, special

from .custom_data_types import FloatArray, JumpDensityFunction
from .exceptions import ModelError, SymbolEvaluationError

logger = logging.getLogger("zrt.symbol")

SYMBOL_ABS_TOL = 1e-9
"""Documented absolute accuracy target of numerically integrated symbols."""

SYMBOL_FAILURE_TOL = 1e-6
"""Residual (relative to max(1, |η|)) above which symbol evaluation fails."""

_QUAD_EPSABS = 1e-11
_QUAD_EPSREL = 1e-10
_QUAD_LIMIT = 200
_SERIES_THRESHOLD = 0.1
_LOG_CUT = 69.0


class Family(Enum):
    """The Family enum lists the supported model families.

    The families include:
    - STABLE: Strictly α-stable jumps with the closed form symbol, α in (1, 2).
    - TRUNCATED_STABLE: Stable-like jumps restricted to |y| <= 1.
    - TEMPERED_STABLE: Stable-like jumps damped by exponential factors.
    - BROWNIAN_WITH_DRIFT: No jumps, Gaussian coefficient a and drift b.
    - CUSTOM_TRIPLET: Arbitrary jump densities with declared integrability metadata.
    """

    STABLE = 1
    TRUNCATED_STABLE = 2
    TEMPERED_STABLE = 3
    BROWNIAN_WITH_DRIFT = 4
    CUSTOM_TRIPLET = 5


@dataclass(frozen=True)
class PowerLawDensity:
    """Jump density `coefficient * y**(-1 - index) * exp(-rate * y)` on 0 < y <= cutoff.

    An exponential density is the special case index = -1.
    """

    coefficient: float
    index: float
    rate: float = 0.0
    cutoff: float = math.inf

    def __call__(self, y: FloatArray) -> FloatArray:
        y = np.asarray(y, dtype=np.float64)
        if self.coefficient == 0.0:
            return np.zeros_like(y)
        with np.errstate(over="ignore", under="ignore"):
            value = self.coefficient * y ** (-1.0 - self.index) * np.exp(-self.rate * y)
        return np.where(y <= self.cutoff, value, 0.0)


@dataclass(frozen=True)
class JumpMeasure:
    """Description of a Lévy measure through its densities on both half-lines.

    Attributes:
        positive_density: Density of ν on (0, ∞) as a function of y > 0.
        negative_density: Density of ν on (−∞, 0) as a function of |y| > 0.
        small_jump_index: Declared exponent s such that the density behaves like
            |y|^(-1-s) near 0 (negative for finite activity, e.g. -1 for a bounded density).
        support: Largest jump size (math.inf for unbounded support).
        tail_rate: Exponential decay rate of the densities at infinity (0 if none).
        tail_index: Exponent p such that the densities decay like |y|^(-1-p) at infinity
            when tail_rate is 0 (math.inf when they decay faster than any power).
    """

    positive_density: JumpDensityFunction
    negative_density: JumpDensityFunction
    small_jump_index: float
    support: float = math.inf
    tail_rate: float = 0.0
    tail_index: float = math.inf

    @property
    def is_symmetric(self) -> bool:
        return self.positive_density == self.negative_density

    @property
    def has_finite_mean_tail(self) -> bool:
        """Whether ∫_{|y|>1} |y| ν(dy) is finite."""
        return self.support < math.inf or self.tail_rate > 0.0 or self.tail_index > 1.0

    @property
    def has_finite_variance_tail(self) -> bool:
        """Whether ∫_{|y|>1} y² ν(dy) is finite."""
        return self.support < math.inf or self.tail_rate > 0.0 or self.tail_index > 2.0

    @property
    def is_finite_activity(self) -> bool:
        return self.small_jump_index < 0.0

    def total(self, y: FloatArray) -> FloatArray:
        """ν₊(y) + ν₋(y)."""
        return np.asarray(self.positive_density(y)) + np.asarray(self.negative_density(y))

    def difference(self, y: FloatArray) -> FloatArray:
        """ν₊(y) − ν₋(y)."""
        return np.asarray(self.positive_density(y)) - np.asarray(self.negative_density(y))


def stable_constant(alpha: float) -> float:
    """c(α) = (1/π) Γ(α + 1) sin(πα / 2)."""
    return float(special.gamma(alpha + 1.0) * math.sin(math.pi * alpha / 2.0) / math.pi)


@dataclass(frozen=True)
class StableParams:
    """Stable jump parameters, stored both as (c₊, c₋) and as (d, β).

    Use `StableParams.from_levy_measure` or `StableParams.from_scale` to derive the other pair.
    """

    alpha: float
    c_plus: float
    c_minus: float
    d: float
    beta: float

    def __post_init__(self) -> None:
        if not 1.0 < self.alpha < 2.0:
            raise ModelError(f"stable index alpha must lie in (1, 2), got {self.alpha}")
        if self.c_plus < 0.0 or self.c_minus < 0.0 or self.c_plus + self.c_minus <= 0.0:
            raise ModelError(
                f"need c_plus, c_minus >= 0 with c_plus + c_minus > 0, "
                f"got {self.c_plus}, {self.c_minus}"
            )
        if self.d <= 0.0 or abs(self.beta) > 1.0:
            raise ModelError(f"need d > 0 and |beta| <= 1, got d={self.d}, beta={self.beta}")
        c = stable_constant(self.alpha)
        expected_d = (self.c_plus + self.c_minus) / (2.0 * c)
        expected_beta = (self.c_plus - self.c_minus) / (self.c_plus + self.c_minus)
        if not (
            math.isclose(self.d, expected_d, rel_tol=1e-9)
            and math.isclose(self.beta, expected_beta, rel_tol=1e-9, abs_tol=1e-12)
        ):
            raise ModelError(
                f"inconsistent stable parameters: (c_plus, c_minus)=({self.c_plus}, "
                f"{self.c_minus}) gives d={expected_d}, beta={expected_beta}, "
                f"stored d={self.d}, beta={self.beta}"
            )

    @classmethod
    def from_levy_measure(cls, *, alpha: float, c_plus: float, c_minus: float) -> "StableParams":
        if c_plus + c_minus <= 0.0:
            raise ModelError("c_plus + c_minus must be positive")
        c = stable_constant(alpha)
        return cls(
            alpha=alpha,
            c_plus=c_plus,
            c_minus=c_minus,
            d=(c_plus + c_minus) / (2.0 * c),
            beta=(c_plus - c_minus) / (c_plus + c_minus),
        )

    @classmethod
    def from_scale(cls, *, alpha: float, d: float, beta: float) -> "StableParams":
        if not 1.0 < alpha < 2.0:
            raise ModelError(f"stable index alpha must lie in (1, 2), got {alpha}")
        c = stable_constant(alpha)
        return cls(
            alpha=alpha,
            c_plus=d * c * (1.0 + beta),
            c_minus=d * c * (1.0 - beta),
            d=d,
            beta=beta,
        )


@dataclass(frozen=True)
class TruncatedStableParams:
    alpha: float
    c_plus: float
    c_minus: float

    def __post_init__(self) -> None:
        if not 1.0 < self.alpha < 2.0:
            raise ModelError(f"truncated stable index must lie in (1, 2), got {self.alpha}")
        if self.c_plus < 0.0 or self.c_minus < 0.0 or self.c_plus + self.c_minus <= 0.0:
            raise ModelError("need c_plus, c_minus >= 0 with c_plus + c_minus > 0")


@dataclass(frozen=True)
class TemperedStableParams:
    alpha_plus: float
    alpha_minus: float
    c_plus: float
    c_minus: float
    lambda_plus: float
    lambda_minus: float

    def __post_init__(self) -> None:
        for name, alpha in (("alpha_plus", self.alpha_plus), ("alpha_minus", self.alpha_minus)):
            if not 1.0 < alpha < 2.0:
                raise ModelError(f"{name} must lie in (1, 2), got {alpha}")
        if self.c_plus < 0.0 or self.c_minus < 0.0 or self.c_plus + self.c_minus <= 0.0:
            raise ModelError("need c_plus, c_minus >= 0 with c_plus + c_minus > 0")
        if self.lambda_plus < 0.0 or self.lambda_minus < 0.0:
            raise ModelError("tempering rates must be non-negative")


JumpParams = Union[StableParams, TruncatedStableParams, TemperedStableParams, JumpMeasure]


@dataclass(frozen=True)
class SymbolValue:
    """The value η(u) = re + i·im of a Lévy symbol.

    `error_estimate` is the quadrature residual (0 for closed forms) and `tolerance` the
    absolute accuracy target the evaluation was run with.
    """

    u: float
    re: float
    im: float
    error_estimate: float = 0.0
    tolerance: float = SYMBOL_ABS_TOL

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class LevyModel:
    """A Lévy process given by its family, drift b, Gaussian coefficient a and jump parameters.

    Prefer the preset constructors (`stable`, `truncated_stable`, `tempered_stable`,
    `brownian`, `integrable_drift`, `spectrally_negative`, `custom_triplet`), which fill in
    the drift conventions. For the stable family, b is the Lévy–Khintchine drift that makes the
    closed form symbol exact, i.e. the process has mean zero.
    """

    family: Family
    b: float = 0.0
    a: float = 0.0
    params: Optional[JumpParams] = None
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.b) and math.isfinite(self.a)):
            raise ModelError(f"b and a must be finite, got b={self.b}, a={self.a}")
        if self.a < 0.0:
            raise ModelError(f"Gaussian coefficient a must be non-negative, got {self.a}")
        expected: dict[Family, type] = {
            Family.STABLE: StableParams,
            Family.TRUNCATED_STABLE: TruncatedStableParams,
            Family.TEMPERED_STABLE: TemperedStableParams,
            Family.CUSTOM_TRIPLET: JumpMeasure,
        }
        if self.family == Family.BROWNIAN_WITH_DRIFT:
            if self.params is not None:
                raise ModelError("Brownian motion with drift takes no jump parameters")
            if self.a == 0.0 and self.b == 0.0:
                raise ModelError("degenerate model: a = b = 0 and no jumps")
        elif not isinstance(self.params, expected[self.family]):
            raise ModelError(
                f"family {self.family.name} needs {expected[self.family].__name__} parameters, "
                f"got {type(self.params).__name__}"
            )
        if self.family == Family.STABLE:
            assert isinstance(self.params, StableParams)
            if self.a != 0.0 or not math.isclose(
                self.b, _stable_drift(self.params), rel_tol=1e-12, abs_tol=1e-12
            ):
                raise ModelError(
                    "the stable family has no Gaussian part and its drift is fixed by the "
                    "closed form symbol; use custom_triplet for extra drift"
                )
        if self.family == Family.CUSTOM_TRIPLET:
            _check_levy_measure(self.jumps)
        logger.info(
            "LevyModel created: id: %s, family: %s, b: %s, a: %s, params: %s",
            id(self),
            self.family.name,
            self.b,
            self.a,
            self.params,
        )

    @cached_property
    def jumps(self) -> Optional[JumpMeasure]:
        """The jump measure of the model as densities (None for Brownian motion with drift)."""
        params = self.params
        if isinstance(params, JumpMeasure):
            return params
        if isinstance(params, StableParams):
            return JumpMeasure(
                positive_density=PowerLawDensity(params.c_plus, params.alpha),
                negative_density=PowerLawDensity(params.c_minus, params.alpha),
                small_jump_index=params.alpha,
                tail_index=params.alpha,
            )
        if isinstance(params, TruncatedStableParams):
            return JumpMeasure(
                positive_density=PowerLawDensity(params.c_plus, params.alpha, cutoff=1.0),
                negative_density=PowerLawDensity(params.c_minus, params.alpha, cutoff=1.0),
                small_jump_index=params.alpha,
                support=1.0,
            )
        if isinstance(params, TemperedStableParams):
            sides = [
                (params.c_plus, params.alpha_plus, params.lambda_plus),
                (params.c_minus, params.alpha_minus, params.lambda_minus),
            ]
            active = [(alpha, rate) for c, alpha, rate in sides if c > 0.0]
            untempered = [alpha for alpha, rate in active if rate == 0.0]
            return JumpMeasure(
                positive_density=PowerLawDensity(
                    params.c_plus, params.alpha_plus, params.lambda_plus
                ),
                negative_density=PowerLawDensity(
                    params.c_minus, params.alpha_minus, params.lambda_minus
                ),
                small_jump_index=max(alpha for alpha, _ in active),
                tail_rate=0.0 if untempered else min(rate for _, rate in active),
                tail_index=min(untempered) if untempered else math.inf,
            )
        return None

    @property
    def small_jump_index(self) -> Optional[float]:
        return self.jumps.small_jump_index if self.jumps is not None else None

    @cached_property
    def large_jump_mean(self) -> Optional[float]:
        """∫_{|y|>1} y ν(dy), or None when ∫_{|y|>1} |y| ν(dy) is infinite."""
        jumps = self.jumps
        if jumps is None:
            return 0.0
        if not jumps.has_finite_mean_tail:
            return None
        if isinstance(self.params, StableParams):
            return (self.params.c_plus - self.params.c_minus) / (self.params.alpha - 1.0)
        if jumps.support <= 1.0 or jumps.is_symmetric:
            return 0.0
        value, _ = log_scale_quad(
            lambda y: y * jumps.difference(y),
            0.0,
            math.log(jumps.support) if jumps.support < math.inf else math.inf,
        )
        return value

    @property
    def mean(self) -> Optional[float]:
        """E₀[X₁] = b + ∫_{|y|>1} y ν(dy), or None when it does not exist."""
        large = self.large_jump_mean
        return None if large is None else self.b + large

    @property
    def is_symmetric(self) -> bool:
        """Whether Im η vanishes identically."""
        if self.b != 0.0 and not isinstance(self.params, StableParams):
            return False
        return self.jumps is None or self.jumps.is_symmetric

    @property
    def is_compound_poisson(self) -> bool:
        """Whether the model is compound Poisson: no Gaussian part, finite ν and no drift."""
        jumps = self.jumps
        if self.a > 0.0 or jumps is None or not jumps.is_finite_activity:
            return False
        small_mean, _ = log_scale_quad(
            lambda y: y * jumps.difference(y),
            -math.inf,
            math.log(min(1.0, jumps.support)),
        )
        return math.isclose(self.b, small_mean, rel_tol=1e-9, abs_tol=1e-12)

    @property
    def has_finite_variance(self) -> bool:
        return self.jumps is None or self.jumps.has_finite_variance_tail


def _stable_drift(params: StableParams) -> float:
    return (params.c_minus - params.c_plus) / (params.alpha - 1.0)


def _quad(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    **kwargs: object,
) -> tuple[float, float]:
    """`scipy.integrate.quad` with the module tolerances; warnings are folded into the error."""
    if lower >= upper:
        return 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, error = integrate.quad(
            func,
            lower,
            upper,
            epsabs=_QUAD_EPSABS,
            epsrel=_QUAD_EPSREL,
            limit=_QUAD_LIMIT,
            **kwargs,  # type: ignore[arg-type]
        )
    return float(value), float(error)


def _end_remainder(g: Callable[[float], float], t0: float, outward: float) -> tuple[float, float]:
    """∫ of g beyond t0 in the direction `outward`, with g extrapolated as e^(−κ|t − t0|)."""
    g0 = g(t0)
    if g0 == 0.0:
        return 0.0, 0.0
    g1 = g(t0 - outward)
    g2 = g(t0 - 2.0 * outward)
    if not (g0 * g1 > 0.0 and g1 * g2 > 0.0):
        return 0.0, math.inf
    kappa = math.log(g1 / g0)
    inner_kappa = math.log(g2 / g1)
    if not kappa > 0.0:
        return 0.0, math.inf
    remainder = g0 / kappa
    return remainder, abs(remainder) * abs(kappa - inner_kappa) / kappa


def log_scale_quad(
    func: Callable[[FloatArray], FloatArray], lower: float, upper: float
) -> tuple[float, float]:
    """∫ func(y) dy over [e^lower, e^upper], integrated in t = log y.

    Infinite limits are cut at |t| = 69 (y = 1e±30); beyond the cut the substituted integrand
    is extrapolated as an exponential in t, i.e. a power law in y. A remainder that cannot be
    extrapolated reports an infinite error.

    Returns:
        The value and its error estimate.
    """
    if lower >= upper:
        return 0.0, 0.0

    def substituted(t: float) -> float:
        y = math.exp(t)
        return y * float(func(np.asarray(y)))

    lo = min(max(lower, -_LOG_CUT), upper)
    hi = max(min(upper, _LOG_CUT), lo)
    value, error = _quad(substituted, lo, hi)
    if lower < lo:
        remainder, remainder_error = _end_remainder(substituted, lo, -1.0)
        value += remainder
        error += remainder_error
    if upper > hi:
        remainder, remainder_error = _end_remainder(substituted, hi, 1.0)
        value += remainder
        error += remainder_error
    return value, error


def _check_levy_measure(jumps: Optional[JumpMeasure]) -> None:
    assert jumps is not None
    if jumps.small_jump_index >= 2.0:
        raise ModelError(
            f"small_jump_index must be < 2 for a Lévy measure, got {jumps.small_jump_index}"
        )
    if jumps.support <= 0.0 or jumps.tail_rate < 0.0 or jumps.tail_index <= 0.0:
        raise ModelError("support, tail_rate and tail_index must describe a decaying tail")
    try:
        near, near_error = log_scale_quad(
            lambda y: y * y * jumps.total(y),
            -math.inf,
            math.log(min(1.0, jumps.support)),
        )
        far, far_error = (
            log_scale_quad(
                jumps.total,
                0.0,
                math.log(jumps.support) if jumps.support < math.inf else math.inf,
            )
            if jumps.support > 1.0
            else (0.0, 0.0)
        )
    except (ValueError, ArithmeticError, TypeError) as e:
        raise ModelError(f"jump densities cannot be integrated: {e}") from e
    total = near + far
    if not math.isfinite(total) or near_error + far_error > 1e-6 * (1.0 + abs(total)):
        raise ModelError(
            f"∫(y² ∧ 1) ν(dy) is not finite to quadrature accuracy "
            f"(value={total}, error={near_error + far_error})"
        )
    if near < 0.0 or far < 0.0:
        raise ModelError("jump densities must be non-negative")


# Presets


def stable(
    *,
    alpha: float,
    c_plus: Optional[float] = None,
    c_minus: Optional[float] = None,
    d: Optional[float] = None,
    beta: Optional[float] = None,
) -> LevyModel:
    """A strictly stable process with symbol −d|u|^α (1 − iβ sgn(u) tan(πα/2)).

    Args:
        alpha: The index, in (1, 2).
        c_plus: Density coefficient of positive jumps (give with c_minus).
        c_minus: Density coefficient of negative jumps (give with c_plus).
        d: Scale (give with beta instead of c_plus, c_minus).
        beta: Skewness in [-1, 1] (give with d).

    Returns:
        The stable LevyModel.

    Raises:
        ModelError: If the parameters are invalid or both or neither pairs are given.
    """
    by_measure = c_plus is not None or c_minus is not None
    by_scale = d is not None or beta is not None
    if by_measure == by_scale:
        raise ModelError("give either (c_plus, c_minus) or (d, beta) for a stable model")
    if by_measure:
        params = StableParams.from_levy_measure(
            alpha=alpha,
            c_plus=c_plus if c_plus is not None else 0.0,
            c_minus=c_minus if c_minus is not None else 0.0,
        )
    else:
        params = StableParams.from_scale(
            alpha=alpha,
            d=d if d is not None else 1.0,
            beta=beta if beta is not None else 0.0,
        )
    return LevyModel(family=Family.STABLE, b=_stable_drift(params), a=0.0, params=params)


def truncated_stable(
    *,
    alpha: float,
    c_plus: float,
    c_minus: float,
    b: Optional[float] = None,
    a: float = 0.0,
) -> LevyModel:
    """A truncated stable process. Jumps larger than 1 in size are removed.

    The default drift b = 0 makes the process centred.
    """
    params = TruncatedStableParams(alpha=alpha, c_plus=c_plus, c_minus=c_minus)
    return LevyModel(
        family=Family.TRUNCATED_STABLE,
        b=0.0 if b is None else b,
        a=a,
        params=params,
    )


def tempered_stable(
    *,
    alpha_plus: float,
    c_plus: float,
    c_minus: float,
    lambda_plus: float,
    lambda_minus: float,
    alpha_minus: Optional[float] = None,
    b: Optional[float] = None,
    a: float = 0.0,
) -> LevyModel:
    """A tempered stable process with density c± |y|^(-1-α±) e^(-λ±|y|) on each half-line.

    Args:
        alpha_plus: Index of the positive jumps.
        c_plus: Coefficient of the positive jumps.
        c_minus: Coefficient of the negative jumps.
        lambda_plus: Tempering rate of the positive jumps.
        lambda_minus: Tempering rate of the negative jumps.
        alpha_minus: Index of the negative jumps (default is alpha_plus).
        b: Drift; None selects the centred drift −∫_{|y|>1} y ν(dy).
        a: Gaussian coefficient (default is 0).

    Returns:
        The tempered stable LevyModel.
    """
    params = TemperedStableParams(
        alpha_plus=alpha_plus,
        alpha_minus=alpha_plus if alpha_minus is None else alpha_minus,
        c_plus=c_plus,
        c_minus=c_minus,
        lambda_plus=lambda_plus,
        lambda_minus=lambda_minus,
    )
    if b is None:
        b = -_large_jump_mean_of(params)
    return LevyModel(family=Family.TEMPERED_STABLE, b=b, a=a, params=params)


def brownian(*, b: float = 0.0, a: float = 1.0) -> LevyModel:
    """Brownian motion with drift b and variance a per unit time (a = 0 gives a pure drift)."""
    return LevyModel(family=Family.BROWNIAN_WITH_DRIFT, b=b, a=a)


def integrable_drift(
    *,
    alpha: float = 1.5,
    c_plus: float = 1.0,
    c_minus: float = 1.0,
    lambda_plus: float = 1.0,
    lambda_minus: float = 1.0,
    mean: float = 0.5,
) -> LevyModel:
    """A tempered stable process with integrable jumps and non-zero mean.

    The drift is chosen as b = mean − ∫_{|y|>1} y ν(dy), so b differs from the centred drift
    whenever `mean` is non-zero.
    """
    if mean == 0.0:
        raise ModelError("integrable_drift needs a non-zero mean")
    params = TemperedStableParams(
        alpha_plus=alpha,
        alpha_minus=alpha,
        c_plus=c_plus,
        c_minus=c_minus,
        lambda_plus=lambda_plus,
        lambda_minus=lambda_minus,
    )
    return LevyModel(
        family=Family.TEMPERED_STABLE,
        b=mean - _large_jump_mean_of(params),
        params=params,
    )


def spectrally_negative(
    *,
    alpha: float = 1.5,
    c_minus: float = 1.0,
    lambda_minus: float = 1.0,
    b: Optional[float] = None,
) -> LevyModel:
    """A tempered stable process with negative jumps only.

    The default drift matches the compensator, b = −∫_{|y|>1} y ν(dy), so the process is
    centred.
    """
    return tempered_stable(
        alpha_plus=alpha,
        c_plus=0.0,
        c_minus=c_minus,
        lambda_plus=0.0,
        lambda_minus=lambda_minus,
        b=b,
    )


def custom_triplet(
    *,
    positive_density: JumpDensityFunction,
    negative_density: JumpDensityFunction,
    small_jump_index: float,
    b: float = 0.0,
    a: float = 0.0,
    support: float = math.inf,
    tail_rate: float = 0.0,
    tail_index: float = math.inf,
) -> LevyModel:
    """A model with arbitrary jump densities. See `JumpMeasure` for the metadata."""
    jumps = JumpMeasure(
        positive_density=positive_density,
        negative_density=negative_density,
        small_jump_index=small_jump_index,
        support=support,
        tail_rate=tail_rate,
        tail_index=tail_index,
    )
    return LevyModel(family=Family.CUSTOM_TRIPLET, b=b, a=a, params=jumps)


def _large_jump_mean_of(params: TemperedStableParams) -> float:
    plus = PowerLawDensity(params.c_plus, params.alpha_plus, params.lambda_plus)
    minus = PowerLawDensity(params.c_minus, params.alpha_minus, params.lambda_minus)
    value, _ = log_scale_quad(
        lambda y: y * (plus(y) - minus(y)),
        0.0,
        math.inf,
    )
    return value


# Symbol evaluation


def _one_minus_cos(x: FloatArray) -> FloatArray:
    return 2.0 * np.sin(0.5 * x) ** 2


def _x_minus_sin(x: FloatArray) -> FloatArray:
    x = np.asarray(x, dtype=np.float64)
    x2 = x * x
    series = x * x2 * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 / 5040.0))
    return np.where(np.abs(x) < _SERIES_THRESHOLD, series, x - np.sin(x))


def _split_integral(
    u: float,
    support: float,
    *,
    near: Callable[[FloatArray], FloatArray],
    weight: str,
    oscillating: Callable[[FloatArray], FloatArray],
    far: Callable[[FloatArray], FloatArray],
) -> tuple[float, float]:
    """∫₀^support k(y) dy where k = `near` on (0, π/u] and k = w(uy)·`oscillating` + `far` beyond.

    The near region is integrated in the variable t = log y, which absorbs the singularity of the
    jump density at 0. The oscillating part of the far region uses QAWO/QAWF through the
    `weight` argument of `quad`; the non-oscillating part again uses t = log y.
    """
    edge = min(math.pi / u, support)
    log_edge = math.log(edge)
    log_support = math.log(support) if support < math.inf else math.inf
    value = 0.0
    error = 0.0

    pieces = [(-math.inf, min(0.0, log_edge)), (0.0, log_edge)]
    for lower, upper in pieces:
        part, part_error = log_scale_quad(near, lower, upper)
        value += part
        error += part_error

    if edge < support:
        part, part_error = _quad(
            lambda y: float(oscillating(np.asarray(y))), edge, support, weight=weight, wvar=u
        )
        value += part
        error += part_error
        for lower, upper in ((log_edge, min(0.0, log_support)), (max(0.0, log_edge), log_support)):
            part, part_error = log_scale_quad(far, lower, upper)
            value += part
            error += part_error
    return value, error


def _jump_symbol_positive(model: LevyModel, u: float) -> tuple[complex, float]:
    """η(u) for u > 0 by quadrature over the jump densities."""
    jumps = model.jumps
    assert jumps is not None
    re, re_error = _split_integral(
        u,
        jumps.support,
        near=lambda y: -_one_minus_cos(u * y) * jumps.total(y),
        weight="cos",
        oscillating=jumps.total,
        far=lambda y: -jumps.total(y),
    )
    re -= 0.5 * model.a * u * u
    mean = model.mean
    if jumps.is_symmetric:
        im, im_error = 0.0, 0.0
    elif mean is not None:
        im, im_error = _split_integral(
            u,
            jumps.support,
            near=lambda y: -_x_minus_sin(u * y) * jumps.difference(y),
            weight="sin",
            oscillating=jumps.difference,
            far=lambda y: -u * y * jumps.difference(y),
        )
    else:
        im, im_error = _split_integral(
            u,
            jumps.support,
            near=lambda y: np.where(y <= 1.0, -_x_minus_sin(u * y), np.sin(u * y))
            * jumps.difference(y),
            weight="sin",
            oscillating=jumps.difference,
            far=lambda y: np.where(y <= 1.0, -u * y, 0.0) * jumps.difference(y),
        )
    im += (mean if mean is not None else model.b) * u
    return complex(re, im), re_error + im_error


@lru_cache(maxsize=1 << 16)
def _jump_symbol(model: LevyModel, u: float) -> tuple[complex, float]:
    if u == 0.0:
        return 0j, 0.0
    value, error = _jump_symbol_positive(model, abs(u))
    if u < 0.0:
        value = value.conjugate()
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise SymbolEvaluationError("non-finite symbol value", u=u, residual=error)
    if error > SYMBOL_FAILURE_TOL * max(1.0, abs(value)):
        logger.warning("Symbol quadrature residual too large: u: %s, residual: %s", u, error)
        raise SymbolEvaluationError("symbol quadrature did not converge", u=u, residual=error)
    return value, error


def symbol_eval(model: LevyModel, u: float) -> SymbolValue:
    """Evaluate the Lévy symbol η(u).

    Args:
        model: The model.
        u: The frequency.

    Returns:
        The SymbolValue with the quadrature residual (0 for closed forms).

    Raises:
        SymbolEvaluationError: If the jump integral is not finite or does not reach
            the accuracy threshold.
    """
    u = float(u)
    if model.family in (Family.STABLE, Family.BROWNIAN_WITH_DRIFT):
        value = complex(symbol_array(model, np.array([u]))[0])
        return SymbolValue(u=u, re=value.real, im=value.imag, error_estimate=0.0)
    value, error = _jump_symbol(model, u)
    return SymbolValue(u=u, re=value.real, im=value.imag, error_estimate=error)


def symbol_array(model: LevyModel, u: FloatArray) -> npt.NDArray[np.complex128]:
    """Vectorized η(u) over an array of frequencies."""
    u = np.asarray(u, dtype=np.float64)
    if model.family == Family.BROWNIAN_WITH_DRIFT:
        return 1j * model.b * u - 0.5 * model.a * u * u
    if isinstance(model.params, StableParams):
        p = model.params
        skew = p.beta * math.tan(math.pi * p.alpha / 2.0)
        magnitude = p.d * np.abs(u) ** p.alpha
        return -magnitude * (1.0 - 1j * skew * np.sign(u))
    flat = [_jump_symbol(model, float(v))[0] for v in u.ravel()]
    return np.array(flat, dtype=np.complex128).reshape(u.shape)


def symbol_derivative(model: LevyModel, u: float) -> complex:
    """η′(u) = Re η′(u) + i Im η′(u).

    Closed forms are used for the stable family and Brownian motion with drift, the jump
    integral formula for truncated and tempered stable models, and central differences for
    custom jump measures.
    """
    u = float(u)
    if model.family == Family.BROWNIAN_WITH_DRIFT:
        return complex(-model.a * u, model.b)
    if isinstance(model.params, StableParams):
        p = model.params
        if u == 0.0:
            return 0j
        skew = p.beta * math.tan(math.pi * p.alpha / 2.0)
        scale = p.d * p.alpha * abs(u) ** (p.alpha - 1.0)
        return complex(-scale * math.copysign(1.0, u), scale * skew)
    if model.family == Family.CUSTOM_TRIPLET:
        step = 1e-4 * max(1.0, abs(u))
        return (
            symbol_eval(model, u + step).value - symbol_eval(model, u - step).value
        ) / (2.0 * step)
    return _jump_derivative(model, u)


@lru_cache(maxsize=1 << 14)
def _jump_derivative(model: LevyModel, u: float) -> complex:
    jumps = model.jumps
    mean = model.mean
    assert jumps is not None and mean is not None
    if u == 0.0:
        return complex(0.0, mean)
    w = abs(u)
    re, _ = _split_integral(
        w,
        jumps.support,
        near=lambda y: -y * np.sin(w * y) * jumps.total(y),
        weight="sin",
        oscillating=lambda y: -y * jumps.total(y),
        far=lambda y: np.zeros_like(y),
    )
    im = 0.0
    if not jumps.is_symmetric:
        im, _ = _split_integral(
            w,
            jumps.support,
            near=lambda y: -y * _one_minus_cos(w * y) * jumps.difference(y),
            weight="cos",
            oscillating=lambda y: y * jumps.difference(y),
            far=lambda y: -y * jumps.difference(y),
        )
    re -= model.a * w
    # Re η′ is odd, Im η′ is even
    return complex(re if u > 0.0 else -re, im + mean)


def stable_closed_form_h(model: LevyModel, x: float) -> float:
    """The renormalized zero resolvent of a stable model in closed form.

    h(x) = c(−α) (1 − β sgn(x)) |x|^(α−1) / (d (1 + β² tan²(πα/2))).

    Raises:
        ModelError: If the model is not of the stable family.
    """
    if not isinstance(model.params, StableParams):
        raise ModelError(f"closed form h needs a stable model, got {model.family.name}")
    p = model.params
    if x == 0.0:
        return 0.0
    tan = math.tan(math.pi * p.alpha / 2.0)
    c_negative = (
        special.gamma(1.0 - p.alpha) * math.sin(-math.pi * p.alpha / 2.0) / math.pi
    )
    return float(
        c_negative
        * (1.0 - p.beta * math.copysign(1.0, x))
        * abs(x) ** (p.alpha - 1.0)
        / (p.d * (1.0 + p.beta**2 * tan**2))
    )
