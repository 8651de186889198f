"""Resolvent densities and the renormalized zero resolvent by Fourier inversion.

With g_q(u) = 1 / (q − η(u)) the quantities computed here are

    r_q(x) = (1/π) ∫₀^∞ Re(e^{−iux} g_q(u)) du,
    h_q(x) = r_q(0) − r_q(−x) = (1/π) ∫₀^∞ Re((1 − e^{iux}) g_q(u)) du,
    h(x)   = lim_{q↓0} h_q(x) = (1/π) ∫₀^∞ Re((e^{iux} − 1) / η(u)) du,

together with their antiderivatives in x, which give the box-smoothed kernels matching the
ε-occupation local time estimator, and `KernelGrid`, a monotone cubic interpolant of any of them
across a spatial range.

Every quadrature is re-run with a larger budget through `refine_function` until it converges;
a final failure raises `QuadratureError`. Computations require condition (A) (and (B) for h) and
raise `ConditionViolation` otherwise, unless forced on a numeric, not analytic, failure.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence
import logging
import math

import numpy as np
import numpy.typing as npt
from scipy.interpolate import PchipInterpolator

from .conditions import ConditionCheck, Verdict, check_A, check_B
from .custom_data_types import FloatArray, RealFunction
from .exceptions import ConditionViolation, ConfigError, QuadratureError
from .levy_models import Family, LevyModel, symbol_array
from .quadrature import QuadratureResult, QuadratureSpec, integrate_semi_infinite
from .refine import RefinementPolicy, refine_function

logger = logging.getLogger("zrt.resolvent")

DEFAULT_SPEC = QuadratureSpec(abs_tol=1e-10, rel_tol=1e-9)
DEFAULT_Q_GRID = (1.0, 0.1, 0.01, 0.001, 0.0001)
DEFAULT_GRID_NODES = 2048
MAX_REFINEMENTS = 3


@dataclass(frozen=True)
class ResolventQuery:
    """Arguments of a resolvent density evaluation.

    Raises:
        ConfigError: If q is not positive or x is not finite.
    """

    model: LevyModel
    q: float
    x: float
    force: bool = False

    def __post_init__(self) -> None:
        if not self.q > 0.0:
            raise ConfigError(f"the resolvent needs q > 0, got {self.q}")
        if not math.isfinite(self.x):
            raise ConfigError(f"x must be finite, got {self.x}")


@dataclass(frozen=True)
class ResolventValue:
    value: float
    error_estimate: float
    function_evals: int = 0


@dataclass(frozen=True)
class ZeroResolventValue:
    """h(x) with its quadrature error estimate."""

    x: float
    h: float
    error_estimate: float


@dataclass(frozen=True)
class ScanRow:
    q: float
    h_q: float
    gap: float


def require_conditions(
    model: LevyModel, *, need_b: bool, force: bool
) -> None:
    """Raise ConditionViolation unless (A), and (B) when `need_b`, hold.

    `force` lets a numeric FAIL or an INCONCLUSIVE verdict through with a warning, never an
    analytic FAIL.
    """
    checks: list[ConditionCheck] = [check_A(model)]
    if need_b:
        checks.append(check_B(model))
    for check in checks:
        if check.verdict == Verdict.PASS:
            continue
        forceable = not (check.verdict == Verdict.FAIL and check.analytic_shortcut_used)
        if force and forceable:
            logger.warning(
                "Condition %s is %s, computing anyway (forced)", check.name, check.verdict.name
            )
            continue
        raise ConditionViolation(
            f"condition ({check.name}) is {check.verdict.name}: {check.reason}",
            report=check,
        )


def _singularity_exponent(model: LevyModel) -> float:
    """Exponent e such that Im(1/η(u)) sin(ux) behaves like u^e near 0."""
    jumps = model.jumps
    if model.is_symmetric or jumps is None:
        return 0.0
    mean = model.mean
    if mean is not None and mean != 0.0 and model.family != Family.STABLE:
        return 0.0
    if jumps.support == math.inf and jumps.tail_rate == 0.0 and jumps.tail_index < 2.0:
        return 1.0 - jumps.tail_index
    return 0.0


def _integrate(
    f: RealFunction,
    spec: QuadratureSpec,
    period: Optional[float],
    *,
    smooth_part: Optional[RealFunction] = None,
    singularity_exponent: float = 0.0,
    what: str,
) -> QuadratureResult:
    result = refine_function(
        func=lambda budget: integrate_semi_infinite(
            f,
            spec.with_budget(budget),
            period,
            smooth_part=smooth_part,
            singularity_exponent=singularity_exponent,
        ),
        is_refinement_needed=lambda r: not r.converged,
        max_refinement_count=MAX_REFINEMENTS,
        refinement_policy=RefinementPolicy.GEOMETRIC,
        base_budget=spec.max_tail_periods,
    )
    if not result.converged:
        logger.warning("Quadrature for %s did not converge: %s", what, result)
        raise QuadratureError(f"quadrature for {what} did not converge", result=result)
    return result.scaled(1.0 / math.pi)


def _period(x: float) -> float:
    return 2.0 * math.pi / abs(x)


def _inverse_gap(model: LevyModel, q: float) -> Callable[[FloatArray], npt.NDArray[np.complex128]]:
    return lambda u: 1.0 / (q - symbol_array(model, u))


def resolvent_density(
    rq: ResolventQuery, *, spec: Optional[QuadratureSpec] = None
) -> ResolventValue:
    """r_q(x) = (1/π) ∫₀^∞ Re(e^{−iux} / (q − η(u))) du.

    Args:
        rq: The model, q > 0 and x.
        spec: Quadrature parameters (default is DEFAULT_SPEC).

    Returns:
        The value and its error estimate.

    Raises:
        ConditionViolation: If condition (A) does not hold and is not forced.
        QuadratureError: If the quadrature does not converge.
    """
    _spec = spec if spec is not None else DEFAULT_SPEC
    require_conditions(rq.model, need_b=False, force=rq.force)
    g = _inverse_gap(rq.model, rq.q)
    x = rq.x
    if x == 0.0:
        result = _integrate(lambda u: np.real(g(u)), _spec, None, what=f"r_{rq.q}(0)")
    else:
        result = _integrate(
            lambda u: np.real(np.exp(-1j * u * x) * g(u)),
            _spec,
            _period(x),
            what=f"r_{rq.q}({x})",
        )
    logger.debug("r_%s(%s) = %s (error %s)", rq.q, x, result.value, result.error_estimate)
    return ResolventValue(result.value, result.error_estimate, result.function_evals)


def resolvent_at_zero(
    model: LevyModel, q: float, *, force: bool = False, spec: Optional[QuadratureSpec] = None
) -> float:
    """r_q(0) = (1/π) ∫₀^∞ Re(1 / (q − η(u))) du."""
    return resolvent_density(ResolventQuery(model=model, q=q, x=0.0, force=force), spec=spec).value


def a1_integral(model: LevyModel, q: float, *, spec: Optional[QuadratureSpec] = None) -> float:
    """(1/π) ∫₀^∞ Re(1 / (q − η(u))) du, the quantity whose finiteness is condition (A1).

    Unlike `resolvent_at_zero` this does not require condition (A).
    """
    if not q > 0.0:
        raise ConfigError(f"q must be positive, got {q}")
    g = _inverse_gap(model, q)
    return _integrate(
        lambda u: np.real(g(u)),
        spec if spec is not None else DEFAULT_SPEC,
        None,
        what=f"a1 integral at q={q}",
    ).value


def h_q(
    model: LevyModel,
    q: float,
    x: float,
    *,
    force: bool = False,
    spec: Optional[QuadratureSpec] = None,
) -> ResolventValue:
    """h_q(x) = r_q(0) − r_q(−x), computed as one integral of Re((1 − e^{iux}) / (q − η(u)))."""
    ResolventQuery(model=model, q=q, x=x)
    require_conditions(model, need_b=False, force=force)
    if x == 0.0:
        return ResolventValue(0.0, 0.0)
    g = _inverse_gap(model, q)

    def integrand(u: FloatArray) -> FloatArray:
        one_minus_exp = 2.0 * np.sin(0.5 * u * x) ** 2 - 1j * np.sin(u * x)
        return np.real(one_minus_exp * g(u))

    result = _integrate(
        integrand,
        spec if spec is not None else DEFAULT_SPEC,
        _period(x),
        smooth_part=lambda u: np.real(g(u)),
        what=f"h_{q}({x})",
    )
    return ResolventValue(result.value, result.error_estimate, result.function_evals)


def _zero_resolvent_integrand(model: LevyModel, x: float) -> RealFunction:
    def integrand(u: FloatArray) -> FloatArray:
        exp_minus_one = -2.0 * np.sin(0.5 * u * x) ** 2 + 1j * np.sin(u * x)
        return np.real(exp_minus_one / symbol_array(model, u))

    return integrand


def renormalized_zero_resolvent(
    model: LevyModel,
    x: float,
    *,
    force: bool = False,
    spec: Optional[QuadratureSpec] = None,
) -> ZeroResolventValue:
    """h(x) = (1/π) ∫₀^∞ Re((e^{iux} − 1) / η(u)) du.

    Args:
        model: The model.
        x: The point.
        force: Compute although (A) or (B) is not verified numerically (default is False).
        spec: Quadrature parameters (default is DEFAULT_SPEC).

    Returns:
        The ZeroResolventValue.

    Raises:
        ConditionViolation: If (A) or (B) does not hold and is not forced.
        QuadratureError: If the quadrature does not converge.
    """
    require_conditions(model, need_b=True, force=force)
    if x == 0.0:
        return ZeroResolventValue(x=0.0, h=0.0, error_estimate=0.0)
    result = _integrate(
        _zero_resolvent_integrand(model, x),
        spec if spec is not None else DEFAULT_SPEC,
        _period(x),
        smooth_part=lambda u: -np.real(1.0 / symbol_array(model, u)),
        singularity_exponent=_singularity_exponent(model),
        what=f"h({x})",
    )
    logger.debug("h(%s) = %s (error %s)", x, result.value, result.error_estimate)
    return ZeroResolventValue(x=x, h=result.value, error_estimate=result.error_estimate)


def h_q_convergence_scan(
    model: LevyModel,
    x: float,
    q_grid: Sequence[float] = DEFAULT_Q_GRID,
    *,
    force: bool = False,
    spec: Optional[QuadratureSpec] = None,
) -> list[ScanRow]:
    """Rows (q, h_q(x), |h_q(x) − h(x)|) along a descending grid of q values.

    Raises:
        ConfigError: If the grid is not strictly descending and positive.
    """
    grid = list(q_grid)
    if not grid or any(q <= 0.0 for q in grid) or any(a <= b for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"q grid must be positive and strictly descending, got {grid}")
    h = renormalized_zero_resolvent(model, x, force=force, spec=spec).h
    rows = []
    for q in grid:
        value = h_q(model, q, x, force=force, spec=spec).value
        rows.append(ScanRow(q=q, h_q=value, gap=abs(value - h)))
    gaps = [row.gap for row in rows]
    tail = gaps[len(gaps) // 2:]
    if any(later > earlier for earlier, later in zip(tail, tail[1:])):
        logger.warning("h_q gaps are not eventually decreasing at x=%s: %s", x, gaps)
    return rows


def hitting_time_laplace(
    model: LevyModel, q: float, x: float, *, force: bool = False,
    spec: Optional[QuadratureSpec] = None,
) -> float:
    """E_x[e^{−q T₀}] = r_q(−x) / r_q(0), where T₀ is the first hitting time of 0."""
    if x == 0.0:
        return 1.0
    at_zero = resolvent_at_zero(model, q, force=force, spec=spec)
    at_x = resolvent_density(ResolventQuery(model=model, q=q, x=-x, force=force), spec=spec).value
    return at_x / at_zero


def resolvent_antiderivative(
    model: LevyModel, q: float, z: float, *, force: bool = False,
    spec: Optional[QuadratureSpec] = None,
) -> ResolventValue:
    """R_q(z) = ∫₀^z r_q(y) dy = (1/π) ∫₀^∞ Re(g_q(u) (1 − e^{−iuz}) / (iu)) du."""
    ResolventQuery(model=model, q=q, x=z)
    require_conditions(model, need_b=False, force=force)
    if z == 0.0:
        return ResolventValue(0.0, 0.0)
    g = _inverse_gap(model, q)

    def integrand(u: FloatArray) -> FloatArray:
        kernel = np.sin(u * z) / u - 2j * np.sin(0.5 * u * z) ** 2 / u
        return np.real(kernel * g(u))

    result = _integrate(
        integrand,
        spec if spec is not None else DEFAULT_SPEC,
        _period(z),
        smooth_part=lambda u: np.imag(g(u)) / u,
        what=f"R_{q}({z})",
    )
    return ResolventValue(result.value, result.error_estimate, result.function_evals)


def zero_resolvent_antiderivative(
    model: LevyModel, z: float, *, force: bool = False, spec: Optional[QuadratureSpec] = None
) -> ResolventValue:
    """H(z) = ∫₀^z h(y) dy = (1/π) ∫₀^∞ Re(((e^{iuz} − 1)/(iu) − z) / η(u)) du."""
    require_conditions(model, need_b=True, force=force)
    if z == 0.0:
        return ResolventValue(0.0, 0.0)

    def integrand(u: FloatArray) -> FloatArray:
        w = u * z
        small = np.abs(w) < 0.1
        w2 = w * w
        sin_minus_w = np.where(
            small, -w * w2 * (1.0 / 6.0 - w2 * (1.0 / 120.0 - w2 / 5040.0)), np.sin(w) - w
        )
        kernel = sin_minus_w / u + 2j * np.sin(0.5 * w) ** 2 / u
        return np.real(kernel / symbol_array(model, u))

    result = _integrate(
        integrand,
        spec if spec is not None else DEFAULT_SPEC,
        _period(z),
        smooth_part=lambda u: np.real((1j / u - z) / symbol_array(model, u)),
        singularity_exponent=_singularity_exponent(model),
        what=f"H({z})",
    )
    return ResolventValue(result.value, result.error_estimate, result.function_evals)


def smoothed_resolvent_density(
    model: LevyModel, q: float, w: float, eps: float, *, force: bool = False,
    spec: Optional[QuadratureSpec] = None,
) -> ResolventValue:
    """(1/2ε) ∫_{w−ε}^{w+ε} r_q(y) dy."""
    if not eps > 0.0:
        raise ConfigError(f"eps must be positive, got {eps}")
    upper = resolvent_antiderivative(model, q, w + eps, force=force, spec=spec)
    lower = resolvent_antiderivative(model, q, w - eps, force=force, spec=spec)
    return ResolventValue(
        (upper.value - lower.value) / (2.0 * eps),
        (upper.error_estimate + lower.error_estimate) / (2.0 * eps),
    )


def smoothed_zero_resolvent(
    model: LevyModel, y: float, eps: float, *, force: bool = False,
    spec: Optional[QuadratureSpec] = None,
) -> ResolventValue:
    """(1/2ε) ∫_{y−ε}^{y+ε} h(v) dv."""
    if not eps > 0.0:
        raise ConfigError(f"eps must be positive, got {eps}")
    upper = zero_resolvent_antiderivative(model, y + eps, force=force, spec=spec)
    lower = zero_resolvent_antiderivative(model, y - eps, force=force, spec=spec)
    return ResolventValue(
        (upper.value - lower.value) / (2.0 * eps),
        (upper.error_estimate + lower.error_estimate) / (2.0 * eps),
    )


def arcsinh_nodes(lower: float, upper: float, *, nodes: int, scale: float) -> FloatArray:
    """Grid on [lower, upper] with spacing ≈ scale near 0, growing geometrically away from it.

    0 is a node whenever it lies in the range.
    """
    if not (lower < upper and scale > 0.0 and nodes >= 4):
        raise ConfigError(f"invalid grid: [{lower}, {upper}], nodes {nodes}, scale {scale}")
    xi = np.linspace(math.asinh(lower / scale), math.asinh(upper / scale), nodes)
    grid = scale * np.sinh(xi)
    grid[0], grid[-1] = lower, upper
    if lower < 0.0 < upper:
        grid = np.union1d(grid, [0.0])
    return grid


@dataclass(frozen=True)
class KernelGrid:
    """A C¹ monotone cubic (PCHIP) interpolant of a kernel tabulated on a spatial grid.

    Tabulating an antiderivative (R_q or H) gives both the box-smoothed kernel through
    `smoothed` and the point kernel through `derivative`.
    """

    nodes: FloatArray = field(repr=False)
    values: FloatArray = field(repr=False)
    label: str = ""
    interpolant: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "interpolant", PchipInterpolator(self.nodes, self.values))
        logger.info(
            "KernelGrid created: id: %s, label: %s, nodes: %d, range: [%s, %s]",
            id(self),
            self.label,
            self.nodes.size,
            self.nodes[0],
            self.nodes[-1],
        )

    @classmethod
    def build(
        cls,
        kernel: Callable[[float], float],
        lower: float,
        upper: float,
        *,
        nodes: int = DEFAULT_GRID_NODES,
        scale: float = 0.05,
        workers: int = 1,
        label: str = "",
    ) -> "KernelGrid":
        """Tabulate `kernel` on an arcsinh grid over [lower, upper]; nodes are computed in order."""
        grid = arcsinh_nodes(lower, upper, nodes=nodes, scale=scale)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                values = list(executor.map(kernel, grid.tolist()))
        else:
            values = [kernel(w) for w in grid.tolist()]
        return cls(nodes=grid, values=np.asarray(values, dtype=np.float64), label=label)

    def _check(self, w: FloatArray) -> FloatArray:
        w = np.asarray(w, dtype=np.float64)
        if w.size and (np.min(w) < self.nodes[0] or np.max(w) > self.nodes[-1]):
            raise ConfigError(
                f"points [{np.min(w)}, {np.max(w)}] outside the kernel grid "
                f"[{self.nodes[0]}, {self.nodes[-1]}] of {self.label}"
            )
        return w

    def __call__(self, w: FloatArray) -> FloatArray:
        return np.asarray(self.interpolant(self._check(w)), dtype=np.float64)

    def derivative(self, w: FloatArray) -> FloatArray:
        return np.asarray(self.interpolant(self._check(w), 1), dtype=np.float64)

    def smoothed(self, w: FloatArray, eps: float) -> FloatArray:
        """Centred difference (F(w + ε) − F(w − ε)) / 2ε of the tabulated function F."""
        w = np.asarray(w, dtype=np.float64)
        return (self(w + eps) - self(w - eps)) / (2.0 * eps)


def resolvent_antiderivative_grid(
    model: LevyModel, q: float, lower: float, upper: float, *, nodes: int = DEFAULT_GRID_NODES,
    scale: float = 0.05, workers: int = 1, force: bool = False,
    spec: Optional[QuadratureSpec] = None,
) -> KernelGrid:
    """KernelGrid of R_q over [lower, upper]."""
    require_conditions(model, need_b=False, force=force)
    return KernelGrid.build(
        lambda z: resolvent_antiderivative(model, q, z, force=force, spec=spec).value,
        lower,
        upper,
        nodes=nodes,
        scale=scale,
        workers=workers,
        label=f"R_{q}",
    )


def zero_resolvent_antiderivative_grid(
    model: LevyModel, lower: float, upper: float, *, nodes: int = DEFAULT_GRID_NODES,
    scale: float = 0.05, workers: int = 1, force: bool = False,
    spec: Optional[QuadratureSpec] = None,
) -> KernelGrid:
    """KernelGrid of H over [lower, upper]."""
    require_conditions(model, need_b=True, force=force)
    return KernelGrid.build(
        lambda z: zero_resolvent_antiderivative(model, z, force=force, spec=spec).value,
        lower,
        upper,
        nodes=nodes,
        scale=scale,
        workers=workers,
        label="H",
    )
