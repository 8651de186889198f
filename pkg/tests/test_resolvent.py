# pylint: disable=C0114
# pylint: disable=C0115
# pylint: disable=C0116
import math
from unittest import TestCase
import numpy as np
import pytest
from zrt import levy_models
from zrt.exceptions import ConditionViolation, ConfigError
from zrt.resolvent import (
    KernelGrid,
    ResolventQuery,
    a1_integral,
    arcsinh_nodes,
    h_q,
    h_q_convergence_scan,
    hitting_time_laplace,
    renormalized_zero_resolvent,
    resolvent_antiderivative,
    resolvent_at_zero,
    resolvent_density,
    smoothed_resolvent_density,
    smoothed_zero_resolvent,
    zero_resolvent_antiderivative,
)
from .test_utilities import brownian_resolvent

BROWNIAN = levy_models.brownian()
ORACLE_TOLERANCE = 1e-6
STABLE_GRID = [
    (alpha, beta)
    for alpha in (1.2, 1.5, 1.8)
    for beta in (-0.9, 0.0, 0.5, 0.9)
]


@pytest.mark.parametrize("x", [-3.0, -0.5, 0.0, 0.1, 1.0, 3.0])
def test_brownian_zero_resolvent_is_absolute_value(x: float):
    value = renormalized_zero_resolvent(BROWNIAN, x)
    assert value.h == pytest.approx(abs(x), abs=ORACLE_TOLERANCE)


@pytest.mark.parametrize("q", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("x", [0.0, 1.0, -2.0])
def test_brownian_resolvent_density(q: float, x: float):
    value = resolvent_density(ResolventQuery(model=BROWNIAN, q=q, x=x))
    assert value.value == pytest.approx(brownian_resolvent(q, x), abs=ORACLE_TOLERANCE)


def test_resolvent_at_zero_is_the_maximum():
    model = levy_models.stable(alpha=1.5, d=1.0, beta=0.5)
    at_zero = resolvent_at_zero(model, 1.0)
    for x in (-1.0, 0.5, 2.0):
        value = resolvent_density(ResolventQuery(model=model, q=1.0, x=x)).value
        assert 0.0 <= value <= at_zero


@pytest.mark.parametrize("beta", [0.0, 0.5])
@pytest.mark.parametrize("x", [-0.5, 2.0])
def test_stable_zero_resolvent_matches_closed_form(beta: float, x: float):
    model = levy_models.stable(alpha=1.5, d=1.0, beta=beta)
    value = renormalized_zero_resolvent(model, x)
    expected = levy_models.stable_closed_form_h(model, x)
    assert value.h == pytest.approx(expected, rel=1e-5, abs=1e-6)
    assert value.h >= 0.0


@pytest.mark.slow
@pytest.mark.parametrize("alpha, beta", STABLE_GRID)
@pytest.mark.parametrize("x", [-2.0, -0.5, 0.5, 2.0])
def test_stable_zero_resolvent_grid(alpha: float, beta: float, x: float):
    model = levy_models.stable(alpha=alpha, d=1.0, beta=beta)
    value = renormalized_zero_resolvent(model, x)
    expected = levy_models.stable_closed_form_h(model, x)
    assert abs(value.h - expected) <= 1e-4 * max(1.0, abs(expected))


def test_h_q_converges_to_h():
    rows = h_q_convergence_scan(BROWNIAN, 1.0, (1.0, 0.1, 0.01, 0.001))
    root = [math.sqrt(2.0 * row.q) for row in rows]
    for row, k in zip(rows, root):
        assert row.h_q == pytest.approx((1.0 - math.exp(-k)) / k, abs=ORACLE_TOLERANCE)
    gaps = [row.gap for row in rows]
    assert gaps == sorted(gaps, reverse=True)


def test_h_q_at_zero():
    assert h_q(BROWNIAN, 1.0, 0.0).value == 0.0


@pytest.mark.parametrize("q_grid", [(0.1, 1.0), (1.0, 0.0), ()])
def test_h_q_scan_rejects_bad_grid(q_grid):
    with pytest.raises(ConfigError):
        h_q_convergence_scan(BROWNIAN, 1.0, q_grid)


@pytest.mark.parametrize("q, x", [(0.5, 1.0), (2.0, -0.3)])
def test_brownian_hitting_time_laplace(q: float, x: float):
    value = hitting_time_laplace(BROWNIAN, q, x)
    assert value == pytest.approx(math.exp(-math.sqrt(2.0 * q) * abs(x)), abs=ORACLE_TOLERANCE)
    assert hitting_time_laplace(BROWNIAN, q, 0.0) == 1.0


@pytest.mark.parametrize("z", [-1.0, 0.5])
def test_brownian_resolvent_antiderivative(z: float):
    k = math.sqrt(2.0)
    expected = math.copysign(1.0, z) * (1.0 - math.exp(-k * abs(z))) / k**2
    value = resolvent_antiderivative(BROWNIAN, 1.0, z)
    assert value.value == pytest.approx(expected, abs=ORACLE_TOLERANCE)


@pytest.mark.parametrize("z", [-1.0, 0.5])
def test_brownian_zero_resolvent_antiderivative(z: float):
    value = zero_resolvent_antiderivative(BROWNIAN, z)
    assert value.value == pytest.approx(z * abs(z) / 2.0, abs=ORACLE_TOLERANCE)


def test_smoothed_zero_resolvent_at_the_kink():
    value = smoothed_zero_resolvent(BROWNIAN, 0.0, 0.1)
    assert value.value == pytest.approx(0.05, abs=ORACLE_TOLERANCE)
    with pytest.raises(ConfigError):
        smoothed_zero_resolvent(BROWNIAN, 0.0, 0.0)


@pytest.mark.parametrize("q, x", [(0.0, 1.0), (-1.0, 1.0), (1.0, math.inf)])
def test_resolvent_query_validation(q: float, x: float):
    with pytest.raises(ConfigError):
        ResolventQuery(model=BROWNIAN, q=q, x=x)


def test_pure_drift_is_rejected_even_when_forced():
    drift = levy_models.brownian(b=1.0, a=0.0)
    with pytest.raises(ConditionViolation) as info:
        resolvent_density(ResolventQuery(model=drift, q=1.0, x=0.5, force=True))
    assert info.value.report.name == "A"
    with pytest.raises(ConditionViolation):
        renormalized_zero_resolvent(drift, 1.0, force=True)


def test_arcsinh_nodes():
    grid = arcsinh_nodes(-2.0, 3.0, nodes=64, scale=0.05)
    assert grid[0] == -2.0
    assert grid[-1] == 3.0
    assert 0.0 in grid
    assert np.all(np.diff(grid) > 0.0)
    with pytest.raises(ConfigError):
        arcsinh_nodes(1.0, -1.0, nodes=64, scale=0.05)


def test_kernel_grid_interpolates_an_antiderivative():
    grid = KernelGrid.build(lambda z: z * abs(z) / 2.0, -2.0, 2.0, nodes=256, label="H")
    assert float(grid(0.7)) == pytest.approx(0.245, abs=1e-3)
    assert float(grid.derivative(0.7)) == pytest.approx(0.7, abs=1e-2)
    assert float(grid.smoothed(0.7, 0.1)) == pytest.approx(0.7, abs=1e-3)
    assert float(grid.smoothed(0.0, 0.1)) == pytest.approx(0.05, abs=1e-3)
    with pytest.raises(ConfigError):
        grid(2.5)


class TestLogKernelGrid(TestCase):
    def test_logging_on_kernel_grid_creation(self):
        nodes = np.linspace(-1.0, 1.0, 5)
        with self.assertLogs("zrt.resolvent", level="INFO") as context:
            _ = KernelGrid(nodes=nodes, values=nodes**3, label="R_1.0")

            self.assertEqual(len(context.output), 1)
            self.assertRegex(
                context.output[0],
                r"INFO:zrt.resolvent:KernelGrid created: id: \d+, label: R_1.0, nodes: 5, "
                r"range: \[-1.0, 1.0\]",
            )


def test_asymmetric_stable_ratio_and_scaling():
    model = levy_models.stable(alpha=1.5, d=1.0, beta=0.5)
    at_one = renormalized_zero_resolvent(model, 1.0).h
    at_minus_one = renormalized_zero_resolvent(model, -1.0).h
    assert at_minus_one / at_one == pytest.approx(3.0, rel=1e-5)
    for scale in (2.0, 0.5):
        scaled = renormalized_zero_resolvent(model, scale).h
        assert scaled == pytest.approx(scale**0.5 * at_one, rel=1e-5)


def test_resolvent_at_zero_decreases_in_q():
    model = levy_models.stable(alpha=1.5, d=1.0, beta=0.0)
    values = [resolvent_at_zero(model, q) for q in (0.5, 1.0, 2.0)]
    assert values[0] > values[1] > values[2] > 0.0


def test_smoothed_resolvent_density_at_zero():
    k = math.sqrt(2.0)
    value = smoothed_resolvent_density(BROWNIAN, 1.0, 0.0, 0.1)
    assert value.value == pytest.approx((1.0 - math.exp(-0.1 * k)) / (0.1 * k**2), abs=1e-6)
    assert value.value < resolvent_at_zero(BROWNIAN, 1.0)


@pytest.mark.parametrize(
    "model, expected",
    [
        (BROWNIAN, 1.0 / math.sqrt(2.0)),
        (levy_models.brownian(b=1.0, a=0.0), 0.5),
    ],
)
def test_a1_integral(model: levy_models.LevyModel, expected: float):
    assert a1_integral(model, 1.0) == pytest.approx(expected, abs=1e-5)
    with pytest.raises(ConfigError):
        a1_integral(model, 0.0)
