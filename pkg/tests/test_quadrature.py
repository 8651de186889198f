# pylint: disable=C0114
# pylint: disable=C0115
# pylint: disable=C0116
import math
from unittest import TestCase
import numpy as np
import pytest
from zrt.exceptions import ConfigError
from zrt.quadrature import (
    ProbeVerdict,
    QuadratureSpec,
    integrability_probe,
    integrate_semi_infinite,
)

HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi


def fejer(u):
    return 2.0 * np.sin(0.5 * u) ** 2 / (u * u)


def lorentz(u):
    return 1.0 / (1.0 + u * u)


def sinc(u):
    return np.sin(u) / u


def power_law_mass(p: float) -> float:
    """∫₀^∞ du / (1 + u^p)."""
    return (math.pi / p) / math.sin(math.pi / p)


@pytest.mark.parametrize(
    "f, period, expected, accuracy",
    [
        (fejer, TWO_PI, HALF_PI, 1e-6),
        (sinc, TWO_PI, HALF_PI, 1e-8),
        (lorentz, None, HALF_PI, 1e-8),
        (lambda u: np.exp(-u), None, 1.0, 1e-10),
    ],
)
def test_integrate_semi_infinite(f, period, expected: float, accuracy: float):
    result = integrate_semi_infinite(f, QuadratureSpec(), period)
    assert result.converged
    assert abs(result.value - expected) < accuracy


@pytest.mark.parametrize(
    "f, period, expected",
    [
        (fejer, TWO_PI, HALF_PI),
        (sinc, TWO_PI, HALF_PI),
        (lorentz, None, HALF_PI),
    ],
)
def test_error_estimate_covers_the_true_error(f, period, expected: float):
    result = integrate_semi_infinite(f, QuadratureSpec(), period)
    assert abs(result.value - expected) <= 10.0 * result.error_estimate + 1e-12


def test_linearity():
    spec = QuadratureSpec()
    combined = integrate_semi_infinite(lambda u: 2.0 * fejer(u) - 3.0 * sinc(u), spec, TWO_PI)
    first = integrate_semi_infinite(fejer, spec, TWO_PI)
    second = integrate_semi_infinite(sinc, spec, TWO_PI)
    assert combined.value == pytest.approx(2.0 * first.value - 3.0 * second.value, abs=1e-9)


@pytest.mark.parametrize("f, period", [(fejer, TWO_PI), (lorentz, None)])
def test_tighter_tolerance_does_not_lose_accuracy(f, period):
    loose = integrate_semi_infinite(f, QuadratureSpec(abs_tol=1e-5, rel_tol=1e-5), period)
    tight = integrate_semi_infinite(f, QuadratureSpec(abs_tol=1e-10, rel_tol=1e-10), period)
    assert abs(tight.value - HALF_PI) <= abs(loose.value - HALF_PI) + 1e-9


def test_slow_tail_is_not_converged():
    result = integrate_semi_infinite(lambda u: 1.0 / (1.0 + u), QuadratureSpec())
    assert not result.converged
    assert result.error_estimate == math.inf


@pytest.mark.parametrize(
    "f, domain, expected",
    [
        (lambda u: u**-0.5, (0.0, 1.0), 2.0),
        (lambda u: u**-0.9, (0.0, 1.0), 10.0),
        (lambda u: u**-0.95, (0.0, 1.0), 20.0),
        (lambda u: u**-0.99, (0.0, 1.0), 100.0),
        (lambda u: 1.0 / (1.0 + u**1.5), (0.0, math.inf), power_law_mass(1.5)),
        (lambda u: 1.0 / (1.0 + u**1.1), (0.0, math.inf), power_law_mass(1.1)),
        (lambda u: 1.0 / (1.0 + u**1.05), (0.0, math.inf), power_law_mass(1.05)),
    ],
)
def test_finite_integrals(f, domain: tuple[float, float], expected: float):
    result = integrability_probe(f, domain)
    assert result.verdict == ProbeVerdict.FINITE
    assert result.finite_estimate == pytest.approx(expected, rel=1e-4)


def test_log_squared_decay_is_finite():
    result = integrability_probe(lambda u: 1.0 / (u * np.log(u) ** 2), (2.0, math.inf))
    assert result.verdict == ProbeVerdict.FINITE
    assert result.finite_estimate == pytest.approx(1.0 / math.log(2.0), rel=1e-2)
    assert result.evidence[0].local_exponents[-1] > 1.5


@pytest.mark.parametrize(
    "f, domain",
    [
        (lambda u: 1.0 / u, (0.0, 1.0)),
        (lambda u: 1.0 / (1.0 + u), (0.0, math.inf)),
        (lambda u: 1.0 / (u * np.log(u)), (2.0, math.inf)),
        (lambda u: np.ones_like(u), (1.0, math.inf)),
    ],
)
def test_diverging_integrals(f, domain: tuple[float, float]):
    result = integrability_probe(f, domain)
    assert result.diverging
    assert result.finite_estimate == math.inf


def test_compactly_supported_tail():
    result = integrability_probe(lambda u: np.where(u < 4.0, 1.0, 0.0), (0.0, math.inf))
    assert result.verdict == ProbeVerdict.FINITE
    assert result.finite_estimate == pytest.approx(4.0, rel=1e-2)


@pytest.mark.parametrize("domain, budget", [((1.0, 0.5), 24), ((0.0, 1.0), 7)])
def test_invalid_domain_or_budget(domain: tuple[float, float], budget: int):
    with pytest.raises(ConfigError):
        integrability_probe(lambda u: u, domain, budget)


class TestLogQuadrature(TestCase):
    def test_logging_on_slow_tail(self):
        with self.assertLogs("zrt.quadrature", level="WARNING") as context:
            _ = integrate_semi_infinite(lambda u: 1.0 / (1.0 + u), QuadratureSpec())

            self.assertEqual(len(context.output), 1)
            self.assertRegex(
                context.output[0],
                r"WARNING:zrt.quadrature:Tail of the integrand does not decay faster than 1/u: "
                r"power 0\.99",
            )

    def test_logging_on_verdict(self):
        with self.assertLogs("zrt.quadrature", level="DEBUG") as context:
            _ = integrability_probe(lambda u: 1.0 / u, (0.0, 1.0))

            self.assertEqual(
                context.output,
                [
                    "DEBUG:zrt.quadrature:Integrability probe on (0.0, 1.0): verdict: DIVERGING, "
                    "estimate: inf"
                ],
            )
