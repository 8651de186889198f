# pylint: disable=C0114
# pylint: disable=C0115
# pylint: disable=C0116
import math
from unittest import TestCase
import numpy as np
import pytest
from scipy import integrate
from zrt import levy_models
from zrt.exceptions import ModelError
from zrt.levy_models import (
    Family,
    PowerLawDensity,
    StableParams,
    log_scale_quad,
    stable_constant,
    symbol_derivative,
    symbol_eval,
)

ALPHA = 1.5
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def stable_as_custom(alpha: float, d: float, beta: float) -> levy_models.LevyModel:
    params = StableParams.from_scale(alpha=alpha, d=d, beta=beta)
    return levy_models.custom_triplet(
        positive_density=PowerLawDensity(params.c_plus, alpha),
        negative_density=PowerLawDensity(params.c_minus, alpha),
        small_jump_index=alpha,
        tail_index=alpha,
        b=(params.c_minus - params.c_plus) / (alpha - 1.0),
    )


@pytest.mark.parametrize("u", [0.0, 0.5, 1.0, -2.0])
def test_brownian_symbol(u: float):
    value = symbol_eval(levy_models.brownian(b=0.3, a=2.0), u)
    assert value.re == pytest.approx(-u * u)
    assert value.im == pytest.approx(0.3 * u)
    assert value.error_estimate == 0.0


def test_stable_symbol_closed_form():
    value = symbol_eval(levy_models.stable(alpha=ALPHA, d=1.0, beta=0.5), 1.0)
    assert value.re == pytest.approx(-1.0)
    assert value.im == pytest.approx(-0.5)


def test_stable_parameterizations_agree():
    c = stable_constant(ALPHA)
    by_scale = levy_models.stable(alpha=ALPHA, d=2.0, beta=0.25)
    by_measure = levy_models.stable(alpha=ALPHA, c_plus=2.0 * c * 1.25, c_minus=2.0 * c * 0.75)
    for u in (0.3, 1.0, 7.0):
        assert symbol_eval(by_measure, u).value == pytest.approx(symbol_eval(by_scale, u).value)


@pytest.mark.parametrize("u", [0.3, 1.0, 4.0])
def test_numeric_symbol_reproduces_stable_closed_form(u: float):
    closed = symbol_eval(levy_models.stable(alpha=ALPHA, d=1.0, beta=0.5), u)
    numeric = symbol_eval(stable_as_custom(ALPHA, 1.0, 0.5), u)
    assert numeric.re == pytest.approx(closed.re, rel=1e-6, abs=1e-8)
    assert numeric.im == pytest.approx(closed.im, rel=1e-6, abs=1e-8)


@pytest.mark.parametrize(
    "model",
    [
        levy_models.truncated_stable(alpha=1.3, c_plus=1.0, c_minus=0.4),
        levy_models.tempered_stable(
            alpha_plus=1.5, c_plus=1.0, c_minus=0.5, lambda_plus=1.0, lambda_minus=2.0
        ),
        levy_models.spectrally_negative(),
    ],
)
def test_symbol_is_hermitian(model: levy_models.LevyModel):
    for u in (0.7, 3.0):
        value = symbol_eval(model, u).value
        assert symbol_eval(model, -u).value == pytest.approx(value.conjugate())
        assert value.real < 0.0


def test_symbol_at_zero_vanishes():
    model = levy_models.tempered_stable(
        alpha_plus=1.5, c_plus=1.0, c_minus=1.0, lambda_plus=1.0, lambda_minus=1.0
    )
    assert symbol_eval(model, 0.0).value == 0j


@pytest.mark.parametrize(
    "build",
    [
        lambda: levy_models.stable(alpha=0.9, d=1.0, beta=0.0),
        lambda: levy_models.stable(alpha=2.0, d=1.0, beta=0.0),
        lambda: levy_models.stable(alpha=1.5, d=1.0, beta=1.5),
        lambda: levy_models.stable(alpha=1.5, d=1.0, beta=0.0, c_plus=1.0, c_minus=1.0),
        lambda: levy_models.stable(alpha=1.5),
        lambda: levy_models.brownian(b=0.0, a=0.0),
        lambda: levy_models.brownian(a=-1.0),
        lambda: levy_models.truncated_stable(alpha=2.0, c_plus=1.0, c_minus=1.0),
        lambda: levy_models.tempered_stable(
            alpha_plus=1.5, c_plus=1.0, c_minus=1.0, lambda_plus=-1.0, lambda_minus=1.0
        ),
        lambda: levy_models.integrable_drift(mean=0.0),
        lambda: levy_models.custom_triplet(
            positive_density=PowerLawDensity(1.0, 2.5),
            negative_density=PowerLawDensity(1.0, 2.5),
            small_jump_index=2.5,
        ),
    ],
)
def test_invalid_models_raise(build):
    with pytest.raises(ModelError):
        build()


def test_means():
    assert levy_models.brownian(b=0.3).mean == 0.3
    assert levy_models.stable(alpha=ALPHA, d=1.0, beta=0.5).mean == pytest.approx(0.0, abs=1e-12)
    assert levy_models.integrable_drift(mean=0.5, c_plus=2.0).mean == pytest.approx(0.5)
    assert levy_models.spectrally_negative().mean == pytest.approx(0.0, abs=1e-9)
    assert levy_models.truncated_stable(alpha=1.5, c_plus=1.0, c_minus=0.2).mean == 0.0


def test_compound_poisson_detection():
    exponential = PowerLawDensity(coefficient=1.0, index=-1.0, rate=1.0)
    compound = levy_models.custom_triplet(
        positive_density=exponential, negative_density=exponential, small_jump_index=-1.0
    )
    with_gaussian = levy_models.custom_triplet(
        positive_density=exponential,
        negative_density=exponential,
        small_jump_index=-1.0,
        a=1.0,
    )
    assert compound.is_compound_poisson
    assert not with_gaussian.is_compound_poisson
    assert not levy_models.stable(alpha=ALPHA, d=1.0, beta=0.0).is_compound_poisson


def test_symmetry_flags():
    assert levy_models.stable(alpha=ALPHA, d=1.0, beta=0.0).is_symmetric
    assert not levy_models.stable(alpha=ALPHA, d=1.0, beta=0.5).is_symmetric
    assert levy_models.brownian().is_symmetric
    assert not levy_models.brownian(b=1.0).is_symmetric
    assert levy_models.spectrally_negative().family == Family.TEMPERED_STABLE


def test_stable_closed_form_h():
    model = levy_models.stable(alpha=ALPHA, d=1.0, beta=0.0)
    assert levy_models.stable_closed_form_h(model, 1.0) == pytest.approx(SQRT_2_OVER_PI)
    assert levy_models.stable_closed_form_h(model, -4.0) == pytest.approx(2.0 * SQRT_2_OVER_PI)
    assert levy_models.stable_closed_form_h(model, 0.0) == 0.0
    with pytest.raises(ModelError):
        levy_models.stable_closed_form_h(levy_models.brownian(), 1.0)


@pytest.mark.parametrize("u", [-1.7, 0.4, 2.5])
def test_stable_derivative_matches_finite_differences(u: float):
    model = levy_models.stable(alpha=1.7, d=0.5, beta=-0.3)
    step = 1e-6
    expected = (symbol_eval(model, u + step).value - symbol_eval(model, u - step).value) / (
        2.0 * step
    )
    assert symbol_derivative(model, u) == pytest.approx(expected, rel=1e-6)


@pytest.mark.parametrize("u", [0.4, -1.3])
def test_jump_integral_derivative_matches_finite_differences(u: float):
    model = levy_models.tempered_stable(
        alpha_plus=1.5, c_plus=1.0, c_minus=0.5, lambda_plus=1.0, lambda_minus=2.0
    )
    step = 1e-4
    expected = (symbol_eval(model, u + step).value - symbol_eval(model, u - step).value) / (
        2.0 * step
    )
    assert abs(symbol_derivative(model, u) - expected) < 1e-5


def test_derivative_at_zero_is_the_mean():
    model = levy_models.integrable_drift(mean=0.5)
    assert symbol_derivative(model, 0.0) == pytest.approx(0.5j)


def riemann_symbol(model: levy_models.LevyModel, u: float) -> complex:
    """η(u) by trapezoid sums in log y over [1e-20, 1] and [1, 60]."""
    params = model.params
    plus = PowerLawDensity(params.c_plus, params.alpha_plus, params.lambda_plus)
    minus = PowerLawDensity(params.c_minus, params.alpha_minus, params.lambda_minus)
    re, im = 0.0, model.b * u
    pieces = ((math.log(1e-20), 0.0, True), (0.0, math.log(60.0), False))
    for lower, upper, compensated in pieces:
        t = np.linspace(lower, upper, 400_001)
        y = np.exp(t)
        z = u * y
        re -= integrate.trapezoid(2.0 * np.sin(0.5 * z) ** 2 * (plus(y) + minus(y)) * y, t)
        if compensated:
            series = -(z**3) / 6.0 * (1.0 - z * z / 20.0 * (1.0 - z * z / 42.0))
            odd = np.where(z < 0.1, series, np.sin(z) - z)
        else:
            odd = np.sin(z)
        im += integrate.trapezoid(odd * (plus(y) - minus(y)) * y, t)
    return complex(re, im)


@pytest.mark.parametrize("u", [0.5, 1.0, 4.0])
def test_tempered_symbol_matches_riemann_sums(u: float):
    model = levy_models.tempered_stable(
        alpha_plus=1.5, c_plus=1.0, c_minus=0.5, lambda_plus=1.0, lambda_minus=2.0
    )
    expected = riemann_symbol(model, u)
    value = symbol_eval(model, u)
    assert value.re == pytest.approx(expected.real, rel=1e-5)
    assert value.im == pytest.approx(expected.imag, rel=1e-5, abs=1e-6)


@pytest.mark.parametrize(
    "model",
    [
        levy_models.stable(alpha=ALPHA, d=1.0, beta=0.5),
        levy_models.truncated_stable(alpha=ALPHA, c_plus=1.0, c_minus=0.5),
        levy_models.tempered_stable(
            alpha_plus=1.5, c_plus=1.0, c_minus=0.5, lambda_plus=1.0, lambda_minus=2.0
        ),
        levy_models.integrable_drift(mean=0.5),
        levy_models.spectrally_negative(),
        levy_models.brownian(b=0.5),
    ],
)
def test_symbol_modulus_grows(model: levy_models.LevyModel):
    moduli = [abs(symbol_eval(model, u).value) for u in (10.0, 100.0, 1000.0)]
    assert moduli[0] < moduli[1] < moduli[2]


@pytest.mark.parametrize("u", [1.0, 2.0, 10.0, 100.0])
def test_truncated_stable_lower_bound(u: float):
    model = levy_models.truncated_stable(alpha=ALPHA, c_plus=1.0, c_minus=0.5)
    bound = (1.0 + 0.5) / (4.0 * (2.0 - ALPHA)) * u**ALPHA
    assert -symbol_eval(model, u).re >= bound


@pytest.mark.parametrize(
    "func, lower, upper, expected",
    [
        (lambda y: y**-0.5, -math.inf, 0.0, 2.0),
        (lambda y: y**-2.0, 0.0, math.inf, 1.0),
        (lambda y: np.exp(-y), -math.inf, math.inf, 1.0),
        (lambda y: y**-2.95, 0.0, math.inf, 1.0 / 1.95),
    ],
)
def test_log_scale_quad(func, lower: float, upper: float, expected: float):
    value, error = log_scale_quad(func, lower, upper)
    assert value == pytest.approx(expected, rel=1e-8)
    assert error < 1e-6


def test_log_scale_quad_reports_a_divergent_end():
    _, error = log_scale_quad(lambda y: 1.0 / y, -math.inf, 0.0)
    assert error == math.inf


@pytest.mark.parametrize("alpha", [1.1, 1.3, 1.5, 1.7, 1.8, 1.9, 1.95])
def test_power_law_custom_triplets_are_valid(alpha: float):
    model = levy_models.custom_triplet(
        positive_density=PowerLawDensity(1.0, alpha),
        negative_density=PowerLawDensity(0.5, alpha),
        small_jump_index=alpha,
        tail_index=alpha,
    )
    assert model.family == Family.CUSTOM_TRIPLET
    assert model.large_jump_mean == pytest.approx((1.0 - 0.5) / (alpha - 1.0), rel=1e-8)
    assert not model.is_compound_poisson


@pytest.mark.parametrize("alpha", [1.1, 1.9])
def test_symmetric_custom_symbol_near_the_index_bounds(alpha: float):
    closed = symbol_eval(levy_models.stable(alpha=alpha, d=1.0, beta=0.0), 1.0)
    numeric = symbol_eval(stable_as_custom(alpha, 1.0, 0.0), 1.0)
    assert numeric.re == pytest.approx(closed.re, rel=1e-6)
    assert numeric.im == pytest.approx(0.0, abs=1e-8)


class TestLogLevyModel(TestCase):
    def test_logging_on_model_creation(self):
        with self.assertLogs("zrt.symbol", level="INFO") as context:
            _ = levy_models.brownian(b=0.5, a=2.0)

            self.assertEqual(len(context.output), 1)
            self.assertRegex(
                context.output[0],
                r"INFO:zrt.symbol:LevyModel created: id: \d+, family: BROWNIAN_WITH_DRIFT, "
                r"b: 0.5, a: 2.0, params: None",
            )
