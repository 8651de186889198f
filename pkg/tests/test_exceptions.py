# pylint: disable=C0114
# pylint: disable=C0115
# pylint: disable=C0116
import pytest
from zrt import brownian, renormalized_zero_resolvent, resolvent_density, ResolventQuery
from zrt.exceptions import (
    ZrtError,
    ModelError,
    SymbolEvaluationError,
    QuadratureError,
    ConditionViolation,
    SimulationError,
    ConfigError,
)
from zrt.model_spec import model_from_dict


@pytest.mark.parametrize(
    "zrt_exception",
    [ModelError, SymbolEvaluationError, QuadratureError, ConditionViolation, SimulationError,
     ConfigError],
)
def test_exception_hierarchy(zrt_exception: type[Exception]):
    assert issubclass(zrt_exception, ZrtError)
    assert issubclass(zrt_exception, ArithmeticError)


def test_symbol_evaluation_error_attributes():
    error = SymbolEvaluationError("did not converge", u=2.0, residual=1e-3)
    assert error.u == 2.0
    assert error.residual == 1e-3
    assert str(error) == "did not converge (u=2.0, residual=0.001)"


def test_quadrature_error_keeps_result():
    error = QuadratureError("tail", result="partial")
    assert error.result == "partial"
    assert str(error) == "tail: partial"


def test_model_error_is_wrapped_in_config_error():
    with pytest.raises(ConfigError) as info:
        model_from_dict({"family": "stable", "alpha": 2.5, "d": 1.0, "beta": 0.0})
    assert isinstance(info.value.__cause__, ModelError)


def test_condition_violation_carries_report():
    with pytest.raises(ConditionViolation) as info:
        renormalized_zero_resolvent(brownian(b=1.0, a=0.0), 1.0)
    assert info.value.report.name == "A"
    assert info.value.report.analytic_shortcut_used


def test_analytic_failure_cannot_be_forced():
    with pytest.raises(ConditionViolation):
        resolvent_density(ResolventQuery(model=brownian(b=1.0, a=0.0), q=1.0, x=0.0, force=True))


@pytest.mark.parametrize("q", [0.0, -1.0])
def test_resolvent_query_needs_positive_q(q: float):
    with pytest.raises(ConfigError):
        ResolventQuery(model=brownian(), q=q, x=0.0)
