"""This module defines exceptions used inside this package."""

from typing import Any


class ZrtError(ArithmeticError):
    """
    Base class for all exceptions raised by `zrt`.
    """


class ModelError(ZrtError):
    """
    Invalid Lévy model: bad parameters, unknown family or a jump measure that is not
    a Lévy measure.
    """


class SymbolEvaluationError(ZrtError):
    """
    The Lévy symbol could not be evaluated to the required accuracy.
    """

    def __init__(self, message: str, *, u: float, residual: float):
        super().__init__(f"{message} (u={u!r}, residual={residual!r})")
        self.u = u
        self.residual = residual


class QuadratureError(ZrtError):
    """
    A quadrature did not converge and the caller required convergence.
    """

    def __init__(self, message: str, *, result: Any):
        super().__init__(f"{message}: {result}")
        self.result = result


class ConditionViolation(ZrtError):
    """
    A condition required by an operation failed or could not be decided.
    """

    def __init__(self, message: str, *, report: Any):
        super().__init__(message)
        self.report = report


class SimulationError(ZrtError):
    """
    Path simulation is not possible with the requested scheme or budget.
    """


class ConfigError(ZrtError):
    """
    Malformed model spec file or invalid run configuration.
    """
