# pylint: disable=C0114
# pylint: disable=C0115
# pylint: disable=C0116
import json
import math
from pathlib import Path
from typing import Any


class Counter:
    count = 0
    budgets: list[int] = []

    @staticmethod
    def next(budget: int = 0):
        Counter.count += 1
        Counter.budgets.append(budget)
        return Counter.count

    @staticmethod
    def reset():
        Counter.count = 0
        Counter.budgets = []


def assert_within_standard_errors(
    estimate: float,
    target: float,
    std_error: float,
    k: float = 4.0,
    margin: float = 0.0,
):
    """Asserts that an estimate is within k standard errors plus a margin of the target.

    Args:
        estimate: The Monte Carlo estimate.
        target: The expected value.
        std_error: The standard error of the estimate.
        k: The number of standard errors allowed (default is 4).
        margin: An additional absolute margin (default is 0).
    """
    assert abs(estimate - target) <= k * std_error + margin, (
        f"estimate {estimate} vs target {target}: gap {abs(estimate - target)} exceeds "
        f"{k} * {std_error} + {margin}"
    )


def brownian_resolvent(q: float, x: float) -> float:
    """r_q(x) of standard Brownian motion."""
    root = math.sqrt(2.0 * q)
    return math.exp(-root * abs(x)) / root


def write_spec(directory: Path, spec: dict[str, Any], name: str = "model.json") -> Path:
    path = directory / name
    path.write_text(json.dumps(spec), encoding="utf-8")
    return path
