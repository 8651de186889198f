"""Refinement module for re-running numerical procedures with growing budgets.

This module provides a refinement mechanism with configurable budget policies such as a fixed
budget, linear growth and geometric growth, allowing a computation to be repeated with a larger
budget until its result is acceptable or a maximum refinement count is reached.
"""

from enum import Enum
from typing import Callable, Optional, TypeVar
import logging
import math
import traceback

logger = logging.getLogger("zrt.refine")

T = TypeVar("T")


class RefinementPolicy(Enum):
    """The RefinementPolicy enum defines how the budget grows between attempts.

    The refinement policies include:
    - FIXED: Every attempt gets the base budget (useful for stochastic procedures).
    - LINEAR: Attempt k gets k times the base budget.
    - GEOMETRIC: Attempt k gets 2**(k-1) times the base budget.
    """

    FIXED = 1
    LINEAR = 2
    GEOMETRIC = 3


def scale_budget(base_budget: int, attempt: int, policy: RefinementPolicy) -> int:
    """Returns the budget of the given attempt (attempts are counted from 1)."""
    if policy == RefinementPolicy.FIXED:
        return base_budget
    if policy == RefinementPolicy.LINEAR:
        return base_budget * attempt
    return base_budget * 2 ** (attempt - 1)


def refine_function(
    func: Callable[[int], T],
    is_refinement_needed: Callable[[T], bool],
    max_refinement_count: Optional[int] = 4,
    refinement_policy: Optional[RefinementPolicy] = RefinementPolicy.GEOMETRIC,
    base_budget: Optional[int] = 64,
) -> T:
    """Run a budgeted computation, enlarging the budget until the result is acceptable.

    Args:
        func: The computation; it receives the budget of the current attempt.
        is_refinement_needed: The function that determines if another attempt is needed.
        max_refinement_count: The maximum number of attempts (default is 4).
                              If set to None, there is no limit on the number of attempts.
        refinement_policy: The budget growth policy (default is RefinementPolicy.GEOMETRIC).
        base_budget: The budget of the first attempt (default is 64).

    Returns:
        The result of the first acceptable attempt or of the last attempt.

    Raises:
        Exception: If the last allowed attempt raises, its exception is re-raised.
    """
    _max_refinement_count = (
        max_refinement_count if max_refinement_count is not None else math.inf
    )
    _policy = (
        refinement_policy if refinement_policy is not None else RefinementPolicy.GEOMETRIC
    )
    _base_budget = base_budget if base_budget is not None else 64
    attempt = 0
    while True:
        attempt += 1
        budget = scale_budget(_base_budget, attempt, _policy)
        try:
            result = func(budget)
        except Exception as e:  # pylint: disable=broad-exception-caught
            if attempt >= _max_refinement_count:
                logger.warning(
                    "Attempt %d/%s (budget %d) gave up: %s",
                    attempt,
                    _max_refinement_count,
                    budget,
                    describe_exception(e),
                )
                raise e
            logger.debug("Attempt %d failed:\n%s", attempt, describe_exception(e, detailed=True))
            logger.warning(
                "Attempt %d/%s (budget %d) failed: %s",
                attempt,
                _max_refinement_count,
                budget,
                describe_exception(e),
            )
            continue
        if attempt >= _max_refinement_count or not is_refinement_needed(result):
            logger.debug(
                "Attempt %d/%s (budget %d) returning with: %s",
                attempt,
                _max_refinement_count,
                budget,
                result,
            )
            return result
        logger.info(
            "Attempt %d/%s (budget %d) needs refinement: %s",
            attempt,
            _max_refinement_count,
            budget,
            result,
        )


def describe_exception(e: BaseException, *, detailed: bool = False) -> str:
    """`Type: message` of an exception followed by its causes, innermost last.

    With `detailed` set, the formatted traceback of the whole chain is returned instead.
    """
    if detailed:
        return "".join(traceback.format_exception(type(e), e, e.__traceback__))
    parts = []
    seen: set[int] = set()
    current: Optional[BaseException] = e
    while current is not None and id(current) not in seen:
        seen.add(id(current))
        parts.append(f"{type(current).__name__}: {current}")
        current = current.__cause__ or current.__context__
    return " <- ".join(parts)
