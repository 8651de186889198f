"""Verdicts for the integrability and regularity conditions of a Lévy model.

The conditions are

- (A): 1/(q − η) is integrable on ℝ for every q > 0;
- (B): ∫₀¹ |Im(u / η(u))| du < ∞;
- (A1): ∫ Re(1/(q − η(u))) du < ∞; (A2): 0 is regular for itself;
- (A3) = (L2): the process is of type C, i.e. a > 0 or ∫_{|y|≤1} |y| ν(dy) = ∞;
- (A4): the process is not compound Poisson;
- (L1): ∫₀^∞ 1/(q − Re η(u)) du < ∞;
- (L3): ∫₀^∞ (u² ∧ 1)(|Re η′| + |Im η′|)/|η|² du < ∞.

Preset families are decided by analytic bounds. Custom models use the declared small jump
index where it decides the question and `integrability_probe` otherwise. (A2) is never simulated:
it is derived from (A1), (A3) and (A4) through the equivalence "(A1) and (A3) hold if and only if
(A2) and (A4) hold", and, under (A1), "(A2) if and only if (A3)".
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional
import logging
import math

import numpy as np

from .custom_data_types import FloatArray, JsonType, RealFunction
from .exceptions import SymbolEvaluationError
from .levy_models import (
    Family,
    LevyModel,
    StableParams,
    TemperedStableParams,
    TruncatedStableParams,
    symbol_array,
    symbol_derivative,
)
from .quadrature import ProbeResult, ProbeVerdict, integrability_probe

logger = logging.getLogger("zrt.conditions")

PROBE_Q_VALUES = (0.1, 1.0, 10.0)
DEFAULT_PROBE_BUDGET = 20


class Verdict(Enum):
    """The Verdict enum is the outcome of a condition check.

    - PASS: The condition holds.
    - FAIL: The condition does not hold.
    - INCONCLUSIVE: Numerics could not decide.
    """

    PASS = 1
    FAIL = 2
    INCONCLUSIVE = 3


@dataclass(frozen=True)
class ConditionCheck:
    """The verdict on one condition with the evidence it rests on."""

    name: str
    verdict: Verdict
    analytic_shortcut_used: bool
    reason: str
    evidence: dict[str, JsonType] = field(default_factory=dict, compare=False, hash=False)

    def as_dict(self) -> dict[str, JsonType]:
        return {
            "condition": self.name,
            "verdict": self.verdict.name,
            "analytic_shortcut_used": self.analytic_shortcut_used,
            "reason": self.reason,
            "evidence": self.evidence,
        }


@dataclass(frozen=True)
class ConditionReport:
    """Verdicts on a set of conditions for one model, with the implication chain used."""

    model: LevyModel
    checks: tuple[ConditionCheck, ...]
    chain: tuple[str, ...] = ()

    def __getitem__(self, name: str) -> ConditionCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def verdict(self, name: str) -> Verdict:
        return self[name].verdict

    def as_dict(self) -> dict[str, JsonType]:
        return {
            "family": self.model.family.name,
            "label": self.model.label,
            "conditions": {check.name: check.as_dict() for check in self.checks},
            "chain": list(self.chain),
        }


def _probe_values(func: RealFunction, domain: tuple[float, float], budget: int) -> ProbeResult:
    try:
        return integrability_probe(func, domain, budget)
    except SymbolEvaluationError as e:
        logger.warning("Integrability probe failed on %s: %s", domain, e)
        return ProbeResult(finite_estimate=math.nan, verdict=ProbeVerdict.INCONCLUSIVE)


class _Integrand:
    """Vectorized integrands of the condition probes."""

    def __init__(self, model: LevyModel, kind: str, q: float = 1.0):
        self.model = model
        self.kind = kind
        self.q = q

    def __call__(self, u: FloatArray) -> FloatArray:
        eta = symbol_array(self.model, u)
        if self.kind == "A":
            return np.abs(1.0 / (self.q - eta))
        if self.kind == "A1":
            return np.real(1.0 / (self.q - eta))
        if self.kind == "B":
            return np.abs(np.imag(u / eta))
        derivative = np.array([symbol_derivative(self.model, float(v)) for v in np.ravel(u)])
        derivative = derivative.reshape(np.shape(u))
        weight = np.minimum(u * u, 1.0)
        return (
            weight
            * (np.abs(derivative.real) + np.abs(derivative.imag))
            / (eta.real**2 + eta.imag**2)
        )


def _from_probe(probe: ProbeResult) -> Verdict:
    return {
        ProbeVerdict.FINITE: Verdict.PASS,
        ProbeVerdict.DIVERGING: Verdict.FAIL,
        ProbeVerdict.INCONCLUSIVE: Verdict.INCONCLUSIVE,
    }[probe.verdict]


def _log_check(check: ConditionCheck) -> ConditionCheck:
    if check.verdict == Verdict.INCONCLUSIVE:
        logger.warning("Condition %s inconclusive: %s", check.name, check.reason)
    else:
        logger.info("Condition %s: %s (%s)", check.name, check.verdict.name, check.reason)
    return check


@lru_cache(maxsize=256)
def check_A(
    model: LevyModel, *, probe: Optional[bool] = None, budget: int = DEFAULT_PROBE_BUDGET
) -> ConditionCheck:
    """Condition (A): ∫ |1/(q − η(u))| du < ∞.

    Presets are decided by the bounds −Re η(u) ≳ u^α. Custom models are integrated numerically
    at q ∈ {0.1, 1, 10}: the verdict declared by a > 0 or a small jump index above 1 stands
    only when every q agrees with it, and is INCONCLUSIVE otherwise. With `probe` False a
    custom model keeps its declared verdict. Presets run the numeric check only when `probe`
    is True, as evidence.
    """
    evidence: dict[str, JsonType] = {}
    params = model.params
    if model.family == Family.BROWNIAN_WITH_DRIFT:
        verdict = Verdict.PASS if model.a > 0.0 else Verdict.FAIL
        reason = (
            "|1/(q − η)| ≤ 1/(q + a u²/2)"
            if model.a > 0.0
            else "pure drift: |1/(q − η(u))| ~ 1/(|b| u) is not integrable"
        )
    elif isinstance(params, StableParams):
        verdict = Verdict.PASS
        reason = "|1/(q − η(u))| ≤ 1/(q + d|u|^α) with α > 1"
        evidence["d"] = params.d
    elif isinstance(params, TruncatedStableParams):
        verdict = Verdict.PASS
        constant = (params.c_plus + params.c_minus) / (4.0 * (2.0 - params.alpha))
        reason = "−Re η(u) ≥ (c₊ + c₋) u^α / (4(2 − α)) for u ≥ 1"
        evidence["lower_bound_constant"] = constant
    elif isinstance(params, TemperedStableParams):
        verdict = Verdict.PASS
        reason = "−Re η(u) ≥ Σ c± e^(−λ±) u^(α±) / (4(2 − α±)) for u ≥ 1"
        evidence["lower_bound_constants"] = [
            params.c_plus * math.exp(-params.lambda_plus) / (4.0 * (2.0 - params.alpha_plus)),
            params.c_minus * math.exp(-params.lambda_minus) / (4.0 * (2.0 - params.alpha_minus)),
        ]
    else:
        index = model.small_jump_index
        assert index is not None
        if model.a > 0.0 or index > 1.0:
            verdict = Verdict.PASS
            reason = "a > 0 or small jump index > 1 gives |η(u)| ≳ |u|^s with s > 1"
        else:
            verdict = Verdict.FAIL
            reason = "a = 0 and small jump index ≤ 1: |η(u)| grows at most like |u| log |u|"
        evidence["small_jump_index"] = index
    custom = model.family == Family.CUSTOM_TRIPLET
    shortcut = True
    if probe is None:
        probe = custom
    if probe:
        probes = {
            q: _probe_values(_Integrand(model, "A", q), (1.0, math.inf), budget)
            for q in PROBE_Q_VALUES
        }
        numeric = {_from_probe(result) for result in probes.values()}
        evidence["probe"] = {str(q): result.as_dict() for q, result in probes.items()}
        evidence["probe_agrees_across_q"] = len(numeric) == 1
        if numeric != {verdict}:
            logger.warning(
                "Condition A numeric verdicts %s disagree with %s",
                sorted(v.name for v in numeric),
                verdict.name,
            )
            if custom:
                verdict = Verdict.INCONCLUSIVE
                reason = f"numeric integration does not confirm the declared measure ({reason})"
        shortcut = not custom
    return _log_check(ConditionCheck("A", verdict, shortcut, reason, evidence))


@lru_cache(maxsize=256)
def check_B(
    model: LevyModel, *, probe: Optional[bool] = None, budget: int = DEFAULT_PROBE_BUDGET
) -> ConditionCheck:
    """Condition (B): ∫₀¹ |Im(u / η(u))| du < ∞."""
    evidence: dict[str, JsonType] = {}
    jumps = model.jumps
    mean = model.mean
    analytic: Optional[tuple[Verdict, str]] = None
    if model.is_symmetric:
        analytic = (Verdict.PASS, "Im η ≡ 0, the integral is 0")
        evidence["integral"] = 0.0
    elif model.family == Family.BROWNIAN_WITH_DRIFT:
        analytic = (Verdict.PASS, "|Im(u/η(u))| = |b| / (b² + a² u² / 4) is bounded")
    elif model.family == Family.STABLE:
        analytic = (Verdict.PASS, "|Im(u/η(u))| ≤ C u^(1−α) with α < 2")
    elif model.family == Family.TRUNCATED_STABLE:
        analytic = (Verdict.PASS, "bounded support: |Im η(u)| / u³ ≤ ∫ |y|³ ν(dy)")
    elif model.family == Family.TEMPERED_STABLE:
        analytic = (
            Verdict.PASS,
            "tempered or one-sided stable tails: |Im(u/η(u))| ≤ C u^(1−α) or Im η / u³ bounded",
        )
    elif check_A(model, probe=False).verdict == Verdict.PASS and jumps is not None:
        if mean is not None and mean != 0.0:
            analytic = (Verdict.PASS, "non-zero mean: |Im(u/η(u))| ≤ |u / Im η(u)| → 1/|mean|")
        elif jumps.support < math.inf:
            analytic = (Verdict.PASS, "bounded support: |Im η(u)| / u³ is bounded")
    if probe is None:
        probe = analytic is None
    probe_verdict: Optional[Verdict] = None
    if probe:
        result = _probe_values(_Integrand(model, "B"), (0.0, 1.0), budget)
        probe_verdict = _from_probe(result)
        evidence["probe"] = result.as_dict()
    if analytic is not None:
        return _log_check(ConditionCheck("B", analytic[0], True, analytic[1], evidence))
    assert probe_verdict is not None
    return _log_check(
        ConditionCheck("B", probe_verdict, False, "integrability probe on (0, 1]", evidence)
    )


@lru_cache(maxsize=256)
def check_type_C(model: LevyModel, *, budget: int = DEFAULT_PROBE_BUDGET) -> ConditionCheck:
    """Condition (A3), the same as (L2): a > 0 or ∫_{|y|≤1} |y| ν(dy) = ∞."""
    jumps = model.jumps
    if model.a > 0.0:
        return _log_check(ConditionCheck("A3", Verdict.PASS, True, "a > 0"))
    if jumps is None:
        return _log_check(ConditionCheck("A3", Verdict.FAIL, True, "a = 0 and no jumps"))
    if model.family != Family.CUSTOM_TRIPLET:
        return _log_check(
            ConditionCheck(
                "A3",
                Verdict.PASS,
                True,
                "stable-like small jumps with α > 1 have ∫_{|y|≤1} |y| ν(dy) = ∞",
            )
        )
    result = _probe_values(
        lambda y: y * jumps.total(y), (0.0, min(1.0, jumps.support)), budget
    )
    evidence: dict[str, JsonType] = {
        "probe": result.as_dict(),
        "small_jump_index": jumps.small_jump_index,
    }
    if result.verdict == ProbeVerdict.DIVERGING:
        return _log_check(
            ConditionCheck("A3", Verdict.PASS, False, "∫_{|y|≤1} |y| ν(dy) diverges", evidence)
        )
    if result.verdict == ProbeVerdict.FINITE:
        return _log_check(
            ConditionCheck("A3", Verdict.FAIL, False, "∫_{|y|≤1} |y| ν(dy) is finite", evidence)
        )
    verdict = Verdict.PASS if jumps.small_jump_index >= 1.0 else Verdict.FAIL
    return _log_check(
        ConditionCheck(
            "A3", verdict, True, "probe inconclusive, declared small jump index used", evidence
        )
    )


@lru_cache(maxsize=256)
def check_A1(model: LevyModel, *, budget: int = DEFAULT_PROBE_BUDGET) -> ConditionCheck:
    """Condition (A1): ∫ Re(1/(q − η(u))) du < ∞."""
    if check_A(model, probe=False).verdict == Verdict.PASS:
        return _log_check(ConditionCheck("A1", Verdict.PASS, True, "implied by (A)"))
    if model.family == Family.BROWNIAN_WITH_DRIFT:
        return _log_check(
            ConditionCheck(
                "A1", Verdict.PASS, True, "pure drift: Re(1/(q − ibu)) = q / (q² + b²u²)"
            )
        )
    result = _probe_values(_Integrand(model, "A1"), (1.0, math.inf), budget)
    return _log_check(
        ConditionCheck(
            "A1",
            _from_probe(result),
            False,
            "integrability probe of Re(1/(1 − η)) on [1, ∞)",
            {"probe": result.as_dict()},
        )
    )


def check_A4(model: LevyModel) -> ConditionCheck:
    """Condition (A4): the process is not compound Poisson."""
    if model.is_compound_poisson:
        return _log_check(
            ConditionCheck("A4", Verdict.FAIL, True, "a = 0, finite ν and no drift")
        )
    return _log_check(ConditionCheck("A4", Verdict.PASS, True, "not compound Poisson"))


@lru_cache(maxsize=256)
def check_L1(model: LevyModel) -> ConditionCheck:
    """Condition (L1): ∫₀^∞ 1/(q − Re η(u)) du < ∞."""
    if model.family == Family.BROWNIAN_WITH_DRIFT:
        verdict = Verdict.PASS if model.a > 0.0 else Verdict.FAIL
        return _log_check(ConditionCheck("L1", verdict, True, "−Re η(u) = a u² / 2"))
    if model.family != Family.CUSTOM_TRIPLET:
        return _log_check(
            ConditionCheck("L1", Verdict.PASS, True, "−Re η(u) ≥ C u^α for u ≥ 1, α > 1")
        )
    index = model.small_jump_index
    assert index is not None
    if model.a > 0.0 or index > 1.0:
        return _log_check(
            ConditionCheck("L1", Verdict.PASS, True, "a > 0 or small jump index > 1")
        )
    return _log_check(
        ConditionCheck("L1", Verdict.FAIL, True, "−Re η(u) grows at most linearly")
    )


@lru_cache(maxsize=256)
def check_L3(model: LevyModel, *, budget: int = DEFAULT_PROBE_BUDGET) -> ConditionCheck:
    """Condition (L3), a diagnostic on the derivatives of the symbol.

    Stable models pass. Centred models with finite variance fail, since near 0
    Re η ~ −σ²u²/2, Im η = O(u³) and the integrand behaves like 1/u. Everything else is probed
    numerically with analytic derivatives (finite differences for custom jump measures).
    """
    if model.family == Family.STABLE:
        return _log_check(
            ConditionCheck(
                "L3", Verdict.PASS, True, "integrand ~ u^(1−α) at 0 and u^(−1−α) at ∞"
            )
        )
    if model.family == Family.BROWNIAN_WITH_DRIFT and model.b != 0.0:
        return _log_check(
            ConditionCheck("L3", Verdict.PASS, True, "Im η(u) = bu dominates near 0")
        )
    mean = model.mean
    if mean is not None and abs(mean) <= 1e-12 and model.has_finite_variance:
        return _log_check(
            ConditionCheck(
                "L3",
                Verdict.FAIL,
                True,
                "centred with finite variance: the integrand behaves like 1/u near 0",
            )
        )
    result = _probe_values(_Integrand(model, "L3"), (0.0, math.inf), budget)
    return _log_check(
        ConditionCheck(
            "L3",
            _from_probe(result),
            False,
            "integrability probe on (0, ∞)",
            {"probe": result.as_dict()},
        )
    )


def check_L1_L3(model: LevyModel) -> tuple[ConditionCheck, ConditionCheck, ConditionCheck]:
    """The diagnostic conditions (L1), (L2) and (L3)."""
    type_c = check_type_C(model)
    l2 = ConditionCheck(
        "L2", type_c.verdict, type_c.analytic_shortcut_used, type_c.reason, type_c.evidence
    )
    return check_L1(model), l2, check_L3(model)


def regularity_diagnostics(model: LevyModel) -> ConditionReport:
    """Verdicts on (A1)–(A4), deriving (A2) from the others, with the implication chain."""
    a = check_A(model, probe=False)
    chain: list[str] = []
    if a.verdict == Verdict.PASS:
        chain.append("(A) ⇒ (A1), (A2), (A3), (A4)")
        checks = tuple(
            ConditionCheck(name, Verdict.PASS, True, "implied by (A)")
            for name in ("A1", "A2", "A3", "A4")
        )
        return ConditionReport(model=model, checks=checks, chain=tuple(chain))
    a1 = check_A1(model)
    a3 = check_type_C(model)
    a4 = check_A4(model)
    if a1.verdict == Verdict.PASS and a3.verdict != Verdict.INCONCLUSIVE:
        chain.append("under (A1): (A2) ⇔ (A3)")
        a2_verdict, reason = a3.verdict, "(A1) holds and (A2) ⇔ (A3)"
    elif a1.verdict == Verdict.FAIL and a4.verdict == Verdict.PASS:
        chain.append("(A1) ∧ (A3) ⇔ (A2) ∧ (A4); (A1) fails and (A4) holds ⇒ (A2) fails")
        a2_verdict, reason = Verdict.FAIL, "(A1) fails while (A4) holds"
    else:
        chain.append("(A1) ∧ (A3) ⇔ (A2) ∧ (A4) does not decide (A2)")
        a2_verdict, reason = Verdict.INCONCLUSIVE, "implications do not decide (A2)"
    a2 = _log_check(ConditionCheck("A2", a2_verdict, True, reason))
    return ConditionReport(model=model, checks=(a1, a2, a3, a4), chain=tuple(chain))


def condition_report(model: LevyModel, *, probe: Optional[bool] = None) -> ConditionReport:
    """All condition verdicts for one model: (A), (B), (A1)–(A4) and (L1)–(L3)."""
    regularity = regularity_diagnostics(model)
    l1, l2, l3 = check_L1_L3(model)
    checks = (
        check_A(model, probe=probe),
        check_B(model, probe=probe),
        *regularity.checks,
        l1,
        l2,
        l3,
    )
    return ConditionReport(model=model, checks=checks, chain=regularity.chain)


def condition_table(
    models: Iterable[LevyModel], *, names: tuple[str, ...] = ("A", "B", "L3")
) -> list[dict[str, str]]:
    """One row per model with the verdicts on the named conditions."""
    rows = []
    for model in models:
        report = condition_report(model, probe=False)
        row = {"model": model.label or model.family.name}
        row.update({name: report.verdict(name).name for name in names})
        rows.append(row)
    return rows
