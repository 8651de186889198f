# pylint: disable=C0114
# pylint: disable=C0115
# pylint: disable=C0116
import cmath
import csv
from dataclasses import replace
from pathlib import Path
import numpy as np
import pytest
from zrt import levy_models
from zrt.exceptions import ConfigError, SimulationError
from zrt.levy_models import symbol_eval
from zrt.pathsim import (
    Scheme,
    SimConfig,
    compound_poisson_parts,
    empirical_cf,
    iter_path_batches,
    sample_path,
    simulate_paths,
    write_paths_csv,
)
from .test_utilities import assert_within_standard_errors

SEED = 20240601
STABLE = levy_models.stable(alpha=1.5, d=1.0, beta=0.5)
TEMPERED = levy_models.tempered_stable(
    alpha_plus=1.5, c_plus=1.0, c_minus=0.5, lambda_plus=1.0, lambda_minus=2.0
)


def test_pure_drift_is_exact():
    cfg = SimConfig(n_steps=100, horizon=2.0, n_paths=3, x0=1.0, seed=SEED)
    paths = simulate_paths(levy_models.brownian(b=0.5, a=0.0), cfg)
    for row in paths.states:
        assert np.array_equal(row, 1.0 + 0.5 * cfg.t_grid())


def test_paths_start_at_x0():
    cfg = SimConfig(n_steps=10, n_paths=5, x0=-0.7, seed=SEED)
    paths = simulate_paths(STABLE, cfg)
    assert paths.states.shape == (5, 11)
    assert np.all(paths.states[:, 0] == -0.7)
    assert paths.scheme == Scheme.EXACT_INCREMENT


@pytest.mark.parametrize("model", [STABLE, levy_models.brownian(b=0.1), TEMPERED])
def test_same_seed_same_paths(model: levy_models.LevyModel):
    cfg = SimConfig(n_steps=50, n_paths=8, seed=SEED, small_jump_cutoff=0.05)
    first = simulate_paths(model, cfg)
    again = simulate_paths(model, cfg)
    threaded = simulate_paths(model, replace(cfg, workers=3))
    assert np.array_equal(first.states, again.states)
    assert np.array_equal(first.states, threaded.states)
    other = simulate_paths(model, replace(cfg, seed=SEED + 1))
    assert not np.array_equal(first.states, other.states)


def test_paths_do_not_depend_on_batching():
    cfg = SimConfig(n_steps=20, n_paths=7, seed=SEED)
    full = simulate_paths(STABLE, cfg)
    batched = np.vstack([batch.states for batch in iter_path_batches(STABLE, cfg, batch_size=3)])
    assert np.array_equal(full.states, batched)
    single = sample_path(STABLE, cfg, path_id=4)
    assert single.path_ids == [4]
    assert np.array_equal(single.states[0], full.states[4])


def test_brownian_moments():
    cfg = SimConfig(n_steps=10, horizon=1.0, n_paths=4000, seed=SEED)
    terminal = simulate_paths(levy_models.brownian(b=0.2, a=1.0), cfg).terminal
    std_error = 1.0 / np.sqrt(terminal.size)
    assert_within_standard_errors(float(np.mean(terminal)), 0.2, std_error)
    assert float(np.var(terminal, ddof=1)) == pytest.approx(1.0, abs=0.1)


@pytest.mark.parametrize("u", [0.5, 1.0, 2.0])
def test_stable_characteristic_function(u: float):
    cfg = SimConfig(n_steps=4, horizon=1.0, n_paths=4000, seed=SEED)
    paths = simulate_paths(STABLE, cfg)
    estimate = empirical_cf(paths, u)
    target = cmath.exp(symbol_eval(STABLE, u).value)
    assert_within_standard_errors(0.0, abs(estimate.value - target), estimate.std_error)


def test_compound_poisson_characteristic_function():
    cfg = SimConfig(n_steps=10, horizon=1.0, n_paths=2000, seed=SEED, small_jump_cutoff=0.01)
    paths = simulate_paths(TEMPERED, cfg)
    assert paths.scheme == Scheme.COMPOUND_POISSON_APPROX
    estimate = empirical_cf(paths, 1.0)
    target = cmath.exp(symbol_eval(TEMPERED, 1.0).value)
    assert_within_standard_errors(0.0, abs(estimate.value - target), estimate.std_error)


def test_compound_poisson_parts():
    parts = compound_poisson_parts(TEMPERED, 0.01, True)
    without = compound_poisson_parts(TEMPERED, 0.01, False)
    assert parts.intensity > 0.0
    assert parts.variance_rate > without.variance_rate == 0.0
    brownian = compound_poisson_parts(levy_models.brownian(b=0.3, a=2.0), 0.01, True)
    assert (brownian.drift, brownian.variance_rate, brownian.intensity) == (0.3, 2.0, 0.0)


def test_empirical_cf_at_zero_is_one():
    paths = simulate_paths(STABLE, SimConfig(n_steps=5, n_paths=10, seed=SEED))
    assert empirical_cf(paths, 0.0).value == 1.0


def test_exact_scheme_needs_a_closed_form_family():
    cfg = SimConfig(n_steps=5, n_paths=2, scheme=Scheme.EXACT_INCREMENT)
    with pytest.raises(SimulationError):
        simulate_paths(TEMPERED, cfg)


def test_jump_budget_overflow():
    cfg = SimConfig(
        n_steps=5, n_paths=2, scheme=Scheme.COMPOUND_POISSON_APPROX, small_jump_cutoff=1e-9
    )
    with pytest.raises(SimulationError):
        simulate_paths(STABLE, cfg)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n_steps": 0},
        {"n_paths": 0},
        {"horizon": 0.0},
        {"horizon": float("inf")},
        {"small_jump_cutoff": 0.0},
        {"seed": -1},
        {"workers": 0},
    ],
)
def test_invalid_sim_config(kwargs):
    with pytest.raises(ConfigError):
        SimConfig(**kwargs)


def test_write_paths_csv(tmp_path: Path):
    paths = simulate_paths(STABLE, SimConfig(n_steps=3, n_paths=2, seed=SEED))
    destination = tmp_path / "paths.csv"
    write_paths_csv(paths, destination)
    with open(destination, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["path_id", "t", "x"]
    assert len(rows) == 1 + 2 * 4
    assert float(rows[-1][2]) == paths.states[1, -1]


def test_pure_drift_characteristic_function():
    cfg = SimConfig(n_steps=10, horizon=2.0, n_paths=5, seed=SEED)
    paths = simulate_paths(levy_models.brownian(b=1.0, a=0.0), cfg)
    assert empirical_cf(paths, 0.7).value == pytest.approx(cmath.exp(1.4j))
