import numpy as np
import pytest
from scipy import stats

from asepdual.asep import RateParameters, build_generator, config_index, reversible_weights
from asepdual.expm import expm_taylor
from asepdual.montecarlo import (
    BLOCK_SIZE,
    JumpTable,
    SimulationConfig,
    empirical_distribution,
    estimate_duality_gap,
    exact_duality_expectations,
    holding_times,
    sample_final_states,
    simulate_trajectory,
)

REF = RateParameters.from_rates(2.0, 0.5, 4.0, 1.0)


def test_zero_time_is_identity():
    cfg = SimulationConfig(3, REF, t_max=0.0, n_trajectories=1000)
    assert simulate_trajectory(cfg, [1, 0, 1], 0.0) == config_index([1, 0, 1])
    d = empirical_distribution(cfg, 5, 0.0)
    assert d[5] == 1.0


def test_single_site_fills_without_exit():
    rates = RateParameters.from_rates(1.0, 1.0, 3.0, 0.0)
    cfg = SimulationConfig(1, rates, n_trajectories=20000, seed=7)
    d = empirical_distribution(cfg, 0, 20 / 3.0)
    assert d[1] == 1.0  # miss probability exp(-20) per trajectory


def test_absorbing_state_stays():
    rates = RateParameters.from_rates(1.0, 1.0, 3.0, 0.0)
    table = JumpTable(1, rates)
    assert table.exit_rate[1] == 0
    assert (sample_final_states(table, 1, 5.0, 100, seed=1) == 1).all()


def test_occupancy_matches_transition_kernel():
    rates = RateParameters.from_rates(1.5, 0.5, 3.0, 1.0, 0.5, 0.25)
    L, t, n = 3, 2.0, 100_000
    cfg = SimulationConfig(L, rates, n_trajectories=n, seed=11)
    start = config_index([1, 0, 1])
    d = empirical_distribution(cfg, start, t)
    P, _ = expm_taylor(-t * build_generator(L, rates).to_numpy())
    exact = P[:, start]
    sigma = np.sqrt(exact * (1 - exact) / n)
    assert (np.abs(d - exact) <= 4 * sigma + 1e-12).all()


def test_holding_times_exponential():
    rates = RateParameters.from_rates(1.0, 1.0, 2.5, 0.7)
    cfg = SimulationConfig(1, rates, seed=5)
    empty = holding_times(cfg, 0, 20_000)
    full = holding_times(cfg, 1, 20_000)
    assert stats.kstest(empty, stats.expon(scale=1 / 2.5).cdf).pvalue > 1e-3
    assert stats.kstest(full, stats.expon(scale=1 / 0.7).cdf).pvalue > 1e-3


def test_relaxes_to_reversible_measure():
    rates = RateParameters.from_tau(1.2, gamma=1.0)
    cfg = SimulationConfig(3, rates, n_trajectories=100_000, seed=3)
    d = empirical_distribution(cfg, 0, 50.0)
    w = np.array(reversible_weights(3, rates), dtype=float)
    assert 0.5 * np.abs(d - w / w.sum()).sum() <= 0.01


def test_reproducible_and_seed_sensitive():
    table = JumpTable(3, REF)
    n = BLOCK_SIZE + 100  # spans two blocks
    a = sample_final_states(table, 0, 1.0, n, seed=42)
    b = sample_final_states(table, 0, 1.0, n, seed=42)
    c = sample_final_states(table, 0, 1.0, n, seed=43)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_prefix_stability_across_sizes():
    # a trajectory's stream depends only on its block, not on the total count
    table = JumpTable(2, REF)
    small = sample_final_states(table, 0, 1.0, BLOCK_SIZE, seed=9)
    big = sample_final_states(table, 0, 1.0, 2 * BLOCK_SIZE, seed=9)
    assert np.array_equal(small, big[:BLOCK_SIZE])


def test_duality_gap_small_run():
    cfg = SimulationConfig(3, REF, t_max=0.5, n_trajectories=20_000, seed=1)
    est = estimate_duality_gap(cfg, [1, 1, 0], [1, 0, 0])
    lhs, rhs = exact_duality_expectations(cfg, config_index([1, 1, 0]), config_index([1, 0, 0]))
    assert lhs == pytest.approx(rhs, rel=1e-10)
    assert abs(est.gap) <= 4 * est.combined_stderr


def test_duality_gap_requires_regime():
    cfg = SimulationConfig(3, REF.replace(alpha=1.0), n_trajectories=10)
    with pytest.raises(ValueError):
        estimate_duality_gap(cfg, 0, 1)


def test_config_validation():
    with pytest.raises(ValueError):
        SimulationConfig(2, REF, n_trajectories=0)
    with pytest.raises(ValueError):
        SimulationConfig(2, REF, t_max=-1.0)
    with pytest.raises(ValueError):
        SimulationConfig(2, RateParameters.symbolic_rates())
