"""Continuous-time simulation of the open ASEP and a Monte Carlo duality test.

The chain jumps from ``eta`` to ``eta'`` at rate ``-L[eta', eta]`` (the
generator is stored with the opposite sign of the probabilistic one).

Random streams: trajectories are grouped into fixed blocks of
``BLOCK_SIZE``; block ``b`` of side ``s`` draws from
``Generator(Philox(SeedSequence(seed, spawn_key=(s, b))))``.  The mapping from
trajectory index to stream is fixed, so results depend only on the seed,
whatever order or worker the blocks run in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .asep import RateParameters, build_generator, config_index
from .symmetry import build_DN

BLOCK_SIZE = 8192
RNG_DESCRIPTION = "numpy Philox4x64 per block of 8192 trajectories; SeedSequence(seed, spawn_key=(side, block))"
LHS_SIDE, RHS_SIDE, AUX_SIDE = 0, 1, 2


@dataclass(frozen=True)
class SimulationConfig:
    L: int
    rates: RateParameters
    N: int = 1
    t_max: float = 0.5
    n_trajectories: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.n_trajectories < 1:
            raise ValueError("need at least one trajectory")
        if self.t_max < 0:
            raise ValueError("time must be nonnegative")
        if self.rates.symbolic:
            raise ValueError("simulation needs numeric rates")


@dataclass(frozen=True)
class DualityEstimate:
    lhs_mean: float
    rhs_mean: float
    gap: float
    combined_stderr: float
    n_trajectories: int

    @property
    def z_score(self) -> float:
        if self.combined_stderr == 0:
            return 0.0 if self.gap == 0 else math.inf
        return self.gap / self.combined_stderr


class JumpTable:
    """Per-state exit rates and cumulative jump distribution for vectorized Gillespie steps."""

    def __init__(self, L: int, rates: RateParameters):
        gen = build_generator(L, rates).to_numpy()
        dim = gen.shape[0]
        R = -gen.T.copy()  # R[eta, eta'] = rate eta -> eta'
        np.fill_diagonal(R, 0.0)
        if (R < 0).any():
            raise ValueError("negative jump rate: generator is not simulable")
        self.L = L
        self.dim = dim
        self.rates = R
        self.exit_rate = R.sum(axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            cum = np.cumsum(R, axis=1) / self.exit_rate[:, None]
        cum[self.exit_rate == 0] = 1.0
        cum[:, -1] = 1.0
        self.cumulative = cum

    def step(self, states: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Next states given uniforms ``u`` in [0, 1)."""
        rows = self.cumulative[states]
        return (u[:, None] >= rows).sum(axis=1)


def simulate_batch(table: JumpTable, states: np.ndarray, t: float, rng: np.random.Generator) -> np.ndarray:
    """Evolve every entry of ``states`` for time ``t``; returns the final states."""
    states = np.array(states, dtype=np.int64, copy=True)
    if t == 0 or states.size == 0:
        return states
    clock = np.zeros(states.shape[0])
    active = np.arange(states.shape[0])
    while active.size:
        lam = table.exit_rate[states[active]]
        alive = lam > 0
        active = active[alive]
        lam = lam[alive]
        if not active.size:
            break
        clock[active] += rng.standard_exponential(active.size) / lam
        jumping = clock[active] <= t
        active = active[jumping]
        if not active.size:
            break
        states[active] = table.step(states[active], rng.random(active.size))
    return states


def block_streams(seed: int, n: int, side: int) -> Iterator[Tuple[slice, np.random.Generator]]:
    for b, start in enumerate(range(0, n, BLOCK_SIZE)):
        ss = np.random.SeedSequence(seed, spawn_key=(side, b))
        yield slice(start, min(start + BLOCK_SIZE, n)), np.random.Generator(np.random.Philox(ss))


def sample_final_states(table: JumpTable, initial: int, t: float, n: int, seed: int,
                        side: int = AUX_SIDE) -> np.ndarray:
    out = np.empty(n, dtype=np.int64)
    for sl, rng in block_streams(seed, n, side):
        out[sl] = simulate_batch(table, np.full(sl.stop - sl.start, initial), t, rng)
    return out


def simulate_trajectory(config: SimulationConfig, initial: Sequence[int] | int, t: float,
                        rng: Optional[np.random.Generator] = None) -> int:
    """One sample of the configuration index at time ``t``."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    idx = initial if isinstance(initial, (int, np.integer)) else config_index(initial)
    rng = rng if rng is not None else np.random.Generator(np.random.Philox(np.random.SeedSequence(config.seed)))
    table = JumpTable(config.L, config.rates)
    return int(simulate_batch(table, np.array([idx]), t, rng)[0])


def holding_times(config: SimulationConfig, initial: int, n: int) -> np.ndarray:
    """``n`` independent first-jump times out of ``initial``."""
    table = JumpTable(config.L, config.rates)
    lam = table.exit_rate[initial]
    if lam == 0:
        return np.full(n, np.inf)
    out = np.empty(n)
    for sl, rng in block_streams(config.seed, n, AUX_SIDE):
        out[sl] = rng.standard_exponential(sl.stop - sl.start) / lam
    return out


def empirical_distribution(config: SimulationConfig, initial: int, t: float) -> np.ndarray:
    table = JumpTable(config.L, config.rates)
    finals = sample_final_states(table, initial, t, config.n_trajectories, config.seed)
    return np.bincount(finals, minlength=table.dim) / config.n_trajectories


def estimate_duality_gap(config: SimulationConfig, eta0: Sequence[int] | int,
                         xi0: Sequence[int] | int) -> DualityEstimate:
    """Compare ``E[D(eta_t, xi0)]`` (start at ``eta0``) with ``E[D(eta0, xi_t)]`` (start at ``xi0``).

    ``D(a, b)`` is the entry of ``D_N`` at row ``a``, column ``b``; the two
    sides use independent streams.
    """
    if not config.rates.in_duality_regime():
        raise ValueError("duality estimate needs beta = delta = 0 and alpha/gamma = p/q")
    eta0 = eta0 if isinstance(eta0, (int, np.integer)) else config_index(eta0)
    xi0 = xi0 if isinstance(xi0, (int, np.integer)) else config_index(xi0)
    D = build_DN(config.L, config.N, config.rates.tau).to_numpy()
    table = JumpTable(config.L, config.rates)
    n = config.n_trajectories
    eta_t = sample_final_states(table, eta0, config.t_max, n, config.seed, LHS_SIDE)
    xi_t = sample_final_states(table, xi0, config.t_max, n, config.seed, RHS_SIDE)
    lhs = D[eta_t, xi0]
    rhs = D[eta0, xi_t]
    lhs_mean, rhs_mean = float(np.mean(lhs)), float(np.mean(rhs))
    if n > 1:
        stderr = math.sqrt(float(np.var(lhs, ddof=1)) / n + float(np.var(rhs, ddof=1)) / n)
    else:
        stderr = 0.0
    return DualityEstimate(lhs_mean, rhs_mean, lhs_mean - rhs_mean, stderr, n)


def exact_duality_expectations(config: SimulationConfig, eta0: int, xi0: int) -> Tuple[float, float]:
    """Both expectations from the transition matrix ``exp(-t L)``."""
    from .expm import expm_taylor

    gen = build_generator(config.L, config.rates).to_numpy()
    P, _ = expm_taylor(-config.t_max * gen)  # P[eta', eta] = Prob(eta -> eta')
    D = build_DN(config.L, config.N, config.rates.tau).to_numpy()
    return float(P[:, eta0] @ D[:, xi0]), float(D[eta0, :] @ P[:, xi0])
