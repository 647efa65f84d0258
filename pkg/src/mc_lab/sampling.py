"""
Inverse-CDF transition sampling on counter-based random streams
"""

from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from src.chain_core.chain import MarkovChain
from src.utils.exceptions import InputError

# Stream purposes under one master seed.
START_STREAM = 0
STEP_STREAM = 1
PATH_STREAM = 2


def stream(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for (seed, key); distinct keys give independent streams"""
    if seed < 0:
        raise InputError("Seed must be a nonnegative integer", seed=seed)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def step_uniforms(seed: int, step: int, size: int) -> np.ndarray:
    """
    Uniforms for one time step of a batch of replicates

    Replicate i always receives element i, so its path depends only on
    (seed, i) and not on the batch size or on which replicates are still running.
    """
    return stream(seed, STEP_STREAM, step).random(size)


class TransitionSampler:
    """Row-wise inverse CDF; states with zero probability are never drawn"""

    def __init__(self, chain: MarkovChain) -> None:
        self.n = chain.n
        cumulative = np.cumsum(chain.P, axis=1)
        for row in range(chain.n):
            last = int(np.flatnonzero(chain.P[row] > 0.0)[-1])
            cumulative[row, last:] = 1.0
        self.cumulative = cumulative

    def step(self, state: int, u: float) -> int:
        return int(np.searchsorted(self.cumulative[state], u, side="right"))

    def step_many(self, states: np.ndarray, u: np.ndarray) -> np.ndarray:
        return np.sum(self.cumulative[states] <= u[:, np.newaxis], axis=1)

    def draw(self, weights: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Sample states from a distribution"""
        cumulative = np.cumsum(weights)
        cumulative[int(np.flatnonzero(weights > 0.0)[-1]):] = 1.0
        return np.searchsorted(cumulative, u, side="right")


Accumulator = Callable[[np.ndarray, int], np.ndarray]


def first_passage(
    chain: MarkovChain,
    C: Sequence[int],
    starts: np.ndarray,
    seed: int,
    horizon: int,
    include_start: bool = True,
    accumulate: Optional[Accumulator] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Run replicates until they enter C

    Args:
        chain: Transition matrix
        C: Target set
        starts: Initial state per replicate
        seed: Master seed
        horizon: Step cap; replicates still running are censored
        include_start: Count time 0 (sigma_C) instead of starting at 1 (tau_C)
        accumulate: f(states, n) added to each running replicate's total at every
            counted time up to and including the passage time

    Returns:
        (passage times, censored mask, accumulated totals)
    """
    sampler = TransitionSampler(chain)
    in_target = np.zeros(chain.n, dtype=bool)
    in_target[list(C)] = True

    states = np.array(starts, dtype=int)
    size = states.size
    times = np.zeros(size, dtype=np.int64)
    totals = np.zeros(size)
    active = np.ones(size, dtype=bool)

    if include_start:
        if accumulate is not None:
            totals += accumulate(states, 0)
        active &= ~in_target[states]

    n = 0
    while active.any() and n < horizon:
        n += 1
        running = np.flatnonzero(active)
        u = step_uniforms(seed, n, int(running[-1]) + 1)[running]
        states[running] = sampler.step_many(states[running], u)
        if accumulate is not None:
            totals[running] += accumulate(states[running], n)
        hit = in_target[states[running]]
        times[running[hit]] = n
        active[running[hit]] = False

    times[active] = horizon
    return times, active, totals
