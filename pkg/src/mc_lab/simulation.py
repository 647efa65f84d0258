"""
Trajectories and hitting-time samples
"""

import bisect
import math
from typing import List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel

from src.chain_core.chain import MarkovChain
from src.config.settings import get_settings
from src.ergodicity.drift import state_set
from src.measures_norms.functions import Distribution
from src.mc_lab.sampling import (
    PATH_STREAM,
    START_STREAM,
    TransitionSampler,
    first_passage,
    stream,
)
from src.utils.exceptions import HorizonExceeded, InputError
from src.utils.logger import get_logger

logger = get_logger(__name__)

Start = Union[int, Distribution]


class TrajectorySample(BaseModel):
    """One path of the chain; path holds length + 1 states when stored"""

    seed: int
    start: int
    length: int
    final_state: int
    occupation: List[int]
    path: Optional[List[int]] = None

    def frequency(self, state: int) -> float:
        return self.occupation[state] / (self.length + 1)


def resolve_start(chain: MarkovChain, start: Start, seed: int) -> int:
    """A fixed start state, or one drawn from a distribution on its own stream"""
    if isinstance(start, Distribution):
        if start.n != chain.n:
            raise InputError("Start distribution has the wrong size", size=start.n, n=chain.n)
        u = stream(seed, START_STREAM).random(1)
        return int(TransitionSampler(chain).draw(start.weights, u)[0])
    if not 0 <= int(start) < chain.n:
        raise InputError(f"Start state {start} out of range", n=chain.n)
    return int(start)


def simulate(
    chain: MarkovChain,
    start: Start,
    length: int,
    seed: int,
    store_path: bool = True,
) -> TrajectorySample:
    """
    Simulate length steps from start; identical inputs give an identical path

    Occupation counts include the initial state.
    """
    if length < 0:
        raise InputError("Trajectory length must be nonnegative", length=length)
    initial = resolve_start(chain, start, seed)
    state = initial
    cumulative = [row.tolist() for row in TransitionSampler(chain).cumulative]
    draws = stream(seed, PATH_STREAM).random(length)

    occupation = [0] * chain.n
    occupation[state] += 1
    path = [state] if store_path else None
    for u in draws:
        state = bisect.bisect_right(cumulative[state], u)
        occupation[state] += 1
        if path is not None:
            path.append(state)

    return TrajectorySample(
        seed=seed,
        start=initial,
        length=length,
        final_state=state,
        occupation=occupation,
        path=path,
    )


class HittingSamples(BaseModel):
    """sigma_C samples (and tau_C when the start is in C) with summaries"""

    C: List[int]
    start: int
    count: int
    censored: int
    sigma: List[int]
    tau: Optional[List[int]] = None
    mean: float
    standard_error: float
    theta: Optional[float] = None
    exp_mean: Optional[float] = None
    exp_standard_error: Optional[float] = None


def _mean_and_se(values: np.ndarray) -> tuple[float, float]:
    if values.size == 0:
        return math.nan, math.nan
    se = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return float(values.mean()), se


def hitting_time_samples(
    chain: MarkovChain,
    C: Sequence[int],
    start: int,
    count: int,
    seed: int,
    theta: Optional[float] = None,
    horizon: Optional[int] = None,
) -> HittingSamples:
    """
    Independent first-passage samples into C from a fixed start

    When the start is in C every sigma is 0 and the return times tau are sampled;
    otherwise sigma = tau. With theta, the mean of exp(theta tau) is reported for
    comparison with the exact exponential moment.

    Raises:
        HorizonExceeded: If every sample hits the horizon
    """
    horizon = get_settings().hitting_horizon if horizon is None else horizon
    members = state_set(C, chain.n)
    if not members:
        raise InputError("Target set C must be nonempty")
    start = resolve_start(chain, start, seed)
    if count < 1:
        raise InputError("count must be positive", count=count)

    starts = np.full(count, start)
    tau, censored, _ = first_passage(chain, members, starts, seed, horizon, include_start=False)
    n_censored = int(censored.sum())
    if n_censored == count:
        raise HorizonExceeded(
            f"No sample reached C within {horizon} steps", horizon=horizon, count=count
        )
    if n_censored:
        logger.warning(
            "Some hitting times were censored at the horizon",
            extra={"censored": n_censored, "horizon": horizon},
        )

    observed = tau[~censored]
    start_in_c = start in members
    sigma = np.zeros(count, dtype=np.int64) if start_in_c else tau
    if start_in_c:
        mean, se = 0.0, 0.0
    else:
        mean, se = _mean_and_se(observed.astype(float))

    exp_mean = exp_se = None
    if theta is not None:
        exp_mean, exp_se = _mean_and_se(np.exp(theta * observed.astype(float)))

    return HittingSamples(
        C=members,
        start=start,
        count=count,
        censored=n_censored,
        sigma=sigma.tolist(),
        tau=tau.tolist() if start_in_c else None,
        mean=mean,
        standard_error=se,
        theta=theta,
        exp_mean=exp_mean,
        exp_standard_error=exp_se,
    )
