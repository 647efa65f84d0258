"""
Monte Carlo estimates of the synthesized hitting functionals
"""

import math
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel

from src.chain_core.chain import MarkovChain
from src.config.settings import get_settings
from src.ergodicity.drift import state_set
from src.measures_norms.functions import VectorLike, as_vector, check_dimensions
from src.mc_lab.sampling import first_passage
from src.utils.exceptions import HorizonExceeded, InputError


class MonteCarloEstimate(BaseModel):
    state: int
    mean: float
    standard_error: float
    samples: int
    censored: int = 0

    def within(self, value: float, k: float = 3.0) -> bool:
        """|mean - value| <= k standard errors (exact agreement when se is 0)"""
        return abs(self.mean - value) <= k * self.standard_error + 1e-12 * max(1.0, abs(value))


def _estimate(totals: np.ndarray, censored: np.ndarray, state: int) -> MonteCarloEstimate:
    kept = totals[~censored]
    if kept.size == 0:
        raise HorizonExceeded("Every sample was censored", state=state)
    se = float(kept.std(ddof=1) / math.sqrt(kept.size)) if kept.size > 1 else 0.0
    return MonteCarloEstimate(
        state=state,
        mean=float(kept.mean()),
        standard_error=se,
        samples=int(kept.size),
        censored=int(censored.sum()),
    )


def _check_state(chain: MarkovChain, x: int) -> None:
    if not 0 <= x < chain.n:
        raise InputError(f"State {x} out of range", n=chain.n)


def estimate_vh(
    chain: MarkovChain,
    h: VectorLike,
    C: Sequence[int],
    theta: float,
    x: int,
    samples: int,
    seed: int,
    horizon: Optional[int] = None,
) -> MonteCarloEstimate:
    """Sample sum_{n=0}^{sigma_C} (1 + |h(X(n))|) e^{theta n / 2} from X(0) = x"""
    horizon = get_settings().hitting_horizon if horizon is None else horizon
    values = np.abs(np.asarray(as_vector(h), dtype=float))
    check_dimensions(chain.P, values)
    _check_state(chain, x)
    g = 1.0 + values
    growth = math.exp(theta / 2.0)

    _, censored, totals = first_passage(
        chain,
        state_set(C, chain.n),
        np.full(samples, x),
        seed,
        horizon,
        include_start=True,
        accumulate=lambda states, n: g[states] * growth**n,
    )
    return _estimate(totals, censored, x)


def estimate_exponential_moment(
    chain: MarkovChain,
    C: Sequence[int],
    theta: float,
    x: int,
    samples: int,
    seed: int,
    horizon: Optional[int] = None,
) -> MonteCarloEstimate:
    """Sample exp(theta tau_C) from X(0) = x"""
    horizon = get_settings().hitting_horizon if horizon is None else horizon
    _check_state(chain, x)
    tau, censored, _ = first_passage(
        chain, state_set(C, chain.n), np.full(samples, x), seed, horizon, include_start=False
    )
    return _estimate(np.exp(theta * tau.astype(float)), censored, x)
