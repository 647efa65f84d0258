"""
Spectral radius of a kernel from norms of its powers on a doubling schedule
"""

import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from src.config.settings import get_settings
from src.utils.exceptions import GelfandNotConverged
from src.utils.linalg import ScaledPower, doubling_schedule, scaled_power
from src.utils.logger import get_logger

logger = get_logger(__name__)

MatrixNorm = Callable[[np.ndarray], float]


class GelfandEstimate(BaseModel):
    """Extrapolated lim ||Q^n||^(1/n) together with the evidence behind it"""

    limit: float
    trace: List[Tuple[int, float]]
    estimates: List[float]
    converged: bool
    exact_zero: bool = False

    @property
    def gap(self) -> float:
        return min(max(1.0 - self.limit, 0.0), 1.0)


def gelfand_limit(
    Q: np.ndarray,
    norm: MatrixNorm,
    n_max: Optional[int] = None,
    tol: Optional[float] = None,
    strict: bool = True,
) -> GelfandEstimate:
    """
    Estimate the spectral radius of Q as lim ||Q^n||^(1/n)

    Powers are formed by repeated squaring in scaled form. Each doubling yields a
    rate estimate from the slope of log ||Q^n|| against the previous point; the
    trace keeps the plain n-th roots.

    Args:
        Q: Square kernel
        norm: Positively homogeneous matrix norm
        n_max: Last power evaluated
        tol: Required agreement of the last two rate estimates
        strict: Raise when the estimates have not settled

    Returns:
        GelfandEstimate

    Raises:
        GelfandNotConverged: If strict and the last two estimates differ by tol or more
    """
    settings = get_settings()
    n_max = settings.gelfand_n_max if n_max is None else n_max
    tol = settings.gelfand_tol if tol is None else tol

    trace: List[Tuple[int, float]] = []
    estimates: List[float] = []
    power = ScaledPower.of(Q)
    previous: Optional[Tuple[int, float]] = None
    n_done = 1

    for n in doubling_schedule(n_max):
        if n != n_done:
            power = power.squared() if n == 2 * n_done else scaled_power(Q, n)
            n_done = n
        log_g = power.log_norm(norm)
        if log_g == -math.inf:
            trace.append((n, 0.0))
            logger.debug(f"Kernel power vanishes exactly at n={n}")
            return GelfandEstimate(
                limit=0.0, trace=trace, estimates=estimates + [0.0], converged=True, exact_zero=True
            )
        trace.append((n, math.exp(log_g / n)))
        if previous is not None:
            n_prev, log_prev = previous
            estimates.append(math.exp((log_g - log_prev) / (n - n_prev)))
        previous = (n, log_g)

    if estimates:
        limit = estimates[-1]
    else:
        limit = trace[-1][1]
    converged = len(estimates) >= 2 and abs(estimates[-1] - estimates[-2]) < tol

    if not converged:
        spread = abs(estimates[-1] - estimates[-2]) if len(estimates) >= 2 else math.inf
        logger.warning(
            "Gelfand estimates did not settle",
            extra={"n_max": n_max, "spread": spread, "tol": tol},
        )
        if strict:
            raise GelfandNotConverged(
                "Spectral radius estimates did not settle", n_max=n_max, spread=spread, tol=tol
            )
    return GelfandEstimate(limit=limit, trace=trace, estimates=estimates, converged=converged)
