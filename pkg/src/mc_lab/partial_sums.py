"""
Normalized partial sums S_n = n^{-1/2} sum_{i<n} h(X(i)): exact second moments,
Monte Carlo replicates and a normality diagnostic
"""

import math
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel
from scipy import stats

from src.chain_core.chain import MarkovChain
from src.chain_core.structure import ChainStructure
from src.config.settings import get_settings
from src.measures_norms.functions import Distribution, VectorLike
from src.mc_lab.autocorrelation import autocorrelation_exact, center
from src.mc_lab.sampling import START_STREAM, TransitionSampler, step_uniforms, stream
from src.spectral.gaps import require_ergodic
from src.utils.exceptions import InputError
from src.utils.logger import get_logger

logger = get_logger(__name__)

# Two-sided 5% critical value of the Kolmogorov-Smirnov distance, times sqrt(samples).
KS_CRITICAL = 1.36


class VarianceTrend(str, Enum):
    BOUNDED = "bounded"
    GROWING = "growing"
    INCONCLUSIVE = "inconclusive"


class PartialSumDiagnostics(BaseModel):
    n_grid: List[int]
    exact_second_moment: List[float]
    mc_mean_square: List[float]
    mc_standard_error: List[float]
    ks_vs_normal: List[float]
    ks_threshold: float
    variance_trend: VarianceTrend
    sum_abs_R: float
    replicates: int
    stationary_start: bool = True
    mc_samples: Optional[List[List[float]]] = None


def exact_second_moment(R: Sequence[float], n: int) -> float:
    """E_pi[S_n^2] = R(0) + 2 sum_{k=1}^{n-1} (1 - k/n) R(k)"""
    if n < 1:
        raise InputError("Partial sums need n >= 1", n=n)
    lags = np.arange(1, n)
    values = np.asarray(R[:n], dtype=float)
    return float(values[0] + 2.0 * np.sum((1.0 - lags / n) * values[1:n]))


def classify_trend(
    n_grid: Sequence[int],
    values: Sequence[float],
    spread: Optional[float] = None,
    ratio: Optional[float] = None,
) -> VarianceTrend:
    """
    Bounded when the values over the top octave of n_grid stay within a relative
    spread, growing when they rise by the growth ratio, else inconclusive
    """
    settings = get_settings()
    spread = settings.bounded_spread if spread is None else spread
    ratio = settings.growing_ratio if ratio is None else ratio

    grid = np.asarray(n_grid, dtype=float)
    data = np.asarray(values, dtype=float)
    top = np.flatnonzero(grid >= grid.max() / 2.0)
    if top.size < 2:
        top = np.arange(max(data.size - 2, 0), data.size)
    window = data[top]
    peak = float(np.max(np.abs(window))) if window.size else 0.0
    if peak == 0.0:
        return VarianceTrend.BOUNDED
    if (float(window.max()) - float(window.min())) / peak <= spread:
        return VarianceTrend.BOUNDED
    if window[0] > 0.0 and window[-1] / window[0] >= ratio:
        return VarianceTrend.GROWING
    return VarianceTrend.INCONCLUSIVE


def ks_distance(samples: np.ndarray) -> float:
    """KS distance of standardized samples from N(0, 1); 0 for degenerate samples"""
    scale = float(samples.std(ddof=1)) if samples.size > 1 else 0.0
    if scale == 0.0:
        return 0.0
    z = (samples - samples.mean()) / scale
    return float(stats.kstest(z, "norm").statistic)


def partial_sum_diagnostics(
    chain: MarkovChain,
    h: VectorLike,
    n_grid: Sequence[int],
    replicates: Optional[int] = None,
    seed: Optional[int] = None,
    start: Optional[Distribution] = None,
    store_samples: bool = False,
    structure: Optional[ChainStructure] = None,
) -> PartialSumDiagnostics:
    """
    Exact and simulated second moments of S_n over n_grid

    Replicates start from pi unless another start distribution is given; the
    exact moments always refer to the stationary start.

    Args:
        chain: Irreducible aperiodic chain
        h: Observable, centered under pi before use
        n_grid: Increasing positive n values
        replicates: Monte Carlo replicates per grid point
        seed: Master seed
        start: Optional non-stationary start distribution
        store_samples: Keep the per-n samples in the result
        structure: Precomputed structure

    Returns:
        PartialSumDiagnostics
    """
    settings = get_settings()
    replicates = settings.replicates if replicates is None else replicates
    seed = settings.default_seed if seed is None else seed
    grid = sorted({int(n) for n in n_grid})
    if not grid or grid[0] < 1:
        raise InputError("n_grid must contain positive integers", n_grid=list(n_grid))

    structure = require_ergodic(chain, structure)
    pi = structure.require_stationary()
    values = center(h, pi)
    series = autocorrelation_exact(chain, values, n_max=grid[-1], structure=structure)
    exact = [exact_second_moment(series.R, n) for n in grid]

    initial = pi if start is None else start.weights
    sampler = TransitionSampler(chain)
    states = sampler.draw(initial, stream(seed, START_STREAM).random(replicates))
    totals = np.zeros(replicates)
    samples: List[np.ndarray] = []
    checkpoints = set(grid)
    for n in range(1, grid[-1] + 1):
        totals += values[states]
        if n in checkpoints:
            samples.append(totals / math.sqrt(n))
        if n < grid[-1]:
            states = sampler.step_many(states, step_uniforms(seed, n, replicates))

    squares = [s**2 for s in samples]
    mean_square = [float(sq.mean()) for sq in squares]
    se = [
        float(sq.std(ddof=1) / math.sqrt(replicates)) if replicates > 1 else 0.0 for sq in squares
    ]
    ks = [ks_distance(s) for s in samples]
    trend = classify_trend(grid, exact)

    logger.info(
        "Partial-sum diagnostics complete",
        extra={"trend": trend.value, "replicates": replicates, "n_max": grid[-1]},
    )
    return PartialSumDiagnostics(
        n_grid=grid,
        exact_second_moment=exact,
        mc_mean_square=mean_square,
        mc_standard_error=se,
        ks_vs_normal=ks,
        ks_threshold=KS_CRITICAL / math.sqrt(replicates),
        variance_trend=trend,
        sum_abs_R=series.sum_abs_R,
        replicates=replicates,
        stationary_start=start is None,
        mc_samples=[s.tolist() for s in samples] if store_samples else None,
    )
