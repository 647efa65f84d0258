"""
Simulation, autocorrelations and partial-sum diagnostics
"""

from src.mc_lab.autocorrelation import AutocorrelationSeries, autocorrelation_exact, center
from src.mc_lab.estimators import (
    MonteCarloEstimate,
    estimate_exponential_moment,
    estimate_vh,
)
from src.mc_lab.partial_sums import (
    PartialSumDiagnostics,
    VarianceTrend,
    classify_trend,
    exact_second_moment,
    partial_sum_diagnostics,
)
from src.mc_lab.sampling import TransitionSampler, first_passage, stream
from src.mc_lab.simulation import (
    HittingSamples,
    TrajectorySample,
    hitting_time_samples,
    simulate,
)
from src.mc_lab.truncation_study import (
    SeriesTrend,
    StudyRow,
    TruncationStudy,
    classify_series,
    truncation_study,
)

__all__ = [
    "AutocorrelationSeries",
    "HittingSamples",
    "MonteCarloEstimate",
    "PartialSumDiagnostics",
    "SeriesTrend",
    "StudyRow",
    "TrajectorySample",
    "TransitionSampler",
    "TruncationStudy",
    "VarianceTrend",
    "autocorrelation_exact",
    "center",
    "classify_series",
    "classify_trend",
    "estimate_exponential_moment",
    "estimate_vh",
    "exact_second_moment",
    "first_passage",
    "hitting_time_samples",
    "partial_sum_diagnostics",
    "simulate",
    "stream",
    "truncation_study",
]
