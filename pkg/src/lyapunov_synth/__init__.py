"""
Constructive Lyapunov synthesis from hitting-time functionals
"""

from src.lyapunov_synth.hitting import (
    HittingFunctionals,
    discounted_occupation,
    exponential_moment,
    h2_regular_functional,
    hitting_functionals,
    mean_hitting_time,
    taboo_radius,
)
from src.lyapunov_synth.ladder import (
    LadderRung,
    RegularSetLadder,
    build_ladder,
    kendall_theta,
)
from src.lyapunov_synth.synthesis import (
    CauchySchwarzBound,
    SynthesisResult,
    cauchy_schwarz_bound,
    lyapunov_pipeline,
    synthesize_vh,
)

__all__ = [
    "CauchySchwarzBound",
    "HittingFunctionals",
    "LadderRung",
    "RegularSetLadder",
    "SynthesisResult",
    "build_ladder",
    "cauchy_schwarz_bound",
    "discounted_occupation",
    "exponential_moment",
    "h2_regular_functional",
    "hitting_functionals",
    "kendall_theta",
    "lyapunov_pipeline",
    "mean_hitting_time",
    "synthesize_vh",
    "taboo_radius",
]
