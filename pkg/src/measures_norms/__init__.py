"""
Functions, signed measures, their norms, and kernel algebra
"""

from src.measures_norms.functions import (
    Distribution,
    FunctionRole,
    SignedMeasure,
    WeightedFunction,
    as_vector,
    as_weight,
)
from src.measures_norms.kernels import (
    Kernel,
    deviation_kernel,
    op_norm_l2,
    op_norm_v,
    outer_one_pi,
)
from src.measures_norms.norms import (
    INFINITE_NORM,
    l2_norm_function,
    l2_norm_measure,
    tv_norm,
    v_norm_function,
    v_norm_measure,
)
from src.measures_norms.rules import named_observable, named_weight

__all__ = [
    "Distribution",
    "FunctionRole",
    "INFINITE_NORM",
    "Kernel",
    "SignedMeasure",
    "WeightedFunction",
    "as_vector",
    "as_weight",
    "deviation_kernel",
    "l2_norm_function",
    "l2_norm_measure",
    "named_observable",
    "named_weight",
    "op_norm_l2",
    "op_norm_v",
    "outer_one_pi",
    "tv_norm",
    "v_norm_function",
    "v_norm_measure",
]
