"""
Norms of functions and signed measures: V-norm, total variation, L2(pi)
"""

import math

import numpy as np

from src.measures_norms.functions import VectorLike, as_vector, as_weight, check_dimensions

# Explicit infinity flag: the L2 norm of a measure without a density w.r.t. pi.
INFINITE_NORM = math.inf


def v_norm_function(F: VectorLike, V: VectorLike) -> float:
    """
    Weighted sup-norm max_x |F(x)| / V(x)

    Raises:
        DimensionMismatch: If F and V differ in length
        BadWeight: If V is not a valid weight
    """
    values = as_vector(F)
    weight = as_weight(V)
    check_dimensions(values, weight)
    return float(np.max(np.abs(values) / weight))


def v_norm_measure(nu: VectorLike, V: VectorLike) -> float:
    """
    V-norm of a signed measure, sum_x |nu(x)| V(x)

    This is the supremum of |nu(F)| over ||F||_V <= 1, attained at
    F = V * sign(nu).
    """
    weights = np.asarray(as_vector(nu), dtype=float)
    weight = as_weight(V)
    check_dimensions(weights, weight)
    return float(np.sum(np.abs(weights) * weight))


def tv_norm(nu: VectorLike) -> float:
    """
    Total variation sup_A |nu(A)| = max(nu+(X), nu-(X))

    For a measure with nu(X) = 0 this is half the L1 norm.
    """
    weights = np.asarray(as_vector(nu), dtype=float)
    positive = float(weights[weights > 0].sum())
    negative = float(-weights[weights < 0].sum())
    return max(positive, negative)


def l2_norm_measure(nu: VectorLike, pi: VectorLike) -> float:
    """
    L2(pi) norm of the density d(nu)/d(pi)

    Returns INFINITE_NORM when nu charges a pi-null state.
    """
    weights = np.asarray(as_vector(nu), dtype=float)
    stationary = np.asarray(as_vector(pi), dtype=float)
    check_dimensions(weights, stationary)
    charged = stationary > 0.0
    if np.any(weights[~charged] != 0.0):
        return INFINITE_NORM
    return float(np.sqrt(np.sum(weights[charged] ** 2 / stationary[charged])))


def l2_norm_function(F: VectorLike, pi: VectorLike) -> float:
    """L2(pi) norm of a function"""
    values = as_vector(F)
    stationary = np.asarray(as_vector(pi), dtype=float)
    check_dimensions(values, stationary)
    return float(np.sqrt(np.sum(stationary * np.abs(values) ** 2)))
