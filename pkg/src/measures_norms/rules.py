"""
Named weights and observables, resolved for a given number of states
"""

from typing import Callable, Dict

import numpy as np

from src.utils.exceptions import BadWeight, InputError

VectorRule = Callable[[int], np.ndarray]


def geometric_weight(base: float, n: int) -> np.ndarray:
    """
    V(x) = base^x for x = 0..n-1

    Raises:
        BadWeight: If the base is below 1 or base^(n-1) overflows a float
    """
    if not base >= 1.0:
        raise BadWeight("Geometric weight needs base >= 1", base=base)
    with np.errstate(over="ignore"):
        values = base ** np.arange(n, dtype=float)
    finite = np.isfinite(values)
    if not finite.all():
        limit = int(finite.sum())
        raise BadWeight(
            f"Weight {base:g}^x overflows beyond {limit} states; "
            "use geometric:<base> with a smaller base",
            base=base,
            n=n,
            max_states=limit,
        )
    return values


WEIGHT_RULES: Dict[str, VectorRule] = {
    "one": lambda n: np.ones(n),
    "pow2": lambda n: geometric_weight(2.0, n),
}

OBSERVABLE_RULES: Dict[str, VectorRule] = {
    "zero": lambda n: np.zeros(n),
    "identity": lambda n: np.arange(n, dtype=float),
    "indicator_last": lambda n: np.eye(n)[n - 1],
}


def named_weight(name: str, n: int) -> np.ndarray:
    """
    Weight vector for a rule name: one, pow2 or geometric:<base> (V(x) = base^x)

    Raises:
        BadWeight: If the base is below 1, the weights overflow or the name is unknown
    """
    if name.startswith("geometric:"):
        try:
            base = float(name.split(":", 1)[1])
        except ValueError as e:
            raise BadWeight(f"Unreadable geometric base in {name!r}") from e
        return geometric_weight(base, n)
    if name not in WEIGHT_RULES:
        raise BadWeight(f"Unknown weight rule {name!r}", known=sorted(WEIGHT_RULES))
    return WEIGHT_RULES[name](n)


def named_observable(name: str, n: int) -> np.ndarray:
    if name not in OBSERVABLE_RULES:
        raise InputError(f"Unknown observable rule {name!r}", known=sorted(OBSERVABLE_RULES))
    return OBSERVABLE_RULES[name](n)


def is_weight_rule(name: str) -> bool:
    return name in WEIGHT_RULES or name.startswith("geometric:")


def is_observable_rule(name: str) -> bool:
    return name in OBSERVABLE_RULES
