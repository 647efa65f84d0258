"""
Functions and signed measures on a finite state space
"""

from enum import Enum
from typing import List, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator

from src.utils.exceptions import BadWeight, DimensionMismatch, InputError


class FunctionRole(str, Enum):
    OBSERVABLE = "observable"
    WEIGHT = "weight"
    TEST = "test"


class WeightedFunction(BaseModel):
    """A function on the states: observable h, weight V, or test function F"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    role: FunctionRole = FunctionRole.OBSERVABLE

    @field_validator("values")
    @classmethod
    def _read_only_vector(cls, value: np.ndarray) -> np.ndarray:
        dtype = complex if np.iscomplexobj(value) else float
        array = np.array(value, dtype=dtype).reshape(-1)
        array.setflags(write=False)
        return array

    @field_serializer("values")
    def _serialize_values(self, value: np.ndarray) -> List[float]:
        return np.real_if_close(value).tolist()

    @classmethod
    def weight(cls, values: "VectorLike") -> "WeightedFunction":
        """
        A Lyapunov weight: finite and at least 1 everywhere

        Raises:
            BadWeight: If some entry is below 1 or not finite
        """
        array = np.asarray(as_vector(values), dtype=float)
        if array.size == 0:
            raise BadWeight("Weight must have at least one entry")
        if not np.all(np.isfinite(array)):
            bad = int(np.argmax(~np.isfinite(array)))
            raise BadWeight("Weight must be finite everywhere", state=bad)
        low = np.flatnonzero(array < 1.0)
        if low.size:
            raise BadWeight(
                f"Weight is below 1 at state {int(low[0])}",
                state=int(low[0]),
                value=float(array[low[0]]),
            )
        return cls(values=array, role=FunctionRole.WEIGHT)

    @classmethod
    def observable(cls, values: "VectorLike") -> "WeightedFunction":
        return cls(values=np.asarray(as_vector(values)), role=FunctionRole.OBSERVABLE)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])


class SignedMeasure(BaseModel):
    """Mass per state"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weights: np.ndarray

    @field_validator("weights")
    @classmethod
    def _read_only_vector(cls, value: np.ndarray) -> np.ndarray:
        array = np.array(value, dtype=float).reshape(-1)
        if not np.all(np.isfinite(array)):
            raise ValueError("measure weights must be finite")
        array.setflags(write=False)
        return array

    @field_serializer("weights")
    def _serialize_weights(self, value: np.ndarray) -> List[float]:
        return value.tolist()

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def n(self) -> int:
        return int(self.weights.shape[0])


class Distribution(SignedMeasure):
    """A probability vector"""

    @classmethod
    def of(cls, weights: "VectorLike", tol: float = 1e-9) -> "Distribution":
        array = np.asarray(as_vector(weights), dtype=float)
        if np.any(array < -tol) or abs(array.sum() - 1.0) > tol:
            raise InputError(
                "Distribution must be nonnegative and sum to 1", total=float(array.sum())
            )
        return cls(weights=np.clip(array, 0.0, None))

    @classmethod
    def point_mass(cls, n: int, state: int) -> "Distribution":
        weights = np.zeros(n)
        weights[state] = 1.0
        return cls(weights=weights)


VectorLike = Union[
    WeightedFunction, SignedMeasure, np.ndarray, Sequence[float], Sequence[complex]
]


def as_vector(value: VectorLike) -> np.ndarray:
    """Underlying numpy vector of a function, measure or array-like"""
    if isinstance(value, WeightedFunction):
        return value.values
    if isinstance(value, SignedMeasure):
        return value.weights
    return np.asarray(value)


def as_weight(value: VectorLike) -> np.ndarray:
    """Validated weight vector"""
    if isinstance(value, WeightedFunction) and value.role is FunctionRole.WEIGHT:
        return value.values
    return WeightedFunction.weight(value).values


def check_dimensions(*vectors: np.ndarray) -> int:
    """Common length of vectors (and leading dimension of matrices)"""
    sizes = {int(v.shape[0]) for v in vectors}
    if len(sizes) != 1:
        raise DimensionMismatch(f"Dimension mismatch: {sorted(sizes)}", sizes=sorted(sizes))
    return sizes.pop()
