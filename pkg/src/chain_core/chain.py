"""
Validated finite-state Markov chain
"""

from collections import Counter
from typing import Any, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator

from src.utils.exceptions import DuplicateLabel, NegativeEntry, NonStochasticRow, NotSquare
from src.utils.logger import get_logger

logger = get_logger(__name__)

Label = Union[int, str]


class MarkovChain(BaseModel):
    """Row-stochastic kernel on a finite labeled state space"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    labels: List[Label]
    P: np.ndarray
    tol: float = 1e-9

    @field_validator("P")
    @classmethod
    def _read_only_square(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 2 or value.shape[0] != value.shape[1] or value.shape[0] < 1:
            raise ValueError("P must be a non-empty square matrix")
        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array

    @field_serializer("P")
    def _serialize_matrix(self, value: np.ndarray) -> List[List[float]]:
        return value.tolist()

    @property
    def n(self) -> int:
        return int(self.P.shape[0])

    def index_of(self, label: Label) -> int:
        """State index of a label"""
        return self.labels.index(label)

    def step(self, vector: np.ndarray) -> np.ndarray:
        """Apply P to a function (column action)"""
        return self.P @ vector

    def push(self, measure: np.ndarray) -> np.ndarray:
        """Apply P to a measure (row action)"""
        return measure @ self.P


def validate_chain(
    raw_matrix: Union[Sequence[Sequence[float]], np.ndarray],
    labels: Optional[Sequence[Label]] = None,
    tol: float = 1e-9,
) -> MarkovChain:
    """
    Validate a raw transition matrix and build a MarkovChain

    Entries within tol of [0, 1] are clamped into the range.

    Args:
        raw_matrix: Square matrix of transition probabilities, row-major
        labels: State identifiers (defaults to 0..n-1)
        tol: Validation tolerance

    Returns:
        Validated MarkovChain

    Raises:
        NotSquare: If the matrix is not square
        DuplicateLabel: If labels repeat or their count differs from n
        NegativeEntry: If an entry is below -tol
        NonStochasticRow: If an entry exceeds 1 + tol or a row sum deviates by more than tol
    """
    matrix = np.asarray(raw_matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
        raise NotSquare(f"Transition matrix must be square, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NonStochasticRow(
            "Transition matrix has non-finite entries",
            row=int(np.argwhere(~np.isfinite(matrix))[0][0]),
        )

    n = matrix.shape[0]
    state_labels: List[Any] = list(range(n)) if labels is None else list(labels)
    if len(state_labels) != n:
        raise DuplicateLabel(f"Expected {n} labels, got {len(state_labels)}")
    if len(set(state_labels)) != n:
        duplicate = next(label for label, count in Counter(state_labels).items() if count > 1)
        raise DuplicateLabel(f"Duplicate state label: {duplicate!r}", label=duplicate)

    negative = np.argwhere(matrix < -tol)
    if negative.size:
        row, col = (int(v) for v in negative[0])
        raise NegativeEntry(
            f"Entry P[{row},{col}] = {matrix[row, col]} is negative", row=row, column=col
        )
    too_large = np.argwhere(matrix > 1.0 + tol)
    if too_large.size:
        row = int(too_large[0][0])
        raise NonStochasticRow(f"Row {row} has an entry above 1", row=row)

    deviations = np.abs(matrix.sum(axis=1) - 1.0)
    bad_rows = np.flatnonzero(deviations > tol)
    if bad_rows.size:
        row = int(bad_rows[0])
        raise NonStochasticRow(
            f"Row {row} sums to {matrix[row].sum()}", row=row, deviation=float(deviations[row])
        )

    clamped = np.clip(matrix, 0.0, 1.0)
    logger.debug("Validated chain", extra={"n_states": n})
    return MarkovChain(labels=state_labels, P=clamped, tol=tol)
