"""
Countable chain families: named row builders used by truncation studies
"""

from typing import Callable, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.utils.exceptions import NonStochasticRow, UnknownFamily

# A row builder maps (state index, params) to a finitely supported probability row.
Row = Dict[int, float]
RowBuilder = Callable[[int, Dict[str, float]], Row]


class FamilyDefinition(BaseModel):
    """A registered row builder and, for finite families, its support size"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    row_fn: RowBuilder
    n_states: Optional[int] = None


class CountableChainSpec(BaseModel):
    """A named family plus parameters; rows are generated on demand"""

    model_config = ConfigDict(frozen=True)

    family_name: str
    params: Dict[str, float] = Field(default_factory=dict)

    @property
    def definition(self) -> FamilyDefinition:
        return get_family(self.family_name)

    def row(self, x: int, tol: float = 1e-9) -> Row:
        """Generated row of state x, checked to be a probability vector"""
        row = self.definition.row_fn(x, dict(self.params))
        if any(p < -tol for p in row.values()) or abs(sum(row.values()) - 1.0) > tol:
            raise NonStochasticRow(
                f"Family {self.family_name!r} produced a non-probability row at state {x}",
                row=x,
            )
        return {y: max(p, 0.0) for y, p in row.items() if p != 0.0}


def _birth_death(x: int, params: Dict[str, float]) -> Row:
    p, q = params["p"], params["q"]
    if x == 0:
        return {0: 1.0 - p, 1: p}
    return {x - 1: q, x: 1.0 - p - q, x + 1: p}


def _two_state(x: int, params: Dict[str, float]) -> Row:
    a, b = params["a"], params["b"]
    return {0: 1.0 - a, 1: a} if x == 0 else {0: b, 1: 1.0 - b}


def _three_cycle(x: int, params: Dict[str, float]) -> Row:
    stay = params["eps"]
    return {x: stay, (x + 1) % 3: 1.0 - stay}


_REGISTRY: Dict[str, FamilyDefinition] = {}


def register_family(name: str, row_fn: RowBuilder, n_states: Optional[int] = None) -> None:
    """Register a row builder under a name usable in chain spec files"""
    _REGISTRY[name] = FamilyDefinition(name=name, row_fn=row_fn, n_states=n_states)


def get_family(name: str) -> FamilyDefinition:
    try:
        return _REGISTRY[name]
    except KeyError as e:
        raise UnknownFamily(
            f"Unknown chain family: {name!r}", known=sorted(_REGISTRY)
        ) from e


register_family("birth_death", _birth_death)
register_family("two_state", _two_state, n_states=2)
register_family("three_cycle", _three_cycle, n_states=3)
