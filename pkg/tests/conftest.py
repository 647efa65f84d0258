"""
Pytest configuration and fixtures
"""

from pathlib import Path
from typing import Callable, Iterator

import numpy as np
import pytest

from src.chain_core.chain import MarkovChain, validate_chain
from src.chain_core.families import CountableChainSpec
from src.chain_core.truncation import truncate
from src.config.settings import get_settings

CHAINS_DIR = Path(__file__).resolve().parent.parent / "data" / "chains"


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Settings read from a clean environment for every test"""
    monkeypatch.delenv("ERGOGRAPH_SEED", raising=False)
    monkeypatch.delenv("ERGOGRAPH_LOG_FILE", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def chains_dir() -> Path:
    """Directory of the JSON chain fixtures"""
    return CHAINS_DIR


@pytest.fixture
def two_state() -> MarkovChain:
    """TwoState(a=0.3, b=0.2): pi = (0.4, 0.6), second eigenvalue 0.5"""
    return validate_chain([[0.7, 0.3], [0.2, 0.8]])


@pytest.fixture
def three_cycle() -> MarkovChain:
    """ThreeCycle(eps=0.1): doubly stochastic, not reversible"""
    return validate_chain([[0.1, 0.9, 0.0], [0.0, 0.1, 0.9], [0.9, 0.0, 0.1]])


@pytest.fixture
def flip() -> MarkovChain:
    """Deterministic period-2 chain"""
    return validate_chain([[0.0, 1.0], [1.0, 0.0]])


@pytest.fixture
def reducible() -> MarkovChain:
    """An absorbing state plus a closed pair"""
    return validate_chain([[1.0, 0.0, 0.0], [0.0, 0.5, 0.5], [0.0, 0.5, 0.5]])


@pytest.fixture
def birth_death_spec() -> CountableChainSpec:
    return CountableChainSpec(family_name="birth_death", params={"p": 0.2, "q": 0.5})


@pytest.fixture
def birth_death(birth_death_spec: CountableChainSpec) -> MarkovChain:
    """BirthDeath(p=0.2, q=0.5) truncated at N=5 with reflection to the last state"""
    return truncate(birth_death_spec, 5)


@pytest.fixture
def random_chain() -> Callable[..., MarkovChain]:
    """Factory for dense random chains, irreducible and aperiodic by construction"""

    def make(n: int, seed: int, reversible: bool = False) -> MarkovChain:
        rng = np.random.default_rng(seed)
        if reversible:
            weights = rng.random((n, n)) + 0.05
            weights = weights + weights.T
            return validate_chain(weights / weights.sum(axis=1, keepdims=True))
        raw = rng.random((n, n)) + 0.01
        return validate_chain(raw / raw.sum(axis=1, keepdims=True))

    return make
