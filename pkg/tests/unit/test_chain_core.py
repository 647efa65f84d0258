"""
Unit tests for chain validation, structure and truncation
"""

import hashlib
import json

import numpy as np
import pytest

from src.chain_core.chain import validate_chain
from src.chain_core.families import CountableChainSpec, register_family
from src.chain_core.loader import chain_from_spec, family_from_spec, load_chain_spec
from src.chain_core.structure import (
    analyze_structure,
    stationary_distribution,
    stationary_from_eigenvector,
    stationary_power_iteration,
)
from src.chain_core.truncation import BoundaryPolicy, truncate
from src.utils.exceptions import (
    DuplicateLabel,
    EmptyRow,
    NegativeEntry,
    NonStochasticRow,
    NotSquare,
    ParseError,
    Reducible,
    UnknownFamily,
)


def test_validate_two_state():
    """Test that exact row sums pass a tight tolerance"""
    chain = validate_chain([[0.7, 0.3], [0.2, 0.8]], tol=1e-12)

    assert chain.n == 2
    assert chain.labels == [0, 1]
    assert chain.index_of(1) == 1
    assert not chain.P.flags.writeable


def test_validate_single_state():
    """Test the degenerate one-state chain"""
    chain = validate_chain([[1.0]])

    assert chain.n == 1


def test_validate_rejects_bad_row_sum():
    """Test that the first offending row is reported"""
    with pytest.raises(NonStochasticRow) as excinfo:
        validate_chain([[0.5, 0.6], [0.2, 0.8]])

    assert excinfo.value.context["row"] == 0


def test_validate_rejects_negative_entry():
    with pytest.raises(NegativeEntry) as excinfo:
        validate_chain([[1.2, -0.2], [0.5, 0.5]])

    assert excinfo.value.context == {"row": 0, "column": 1}


def test_validate_rejects_non_square():
    with pytest.raises(NotSquare):
        validate_chain([[0.5, 0.5]])


def test_validate_rejects_duplicate_labels():
    with pytest.raises(DuplicateLabel):
        validate_chain([[0.5, 0.5], [0.5, 0.5]], labels=["a", "a"])


def test_validate_clamps_within_tolerance():
    """Test that rounding noise inside tol is clamped into [0, 1]"""
    chain = validate_chain([[1.0 + 1e-12, -1e-12], [0.5, 0.5]])

    assert chain.P[0, 1] == 0.0
    assert chain.P[0, 0] == 1.0


def test_structure_two_state(two_state):  # type: ignore
    """Test irreducibility, period, reversibility and pi of TwoState(0.3, 0.2)"""
    structure = analyze_structure(two_state)

    assert structure.irreducible
    assert structure.period == 1
    assert structure.reversible
    np.testing.assert_allclose(structure.stationary, [0.4, 0.6], atol=1e-12)


def test_structure_flip(flip):  # type: ignore
    """Test that the pure two-cycle has period 2"""
    structure = analyze_structure(flip)

    assert structure.irreducible
    assert structure.period == 2
    assert not structure.aperiodic
    assert not structure.ergodic


def test_structure_three_cycle(three_cycle):  # type: ignore
    """Test that ThreeCycle(0.1) is aperiodic, uniform and not reversible"""
    structure = analyze_structure(three_cycle)

    assert structure.ergodic
    assert not structure.reversible
    np.testing.assert_allclose(structure.stationary, np.full(3, 1 / 3), atol=1e-12)


def test_structure_reducible(reducible):  # type: ignore
    """Test that a reducible chain has no stationary law"""
    structure = analyze_structure(reducible)

    assert not structure.irreducible
    assert structure.stationary is None
    assert len(structure.communicating_classes) == 2
    with pytest.raises(Reducible):
        stationary_distribution(reducible)
    with pytest.raises(Reducible):
        structure.require_stationary()


def test_stationary_cross_checks(three_cycle, two_state):  # type: ignore
    """Test that LU, lazy power iteration and the eigenvector agree"""
    for chain in (two_state, three_cycle):
        pi = stationary_distribution(chain)
        np.testing.assert_allclose(stationary_power_iteration(chain), pi, atol=1e-10)
        np.testing.assert_allclose(stationary_from_eigenvector(chain), pi, atol=1e-10)


def test_stationary_power_iteration_periodic(flip):  # type: ignore
    """Test that the lazy chain converges even when P itself oscillates"""
    np.testing.assert_allclose(stationary_power_iteration(flip), [0.5, 0.5], atol=1e-10)


def test_truncate_birth_death_reflects(birth_death_spec):  # type: ignore
    """Test that up-mass of the last row is folded onto the boundary"""
    chain = truncate(birth_death_spec, 5, boundary=BoundaryPolicy.REFLECT_TO_LAST)

    assert chain.n == 5
    np.testing.assert_allclose(chain.P[4], [0.0, 0.0, 0.0, 0.5, 0.5])
    np.testing.assert_allclose(chain.P[0], [0.8, 0.2, 0.0, 0.0, 0.0])


def test_truncate_renormalize(birth_death_spec):  # type: ignore
    """Test that renormalize_row rescales the in-range part"""
    chain = truncate(birth_death_spec, 2, boundary="renormalize_row")

    np.testing.assert_allclose(chain.P[1], [0.5 / 0.8, 0.3 / 0.8])


def test_truncate_interior_rows_stable(birth_death_spec):  # type: ignore
    """Test that truncations at N and N+1 share their interior rows"""
    small = truncate(birth_death_spec, 50)
    large = truncate(birth_death_spec, 51)

    np.testing.assert_array_equal(small.P[:49, :50], large.P[:49, :50])


def test_truncate_finite_family_keeps_support():
    """Test that a finite family is cut at its own size"""
    spec = CountableChainSpec(family_name="two_state", params={"a": 0.3, "b": 0.2})

    chain = truncate(spec, 10)

    np.testing.assert_allclose(chain.P, [[0.7, 0.3], [0.2, 0.8]])


def test_truncate_empty_row():
    """Test that a row with no in-range mass cannot be renormalized"""
    register_family("escape", lambda x, params: {x + 5: 1.0})
    spec = CountableChainSpec(family_name="escape")

    with pytest.raises(EmptyRow):
        truncate(spec, 3, boundary=BoundaryPolicy.RENORMALIZE_ROW)


def test_unknown_family():
    with pytest.raises(UnknownFamily):
        CountableChainSpec(family_name="nope").row(0)


def test_chain_from_family_document():
    document = {
        "kind": "family",
        "family": "birth_death",
        "params": {"p": 0.2, "q": 0.5},
        "N": 5,
        "boundary": "reflect_to_last",
    }

    chain = chain_from_spec(document)

    assert chain.n == 5
    assert family_from_spec(document).params == {"p": 0.2, "q": 0.5}


def test_chain_from_spec_errors():
    with pytest.raises(ParseError):
        chain_from_spec({"kind": "finite"})
    with pytest.raises(ParseError):
        chain_from_spec({"kind": "family", "family": "birth_death"})
    with pytest.raises(ParseError):
        chain_from_spec({"kind": "other"})
    with pytest.raises(ParseError):
        chain_from_spec({"kind": "family", "family": "birth_death", "N": 3, "boundary": "wrap"})


def test_load_chain_spec_reports_position(tmp_path):  # type: ignore
    """Test that malformed JSON carries line and column"""
    path = tmp_path / "broken.json"
    path.write_text('{\n  "kind": "finite",\n  "P": [[1.0]\n}\n')

    with pytest.raises(ParseError) as excinfo:
        load_chain_spec(path)

    assert excinfo.value.context["line"] == 4


def test_load_chain_spec_digest(tmp_path):  # type: ignore
    """Test that the digest is the SHA-256 of the file bytes"""
    path = tmp_path / "chain.json"
    path.write_text(json.dumps({"kind": "finite", "P": [[0.7, 0.3], [0.2, 0.8]]}))

    chain, document, digest = load_chain_spec(path)

    assert chain.n == 2
    assert document["kind"] == "finite"
    assert digest == hashlib.sha256(path.read_bytes()).hexdigest()
