"""
Unit tests for drift certificates, small sets and the equivalence report
"""

import math

import numpy as np
import pytest

from src.chain_core.chain import validate_chain
from src.chain_core.structure import analyze_structure
from src.chain_core.truncation import truncate
from src.ergodicity import (
    check_drift,
    equivalence_report,
    find_small_set,
    geometric_certificate,
    sublevel_sets,
    tv_profile,
    verify_drift,
    verify_minorization,
)
from src.measures_norms import op_norm_v, outer_one_pi
from src.measures_norms.rules import named_weight
from src.utils.exceptions import (
    DriftFails,
    InputError,
    NotApplicable,
    NotSmallWithinHorizon,
)
from src.utils.verdicts import CheckStatus


def test_drift_birth_death(birth_death):  # type: ignore
    """Test delta = 0.05 and b = 0.25 for V(x) = 2^x and C = {0}"""
    certificate = check_drift(birth_death, named_weight("pow2", 5), [0])

    assert certificate.delta == pytest.approx(0.05)
    assert certificate.b == pytest.approx(0.25)
    assert certificate.C == [0]
    assert certificate.valid
    assert verify_drift(birth_death, certificate)


def test_drift_full_set(three_cycle):  # type: ignore
    """Test that C = X with V = 1 gives delta = 1 and b = 1"""
    certificate = check_drift(three_cycle, np.ones(3), [0, 1, 2])

    assert certificate.delta == 1.0
    assert certificate.b == pytest.approx(1.0)
    assert certificate.valid


def test_drift_fails_with_empty_set(two_state):  # type: ignore
    """Test that PV(0) = 30.7 > V(0) leaves no drift off an empty C"""
    with pytest.raises(DriftFails) as excinfo:
        check_drift(two_state, [1.0, 100.0], [])

    assert excinfo.value.context["state"] == 0


def test_drift_supplied_constants(birth_death):  # type: ignore
    """Test that a b too small for the given delta is reported invalid"""
    V = named_weight("pow2", 5)

    certificate = check_drift(birth_death, V, [0], delta=0.05, b=0.1)

    assert not certificate.valid
    assert not verify_drift(birth_death, certificate)


def test_drift_rejects_bad_constants(birth_death):  # type: ignore
    V = named_weight("pow2", 5)

    with pytest.raises(InputError):
        check_drift(birth_death, V, [0], delta=1.5)
    with pytest.raises(InputError):
        check_drift(birth_death, V, [0], b=-1.0)
    with pytest.raises(InputError):
        check_drift(birth_death, V, [7])


def test_sublevel_sets():
    assert sublevel_sets([1.0, 4.0, 2.0, 4.0]) == [[0], [0, 2], [0, 1, 2, 3]]


def test_small_set_singleton(two_state):  # type: ignore
    """Test that a singleton is small at m = 1 with nu its own row"""
    certificate = find_small_set(two_state, [1])

    assert certificate.m == 1
    assert certificate.eps == pytest.approx(1.0)
    np.testing.assert_allclose(certificate.nu, [0.2, 0.8])


def test_small_set_two_state(two_state):  # type: ignore
    """Test the columnwise minimum (0.2, 0.3) over both rows"""
    certificate = find_small_set(two_state, [0, 1])

    assert certificate.m == 1
    assert certificate.eps == pytest.approx(0.5)
    np.testing.assert_allclose(certificate.nu, [0.4, 0.6])
    assert verify_minorization(two_state, certificate)


def test_small_set_flip_never_minorizes(flip):  # type: ignore
    """Test that P^m = I or the swap keeps the rows disjoint for every m"""
    with pytest.raises(NotSmallWithinHorizon) as excinfo:
        find_small_set(flip, [0, 1], m_max=3)

    assert excinfo.value.context["best_eps"] == 0.0


def test_small_set_needs_members(two_state):  # type: ignore
    with pytest.raises(InputError):
        find_small_set(two_state, [])


def test_geometric_certificate_two_state(two_state):  # type: ignore
    """Test rho = 0.5 with every L(n) under B rho^n"""
    certificate = geometric_certificate(two_state, [1.0, 1.0], n_max=40)

    assert certificate.rho == pytest.approx(0.5, abs=1e-9)
    assert certificate.B == pytest.approx(1.2, rel=1e-6)
    for n, value in enumerate(certificate.per_n_lhs):
        assert value <= certificate.bound(n) * (1 + 1e-9)


def test_geometric_certificate_rank_one():
    """Test that P = 1 (x) pi converges in one step"""
    chain = validate_chain([[0.5, 0.5], [0.5, 0.5]])

    certificate = geometric_certificate(chain, [1.0, 1.0], n_max=10)

    assert certificate.exact_convergence
    assert certificate.rho == 0.0
    assert all(value == 0.0 for value in certificate.per_n_lhs[1:])


def test_geometric_certificate_three_cycle(three_cycle):  # type: ignore
    certificate = geometric_certificate(three_cycle, np.ones(3))

    assert abs(certificate.rho - math.sqrt(0.73)) <= 1e-3


def test_geometric_certificate_periodic(flip):  # type: ignore
    with pytest.raises(NotApplicable):
        geometric_certificate(flip, [1.0, 1.0])


def test_tv_profile_two_state(two_state):  # type: ignore
    """Test that each state's TV distance is covered by C rho^n with rho near 0.5"""
    profile = tv_profile(two_state, n_max=30)

    np.testing.assert_allclose(profile.distances[0][0], 0.3)
    for x in range(2):
        rho, C = profile.rho[x], profile.C[x]
        assert 0.45 <= rho <= 0.5 + 1e-12
        assert C >= 1.0
        for n in range(1, profile.resolved_n[x] + 1):
            assert profile.distances[x][n - 1] <= C * rho**n * (1 + 1e-9)


def test_equivalence_two_state(two_state):  # type: ignore
    """Test that all predicates hold and agree"""
    report = equivalence_report(two_state, [1.0, 1.0])

    assert report.applicable
    assert all(report.predicates.values())
    assert report.consistent
    assert report.checks["drift_iff_weighted_gap"] is CheckStatus.PASS
    assert report.checks["reversible_ge_iff_l2_gap"] is CheckStatus.PASS
    assert report.small_set is not None


def test_equivalence_three_cycle(three_cycle):  # type: ignore
    """Test that only reversibility fails and the L2 equivalence is not asserted"""
    report = equivalence_report(three_cycle, np.ones(3))

    assert report.predicates["drift"]
    assert report.predicates["weighted_gap"]
    assert report.predicates["l2_gap"]
    assert not report.predicates["reversible"]
    assert report.checks["reversible_ge_iff_l2_gap"] is CheckStatus.NOT_APPLICABLE
    assert report.consistent


def test_equivalence_periodic(flip):  # type: ignore
    """Test that aperiodicity failure is annotated without a verdict"""
    report = equivalence_report(flip, [1.0, 1.0])

    assert not report.applicable
    assert report.consistent is None
    assert any("aperiodicity" in note for note in report.annotations)


@pytest.mark.parametrize("seed", range(50))
def test_equivalence_random_chains(random_chain, seed):  # type: ignore
    """Test drift <=> delta_V > 0 on random chains and random weights"""
    n = 3 + seed % 10
    chain = random_chain(n, seed, reversible=bool(seed % 2))
    V = 1.0 + 3.0 * np.random.default_rng(1000 + seed).random(n)

    report = equivalence_report(chain, V)

    assert report.applicable
    assert report.consistent


@pytest.mark.parametrize("seed", range(10))
def test_geometric_certificate_matches_powers(random_chain, seed):  # type: ignore
    """Test that L(n) is the V-norm of P^n - 1 (x) pi for n = 0..20"""
    n = 3 + seed % 5
    chain = random_chain(n, seed, reversible=bool(seed % 2))
    V = 1.0 + 4.0 * np.random.default_rng(seed).random(n)
    pi = analyze_structure(chain).require_stationary()

    certificate = geometric_certificate(chain, V, n_max=20)

    assert len(certificate.per_n_lhs) == 21
    for k, lhs in enumerate(certificate.per_n_lhs):
        expected = op_norm_v(np.linalg.matrix_power(chain.P, k) - outer_one_pi(pi), V)
        assert lhs == pytest.approx(expected, abs=1e-12)
        assert lhs <= certificate.B * certificate.rho**k * (1 + 1e-9)


def _nested_drift_rates(chain, V, order):  # type: ignore
    rates = []
    for size in range(len(order) + 1):
        try:
            rates.append(check_drift(chain, V, order[:size]).delta)
        except DriftFails:
            rates.append(None)
    return rates


def _assert_monotone_once_passing(rates):  # type: ignore
    first = next(i for i, rate in enumerate(rates) if rate is not None)
    passing = rates[first:]
    assert all(rate is not None for rate in passing)
    assert all(a <= b + 1e-15 for a, b in zip(passing, passing[1:]))
    assert passing[-1] == 1.0


def test_drift_monotone_in_set_birth_death(birth_death_spec):  # type: ignore
    """Test that {0..k} keeps passing with non-decreasing delta once {0} passes"""
    chain = truncate(birth_death_spec, 20)

    rates = _nested_drift_rates(chain, named_weight("pow2", 20), list(range(20)))

    assert rates[0] is None
    assert rates[1] == pytest.approx(0.05)
    _assert_monotone_once_passing(rates)


@pytest.mark.parametrize("seed", range(10))
def test_drift_monotone_in_set_random(random_chain, seed):  # type: ignore
    """Test that growing sublevel sets never lose the drift condition"""
    n = 4 + seed % 5
    chain = random_chain(n, seed)
    V = 1.0 + 20.0 * np.random.default_rng(seed).random(n)

    rates = _nested_drift_rates(chain, V, [int(x) for x in np.argsort(V)])

    _assert_monotone_once_passing(rates)
