"""
Unit tests for hitting-time functionals, the regular-set ladder and V_h synthesis
"""

import math

import numpy as np
import pytest

from src.chain_core.loader import load_chain_spec
from src.chain_core.structure import analyze_structure
from src.chain_core.truncation import truncate
from src.ergodicity import verify_drift
from src.lyapunov_synth import (
    build_ladder,
    cauchy_schwarz_bound,
    exponential_moment,
    h2_regular_functional,
    hitting_functionals,
    kendall_theta,
    lyapunov_pipeline,
    mean_hitting_time,
    synthesize_vh,
    taboo_radius,
)
from src.measures_norms.rules import named_observable
from src.utils.exceptions import (
    AbsorbingComplement,
    InputError,
    LadderExhausted,
    NotApplicable,
    ThetaTooLarge,
)


def centered_indicator(chain):  # type: ignore
    pi = analyze_structure(chain).require_stationary()
    h = named_observable("indicator_last", chain.n)
    return h - float(np.dot(pi, h))


def test_taboo_radius(two_state):  # type: ignore
    """Test rho(Q_C) = P(1, 1) for C = {0}, and 0 when C covers every state"""
    assert taboo_radius(two_state, [0]) == pytest.approx(0.8)
    assert taboo_radius(two_state, [0, 1]) == 0.0


def test_taboo_radius_absorbing_complement(reducible):  # type: ignore
    """Test that a closed class outside C is never left"""
    with pytest.raises(AbsorbingComplement):
        taboo_radius(reducible, [0])


def test_empty_target(two_state):  # type: ignore
    with pytest.raises(InputError):
        mean_hitting_time(two_state, [])


def test_mean_hitting_time(two_state):  # type: ignore
    """Test E_1[sigma_0] = 1 / P(1, 0) = 5"""
    np.testing.assert_allclose(mean_hitting_time(two_state, [0]), [0.0, 5.0])


def test_exponential_moment_matches_geometric_law(two_state):  # type: ignore
    """Test M(1) against the series sum_k 0.2 0.8^(k-1) e^(theta k)"""
    theta = 0.1
    U, M = exponential_moment(two_state, [0], theta)

    series = sum(0.2 * 0.8 ** (k - 1) * math.exp(theta * k) for k in range(1, 2000))
    assert M[0] == 1.0
    assert M[1] == pytest.approx(series, rel=1e-10)
    assert U[0] == pytest.approx(math.exp(theta) * (0.7 + 0.3 * M[1]))


def test_exponential_moment_at_zero(two_state):  # type: ignore
    U, M = exponential_moment(two_state, [0], 0.0)

    np.testing.assert_array_equal(U, [1.0, 1.0])
    np.testing.assert_array_equal(M, [1.0, 1.0])


def test_theta_too_large(two_state):  # type: ignore
    """Test that e^theta 0.8 >= 1 is refused"""
    with pytest.raises(ThetaTooLarge) as excinfo:
        exponential_moment(two_state, [0], 0.3)

    assert excinfo.value.context["product"] >= 1.0


def test_h2_functional_zero_observable(two_state):  # type: ignore
    np.testing.assert_array_equal(h2_regular_functional(two_state, [0], [0.0, 0.0]), [0.0, 0.0])


def test_h2_functional_constant_observable(two_state):  # type: ignore
    """Test that h = 1 counts E_x[tau_S] + 1 visits"""
    V = h2_regular_functional(two_state, [0], [1.0, 1.0])

    # E_0[tau_0] = 1 + 0.3 * 5, E_1[tau_0] = 5
    np.testing.assert_allclose(V, [3.5, 6.0])


def test_hitting_functionals(two_state):  # type: ignore
    result = hitting_functionals(two_state, [0], 0.1)

    assert result.target == [0]
    assert result.taboo_spectral_radius == pytest.approx(0.8)
    assert result.sigma_mean == pytest.approx([0.0, 5.0])
    assert result.U_max_on_target == pytest.approx(result.U_theta[0])
    assert "tabooSpectralRadius" in result.model_dump(by_alias=True)


def test_kendall_theta():
    """Test theta = 0.9 (-log rho) and the cap for an empty complement"""
    assert kendall_theta(0.8) == pytest.approx(-0.9 * math.log(0.8))
    assert math.exp(kendall_theta(0.8)) * 0.8 < 1.0
    assert kendall_theta(0.0) == 1.0


def test_synthesize_vh_known_value(two_state):  # type: ignore
    """Test V_h(1) = 1.22 / 0.12 with h = 0 and growth e^(theta/2) = 1.1"""
    result = synthesize_vh(two_state, [0.0, 0.0], [0], theta=2.0 * math.log(1.1))

    assert result.V_h[0] == pytest.approx(1.0)
    assert result.V_h[1] == pytest.approx(1.22 / 0.12)
    assert result.drift.delta == pytest.approx(1.0 - 1.0 / 1.1)
    assert result.off_c_residual <= 1e-9
    assert verify_drift(two_state, result.drift)


def test_synthesize_vh_theta_zero(two_state):  # type: ignore
    """Test that theta = 0 with h = 0 gives 1 + E_x[sigma_C] and no contraction"""
    result = synthesize_vh(two_state, [0.0, 0.0], [0], theta=0.0)

    np.testing.assert_allclose(result.V_h, [1.0, 6.0])
    assert result.drift.delta == 0.0


def test_synthesize_vh_dominates_h(three_cycle):  # type: ignore
    """Test that |h| <= V_h and pi(V_h) is finite"""
    h = [2.0, -1.0, 0.5]
    theta = kendall_theta(taboo_radius(three_cycle, [0]))

    result = synthesize_vh(three_cycle, h, [0], theta)

    assert result.domination <= 1.0
    assert np.all(np.abs(h) <= np.asarray(result.V_h))
    assert math.isfinite(result.pi_integral)
    assert "pi_Vh" in result.model_dump(by_alias=True)


def test_synthesize_vh_theta_too_large(two_state):  # type: ignore
    with pytest.raises(ThetaTooLarge):
        synthesize_vh(two_state, [1.0, 1.0], [0], theta=1.0)


def test_cauchy_schwarz_bound(three_cycle):  # type: ignore
    theta = kendall_theta(taboo_radius(three_cycle, [1]))

    bound = cauchy_schwarz_bound(three_cycle, [1.0, -3.0, 2.0], [1], theta)

    assert bound.holds
    assert bound.T[1] == pytest.approx(3.0)


def test_build_ladder(two_state):  # type: ignore
    """Test that the anchor is the most likely state and the first rung is its singleton"""
    ladder = build_ladder(two_state, centered_indicator(two_state))

    assert ladder.anchor == 1
    assert ladder.rungs[0].S == [1]
    assert ladder.C
    assert ladder.m >= ladder.rungs[ladder.r].min_level


def test_build_ladder_theta_margin(two_state):  # type: ignore
    """Test theta_r = 0.45 (-log rho) on each rung, cap when the complement is empty"""
    ladder = build_ladder(two_state, centered_indicator(two_state))

    first = ladder.rungs[0]
    assert first.taboo_radius == pytest.approx(0.7)
    assert first.theta == pytest.approx(-0.45 * math.log(0.7))
    for rung in ladder.rungs:
        if rung.taboo_radius > 0.0:
            assert rung.theta == pytest.approx(-0.45 * math.log(rung.taboo_radius))
            assert math.exp(rung.theta) * rung.taboo_radius < 1.0
        else:
            assert rung.theta == 1.0


def test_build_ladder_exhausted(two_state):  # type: ignore
    """Test that thresholds below U >= 1 never admit a state"""
    with pytest.raises(LadderExhausted):
        build_ladder(two_state, [0.0, 0.0], m_schedule=[0.5])


def test_build_ladder_periodic(flip):  # type: ignore
    with pytest.raises(NotApplicable):
        build_ladder(flip, [1.0, -1.0])


@pytest.mark.parametrize("fixture", ["two_state", "three_cycle", "birth_death"])
def test_lyapunov_pipeline(fixture, request):  # type: ignore
    """Test that the pipeline returns a verified drift and a holding Cauchy-Schwarz bound"""
    chain = request.getfixturevalue(fixture)
    h = centered_indicator(chain)

    result = lyapunov_pipeline(chain, h)

    assert result.ladder is not None
    assert result.C == result.ladder.C
    assert result.theta > 0.0
    assert result.drift.valid
    assert verify_drift(chain, result.drift)
    assert result.cauchy_schwarz is not None and result.cauchy_schwarz.holds
    assert np.all(np.abs(h) <= np.asarray(result.V_h))


def test_lyapunov_pipeline_birth_death_50(chains_dir):  # type: ignore
    """Test the pipeline on the 50-state truncation"""
    chain, _, _ = load_chain_spec(chains_dir / "bd50.json")

    result = lyapunov_pipeline(chain, centered_indicator(chain))

    assert result.drift.valid
    assert math.isfinite(result.pi_integral)


@pytest.mark.parametrize("N", [10, 50, 200])
@pytest.mark.parametrize("observable", ["zero", "identity", "centered_indicator"])
def test_lyapunov_pipeline_birth_death_grid(birth_death_spec, N, observable):  # type: ignore
    """Test a verified V_h >= 1 + |h| on truncations of BirthDeath(0.2, 0.5)"""
    chain = truncate(birth_death_spec, N)
    if observable == "centered_indicator":
        h = centered_indicator(chain)
    else:
        h = named_observable(observable, N)

    result = lyapunov_pipeline(chain, h)

    V_h = np.asarray(result.V_h)
    assert np.all(V_h >= (1.0 + np.abs(h)) * (1 - 1e-12))
    assert result.drift_residual <= 1e-9
    assert result.off_c_residual <= 1e-9
    assert result.drift.valid
    assert math.isfinite(result.pi_integral)
    assert result.domination <= 1.0


def test_lyapunov_pipeline_identity_grows(birth_death_spec):  # type: ignore
    """Test that V_h increases along BirthDeath(0.2, 0.5) with N = 50 and h(x) = x"""
    chain = truncate(birth_death_spec, 50)

    result = lyapunov_pipeline(chain, named_observable("identity", 50))

    assert result.C == list(range(len(result.C)))
    assert np.all(np.diff(result.V_h) > 0.0)


@pytest.mark.parametrize("seed", range(10))
def test_synthesize_vh_monotone_in_observable(random_chain, seed):  # type: ignore
    """Test that |h| <= |h'| pointwise gives V_h <= V_h'"""
    n = 3 + seed % 6
    chain = random_chain(n, seed)
    rng = np.random.default_rng(seed)
    h = rng.normal(size=n)
    larger = -h * (1.0 + rng.random(n))
    theta = kendall_theta(taboo_radius(chain, [0]))

    small = np.asarray(synthesize_vh(chain, h, [0], theta).V_h)
    large = np.asarray(synthesize_vh(chain, larger, [0], theta).V_h)

    assert np.all(small <= large * (1 + 1e-12))
    assert np.all(small[1:] < large[1:])
