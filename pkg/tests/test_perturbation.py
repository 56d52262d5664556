import mpmath
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from repgame.beliefs import GameParameter, orbit_points
from repgame.errors import DomainError, InconclusiveError
from repgame.perturbation import (PerturbationConfig, invariant_measure, lemma_margin, margin_curve,
                                  perturbed_action_probs, perturbed_beliefs, perturbed_value)
from repgame.sigma_star import sigma_star_prob_T, value_ladder

P_HI = "0.73275300915"


def test_three_quarters_against_chain_oracle():
    rep = lemma_margin(0.75, PerturbationConfig(7, 0.01))
    # [DERIVED] dense stationary solve of the branched chain
    ref = oracles.perturbed_chain_value_numpy(0.75, 7, 0.01) - oracles.ladder_chain_value_numpy(0.75)
    assert abs(rep.value_difference - ref) <= rep.tail_bound
    long = lemma_margin(0.75, PerturbationConfig(7, 0.01, terms=200))
    assert long.value_difference == pytest.approx(ref, rel=1e-8)
    assert rep.margin > 1e-5                                    # [PAPER]
    assert rep.value_difference == pytest.approx(5e-7, rel=0.2)  # [PAPER]
    assert rep.verdict == "better"


def test_high_precision_case_against_mp_oracle():
    cfg = PerturbationConfig(57, "0.00015", precision="bigfloat:256")
    rep = lemma_margin(P_HI, cfg)
    assert float(rep.margin) == pytest.approx(1.72e-8, rel=0.1)   # [PAPER]
    with mpmath.workprec(256):
        p = mpmath.mpf(P_HI)
        ref = oracles.perturbed_chain_value(p, 57, mpmath.mpf("0.00015"), depth=150, sweeps=600)
    # [DERIVED] the branched chain solved by power iteration in 256-bit arithmetic
    assert abs(float(rep.v_perturbed - ref)) < 1e-30
    assert float(rep.value_difference) == pytest.approx(6.5719e-22, rel=1e-3)


@settings(max_examples=20)
@given(st.floats(0.68, 0.78), st.integers(1, 12))
def test_epsilon_zero_degenerates(p, k0):
    P = GameParameter.make(p)
    if orbit_points(1 - P.p, k0, P)[k0] >= 0.5:
        with pytest.raises(DomainError):
            lemma_margin(P, PerturbationConfig(k0, 0.0))
        return
    rep = lemma_margin(P, PerturbationConfig(k0, 0.0), strict=False)
    assert abs(rep.margin) < 1e-12
    assert abs(rep.value_difference) <= rep.tail_bound
    assert not rep.warnings
    assert rep.verdict in ("equal", "inconclusive")


@given(st.floats(0.05, 0.49), st.booleans())
def test_action_probs_reduce_to_ladder(t, low):
    state = "low" if low else "high"
    assert perturbed_action_probs(low, False, t, 0.0) == pytest.approx(sigma_star_prob_T(state, t))
    assert perturbed_action_probs(low, True, t, 0.0) == pytest.approx(sigma_star_prob_T(state, 1 - t))


def test_perturbed_beliefs_at_zero():
    tt, tte, pe = perturbed_beliefs(0.75, PerturbationConfig(7, 0.0))
    assert pe == 0.75
    assert tte == pytest.approx(orbit_points(0.25, 8, 0.75)[8])


def test_invariant_measure():
    cfg = PerturbationConfig(7, 0.01, terms=120)
    im = invariant_measure(0.75, cfg)
    assert float(im.total) == pytest.approx(1.0, abs=1e-12)
    assert abs(im.balance_residual) < 1e-12
    assert im.value == pytest.approx(perturbed_value(0.75, cfg), abs=1e-12)


def test_value_at_zero_matches_ladder():
    assert perturbed_value(0.75, PerturbationConfig(7, 0.0, terms=200)) == pytest.approx(
        float(value_ladder(0.75).v), abs=1e-13)


def test_inconclusive_when_truncated():
    cfg = PerturbationConfig(7, 0.01, terms=3)
    with pytest.raises(InconclusiveError):
        lemma_margin(0.75, cfg)
    assert lemma_margin(0.75, cfg, strict=False).verdict == "inconclusive"


def test_config_validation():
    with pytest.raises(DomainError):
        PerturbationConfig(-1, 0.1)
    with pytest.raises(DomainError):
        PerturbationConfig(3, 1.0)
    with pytest.raises(DomainError):
        PerturbationConfig(3, 0.1, terms=0)
    with pytest.raises(DomainError):
        margin_curve(0.75, 7, [])


def test_margin_curve_shape():
    curve = margin_curve(0.75, 7, [0.0, 0.005, 0.01])
    assert curve[0] == (0.0, 0.0)
    assert curve[2][1] > curve[1][1] > 0
