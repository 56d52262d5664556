from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from repgame.beliefs import GameParameter, f_B, f_T, orbit_points
from repgame.errors import DomainError
from repgame.sigma_star import (HiddenState, ladder_stationary, one_step_payoffs, p_star,
                                p_star_beliefs, sigma_star_action, sigma_star_prob_T,
                                value_ladder, value_matrix)

theta_rat = st.fractions(0, 1, max_denominator=400)
p_rat = st.fractions(Fraction(1, 2), Fraction(19, 20), max_denominator=400).filter(lambda q: q > Fraction(1, 2))


def _bayes(theta, p, top):
    # Player 2's posterior on the low state after seeing the move, then one state step
    lo = sigma_star_prob_T(HiddenState.LOW, theta)
    hi = sigma_star_prob_T(HiddenState.HIGH, theta)
    a, b = (lo, hi) if top else (1 - lo, 1 - hi)
    post = theta * a / (theta * a + (1 - theta) * b)
    return p * post + (1 - p) * (1 - post)


@given(p_rat, theta_rat.filter(lambda t: 0 < t < 1))
def test_updates_are_bayesian(p, t):
    P = GameParameter.make(p, "rational")
    lo = sigma_star_prob_T("low", t)
    hi = sigma_star_prob_T("high", t)
    if t * lo + (1 - t) * hi > 0:
        assert _bayes(t, p, True) == f_T(t, P)
    if t * (1 - lo) + (1 - t) * (1 - hi) > 0:
        assert _bayes(t, p, False) == f_B(t, P)


@given(theta_rat)
def test_payoff_independent_of_column(t):
    vs_L, vs_R = one_step_payoffs(t)
    assert vs_L == vs_R == min(t, 1 - t)


def test_action_and_state_coercion():
    a = sigma_star_action("s_high", 0.3, 0.7)
    assert a.prob_T == pytest.approx(0.4 / 0.7)
    assert a.update_T == pytest.approx(f_T(0.3, 0.7))
    with pytest.raises(DomainError):
        HiddenState.coerce("middle")
    with pytest.raises(DomainError):
        sigma_star_prob_T("low", 1.5)


@given(st.floats(0.5, 2 / 3))
def test_closed_form_regime(p):
    assert float(value_ladder(p).v) == pytest.approx(p / (4 * p - 1), abs=1e-9)


def test_value_three_quarters_against_oracle():
    # [DERIVED] dense stationary solve of the raw ladder chain
    ref = oracles.ladder_chain_value_numpy(0.75)
    lv = value_ladder(0.75)
    assert abs(lv.v - ref) < 1e-12
    assert lv.v == pytest.approx(0.35267910, abs=1e-7)   # [PAPER]
    assert lv.tail_bound < 1e-12


def test_bigfloat_against_mp_oracle():
    P = GameParameter.make("0.73275300915", "bigfloat:256")
    lv = value_ladder(P, tol=1e-40)
    ref = oracles.ladder_value_mp("0.73275300915", terms=1200)
    assert abs(float(lv.v - ref)) < 1e-30


@given(st.floats(0.51, 0.78))
def test_matrix_route_agrees(p):
    lv = value_ladder(p, tol=1e-13)
    assert abs(value_matrix(p, lv.terms) - lv.inverse) < 1e-9 * lv.inverse


def test_matrix_route_exact():
    P = GameParameter.make("3/4", "rational")
    lv = value_ladder(P, tol=1e-3)
    assert value_matrix(P, lv.terms) == lv.inverse
    assert value_matrix(P, 8) == Fraction(183803, 65536)   # [DERIVED] exact partial sum


def test_stationary_law():
    pi = ladder_stationary(0.75)
    assert pi.sum() == pytest.approx(1.0)
    assert pi[0] == pytest.approx(float(value_ladder(0.75).v), abs=1e-12)
    assert np.all(np.diff(pi) <= 0)
    assert len(ladder_stationary(0.75, n_max=10)) == 10


def test_value_errors():
    with pytest.raises(DomainError):
        value_ladder(0.75, tol=0)
    with pytest.raises(DomainError):
        value_matrix(0.75, 0)


def test_p_star():
    x = p_star()
    assert abs(((9 * x - 13) * x + 6) * x - 1) < 1e-15
    xb = p_star("bigfloat:256")
    assert abs(xb - x) < 1e-15
    with pytest.raises(DomainError):
        p_star("rational")
    b = p_star_beliefs(x)
    assert b[0] == pytest.approx(1 - x) and b[3] == x
    # the orbit of p* has period two after one step
    P = GameParameter.make(xb, "bigfloat:256")
    pts = orbit_points(P.p, 3, P)
    assert pts[1] > P.half
    assert abs(pts[1] - pts[3]) < mpmath.mpf(10) ** -70
