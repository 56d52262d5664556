from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from repgame.beliefs import (GameParameter, alpha, alpha_orbit, f_B, f_T, orbit, orbit_points,
                             phi, phi_preimages, psi, side)
from repgame.errors import DivergenceError, DomainError, UnsupportedModeError
from repgame.sigma_star import matrix_series_terms

p_float = st.floats(0.5001, 0.95)
theta = st.floats(0.0, 1.0)
p_rat = st.fractions(Fraction(1, 2), Fraction(19, 20), max_denominator=500).filter(lambda q: q > Fraction(1, 2))
theta_rat = st.fractions(0, 1, max_denominator=500)


def test_make_validates():
    with pytest.raises(DomainError):
        GameParameter.make(0.4)
    with pytest.raises(DivergenceError):
        GameParameter.make(1)
    with pytest.raises(UnsupportedModeError):
        import mpmath
        GameParameter.make(mpmath.mpf("0.7"), "rational")
    P = GameParameter.make("3/4", "rational")
    assert P.gamma == Fraction(1, 2)


def test_maps_known_values():
    # f_T at 1/2 and above is p; f_B at 1/2 and below is 1-p
    assert f_T(0.5, 0.7) == 0.7
    assert f_B(0.5, 0.7) == pytest.approx(0.3)
    # alpha(2/3) = 1/2 for every p
    assert alpha(Fraction(2, 3), GameParameter.make(Fraction(7, 10), "rational")) == Fraction(1, 2)
    assert side(0.5, 0.7) == 1
    assert psi(0.8, 0.7) == pytest.approx(0.5)


def test_belief_out_of_range():
    with pytest.raises(DomainError):
        phi(1.2, 0.7)
    with pytest.raises(DomainError):
        alpha(0.4, 0.7)


@given(p_rat, theta_rat)
def test_conjugation_exact(p, t):
    P = GameParameter.make(p, "rational")
    assert f_B(t, P) == 1 - f_T(1 - t, P)


@given(p_float, theta)
def test_conjugation_float(p, t):
    assert f_B(t, p) == pytest.approx(1 - f_T(1 - t, p), abs=1e-12)


@given(p_rat, st.integers(1, 30))
def test_orbit_symmetry(p, n):
    P = GameParameter.make(p, "rational")
    up = orbit(P.p, n, P)
    down = orbit(1 - P.p, n, P)
    for a, b in zip(up.points, down.points):
        if a == Fraction(1, 2):
            break  # the tie at 1/2 breaks the mirror
        assert b == 1 - a


@given(p_rat, st.integers(1, 25))
def test_telescoping_rational(p, n):
    # u_0 ... u_{n-1} equals b_n from the matrix recursion, exactly
    P = GameParameter.make(p, "rational")
    u = orbit(P.p, n, P).u
    b = matrix_series_terms(P, n)
    prod = Fraction(1)
    for k in range(n):
        prod *= u[k]
        assert prod == b[k]


@given(p_rat, theta_rat)
def test_preimages_invert_phi(p, y):
    P = GameParameter.make(p, "rational")
    for t in phi_preimages(y, P):
        assert phi(t, P) == y


def test_rational_orbit_matches_float():
    P = GameParameter.make("0.7", "rational")
    ob = orbit(P.p, 20, P)
    fl = orbit_points(0.7, 20, 0.7)
    assert all(abs(float(a) - b) < 1e-9 for a, b in zip(ob.points, fl))
    assert all(a / b == t for (a, b), t in zip(ob.rational_form, ob.points))


def test_alpha_orbit_stays_in_range():
    pts = alpha_orbit(0.71, 50)
    assert all(0.5 <= t <= 0.71 + 1e-15 for t in pts)
