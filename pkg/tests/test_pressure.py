import math

import numpy as np
import pytest

import oracles
from repgame.beliefs import GameParameter, alpha_orbit
from repgame.errors import DomainError, RangeError, UnsupportedModeError
from repgame.pressure import (NINE_B_END, SEAM, THREE_INTERVAL_END, PartitionScheme, Z_n,
                              certify_auto, certify_nine_interval_a, certify_nine_interval_b,
                              certify_range, certify_three_interval, partition_matrix, preimages)


def test_preimages_basic():
    assert any(abs(t - 2 / 3) < 1e-15 for t in preimages(0.5, 1, 0.70))
    assert preimages(0.6, 0, 0.70) == [0.6]
    with pytest.raises(DomainError):
        preimages(0.4, 1, 0.7)


@pytest.mark.parametrize("n", range(1, 7))
def test_preimage_count_and_weight_vs_grid_oracle(n):
    # [DERIVED] sign changes of alpha^(n-1) - 2/3 on a 10^6-point grid
    z, count = oracles.brute_preimage_sum(0.71, n)
    assert len(preimages(0.5, n, 0.71)) == count
    assert float(Z_n(n, 0.71)) == pytest.approx(z, rel=1e-10)


def test_Z_n_degenerate_and_guard():
    assert Z_n(3, 0.5) == 0
    with pytest.raises(UnsupportedModeError):
        Z_n(41, 0.7)
    with pytest.raises(DomainError):
        Z_n(0, 0.7)


@pytest.mark.parametrize("p,build", [
    (0.69, certify_three_interval),
    (0.70, certify_three_interval),
    (0.705, certify_nine_interval_a),
    (0.708, certify_nine_interval_a),
    (0.714, lambda p: certify_auto(p, 9)),
])
def test_Z_n_dominated_by_matrix_powers(p, build):
    A = build(p).matrix.A
    for n in range(1, 13):
        bound = np.linalg.matrix_power(A, n)[:, 0].sum()   # column of the piece holding 1/2
        assert float(Z_n(n, p)) <= bound * (1 + 1e-12)


def test_pressure_negative_at_07321():
    zs = [math.log(float(Z_n(n, 0.7321))) for n in range(20, 41, 4)]
    slope = np.polyfit(np.arange(20, 41, 4), zs, 1)[0]
    assert slope < 0


def test_three_interval_radii():
    c = certify_three_interval(0.69)
    assert c.passed
    g = 0.38
    o = alpha_orbit(0.69, 2)
    assert c.radii["gamma/p1"] == pytest.approx(g / o[1], rel=1e-14)
    assert c.radii["2*gamma/sqrt(p2)"] == pytest.approx(2 * g / math.sqrt(o[2]), rel=1e-14)
    assert c.rho == pytest.approx(float(np.max(np.abs(np.linalg.eigvals(c.matrix.A)))), rel=1e-7)


def test_three_interval_endpoint():
    P = GameParameter.make(repr(THREE_INTERVAL_END - 1e-10), "bigfloat:128")
    c = certify_three_interval(P)
    assert abs(c.radii["2*gamma/sqrt(p2)"] - 1) < 1e-6


def test_three_interval_range_errors():
    with pytest.raises(RangeError):
        certify_three_interval(0.66)
    with pytest.raises(RangeError):
        certify_three_interval(0.71)


def test_nine_interval_a():
    c = certify_nine_interval_a(0.705)
    assert c.passed
    # [DERIVED] matrix radius equals the largest closed-form component radius
    assert c.rho == pytest.approx(max(c.radii.values()), rel=1e-7)
    with pytest.raises(RangeError):
        certify_nine_interval_a(SEAM + 1e-6)


def test_seam_is_p3_equals_p5():
    P = GameParameter.make(repr(SEAM), "bigfloat:128")
    o = alpha_orbit(P, 5)
    assert abs(float(o[3] - o[5])) < 1e-14


def test_nine_interval_b():
    c = certify_nine_interval_b(0.709637, 0.719023, samples=120)
    assert c.passed, c.failed_checks()
    assert c.rho == pytest.approx(0.9773, abs=1e-3)
    with pytest.raises(RangeError):
        certify_nine_interval_b(0.70, 0.71)
    with pytest.raises(DomainError):
        certify_nine_interval_b(0.715, 0.712)


def test_nine_b_endpoint_p9_half():
    P = GameParameter.make(repr(NINE_B_END), "bigfloat:128")
    assert 0 < float(alpha_orbit(P, 9)[9] - P.half) < 1e-8


def test_auto_matches_hand_schemes():
    assert certify_auto(0.705, 9).rho == pytest.approx(certify_nine_interval_a(0.705).rho, rel=1e-6)
    assert certify_auto(0.714, 9).passed
    with pytest.raises(DomainError):
        certify_auto(0.7, 2)


def test_partition_matrix_three_interval_combinatorics():
    P = GameParameter.make(0.69)
    o = alpha_orbit(P, 2)
    tb = partition_matrix(P, PartitionScheme((0.5, o[1], o[2], o[0]), ("1/2", "p1", "p2", "p")))
    assert tb.m.tolist() == [[0, 0, 1], [1, 1, 0], [2, 0, 0]]


def test_certify_range_covers_theorem_range():
    cov = certify_range(2 / 3, 0.719023, samples=41)
    assert cov.covered, cov.gaps
    assert [m for _, _, m, _ in cov.pieces] == ["closed_form", "three_interval", "nine_interval_a", "nine_interval_b"]


def test_certify_range_reports_gap():
    cov = certify_range(0.74, 0.75, auto_pieces=2, auto_depth=20)
    assert not cov.covered
    assert cov.to_dict()["gaps"]
