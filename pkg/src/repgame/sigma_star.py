"""The ladder strategy for the informed player and its long-run value.

The strategy keeps Player 2's belief on the orbit of ``p`` (or ``1 - p``).
From rung ``n`` the belief either climbs to rung ``n + 1`` with probability
``u_n = max(p_n, 1 - p_n)`` or falls back to the base.  The one-step payoff
equals the fall-off probability, so the value is the stationary mass of the
base rung.  Three routes compute it: the ladder series, the 2x2 matrix
series, and (in rational mode) exact telescoping of the matrix recursion.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, List, Tuple

import numpy as np

from .beliefs import GameParameter, f_B, f_T, orbit_points, rung_weight
from .errors import ConvergenceError, DomainError
from .precision import to_float

__all__ = [
    "HiddenState",
    "SigmaStarAction",
    "LadderValue",
    "sigma_star_prob_T",
    "sigma_star_action",
    "one_step_payoffs",
    "value_ladder",
    "value_matrix",
    "matrix_series_terms",
    "ladder_stationary",
    "U_matrix",
    "p_star",
    "p_star_beliefs",
]


class HiddenState(enum.Enum):
    LOW = "s_low"    # payoff matrix [[1, 0], [0, 0]]
    HIGH = "s_high"  # payoff matrix [[0, 0], [0, 1]]

    @classmethod
    def coerce(cls, state) -> "HiddenState":
        if isinstance(state, cls):
            return state
        text = str(state).lower()
        if text in ("s_low", "low", "0", "s_underline"):
            return cls.LOW
        if text in ("s_high", "high", "1", "s_bar"):
            return cls.HIGH
        raise DomainError(f"unknown hidden state {state!r}")


def sigma_star_prob_T(state, theta: Any) -> Any:
    """Probability that the ladder strategy plays Top in ``state`` at belief ``theta``."""
    state = HiddenState.coerce(state)
    if not (0 <= theta <= 1):
        raise DomainError("belief must lie in [0, 1]")
    if 2 * theta <= 1:
        if state is HiddenState.LOW:
            return theta * 0 + 1
        return (1 - 2 * theta) / (1 - theta)
    if state is HiddenState.LOW:
        return (1 - theta) / theta
    return theta * 0


@dataclass(frozen=True)
class SigmaStarAction:
    prob_T: Any
    update_T: Any
    update_B: Any


def sigma_star_action(state, theta: Any, P) -> SigmaStarAction:
    P = GameParameter.make(P)
    return SigmaStarAction(sigma_star_prob_T(state, theta), f_T(theta, P), f_B(theta, P))


def one_step_payoffs(theta: Any) -> Tuple[Any, Any]:
    """Expected one-step gain of the ladder strategy against L and against R.

    Player 2 believes the low state with probability ``theta``; Player 1 wins
    on (low, T, L) and (high, B, R).
    """
    t_low = sigma_star_prob_T(HiddenState.LOW, theta)
    t_high = sigma_star_prob_T(HiddenState.HIGH, theta)
    vs_L = theta * t_low
    vs_R = (1 - theta) * (1 - t_high)
    return vs_L, vs_R


@dataclass(frozen=True)
class LadderValue:
    """Truncated ladder series ``1 + u_0 + u_0 u_1 + ...`` and its reciprocal."""

    u: Tuple[Any, ...]
    partial_sums: Tuple[Any, ...]
    v: Any
    tail_bound: Any

    @property
    def inverse(self) -> Any:
        return self.partial_sums[-1]

    @property
    def terms(self) -> int:
        return len(self.u)


def value_ladder(P, tol: float = 1e-12, max_terms: int = 100_000) -> LadderValue:
    """Long-run value of the ladder strategy.

    Terms are added until the remaining tail, bounded by
    ``(u_0 ... u_{N-1}) * p / (1 - p)``, drops below ``tol``.  The tail bound
    holds because every ``u_k`` lies in ``[1/2, p]``.
    """
    P = GameParameter.make(P)
    if tol <= 0:
        raise DomainError("tol must be positive")
    p = P.p
    ratio = p / (1 - p)
    tol = P.num(tol)
    us: List[Any] = []
    sums: List[Any] = [P.num(1)]
    prod = P.num(1)
    n = 64
    while True:
        pts = orbit_points(p, n, P)
        for t in pts[len(us):n]:
            u = rung_weight(t)
            us.append(u)
            prod = prod * u
            sums.append(sums[-1] + prod)
            tail = prod * ratio
            if tail < tol:
                return LadderValue(tuple(us), tuple(sums), 1 / sums[-1], tail)
        if n >= max_terms:
            raise ConvergenceError(f"ladder series needs more than {max_terms} terms")
        n = min(2 * n, max_terms)


def U_matrix(eps: int, P) -> Tuple[Tuple[Any, Any], Tuple[Any, Any]]:
    """Recursion matrix advancing ``(a_n, b_n)`` on side ``eps``."""
    P = GameParameter.make(P)
    p = P.p
    one, zero = p * 0 + 1, p * 0
    if eps:
        return ((3 * p - 1, -(2 * p - 1)), (one, zero))
    return ((3 * p - 2, 1 - p), (-one, one))


def matrix_series_terms(P, n_terms: int) -> List[Any]:
    """``[b_1, ..., b_{n_terms}]`` where ``b_{n+1} = (0 1) U_{eps_n} ... U_{eps_0} (p 1)^T``.

    The side ``eps_n`` is read off the running vector itself
    (``2 a_n >= b_n``), so this route never touches the orbit map.
    """
    P = GameParameter.make(P)
    if n_terms < 0:
        raise DomainError("n_terms must be non-negative")
    a, b = P.p, P.num(1)
    out = []
    for _ in range(n_terms):
        (m00, m01), (m10, m11) = U_matrix(1 if 2 * a >= b else 0, P)
        a, b = m00 * a + m01 * b, m10 * a + m11 * b
        out.append(b)
    return out


def value_matrix(P, n_terms: int) -> Any:
    """Partial sum ``(0 1)(I + U_{eps_0} + U_{eps_1} U_{eps_0} + ...)(p 1)^T``.

    ``n_terms`` counts the matrix products after the identity; the result
    approximates ``1 / v``.
    """
    if n_terms < 1:
        raise DomainError("n_terms must be at least 1")
    P = GameParameter.make(P)
    total = P.num(1)
    for b in matrix_series_terms(P, n_terms):
        total = total + b
    return total


def ladder_stationary(P, n_max: int = None, tol: float = 1e-15) -> np.ndarray:
    """Stationary law of the ladder chain: ``pi_n`` proportional to ``u_0 ... u_{n-1}``.

    Without ``n_max`` the ladder is cut once the neglected mass is below
    ``tol``.  Returned as float64 and normalized.
    """
    P = GameParameter.make(P)
    if n_max is None:
        lv = value_ladder(P, tol=tol)
        weights = [1.0] + [to_float(x) for x in np.cumprod([to_float(u) for u in lv.u])]
    else:
        if n_max < 1:
            raise DomainError("n_max must be at least 1")
        pts = orbit_points(P.p, n_max - 1, P)
        weights = [1.0]
        prod = 1.0
        for t in pts[: n_max - 1]:
            prod *= to_float(rung_weight(t))
            weights.append(prod)
    pi = np.asarray(weights, dtype=float)
    return pi / pi.sum()


P_STAR_POLY = (9, -13, 6, -1)


def p_star(precision=None) -> Any:
    """The real root of ``9x^3 - 13x^2 + 6x - 1`` near 0.7589.

    At this parameter the ladder visits only four beliefs and a four-state
    response makes the ladder strategy optimal.
    """
    from .precision import Precision

    prec = Precision.parse(precision)
    if prec.kind == "float64":
        roots = np.roots(P_STAR_POLY)
        real = [r.real for r in roots if abs(r.imag) < 1e-12 and 0.5 < r.real < 1]
        if len(real) != 1:
            raise ConvergenceError("expected exactly one real root in (1/2, 1)")
        # one Newton step to polish
        x = real[0]
        f = ((9 * x - 13) * x + 6) * x - 1
        df = (27 * x - 26) * x + 6
        return float(x - f / df)
    ctx = prec.ctx if prec.kind == "bigfloat" else Precision.parse("bigfloat").ctx
    root = ctx.findroot(lambda x: ((9 * x - 13) * x + 6) * x - 1, ctx.mpf("0.7589"))
    if prec.kind == "rational":
        raise DomainError("the root is irrational; use float64 or bigfloat")
    return root


def p_star_beliefs(P) -> Tuple[Any, Any, Any, Any]:
    """``(1 - p, f_T(1 - p), f_B(p), p)``: the four ladder beliefs at ``p*``."""
    P = GameParameter.make(P)
    return (1 - P.p, f_T(1 - P.p, P), f_B(P.p, P), P.p)
