"""Belief updates, the symmetrized map and orbit generation.

Player 2's belief that the hidden state is the low state moves under two
maps, one per action of Player 1.  Composing them with the side of ½ gives the
orbit map ``phi`` whose orbit of ``p`` carries the whole ladder structure.
Folding ``phi`` about ½ gives ``alpha`` on ``[½, 1]``; its inverse branches are
used to enumerate preimages for the pressure sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional, Sequence, Tuple

from .errors import DivergenceError, DomainError, UnsupportedModeError
from .precision import Precision, to_float

__all__ = [
    "GameParameter",
    "BeliefOrbit",
    "f_T",
    "f_B",
    "phi",
    "side",
    "orbit",
    "orbit_points",
    "phi_preimages",
    "alpha",
    "alpha_left_inverse",
    "alpha_right_inverse",
    "alpha_orbit",
    "psi",
    "rung_weight",
]


@dataclass(frozen=True)
class GameParameter:
    """The switching parameter ``p`` together with its numeric context.

    ``gamma = 2p - 1`` is computed in the active arithmetic, so it is exact in
    rational mode.  Use :meth:`make` rather than the constructor.
    """

    p: Any
    gamma: Any
    precision: Precision

    @classmethod
    def make(cls, p: Any, precision: "str | Precision | None" = None) -> "GameParameter":
        if isinstance(p, GameParameter):
            if precision is None:
                return p
            p = p.p
        prec = Precision.parse(precision)
        if prec.is_exact and not isinstance(p, (str, int, Fraction, float)):
            raise UnsupportedModeError(
                f"rational mode needs a rational p, got {type(p).__name__}"
            )
        value = prec.convert(p)
        half = prec.const(1, 2)
        if value == 1:
            raise DivergenceError("p = 1: the state never switches and the ladder never returns")
        if not (half <= value < 1):
            raise DomainError(f"p must lie in [1/2, 1), got {to_float(value)!r}")
        return cls(value, 2 * value - 1, prec)

    @property
    def half(self) -> Any:
        return self.precision.const(1, 2)

    @property
    def two_thirds(self) -> Any:
        return self.precision.const(2, 3)

    def num(self, x: Any) -> Any:
        """Convert ``x`` into this parameter's arithmetic."""
        return self.precision.convert(x)

    def __float__(self) -> float:
        return to_float(self.p)


def _coerce(P) -> GameParameter:
    return P if isinstance(P, GameParameter) else GameParameter.make(P)


def _check_belief(theta: Any) -> None:
    if not (0 <= theta <= 1):
        raise DomainError(f"belief must lie in [0, 1], got {to_float(theta)!r}")


def f_T(theta: Any, P) -> Any:
    """Belief after Player 1 plays Top."""
    P = _coerce(P)
    _check_belief(theta)
    p = P.p
    if theta >= P.half:
        return p
    return (p * theta + (1 - p) * (1 - 2 * theta)) / (1 - theta)


def f_B(theta: Any, P) -> Any:
    """Belief after Player 1 plays Bottom.  Equals ``1 - f_T(1 - theta)``."""
    P = _coerce(P)
    _check_belief(theta)
    p = P.p
    if theta <= P.half:
        return 1 - p
    return (3 * p - 1) - P.gamma / theta


def side(theta: Any, P) -> int:
    """1 when ``theta >= 1/2`` (the ``f_B`` branch of ``phi``), else 0."""
    return 1 if theta >= _coerce(P).half else 0


def phi(theta: Any, P) -> Any:
    """The orbit map: ``f_B`` on ``[1/2, 1]``, ``f_T`` on ``[0, 1/2)``.

    The tie at exactly ½ goes to ``f_B``; both branches give a fully
    revealing move there anyway.
    """
    P = _coerce(P)
    _check_belief(theta)
    p = P.p
    if theta >= P.half:
        return (3 * p - 1) - P.gamma / theta
    return (p * theta + (1 - p) * (1 - 2 * theta)) / (1 - theta)


def rung_weight(theta: Any) -> Any:
    """``max(theta, 1 - theta)``: probability of climbing one more rung."""
    return theta if 2 * theta >= 1 else 1 - theta


@dataclass(frozen=True)
class BeliefOrbit:
    """A finite piece of the orbit ``theta_n = phi^n(theta_0)``.

    ``rational_form`` holds exact pairs ``(a_n, b_n)`` with
    ``theta_n = a_n / b_n`` produced by the 2x2 matrix recursion; it is only
    filled in rational mode.  The pairs are rationals rather than integers
    because the recursion matrices have entries in ``p``.
    """

    start: Any
    points: Tuple[Any, ...]
    sides: Tuple[int, ...]
    rational_form: Optional[Tuple[Tuple[Fraction, Fraction], ...]] = None

    def __len__(self) -> int:
        return len(self.points)

    @property
    def u(self) -> Tuple[Any, ...]:
        """Climb probabilities ``max(theta_n, 1 - theta_n)``."""
        return tuple(rung_weight(t) for t in self.points)


# orbit caches are keyed by (p, start, n, precision); lru_cache is safe for
# concurrent readers and a changed precision is simply a different key
@lru_cache(maxsize=4096)
def _orbit_cached(p, theta0, n: int, precision: Precision) -> Tuple[Any, ...]:
    P = GameParameter(p, 2 * p - 1, precision)
    pts = [theta0]
    t = theta0
    for _ in range(n):
        t = phi(t, P)
        pts.append(t)
    return tuple(pts)


def orbit_points(theta0: Any, n: int, P) -> Tuple[Any, ...]:
    """``(theta_0, ..., theta_n)`` in the parameter's arithmetic, cached."""
    P = _coerce(P)
    if n < 0:
        raise DomainError("orbit length must be non-negative")
    theta0 = P.num(theta0) if not isinstance(theta0, type(P.p)) else theta0
    _check_belief(theta0)
    return _orbit_cached(P.p, theta0, n, P.precision)


@lru_cache(maxsize=1024)
def _matrix_pairs(p: Fraction, theta0: Fraction, n: int):
    a, b = theta0, Fraction(1)
    pairs = [(a, b)]
    for _ in range(n):
        if 2 * a >= b:
            a, b = (3 * p - 1) * a - (2 * p - 1) * b, a
        else:
            a, b = (3 * p - 2) * a + (1 - p) * b, -a + b
        pairs.append((a, b))
    return tuple(pairs)


def orbit(theta0: Any, n: int, P) -> BeliefOrbit:
    """The first ``n`` iterates of ``phi`` starting from ``theta0``.

    In rational mode the points come from the matrix recursion
    ``(a_{n+1}, b_{n+1}) = U_{eps_n} (a_n, b_n)`` and are exact.
    """
    P = _coerce(P)
    if n < 0:
        raise DomainError("orbit length must be non-negative")
    if P.precision.is_exact:
        if not isinstance(P.p, Fraction):
            raise UnsupportedModeError("rational orbits need a rational p")
        theta0 = P.num(theta0)
        _check_belief(theta0)
        pairs = _matrix_pairs(P.p, theta0, n)
        points = tuple(a / b for a, b in pairs)
        sides = tuple(1 if 2 * a >= b else 0 for a, b in pairs)
        return BeliefOrbit(theta0, points, sides, pairs)
    points = orbit_points(theta0, n, P)
    half = P.half
    return BeliefOrbit(points[0], points, tuple(1 if t >= half else 0 for t in points))


def phi_preimages(y: Any, P) -> list:
    """All ``theta`` in ``[0, 1]`` with ``phi(theta) == y``.

    Each branch of ``phi`` is a Moebius map, so each contributes at most one
    preimage.  Returns an empty list when ``gamma == 0`` (``phi`` is constant).
    """
    P = _coerce(P)
    p, g = P.p, P.gamma
    if g == 0:
        return []
    out = []
    den = 3 * p - 1 - y
    if den != 0:
        t = g / den
        if P.half <= t <= 1:
            out.append(t)
    den = 3 * p - 2 + y
    if den != 0:
        t = (y - 1 + p) / den
        if 0 <= t < P.half:
            out.append(t)
    return out


def alpha(t: Any, P) -> Any:
    """``max(phi(t), 1 - phi(t))`` on ``[1/2, 1]``: two Moebius branches split at 2/3."""
    P = _coerce(P)
    if not (P.half <= t <= 1):
        raise DomainError(f"alpha is defined on [1/2, 1], got {to_float(t)!r}")
    p, g = P.p, P.gamma
    if 3 * t < 2:
        return 2 - 3 * p + g / t
    return 3 * p - 1 - g / t


def alpha_left_inverse(y: Any, P) -> Any:
    """Inverse of the decreasing branch of ``alpha`` (values in ``[1/2, 2/3]``)."""
    P = _coerce(P)
    return P.gamma / (y - 2 + 3 * P.p)


def alpha_right_inverse(y: Any, P) -> Any:
    """Inverse of the increasing branch of ``alpha`` (values in ``[2/3, 1]``)."""
    P = _coerce(P)
    return P.gamma / (3 * P.p - 1 - y)


def alpha_orbit(P, n: int, start: Any = None) -> Tuple[Any, ...]:
    """``(p_0, ..., p_n)`` with ``p_{i+1} = alpha(p_i)`` and ``p_0 = p`` by default."""
    P = _coerce(P)
    t = P.p if start is None else P.num(start)
    pts = [t]
    for _ in range(n):
        t = alpha(t, P)
        pts.append(t)
    return tuple(pts)


def psi(t: Any, P) -> Any:
    """The potential ``gamma / t``."""
    P = _coerce(P)
    if t <= 0:
        raise DomainError("psi needs t > 0")
    return P.gamma / t


def orbit_sides(points: Sequence[Any], P) -> Tuple[int, ...]:
    half = _coerce(P).half
    return tuple(1 if t >= half else 0 for t in points)
