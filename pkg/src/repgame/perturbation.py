"""A perturbed ladder strategy that can beat the ladder strategy for larger p.

At the rung ``theta~ = phi^k0(1 - p)`` (and its mirror ``1 - theta~``) the
informed player shades the ladder move by ``epsilon``.  The one-step payoff
there drops to ``(1 - eps) theta~`` but the belief lands on a better orbit.
The long-run value follows from the invariant measure of the resulting
ladder-with-branch chain, and the comparison with the unperturbed value
reduces to the sign of a single margin built from ladder weights ``w``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .beliefs import GameParameter, orbit_points, phi, rung_weight
from .errors import DomainError, InconclusiveError
from .precision import to_float

__all__ = [
    "PerturbationConfig",
    "PerturbationReport",
    "InvariantMeasure",
    "perturbed_beliefs",
    "ladder_weight",
    "lemma_margin",
    "perturbed_value",
    "invariant_measure",
    "margin_curve",
    "perturbed_action_probs",
]

log = logging.getLogger(__name__)

ORBIT_COLLISION_TOL = 1e-12


@dataclass(frozen=True)
class PerturbationConfig:
    """Rung ``k0``, shading ``epsilon`` and the truncation ``terms`` of every ``w`` sum.

    ``terms=None`` picks 50 in float64 and 200 otherwise.
    """

    k0: int
    epsilon: Any
    terms: Optional[int] = None
    precision: Optional[str] = None

    def __post_init__(self):
        if self.k0 < 0:
            raise DomainError("k0 must be non-negative")
        try:
            eps = float(self.epsilon)
        except (TypeError, ValueError):
            raise DomainError(f"epsilon must be a number, got {self.epsilon!r}") from None
        if not (0 <= eps < 1):
            raise DomainError("epsilon must lie in [0, 1)")
        if self.terms is not None and self.terms < 1:
            raise DomainError("terms must be at least 1")

    def resolve_terms(self, P: GameParameter) -> int:
        if self.terms is not None:
            return self.terms
        return 50 if P.precision.kind == "float64" else 200


@dataclass(frozen=True)
class PerturbationReport:
    """All intermediate quantities of one comparison.

    ``verdict`` is ``"better"``, ``"worse"`` or ``"inconclusive"``; the margin
    is only trusted when it exceeds ``tail_bound``.
    """

    p: Any
    k0: int
    epsilon: Any
    theta_tilde: Any
    theta_tilde_eps: Any
    p_eps: Any
    w_values: Dict[str, Any]
    lemma_lhs: Any
    lemma_rhs: Any
    margin: Any
    v_star: Any
    v_perturbed: Any
    tail_bound: Any
    verdict: str
    precision: str
    warnings: Tuple[str, ...] = ()

    @property
    def value_difference(self) -> Any:
        return self.v_perturbed - self.v_star

    def to_dict(self) -> dict:
        f = to_float
        return {
            "p": f(self.p),
            "k0": self.k0,
            "epsilon": f(self.epsilon),
            "precision": self.precision,
            "theta_tilde": f(self.theta_tilde),
            "theta_tilde_eps": f(self.theta_tilde_eps),
            "p_eps": f(self.p_eps),
            "w_values": {k: f(v) for k, v in self.w_values.items()},
            "lemma_lhs": f(self.lemma_lhs),
            "lemma_rhs": f(self.lemma_rhs),
            "margin": f(self.margin),
            "v_star": f(self.v_star),
            "v_perturbed": f(self.v_perturbed),
            "value_difference": f(self.value_difference),
            "larger": "perturbed" if self.value_difference > 0 else "ladder" if self.value_difference < 0 else "equal",
            "tail_bound": f(self.tail_bound),
            "verdict": self.verdict,
            "warnings": list(self.warnings),
        }


def _param(P, cfg: Optional[PerturbationConfig] = None) -> GameParameter:
    prec = None if cfg is None else cfg.precision
    if isinstance(P, GameParameter):
        return P if prec is None else GameParameter.make(P.precision.format(P.p), prec)
    return GameParameter.make(P, prec)


def _theta_tilde(P: GameParameter, k0: int) -> Any:
    t = orbit_points(1 - P.p, k0, P)[k0]
    if t >= P.half:
        raise DomainError(f"phi^{k0}(1 - p) = {to_float(t):.12g} is not below 1/2; choose another k0")
    return t


def perturbed_beliefs(P, cfg: PerturbationConfig) -> Tuple[Any, Any, Any]:
    """``(theta~, theta~_eps, p_eps)``.

    ``theta~_eps`` is the belief after Top at ``theta~``; after Bottom the
    belief is ``1 - p_eps``.
    """
    P = _param(P, cfg)
    p = P.p
    eps = P.num(cfg.epsilon)
    tt = _theta_tilde(P, cfg.k0)
    tt_eps = (p * (1 - eps) * tt + (1 - p) * (1 - (2 - eps) * tt)) / (1 - tt)
    p_eps = p * (1 - eps) + (1 - p) * eps
    return tt, tt_eps, p_eps


def ladder_weight(theta: Any, P, terms: int) -> Tuple[Any, Any]:
    """``w(theta) = sum_{n=0}^{terms} prod_{k<n} Theta_k(theta)`` and its tail bound.

    ``Theta_k(theta) = max(phi^k theta, 1 - phi^k theta)`` lies in
    ``[1/2, p]`` for ``k >= 1``, so the neglected tail is at most
    ``(prod_{k<terms} Theta_k) * p / (1 - p)``.
    """
    P = P if isinstance(P, GameParameter) else GameParameter.make(P)
    if terms < 1:
        raise DomainError("terms must be at least 1")
    pts = orbit_points(theta, terms, P)
    total = P.num(1)
    prod = P.num(1)
    for t in pts[:terms]:
        prod = prod * rung_weight(t)
        total = total + prod
    return total, prod * P.p / (1 - P.p)


def _base_products(P: GameParameter, k0: int) -> Tuple[Any, Any]:
    # sum_{n<=k0} prod_{k<n} Theta_k(1-p), and Q = prod_{k<k0} Theta_k(1-p)
    pts = orbit_points(1 - P.p, k0, P)
    s = P.num(1)
    q = P.num(1)
    for t in pts[:k0]:
        q = q * rung_weight(t)
        s = s + q
    return s, q


def _collision_warnings(P: GameParameter, tt, starts: Sequence[Any], terms: int) -> List[str]:
    # the chain is easiest to read when theta~ is not revisited on the branches
    out = []
    for name, start in starts:
        for n, t in enumerate(orbit_points(start, terms, P)):
            if min(abs(to_float(t - tt)), abs(to_float(t - (1 - tt)))) < ORBIT_COLLISION_TOL:
                msg = f"orbit of {name} passes within {ORBIT_COLLISION_TOL:g} of theta~ at step {n}"
                log.warning(msg)
                out.append(msg)
                break
    return out


def lemma_margin(P, cfg: PerturbationConfig, strict: bool = True) -> PerturbationReport:
    """Compare the perturbed strategy with the ladder strategy.

    ``margin = (1 - theta~)(w(phi theta~) - w(theta~_eps))
    - theta~ (w(1 - p_eps) - (1 - eps) w(1 - p))``.  The perturbed strategy
    is better exactly when the margin is positive.  With ``strict`` an
    :class:`InconclusiveError` is raised when ``|margin|`` does not clear the
    truncation budget.
    """
    P = _param(P, cfg)
    terms = cfg.resolve_terms(P)
    eps = P.num(cfg.epsilon)
    tt, tt_eps, p_eps = perturbed_beliefs(P, cfg)
    w_1mp, t1 = ladder_weight(1 - P.p, P, terms)
    w_phi, t2 = ladder_weight(phi(tt, P), P, terms)
    w_tte, t3 = ladder_weight(tt_eps, P, terms)
    w_1mpe, t4 = ladder_weight(1 - p_eps, P, terms)
    lhs = (1 - tt) * (w_phi - w_tte)
    rhs = tt * (w_1mpe - (1 - eps) * w_1mp)
    margin = lhs - rhs
    tail = (1 - tt) * (t2 + t3) + tt * (t4 + (1 - eps) * t1)
    if eps == 0:
        verdict = "equal"
    elif abs(margin) > tail:
        verdict = "better" if margin > 0 else "worse"
    else:
        verdict = "inconclusive"
    # at eps = 0 the branches are the base orbits and revisit theta~ by construction
    warnings = [] if eps == 0 else _collision_warnings(
        P, tt, [("theta~_eps", tt_eps), ("1 - p_eps", 1 - p_eps)], terms)
    v_star = 1 / ladder_weight(P.p, P, terms)[0]
    v_pert = _perturbed_value(P, cfg.k0, eps, tt, w_tte, w_1mpe)
    report = PerturbationReport(
        P.p, cfg.k0, eps, tt, tt_eps, p_eps,
        {"w(1-p)": w_1mp, "w(phi(theta~))": w_phi, "w(theta~_eps)": w_tte, "w(1-p_eps)": w_1mpe},
        lhs, rhs, margin, v_star, v_pert, tail, verdict, str(P.precision), tuple(warnings),
    )
    if strict and verdict == "inconclusive":
        raise InconclusiveError(
            f"|margin| = {abs(to_float(margin)):.3g} does not exceed the tail budget {to_float(tail):.3g}; "
            "raise terms or precision"
        )
    return report


def _perturbed_value(P: GameParameter, k0: int, eps, tt, w_tte, w_1mpe) -> Any:
    s, Q = _base_products(P, k0)
    pi0 = 1 / (s + Q * ((1 - tt) * w_tte + tt * w_1mpe))
    return pi0 * (1 + (1 - eps) * tt * Q)


def perturbed_value(P, cfg: PerturbationConfig) -> Any:
    """Long-run value ``Pi_0 (1 + (1 - eps) theta~ Q)`` of the perturbed strategy."""
    P = _param(P, cfg)
    terms = cfg.resolve_terms(P)
    eps = P.num(cfg.epsilon)
    tt, tt_eps, p_eps = perturbed_beliefs(P, cfg)
    w_tte, _ = ladder_weight(tt_eps, P, terms)
    w_1mpe, _ = ladder_weight(1 - p_eps, P, terms)
    return _perturbed_value(P, cfg.k0, eps, tt, w_tte, w_1mpe)


@dataclass(frozen=True)
class InvariantMeasure:
    """Stationary masses of the base ladder and of the two branches (truncated)."""

    base: Tuple[Any, ...]       # Pi_0 .. Pi_k0
    branch1: Tuple[Any, ...]    # after Top at theta~
    branch2: Tuple[Any, ...]    # after Bottom at theta~
    total: Any
    balance_residual: Any
    value: Any


def invariant_measure(P, cfg: PerturbationConfig) -> InvariantMeasure:
    """Assemble the invariant measure term by term.

    ``balance_residual`` is the return-flow identity at the base
    (inflow minus ``Pi_0``); it vanishes up to truncation.  ``value`` sums
    the one-step payoffs against the measure directly.
    """
    P = _param(P, cfg)
    terms = cfg.resolve_terms(P)
    eps = P.num(cfg.epsilon)
    tt, tt_eps, p_eps = perturbed_beliefs(P, cfg)
    s, Q = _base_products(P, cfg.k0)
    w_tte, _ = ladder_weight(tt_eps, P, terms)
    w_1mpe, _ = ladder_weight(1 - p_eps, P, terms)
    pi0 = 1 / (s + Q * ((1 - tt) * w_tte + tt * w_1mpe))
    base_pts = orbit_points(1 - P.p, cfg.k0, P)
    base = [pi0]
    for t in base_pts[: cfg.k0]:
        base.append(base[-1] * rung_weight(t))

    def branch(start, mass):
        pts = orbit_points(start, terms, P)
        out = [mass]
        for t in pts[:terms]:
            out.append(out[-1] * rung_weight(t))
        return out, pts

    b1, pts1 = branch(tt_eps, base[-1] * (1 - tt))
    b2, pts2 = branch(1 - p_eps, base[-1] * tt)
    inflow = sum((1 - rung_weight(t)) * m for t, m in zip(base_pts[: cfg.k0], base[:-1]))
    inflow += sum((1 - rung_weight(t)) * m for t, m in zip(pts1, b1))
    inflow += sum((1 - rung_weight(t)) * m for t, m in zip(pts2, b2))
    total = sum(base) + sum(b1) + sum(b2)
    value = inflow + (1 - eps) * tt * base[-1]
    return InvariantMeasure(tuple(base), tuple(b1), tuple(b2), total, inflow - pi0, value)


def margin_curve(P, k0: int, eps_grid: Sequence[float], terms: Optional[int] = None,
                 precision: Optional[str] = None) -> List[Tuple[float, float]]:
    """``(epsilon, margin)`` pairs; the data behind the epsilon sweep."""
    if len(eps_grid) == 0:
        raise DomainError("eps_grid must be non-empty")
    out = []
    for e in eps_grid:
        rep = lemma_margin(P, PerturbationConfig(k0, e, terms, precision), strict=False)
        out.append((float(e), to_float(rep.margin)))
    return out


def perturbed_action_probs(state_low: bool, at_mirror: bool, theta_tilde: Any, eps: Any) -> Any:
    """Probability of Top at ``theta~`` (``at_mirror=False``) or ``1 - theta~``.

    At ``eps = 0`` these are the ladder strategy's probabilities.
    """
    t = theta_tilde
    if not at_mirror:
        return 1 - eps if state_low else (1 - (2 - eps) * t) / (1 - t)
    return (1 - eps) * t / (1 - t) if state_low else eps
