"""Player 2's candidate response ``x(theta)`` and the relative-score functions.

The relative scores ``(G, H)`` of the two hidden states satisfy a
contraction-driven recursion along the orbit of the belief::

    (G, H)(theta) = A_eps (G, H)(phi(theta)) - v (1, 1) + (1 - gamma Z) b_eps

Unrolling it along the orbit of ``p`` gives the vector ``w`` and then the
pair ``(v, Z)``; unrolling along any other belief gives ``G`` and ``H`` there,
and ``x`` follows.  The ladder strategy is a best response to ``x`` exactly
when a short list of inequalities on ``G`` hold, which
:func:`verify_inequalities` checks numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from .beliefs import GameParameter, orbit_points, phi, phi_preimages, rung_weight
from .errors import ConvergenceError, DomainError, NoContractionError
from .precision import to_float
from .sigma_star import U_matrix

__all__ = [
    "ResponseMatrices",
    "ResponseSolution",
    "InequalityCheck",
    "InequalityReport",
    "FixedPointTable",
    "CocycleTerm",
    "response_matrices",
    "contraction_factor",
    "compute_w",
    "solve_vZ",
    "eval_GH",
    "eval_GH_grid",
    "eval_x",
    "x_grid",
    "solve_response",
    "verify_inequalities",
    "fixed_point_L",
    "apply_L",
    "conjugation_check",
    "jump_cocycle",
]

Mat = Tuple[Tuple[Any, Any], Tuple[Any, Any]]
Vec = Tuple[Any, Any]

HALF_PREIMAGE_TOL = 1e-13
ONE_SIDED_STEP = 1e-9


def _mm(X: Mat, Y: Mat) -> Mat:
    return (
        (X[0][0] * Y[0][0] + X[0][1] * Y[1][0], X[0][0] * Y[0][1] + X[0][1] * Y[1][1]),
        (X[1][0] * Y[0][0] + X[1][1] * Y[1][0], X[1][0] * Y[0][1] + X[1][1] * Y[1][1]),
    )


def _mv(X: Mat, y: Vec) -> Vec:
    return (X[0][0] * y[0] + X[0][1] * y[1], X[1][0] * y[0] + X[1][1] * y[1])


def _spectral_norm(M: Mat, P: GameParameter) -> Any:
    (a, b), (c, d) = M
    fro = a * a + b * b + c * c + d * d
    det = a * d - b * c
    disc = fro * fro - 4 * det * det
    if disc < 0:  # rounding only; the discriminant is a sum of squares
        disc = disc * 0
    return P.precision.sqrt((fro + P.precision.sqrt(disc)) / 2)


@dataclass(frozen=True)
class ResponseMatrices:
    """``A_0, A_1, b_0, b_1`` and the contraction constant ``max ||A_eps||_2``."""

    A0: Mat
    A1: Mat
    b0: Vec
    b1: Vec
    contraction_factor: Any

    def A(self, eps: int) -> Mat:
        return self.A1 if eps else self.A0

    def b(self, eps: int) -> Vec:
        return self.b1 if eps else self.b0


def response_matrices(P) -> ResponseMatrices:
    P = GameParameter.make(P)
    p, g = P.p, P.gamma
    one, zero = p * 0 + 1, p * 0
    A0 = ((g, -g), (1 - p, p))
    A1 = ((p, 1 - p), (-g, g))
    alpha = max(_spectral_norm(A0, P), _spectral_norm(A1, P))
    return ResponseMatrices(A0, A1, (one, zero), (zero, one), alpha)


def contraction_factor(P) -> Any:
    """Largest spectral norm of ``A_0`` and ``A_1``; below 1 up to p ~ 0.7887."""
    return response_matrices(P).contraction_factor


def _require_contraction(M: ResponseMatrices, P: GameParameter) -> float:
    alpha = to_float(M.contraction_factor)
    if alpha >= 1:
        raise NoContractionError(
            f"response matrices do not contract at p={to_float(P.p):.10g} (norm {alpha:.6g})"
        )
    return alpha


def _terms_for(alpha: float, scale: float, tol: float) -> int:
    # smallest K with alpha**K * scale < tol
    if scale <= tol:
        return 1
    return int(math.ceil(math.log(tol / scale) / math.log(alpha))) + 1


def compute_w(P, tol: float = 1e-14) -> Vec:
    """``w = (I + A_{eps_0} + A_{eps_0} A_{eps_1} + ...)(1, 1)^T`` along the orbit of ``p``.

    Truncated once ``alpha**n * sqrt(2) / (1 - alpha) < tol``.
    """
    P = GameParameter.make(P)
    if tol <= 0:
        raise DomainError("tol must be positive")
    M = response_matrices(P)
    alpha = _require_contraction(M, P)
    n = _terms_for(alpha, math.sqrt(2) / (1 - alpha), tol)
    pts = orbit_points(P.p, n, P)
    half = P.half
    one = P.num(1)
    prod: Mat = ((one, one * 0), (one * 0, one))
    w1, w2 = one, one
    for t in pts[:n]:
        prod = _mm(prod, M.A(1 if t >= half else 0))
        w1 = w1 + prod[0][0] + prod[0][1]
        w2 = w2 + prod[1][0] + prod[1][1]
    return (w1, w2)


def solve_vZ(P, tol: float = 1e-14) -> Tuple[Any, Any]:
    """``v = 1 / (p w_1 + (1 - p) w_2)`` and ``Z = (w_1 - w_2) v / 2``."""
    P = GameParameter.make(P)
    w1, w2 = compute_w(P, tol)
    v = 1 / (P.p * w1 + (1 - P.p) * w2)
    return v, (w1 - w2) * v / 2


def _gh_half(P: GameParameter, v, Z) -> Vec:
    val = P.half - v - P.gamma * Z
    return (val, val)


def _gh_scale(alpha: float, v, Z, P) -> float:
    # sup-norm bound on (G, H), used to size truncations
    return math.sqrt(2) * (abs(to_float(v)) / (1 - alpha) + abs(1 - to_float(P.gamma * Z)) + 1)


def eval_GH(theta: Any, P, v: Any, Z: Any, tol: float = 1e-13, n_terms: Optional[int] = None) -> Vec:
    """Relative scores ``(G(theta), H(theta))``.

    The recursion is unrolled along the orbit of ``theta`` until the
    neglected part is below ``tol`` (or for ``n_terms`` steps).  An orbit that
    lands exactly on ½ is closed off with the special value
    ``G(1/2) = H(1/2) = 1/2 - v - gamma Z``.
    """
    P = GameParameter.make(P)
    theta = P.num(theta) if isinstance(theta, (int, float, str, Fraction)) and not isinstance(theta, type(P.p)) else theta
    if not (0 <= theta <= 1):
        raise DomainError("belief must lie in [0, 1]")
    M = response_matrices(P)
    alpha = _require_contraction(M, P)
    if n_terms is None:
        n_terms = _terms_for(alpha, _gh_scale(alpha, v, Z, P), tol)
    half = P.half
    c = 1 - P.gamma * Z
    one = P.num(1)
    zero = one * 0
    prod: Mat = ((one, zero), (zero, one))
    acc = (zero, zero)
    t = theta
    for _ in range(n_terms):
        if t == half:
            X = _mv(prod, _gh_half(P, v, Z))
            return (acc[0] + X[0], acc[1] + X[1])
        eps = 1 if t >= half else 0
        b = M.b(eps)
        step = (-v + c * b[0], -v + c * b[1])
        s = _mv(prod, step)
        acc = (acc[0] + s[0], acc[1] + s[1])
        prod = _mm(prod, M.A(eps))
        t = phi(t, P)
    return acc


def _phi_array(t: np.ndarray, p: float) -> np.ndarray:
    g = 2 * p - 1
    hi = t >= 0.5
    out = np.empty_like(t)
    out[hi] = (3 * p - 1) - g / t[hi]
    lo = ~hi
    tl = t[lo]
    out[lo] = (p * tl + (1 - p) * (1 - 2 * tl)) / (1 - tl)
    return out


def eval_GH_grid(thetas: Sequence[float], P, v: float, Z: float, tol: float = 1e-13) -> np.ndarray:
    """Vectorized float64 version of :func:`eval_GH`; returns an ``(n, 2)`` array."""
    P = GameParameter.make(P)
    p = to_float(P.p)
    g = 2 * p - 1
    v = to_float(v)
    Z = to_float(Z)
    M = response_matrices(to_float(P.p))
    alpha = _require_contraction(M, P)
    K = _terms_for(alpha, _gh_scale(alpha, v, Z, P), tol)
    t = np.array(thetas, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise DomainError("beliefs must lie in [0, 1]")
    n = t.size
    c = 1 - g * Z
    half_val = 0.5 - v - g * Z
    # running product stored entrywise
    p00 = np.ones(n)
    p01 = np.zeros(n)
    p10 = np.zeros(n)
    p11 = np.ones(n)
    G = np.zeros(n)
    H = np.zeros(n)
    live = np.ones(n, dtype=bool)
    for _ in range(K):
        hit = live & (t == 0.5)
        if hit.any():
            G[hit] += (p00[hit] + p01[hit]) * half_val
            H[hit] += (p10[hit] + p11[hit]) * half_val
            live &= ~hit
            p00[hit] = p01[hit] = p10[hit] = p11[hit] = 0.0
            t[hit] = 0.25  # parked; its product is zero from here on
        hi = t >= 0.5
        s0 = np.where(hi, -v, -v + c)
        s1 = np.where(hi, -v + c, -v)
        G += p00 * s0 + p01 * s1
        H += p10 * s0 + p11 * s1
        a00 = np.where(hi, p, g)
        a01 = np.where(hi, 1 - p, -g)
        a10 = np.where(hi, -g, 1 - p)
        a11 = np.where(hi, g, p)
        p00, p01, p10, p11 = (
            p00 * a00 + p01 * a10,
            p00 * a01 + p01 * a11,
            p10 * a00 + p11 * a10,
            p10 * a01 + p11 * a11,
        )
        t = _phi_array(t, p)
    return np.column_stack([G, H])


def eval_x(theta: Any, P, v: Any, Z: Any, tol: float = 1e-13) -> Any:
    """Player 2's probability of playing L at belief ``theta``.

    Solving the score equations for ``x`` gives ``G + v + gamma Z`` above ½
    and ``1 - (H + v + gamma Z)`` below it; with this split the inequality
    set is exactly the condition ``0 <= x <= 1`` plus the deviation checks.

    Values outside ``[0, 1]`` are returned as computed; they show up as
    failures in the inequality report rather than as exceptions.
    """
    P = GameParameter.make(P)
    theta = P.num(theta) if not isinstance(theta, type(P.p)) else theta
    half = P.half
    gz = P.gamma * Z
    if theta == half:
        return half
    G, H = eval_GH(theta, P, v, Z, tol)
    if theta > half:
        return G + v + gz
    return 1 - (H + v + gz)


def x_grid(thetas: Sequence[float], P, v: float, Z: float, tol: float = 1e-13) -> np.ndarray:
    P = GameParameter.make(P)
    t = np.asarray(thetas, dtype=float)
    GH = eval_GH_grid(t, P, v, Z, tol)
    gz = to_float(P.gamma) * to_float(Z)
    v = to_float(v)
    x = np.where(t > 0.5, GH[:, 0] + v + gz, 1 - (GH[:, 1] + v + gz))
    return np.where(t == 0.5, 0.5, x)


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    margin: float
    passed: bool
    where: Optional[float] = None


@dataclass(frozen=True)
class InequalityReport:
    """Minimum margin of every inequality over the evaluation set."""

    checks: Tuple[InequalityCheck, ...]
    n_points: int
    half_preimage: bool = False

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> InequalityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "n_points": self.n_points,
            "half_preimage": self.half_preimage,
            "checks": [
                {"name": c.name, "margin": c.margin, "passed": c.passed, "where": c.where}
                for c in self.checks
            ],
        }


@dataclass(frozen=True)
class ResponseSolution:
    """Everything the solver knows about one ``p``; immutable once built."""

    P: GameParameter
    v: Any
    Z: Any
    w: Vec
    x_table: Tuple[Tuple[float, float], ...]
    inequality_report: Optional[InequalityReport] = None
    half_preimage: bool = False
    tol: float = 1e-13

    def G(self, theta) -> Any:
        return eval_GH(theta, self.P, self.v, self.Z, self.tol)[0]

    def H(self, theta) -> Any:
        return eval_GH(theta, self.P, self.v, self.Z, self.tol)[1]

    def x(self, theta) -> Any:
        return eval_x(theta, self.P, self.v, self.Z, self.tol)

    def to_dict(self) -> dict:
        prec = self.P.precision
        return {
            "p": prec.format(self.P.p),
            "precision": str(prec),
            "v": to_float(self.v),
            "Z": to_float(self.Z),
            "w": [to_float(self.w[0]), to_float(self.w[1])],
            "half_preimage": self.half_preimage,
            "x_table": [[t, x] for t, x in self.x_table],
            "inequalities": None if self.inequality_report is None else self.inequality_report.to_dict(),
        }


def _orbit_beliefs(P: GameParameter, depth: int) -> List[float]:
    pts = [to_float(t) for t in orbit_points(P.p, depth, P)]
    return sorted(set(pts + [1 - t for t in pts]))


def _is_half_preimage(P: GameParameter, depth: int) -> bool:
    pts = orbit_points(P.p, depth, P)
    return any(abs(to_float(t) - 0.5) < HALF_PREIMAGE_TOL for t in pts)


def solve_response(P, tol: float = 1e-13, grid: int = 2000, depth: int = 60, verify: bool = True) -> ResponseSolution:
    """Build ``(v, Z, w)``, tabulate ``x`` on the ladder beliefs, and check the inequalities."""
    P = GameParameter.make(P)
    w = compute_w(P, min(tol, 1e-14))
    v = 1 / (P.p * w[0] + (1 - P.p) * w[1])
    Z = (w[0] - w[1]) * v / 2
    flagged = _is_half_preimage(P, depth)
    beliefs = _orbit_beliefs(P, depth)
    xs = x_grid(beliefs, P, v, Z, tol)
    sol = ResponseSolution(P, v, Z, w, tuple(zip(beliefs, map(float, xs))), None, flagged, tol)
    if not verify:
        return sol
    report = verify_inequalities(P, sol, grid=grid, depth=depth)
    return ResponseSolution(P, v, Z, w, sol.x_table, report, flagged, tol)


def verify_inequalities(P, solution: ResponseSolution, grid: int = 2000, depth: int = 60, slack: float = 1e-9) -> InequalityReport:
    """Check the inequality set and the monotonicity of ``G``.

    ``G`` is evaluated on a uniform grid of ``[1 - p, p]`` together with the
    orbit points of ``p`` and ``1 - p``.  Each entry records the smallest
    margin found; monotonicity allows increases of at most ``slack``.
    """
    P = GameParameter.make(P)
    p = to_float(P.p)
    g = 2 * p - 1
    v = to_float(solution.v)
    Z = to_float(solution.Z)
    gz = g * Z
    orbit_pts = _orbit_beliefs(P, depth)
    pts = np.unique(np.concatenate([np.linspace(1 - p, p, grid + 1), orbit_pts]))
    GH = eval_GH_grid(pts, P, v, Z, solution.tol)
    G = GH[:, 0]
    if solution.half_preimage:
        # G at a preimage of 1/2 is the average of its one-sided limits
        on_orbit = np.isin(pts, orbit_pts)
        lo = eval_GH_grid(np.clip(pts[on_orbit] - ONE_SIDED_STEP, 0, 1), P, v, Z, solution.tol)[:, 0]
        hi = eval_GH_grid(np.clip(pts[on_orbit] + ONE_SIDED_STEP, 0, 1), P, v, Z, solution.tol)[:, 0]
        G[on_orbit] = 0.5 * (lo + hi)

    def check(name, values, where):
        if values.size == 0:
            return InequalityCheck(name, math.inf, True, None)
        i = int(np.argmin(values))
        m = float(values[i])
        return InequalityCheck(name, m, m >= 0, float(where[i]))

    below = pts < 0.5
    above = pts > 0.5
    x = np.where(above, G + v + gz, 1 - (GH[:, 1] + v + gz))
    x = np.where(pts == 0.5, 0.5, x)
    increases = np.diff(G)
    worst = int(np.argmax(increases)) if increases.size else 0
    mono_margin = float(-increases[worst]) if increases.size else 0.0
    checks = (
        check("G >= gamma*Z - v (theta < 1/2)", G[below] - (gz - v), pts[below]),
        check("G >= -gamma*Z - v (theta > 1/2)", G[above] - (-gz - v), pts[above]),
        check("G <= 1 - gamma*Z - v (theta > 1/2)", (1 - gz - v) - G[above], pts[above]),
        InequalityCheck("4*gamma*Z <= 1", 1 - 4 * gz, 1 - 4 * gz >= 0),
        check("x >= 0", x, pts),
        check("x <= 1", 1 - x, pts),
        InequalityCheck("Z > 0", Z, Z > 0),
        InequalityCheck("G non-increasing", mono_margin, mono_margin >= -slack, float(pts[worst]) if increases.size else None),
    )
    return InequalityReport(checks, int(pts.size), solution.half_preimage)


@dataclass(frozen=True)
class FixedPointTable:
    """Iterates of the recursion operator on orbit chains of a belief grid.

    ``chains[i, j]`` is ``phi^j(thetas[i])``; ``values[i, j]`` approximates
    ``(G, H)`` there.  Column 0 is the fixed point on the requested grid.
    """

    thetas: np.ndarray
    chains: np.ndarray
    values: np.ndarray
    iterations: int
    last_step: float

    @property
    def G(self) -> np.ndarray:
        return self.values[:, 0, 0]

    @property
    def H(self) -> np.ndarray:
        return self.values[:, 0, 1]


def _chains(thetas: np.ndarray, p: float, length: int) -> np.ndarray:
    out = np.empty((thetas.size, length))
    t = thetas.astype(float).copy()
    for j in range(length):
        out[:, j] = t
        t = _phi_array(t, p)
    return out


def apply_L(values: np.ndarray, chains: np.ndarray, P, v: float, Z: float) -> np.ndarray:
    """One application of the recursion operator to a chain table.

    ``values[:, j]`` is read as the function at ``chains[:, j]``; the value
    beyond the last column is taken to be zero.
    """
    P = GameParameter.make(P)
    p = to_float(P.p)
    g = 2 * p - 1
    v = to_float(v)
    c = 1 - g * to_float(Z)
    nxt = np.zeros_like(values)
    nxt[:, :-1] = values[:, 1:]
    hi = chains >= 0.5
    a00 = np.where(hi, p, g)
    a01 = np.where(hi, 1 - p, -g)
    a10 = np.where(hi, -g, 1 - p)
    a11 = np.where(hi, g, p)
    out = np.empty_like(values)
    out[..., 0] = a00 * nxt[..., 0] + a01 * nxt[..., 1] - v + np.where(hi, 0.0, c)
    out[..., 1] = a10 * nxt[..., 0] + a11 * nxt[..., 1] - v + np.where(hi, c, 0.0)
    return out


def fixed_point_L(P, v: float, Z: float, tol: float = 1e-10, thetas: Optional[Sequence[float]] = None,
                  grid: int = 1000, max_iter: int = 10_000) -> FixedPointTable:
    """Iterate the recursion operator from the zero function until it settles.

    Stops when successive tables differ by less than ``tol * (1 - alpha)`` in
    sup norm, which bounds the distance to the fixed point by ``tol``.
    """
    P = GameParameter.make(P)
    p = to_float(P.p)
    M = response_matrices(P)
    alpha = _require_contraction(M, P)
    if thetas is None:
        thetas = np.linspace(1 - p, p, grid)
    thetas = np.asarray(thetas, dtype=float)
    length = _terms_for(alpha, _gh_scale(alpha, v, Z, P), tol * (1 - alpha)) + 1
    chains = _chains(thetas, p, length)
    X = np.zeros((thetas.size, length, 2))
    target = tol * (1 - alpha)
    for it in range(1, max_iter + 1):
        Y = apply_L(X, chains, P, v, Z)
        step = float(np.max(np.abs(Y - X)))
        X = Y
        if step < target:
            return FixedPointTable(thetas, chains, X, it, step)
    raise ConvergenceError(f"operator iteration did not settle in {max_iter} steps")


def conjugation_check(P, atol: float = 1e-14) -> bool:
    """``[[1,0],[1,1]] A_eps^T [[1,0],[-1,1]] == U_eps`` for both sides."""
    P = GameParameter.make(P)
    M = response_matrices(P)
    one = P.num(1)
    zero = one * 0
    L = ((one, zero), (one, one))
    R = ((one, zero), (-one, one))
    for eps in (0, 1):
        A = M.A(eps)
        At = ((A[0][0], A[1][0]), (A[0][1], A[1][1]))
        lhs = _mm(_mm(L, At), R)
        U = U_matrix(eps, P)
        for i in range(2):
            for j in range(2):
                d = lhs[i][j] - U[i][j]
                if P.precision.is_exact:
                    if d != 0:
                        return False
                elif abs(to_float(d)) > atol:
                    return False
    return True


@dataclass(frozen=True)
class CocycleTerm:
    """Transported jump at a depth-``n`` preimage ``t`` of ½."""

    t: Any
    depth: int
    transported: Vec
    product_form: Vec


def jump_cocycle(P, depth: int = 12) -> List[CocycleTerm]:
    """Transport the jump direction ``(-1/2, 1/2)`` at ½ back to every preimage.

    For ``t`` with ``phi^n(t) = 1/2`` and ``theta_i = phi^(n-i)(t)``, returns
    ``A_{eps_n} ... A_{eps_1} (-1/2, 1/2)`` next to the scalar form
    ``prod gamma / max(theta_i, 1 - theta_i) * (t - 1, t)``.  Preimages are
    restricted to ``[1 - p, p]``.
    """
    P = GameParameter.make(P)
    if depth < 0:
        raise DomainError("depth must be non-negative")
    M = response_matrices(P)
    half = P.half
    lo, hi = 1 - P.p, P.p
    out: List[CocycleTerm] = []
    start = (-half, half)
    level = [(half, start, P.num(1))]
    for n in range(1, depth + 1):
        nxt = []
        for y, vec, weight in level:
            for t in phi_preimages(y, P):
                if not (lo <= t <= hi):
                    continue
                eps = 1 if t >= half else 0
                new_vec = _mv(M.A(eps), vec)
                new_w = weight * P.gamma / rung_weight(t)
                nxt.append((t, new_vec, new_w))
                out.append(CocycleTerm(t, n, new_vec, (new_w * (t - 1), new_w * t)))
        level = nxt
    return out
