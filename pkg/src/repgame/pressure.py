"""Pressure certificates for ``log psi`` under the symmetrized map ``alpha``.

The relative-score function is monotone when the weighted preimage sums
``Z_n = sum_{alpha^n t = 1/2} psi(t) psi(alpha t) ... psi(alpha^{n-1} t)``
decay geometrically.  Partitioning ``[1/2, p]`` at orbit points of ``p`` and
bounding ``psi`` on each piece gives a nonnegative matrix whose spectral
radius bounds the decay rate, so ``rho < 1`` is a certificate.

Three hand-built partitions cover ``(2/3, 0.7190233023]``; a generic
orbit-partition builder handles finer schemes.  Parameter-range claims are
checked by sampling and are flagged as non-rigorous.
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .beliefs import GameParameter, alpha, alpha_left_inverse, alpha_orbit, alpha_right_inverse, psi
from .errors import DomainError, RangeError, UnsupportedModeError
from .precision import Precision, to_float
from .spectral import SpectralEstimate, spectral_radius

__all__ = [
    "PartitionScheme",
    "TransitionBoundMatrix",
    "PressureCertificate",
    "RangeCoverage",
    "preimages",
    "Z_n",
    "partition_matrix",
    "certify_three_interval",
    "certify_nine_interval_a",
    "certify_nine_interval_b",
    "certify_auto",
    "certify_auto_range",
    "certify_range",
    "THREE_INTERVAL_END",
    "NINE_A_END",
    "NINE_B_END",
    "SEAM",
]

log = logging.getLogger(__name__)

THREE_INTERVAL_END = 0.70237758
NINE_A_END = 0.709636979      # printed end of scheme (a), just below p_3 = p_5
SEAM = 0.7096369797874124     # p_3 = p_5, computed; schemes (a) and (b) meet here
NINE_B_END = 0.7190233023     # p_9 = 1/2
TWO_THIRDS = 2.0 / 3.0
MERGE_TOL = 1e-12
FLOAT_DEPTH_LIMIT = 40


@dataclass(frozen=True)
class PartitionScheme:
    """Cut points ``c_0 < ... < c_k`` of ``[1/2, p]``; ``J_i = [c_i, c_{i+1}]``."""

    cut_points: Tuple[Any, ...]
    labels: Tuple[str, ...]

    @property
    def k(self) -> int:
        return len(self.cut_points) - 1

    @property
    def intervals(self) -> List[Tuple[Any, Any]]:
        c = self.cut_points
        return [(c[i], c[i + 1]) for i in range(self.k)]

    def interval_labels(self) -> List[str]:
        return [f"[{self.labels[i]}, {self.labels[i + 1]}]" for i in range(self.k)]


@dataclass(frozen=True)
class TransitionBoundMatrix:
    beta: np.ndarray
    m: np.ndarray
    A: np.ndarray
    rho: float
    estimate: Optional[SpectralEstimate] = None


@dataclass
class PressureCertificate:
    """Outcome of one certification attempt.

    ``passed`` requires ``rho < 1`` together with every entry of ``checks``.
    ``radii`` holds closed-form component radii where a regime has them.
    """

    p_range: Tuple[float, float]
    scheme: Optional[PartitionScheme]
    matrix: Optional[TransitionBoundMatrix]
    checks: List[Tuple[str, bool]]
    passed: bool
    method: str
    radii: Dict[str, float] = field(default_factory=dict)
    rigorous: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def rho(self) -> float:
        if self.matrix is not None:
            return self.matrix.rho
        return max(self.radii.values()) if self.radii else math.nan

    def failed_checks(self) -> List[str]:
        return [name for name, ok in self.checks if not ok]

    def to_dict(self) -> dict:
        out = {
            "p_lo": self.p_range[0],
            "p_hi": self.p_range[1],
            "scheme": self.method,
            "cut_points": None if self.scheme is None else [to_float(c) for c in self.scheme.cut_points],
            "cut_labels": None if self.scheme is None else list(self.scheme.labels),
            "matrix": None if self.matrix is None else self.matrix.A.tolist(),
            "rho": self.rho,
            "radii": dict(self.radii),
            "passed": self.passed,
            "rigorous": self.rigorous,
            "checks": [{"name": n, "ok": ok} for n, ok in self.checks],
            "notes": list(self.notes),
        }
        return out


def _param(P, default_precision=None) -> GameParameter:
    if isinstance(P, GameParameter):
        return P
    return GameParameter.make(P, default_precision)


def preimages(y: Any, n: int, P, forward_tol: float = 1e-10) -> List[Any]:
    """All ``t`` in ``[1/2, p]`` with ``alpha^n(t) = y``.

    Each step inverts both Moebius branches and keeps a candidate only if it
    lies in that branch's domain.  Results are forward-checked.
    """
    P = _param(P)
    if n < 0:
        raise DomainError("depth must be non-negative")
    y = P.num(y) if not isinstance(y, type(P.p)) else y
    if not (P.half <= y <= 1):
        raise DomainError("alpha preimages need y in [1/2, 1]")
    return [t for t, _ in _weighted_preimages(y, n, P, forward_tol)]


def _weighted_preimages(y, n: int, P: GameParameter, forward_tol: float = 1e-10):
    if P.gamma == 0:
        return [] if n > 0 else [(y, P.num(1))]
    half, tt, p = P.half, P.two_thirds, P.p
    level = [(y, P.num(1))]
    for _ in range(n):
        nxt = []
        for z, w in level:
            den = z - 2 + 3 * p
            if den > 0:
                t = alpha_left_inverse(z, P)
                if half <= t < tt:
                    nxt.append((t, w * psi(t, P)))
            den = 3 * p - 1 - z
            if den > 0:
                t = alpha_right_inverse(z, P)
                if tt <= t <= p:
                    nxt.append((t, w * psi(t, P)))
        level = nxt
    out = []
    for t, w in level:
        x = t
        for _ in range(n):
            x = alpha(x, P)
        if abs(to_float(x - y)) < forward_tol:
            out.append((t, w))
        else:
            log.warning("dropping preimage %r: forward error %g", to_float(t), abs(to_float(x - y)))
    return out


def Z_n(n: int, P) -> Any:
    """Weighted count of depth-``n`` preimages of ½; ``log Z_n / n`` estimates the pressure."""
    P = _param(P)
    if n < 1:
        raise DomainError("Z_n needs n >= 1")
    if n > FLOAT_DEPTH_LIMIT and P.precision.kind == "float64":
        raise UnsupportedModeError(f"Z_n beyond depth {FLOAT_DEPTH_LIMIT} needs big-float mode")
    total = P.num(0)
    for _, w in _weighted_preimages(P.half, n, P):
        total = total + w
    return total


def _overlap_tol(P: GameParameter) -> float:
    if P.precision.kind == "float64":
        return 1e-13
    return 10.0 ** -(P.precision.digits - 10)


def partition_matrix(P, scheme: PartitionScheme) -> TransitionBoundMatrix:
    """Multiplicities ``m_ij``, bounds ``beta_i`` and ``A = diag(beta) m`` for a scheme.

    ``alpha`` is monotone on each side of 2/3, so the image of a piece is
    spanned by the images of its endpoints; an interval straddling 2/3 is
    split in two, which is how ``m_ij = 2`` arises.  Coverage means the
    image meets the interior of ``J_j``.
    """
    P = _param(P)
    cuts = list(scheme.cut_points)
    k = len(cuts) - 1
    tt = P.two_thirds
    tol = _overlap_tol(P)
    m = np.zeros((k, k), dtype=int)
    beta = np.zeros(k)
    for i in range(k):
        a, b = cuts[i], cuts[i + 1]
        beta[i] = to_float(psi(a, P))
        pieces = [(a, b)] if (b <= tt or a >= tt) else [(a, tt), (tt, b)]
        for x, y in pieces:
            ia, ib = sorted((alpha(x, P), alpha(y, P)))
            j0 = max(bisect.bisect_right(cuts, ia) - 1, 0)
            j1 = min(bisect.bisect_left(cuts, ib), k)
            for j in range(j0, j1):
                lo = max(ia, cuts[j])
                hi = min(ib, cuts[j + 1])
                if to_float(hi - lo) > tol:
                    m[i, j] += 1
    A = beta[:, None] * m
    est = spectral_radius(A)
    return TransitionBoundMatrix(beta, m, A, est.rho, est)


def _orbit(P: GameParameter, n: int):
    return alpha_orbit(P, n)


def _check_order(chain: Sequence[Tuple[str, Any]], strict: bool = True) -> List[Tuple[str, bool]]:
    out = []
    for (na, a), (nb, b) in zip(chain, chain[1:]):
        ok = a < b if strict else a <= b
        out.append((f"{na} {'<' if strict else '<='} {nb}", bool(ok)))
    return out


def certify_three_interval(P) -> PressureCertificate:
    """Partition ``[1/2, p_1], [p_1, p_2], [p_2, p]``.

    Component radii are ``gamma / p_1`` and ``2 gamma / sqrt(p_2)``; the
    second reaches 1 at p = 0.70237758.
    """
    P = _param(P)
    pf = to_float(P.p)
    if not (TWO_THIRDS < pf < THREE_INTERVAL_END):
        raise RangeError(f"three-interval scheme needs p in (2/3, {THREE_INTERVAL_END}), got {pf!r}")
    o = _orbit(P, 3)
    g = P.gamma
    half = P.half
    checks = [
        ("p1 <= 2/3", bool(o[1] <= P.two_thirds)),
        ("p3 <= p1", bool(o[3] <= o[1])),
        ("1/2 < p1 < p2 < p", bool(half < o[1] < o[2] < o[0])),
    ]
    r1 = to_float(g / o[1])
    r2 = to_float(2 * g / P.precision.sqrt(o[2]))
    beta = np.array([to_float(psi(half, P)), to_float(psi(o[1], P)), to_float(psi(o[2], P))])
    m = np.array([[0, 0, 1], [1, 1, 0], [2, 0, 0]])
    A = beta[:, None] * m
    est = spectral_radius(A)
    scheme = PartitionScheme((half, o[1], o[2], o[0]), ("1/2", "p1", "p2", "p"))
    radii = {"gamma/p1": r1, "2*gamma/sqrt(p2)": r2}
    passed = all(ok for _, ok in checks) and r1 < 1 and r2 < 1
    return PressureCertificate((pf, pf), scheme, TransitionBoundMatrix(beta, m, A, est.rho, est),
                               checks, passed, "three_interval", radii, rigorous=False)


def certify_nine_interval_a(P) -> PressureCertificate:
    """Nine intervals cut at ``p_1 .. p_8`` for the twice-renormalizable range.

    Passes when the ordering chain holds and the three component radii
    ``gamma/p_1``, ``gamma/sqrt(p_3 p_6)`` and the period-4 loop radius are
    all below 1.
    """
    P = _param(P)
    pf = to_float(P.p)
    if not (TWO_THIRDS < pf < SEAM):
        raise RangeError(f"nine-interval scheme (a) needs p in (2/3, {SEAM}), got {pf!r}")
    o = _orbit(P, 9)
    g = P.gamma
    half, tt = P.half, P.two_thirds
    chain = [("1/2", half), ("p7", o[7]), ("p3", o[3]), ("p5", o[5]), ("p9", o[9]), ("p1", o[1]),
             ("p2", o[2]), ("2/3", tt), ("p6", o[6]), ("p4", o[4]), ("p8", o[8]), ("p", o[0])]
    checks = _check_order(chain)
    prec = P.precision
    r1 = to_float(g / o[1])
    r2 = to_float(g / prec.sqrt(o[3] * o[6]))
    loop = (1 / (o[5] * o[2])) * (2 / (half * o[8]) + 1 / (o[7] * o[4]))
    r3 = to_float(g * prec.root(loop, 4))
    cuts = (half, o[7], o[3], o[5], o[1], o[2], o[6], o[4], o[8], o[0])
    labels = ("1/2", "p7", "p3", "p5", "p1", "p2", "p6", "p4", "p8", "p")
    scheme = PartitionScheme(cuts, labels)
    ordered = all(ok for _, ok in checks)
    matrix = partition_matrix(P, scheme) if ordered else None
    radii = {"gamma/p1": r1, "gamma/sqrt(p3*p6)": r2, "principal": r3}
    passed = ordered and max(radii.values()) < 1
    return PressureCertificate((pf, pf), scheme, matrix, checks, passed, "nine_interval_a", radii)


NINE_B_ORDER = ("p9", "p5", "p3", "p7", "p1", "p2", "2/3", "p8", "p4", "p6", "p")
NINE_B_INCREASING = (4, 5, 8)
NINE_B_DECREASING = (3, 6, 7)


def nine_b_matrix(q: Dict[int, float], gamma: float) -> np.ndarray:
    """Principal 8x8 block; rows are ``J_0..J_3, J_5..J_8``."""
    M = np.zeros((8, 8))
    M[0, 7] = 2
    M[1, 6] = q[5]
    M[2, 5] = q[3]
    M[3, 4] = q[7]
    M[4, 0] = 2 * q[2]
    M[4, 1] = q[2]
    M[5, 0] = q[8]
    M[6, 1] = q[4]
    M[6, 2] = q[4]
    M[7, 3] = q[6]
    return gamma * M


def certify_nine_interval_b(p_lo: float, p_hi: float, samples: int = 200,
                            precision: "str | Precision | None" = None) -> PressureCertificate:
    """Range certificate for the once-renormalizable regime.

    Samples ``[p_lo, p_hi]`` to confirm the ordering of ``p_1 .. p_9`` and the
    monotonicity of each ``q_i = 1/p_i``, then substitutes every entry's
    worst case (and the largest ``gamma``) into the 8x8 principal matrix.
    The direction of ``q_2`` is read off the samples.  The lone ``J_4``
    component has radius ``gamma/p_1 < 1`` throughout and is checked too.
    """
    lo, hi = float(p_lo), float(p_hi)
    if lo > hi:
        raise DomainError("p_lo must not exceed p_hi")
    if lo < NINE_A_END - 1e-15 or hi > NINE_B_END + 1e-15:
        raise RangeError(f"nine-interval scheme (b) covers [{NINE_A_END}, {NINE_B_END}], got [{lo}, {hi}]")
    grid = np.unique(np.concatenate([np.linspace(lo, hi, max(samples, 2)), [lo, hi]]))
    Qs = np.empty((grid.size, 10))
    checks: List[Tuple[str, bool]] = []
    order_ok = True
    for r, pv in enumerate(grid):
        P = GameParameter.make(repr(float(pv)), precision)
        o = [to_float(x) for x in _orbit(P, 9)]
        Qs[r] = [1 / x for x in o]
        named = {f"p{i}": o[i] for i in range(1, 10)}
        named.update({"p": o[0], "2/3": TWO_THIRDS})
        # the first link touches equality at the left end (p3 = p5) and the
        # lower bound 1/2 < p9 at the right end; both are allowed as ties
        seq = [("1/2", 0.5)] + [(n, named[n]) for n in NINE_B_ORDER]
        for name, ok in _check_order(seq, strict=False):
            if not ok:
                order_ok = False
                checks.append((f"{name} at p={pv:.12g}", False))
    checks.append(("ordering 1/2 <= p9 <= p5 <= p3 <= p7 <= p1 <= p2 <= 2/3 <= p8 <= p4 <= p6 <= p", order_ok))
    worst: Dict[int, float] = {}
    directions: Dict[int, str] = {}
    for i in range(1, 10):
        d = np.diff(Qs[:, i])
        if grid.size < 2 or np.all(d == 0):
            direction = "constant"
        elif np.all(d >= 0):
            direction = "increasing"
        elif np.all(d <= 0):
            direction = "decreasing"
        else:
            direction = "mixed"
        directions[i] = direction
        worst[i] = float(Qs[:, i].max())
    if grid.size > 1:
        for i in NINE_B_INCREASING:
            checks.append((f"q{i} increasing", directions[i] == "increasing"))
        for i in NINE_B_DECREASING:
            checks.append((f"q{i} decreasing", directions[i] == "decreasing"))
        checks.append((f"q2 monotone ({directions[2]})", directions[2] in ("increasing", "decreasing")))
    gmax = 2 * hi - 1
    A = nine_b_matrix(worst, gmax)
    est = spectral_radius(A)
    r_single = gmax * worst[1]
    checks.append(("gamma/p1 < 1", r_single < 1))
    passed = est.rho < 1 and all(ok for _, ok in checks)
    m = (A > 0).astype(int)
    m[4, 0] = 2
    beta = gmax * np.array([2, worst[5], worst[3], worst[7], worst[2], worst[8], worst[4], worst[6]])
    cert = PressureCertificate(
        (lo, hi), None, TransitionBoundMatrix(beta, m, A, est.rho, est),
        checks, passed, "nine_interval_b", {"principal": est.rho, "gamma/p1": r_single},
        notes=[f"q{i}: {directions[i]}" for i in range(1, 10)],
    )
    return cert


def _auto_cuts(P: GameParameter, depth: int, include_two_thirds: bool) -> PartitionScheme:
    orbit = alpha_orbit(P, depth - 1)
    entries = [(t, f"p{k}" if k else "p") for k, t in enumerate(orbit)]
    entries.append((P.half, "1/2"))
    if include_two_thirds:
        entries.append((P.two_thirds, "2/3"))
    entries.sort(key=lambda e: e[0])
    cuts: List[Any] = []
    labels: List[str] = []
    for t, name in entries:
        if not (P.half <= t <= P.p):
            continue
        if cuts and abs(to_float(t - cuts[-1])) < MERGE_TOL:
            log.warning("merging cut points %s and %s (closer than %g)", labels[-1], name, MERGE_TOL)
            continue
        cuts.append(t)
        labels.append(name)
    return PartitionScheme(tuple(cuts), tuple(labels))


def certify_auto(P, depth: int, include_two_thirds: bool = False,
                 precision: "str | Precision | None" = "bigfloat:256") -> PressureCertificate:
    """Partition ``[1/2, p]`` at ``{alpha^k(p): 0 <= k < depth}`` and ½.

    Orbits are computed in 256-bit arithmetic by default: at depth in the
    hundreds the float64 orbit has lost all accuracy and the resulting
    matrix can cross 1 spuriously.
    """
    if depth < 3:
        raise DomainError("certify_auto needs depth >= 3")
    if isinstance(P, GameParameter):
        P = P if precision is None else GameParameter.make(P.precision.format(P.p), precision)
    else:
        P = GameParameter.make(repr(P) if isinstance(P, float) else P, precision)
    pf = to_float(P.p)
    scheme = _auto_cuts(P, depth, include_two_thirds)
    matrix = partition_matrix(P, scheme)
    checks = [("spectral estimate converged", bool(matrix.estimate.converged))]
    passed = matrix.rho < 1 and checks[0][1]
    return PressureCertificate((pf, pf), scheme, matrix, checks, passed, f"auto(depth={depth})")


def certify_auto_range(p_lo: float, p_hi: float, depth: int, samples: int = 9,
                       include_two_thirds: bool = False,
                       precision: "str | Precision | None" = "bigfloat:256") -> PressureCertificate:
    """Range version of :func:`certify_auto`.

    The combinatorics (order of the cut points and the multiplicities) must
    agree at every sample; the entrywise maximum of ``A`` over the samples is
    then certified.  Non-rigorous, like the other range checks.
    """
    lo, hi = float(p_lo), float(p_hi)
    if lo > hi:
        raise DomainError("p_lo must not exceed p_hi")
    grid = np.linspace(lo, hi, max(samples, 2)) if hi > lo else np.array([lo])
    ref_labels = ref_m = None
    A_max = None
    consistent = True
    scheme = None
    for pv in grid:
        cert = certify_auto(float(pv), depth, include_two_thirds, precision)
        mat = cert.matrix
        if ref_labels is None:
            ref_labels, ref_m, scheme = cert.scheme.labels, mat.m, cert.scheme
            A_max = mat.A.copy()
            continue
        if cert.scheme.labels != ref_labels or not np.array_equal(mat.m, ref_m):
            consistent = False
            break
        A_max = np.maximum(A_max, mat.A)
    checks = [("partition combinatorics constant on range", consistent)]
    if not consistent:
        return PressureCertificate((lo, hi), scheme, None, checks, False, f"auto_range(depth={depth})")
    est = spectral_radius(A_max)
    matrix = TransitionBoundMatrix(A_max.max(axis=1), ref_m, A_max, est.rho, est)
    return PressureCertificate((lo, hi), scheme, matrix, checks, est.rho < 1, f"auto_range(depth={depth})")


@dataclass
class RangeCoverage:
    """Union of certified pieces for a requested parameter range."""

    p_lo: float
    p_hi: float
    pieces: List[Tuple[float, float, str, bool]]
    gaps: List[Tuple[float, float]]
    certificates: List[PressureCertificate] = field(default_factory=list)

    @property
    def covered(self) -> bool:
        return not self.gaps

    def to_dict(self) -> dict:
        return {
            "p_lo": self.p_lo,
            "p_hi": self.p_hi,
            "covered": self.covered,
            "pieces": [{"p_lo": a, "p_hi": b, "method": m, "passed": ok} for a, b, m, ok in self.pieces],
            "gaps": [list(g) for g in self.gaps],
        }


def _sampled(fn: Callable[[float], PressureCertificate], lo: float, hi: float, samples: int,
             open_lo: bool, open_hi: bool) -> Tuple[bool, List[PressureCertificate]]:
    nudge = 1e-9
    a = lo + nudge if open_lo else lo
    b = hi - nudge if open_hi else hi
    certs = [fn(float(pv)) for pv in np.linspace(a, b, samples)]
    return all(c.passed for c in certs), certs


def certify_range(p_lo: float, p_hi: float, samples: int = 101, auto_depth: int = 60,
                  auto_pieces: int = 32) -> RangeCoverage:
    """Chain the regimes to cover ``[p_lo, p_hi]``.

    ``p <= 2/3`` is the closed-form regime and needs no certificate.  Then
    the three-interval scheme, scheme (a) and the range scheme (b) are tried
    in turn; the pointwise schemes are checked on a sample grid.  Anything
    past the last regime is attacked with :func:`certify_auto_range` on
    ``auto_pieces`` equal sub-ranges; what remains is reported as a gap.
    """
    lo, hi = float(p_lo), float(p_hi)
    if not (0.5 <= lo <= hi < 1):
        raise DomainError("need 1/2 <= p_lo <= p_hi < 1")
    pieces: List[Tuple[float, float, str, bool]] = []
    gaps: List[Tuple[float, float]] = []
    certs: List[PressureCertificate] = []

    def clip(a, b):
        return max(a, lo), min(b, hi)

    if lo <= TWO_THIRDS:
        a, b = clip(0.5, TWO_THIRDS)
        pieces.append((a, b, "closed_form", True))
    regimes = [
        (TWO_THIRDS, THREE_INTERVAL_END, "three_interval", certify_three_interval, True, True),
        (THREE_INTERVAL_END, SEAM, "nine_interval_a", certify_nine_interval_a, False, True),
    ]
    for a0, b0, name, fn, open_lo, open_hi in regimes:
        a, b = clip(a0, b0)
        if a >= b:
            continue
        ok, cs = _sampled(fn, a, b, samples, open_lo and a == a0, open_hi and b == b0)
        certs.extend(cs)
        pieces.append((a, b, name, ok))
        if not ok:
            gaps.append((a, b))
    a, b = clip(SEAM, NINE_B_END)
    if a <= b and hi >= SEAM:
        cert = certify_nine_interval_b(a, b)
        certs.append(cert)
        pieces.append((a, b, "nine_interval_b", cert.passed))
        if not cert.passed:
            gaps.append((a, b))
    if hi > NINE_B_END:
        a = max(lo, NINE_B_END)
        edges = np.linspace(a, hi, auto_pieces + 1)
        for x, y in zip(edges[:-1], edges[1:]):
            cert = certify_auto_range(x, y, auto_depth)
            certs.append(cert)
            pieces.append((float(x), float(y), cert.method, cert.passed))
            if not cert.passed:
                gaps.append((float(x), float(y)))
    gaps = _merge(gaps)
    # a gap fully inside another passing piece is covered
    passing = [(x, y) for x, y, _, ok in pieces if ok]
    gaps = [g for g in gaps if not _inside(g, passing)]
    return RangeCoverage(lo, hi, pieces, gaps, certs)


def _merge(intervals):
    out: List[Tuple[float, float]] = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def _inside(g, passing) -> bool:
    # union of passing pieces covers g
    a, b = g
    cur = a
    for x, y in sorted(passing):
        if x <= cur < y or (x <= cur and y >= b):
            cur = max(cur, y)
        if cur >= b:
            return True
    return False
