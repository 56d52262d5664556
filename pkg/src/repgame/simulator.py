"""Monte-Carlo play of the repeated game between two finite automata.

Both players are automata whose nodes move on Player 1's action only, which
is enough for every strategy studied here: Player 2's belief depends only on
Player 1's past moves.  The inner loop is compiled with numba.

Random numbers come from Philox streams, one each for the initial state,
the state chain, Player 1 and Player 2, all spawned from one seed.  Each raw
64-bit word yields three 21-bit uniforms, and probabilities are compared as
21-bit integers, so every probability is quantized to a multiple of
``2**-21``.  Because the state and Player 1 streams do not depend on Player
2, two runs with the same seed against different opponents share the state
path and Player 1's randomness.
"""

from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numba
import numpy as np

from .beliefs import GameParameter, f_B, f_T, orbit_points
from .errors import DomainError
from .perturbation import PerturbationConfig, perturbed_action_probs, perturbed_beliefs
from .precision import to_float
from .sigma_star import HiddenState, sigma_star_prob_T

__all__ = [
    "Player1Automaton",
    "Player2Automaton",
    "GameTrace",
    "IndependenceReport",
    "play",
    "build_sigma_star",
    "build_perturbed",
    "build_uniform_p1",
    "build_greedy",
    "build_constant_p2",
    "build_tau_star",
    "build_x_automaton",
    "build_counter",
    "payoff_independence_test",
    "belief_trace",
    "QUANT_BITS",
]

log = logging.getLogger(__name__)

QUANT_BITS = 21
QUANT = 1 << QUANT_BITS
BATCH_ROUNDS = 3 * (1 << 17)
DEFAULT_DEPTH = 200


def _quantize(prob) -> np.ndarray:
    q = np.rint(np.asarray(prob, dtype=float) * QUANT).astype(np.int64)
    return np.clip(q, 0, QUANT)


@dataclass(frozen=True)
class Player1Automaton:
    """Nodes carry ``P(Top)`` in each hidden state and successors on Top/Bottom."""

    name: str
    beliefs: np.ndarray
    prob_T_low: np.ndarray
    prob_T_high: np.ndarray
    next_T: np.ndarray
    next_B: np.ndarray
    start_low: int = 0
    start_high: int = 0
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        for arr in (self.prob_T_low, self.prob_T_high):
            if np.any((arr < 0) | (arr > 1)):
                raise DomainError(f"{self.name}: probabilities must lie in [0, 1]")

    @property
    def size(self) -> int:
        return len(self.prob_T_low)


@dataclass(frozen=True)
class Player2Automaton:
    """Nodes carry ``P(L)`` and successors on Player 1's Top/Bottom."""

    name: str
    beliefs: np.ndarray
    prob_L: np.ndarray
    next_T: np.ndarray
    next_B: np.ndarray
    start_low: int = 0
    start_high: int = 0
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        if np.any((self.prob_L < 0) | (self.prob_L > 1)):
            raise DomainError(f"{self.name}: probabilities must lie in [0, 1]")

    @property
    def size(self) -> int:
        return len(self.prob_L)


@dataclass(frozen=True)
class GameTrace:
    """Gain statistics of one run (all replicates pooled).

    ``ci95`` is ``1.96`` standard errors, estimated from the size-weighted
    batch means of all replicates pooled (batches are long compared with the
    ladder chain's memory).
    """

    seed: int
    rounds: int
    replicates: int
    total_gain: int
    mean_gain: float
    ci95: float
    stderr: float
    replicate_means: Tuple[float, ...]
    batch_means: Tuple[float, ...]
    strat1: str
    strat2: str
    p: float

    def to_row(self) -> Dict[str, object]:
        return {
            "seed": self.seed,
            "rounds": self.rounds,
            "replicates": self.replicates,
            "mean": self.mean_gain,
            "ci95": self.ci95,
            "strat1": self.strat1,
            "strat2": self.strat2,
            "p": self.p,
        }


@numba.njit(cache=True, nogil=True)
def _run_rounds(n, raw_s, raw_1, raw_2, stay_thr, tl, th, n1T, n1B, lthr, n2T, n2B, carry):
    state = carry[0]
    i1 = carry[1]
    i2 = carry[2]
    gain = 0
    for k in range(n):
        shift = 21 * (k % 3)
        j = k // 3
        u_s = (raw_s[j] >> shift) & 0x1FFFFF
        u_1 = (raw_1[j] >> shift) & 0x1FFFFF
        u_2 = (raw_2[j] >> shift) & 0x1FFFFF
        if state == 0:
            top = u_1 < tl[i1]
        else:
            top = u_1 < th[i1]
        left = u_2 < lthr[i2]
        if state == 0:
            if top and left:
                gain += 1
        else:
            if (not top) and (not left):
                gain += 1
        if top:
            i1 = n1T[i1]
            i2 = n2T[i2]
        else:
            i1 = n1B[i1]
            i2 = n2B[i2]
        if u_s >= stay_thr:
            state = 1 - state
    carry[0] = state
    carry[1] = i1
    carry[2] = i2
    return gain


def _check_p(p) -> float:
    p = to_float(p.p if isinstance(p, GameParameter) else p)
    if not (0.5 <= p <= 1):
        raise DomainError("p must lie in [1/2, 1]")
    return p


def _one_replicate(seq: np.random.SeedSequence, p: float, rounds: int,
                   s1: Player1Automaton, s2: Player2Automaton) -> Tuple[int, List[float]]:
    init, st, c1, c2 = seq.spawn(4)
    low = int(np.random.Generator(np.random.Philox(init)).integers(0, 2)) == 0
    gens = [np.random.Generator(np.random.Philox(s)).bit_generator for s in (st, c1, c2)]
    carry = np.array([0 if low else 1,
                      s1.start_low if low else s1.start_high,
                      s2.start_low if low else s2.start_high], dtype=np.int64)
    stay_thr = int(round(p * QUANT))
    tl, th = _quantize(s1.prob_T_low), _quantize(s1.prob_T_high)
    lthr = _quantize(s2.prob_L)
    n1T, n1B = s1.next_T.astype(np.int64), s1.next_B.astype(np.int64)
    n2T, n2B = s2.next_T.astype(np.int64), s2.next_B.astype(np.int64)
    total = 0
    batches = []
    done = 0
    while done < rounds:
        n = min(BATCH_ROUNDS, rounds - done)
        words = (n + 2) // 3
        raws = [g.random_raw(words).astype(np.uint64) for g in gens]
        g = _run_rounds(n, raws[0], raws[1], raws[2], stay_thr, tl, th, n1T, n1B, lthr, n2T, n2B, carry)
        total += int(g)
        batches.append((g, n))
        done += n
    return total, batches


def play(P, strat1: Player1Automaton, strat2: Player2Automaton, rounds: int, seed: int = 0,
         replicates: int = 1, workers: int = 1) -> GameTrace:
    """Play ``replicates`` independent games of ``rounds`` rounds each.

    Identical ``(seed, automata, rounds, replicates)`` give bit-identical
    traces regardless of ``workers``.
    """
    p = _check_p(P)
    if rounds < 1 or replicates < 1:
        raise DomainError("rounds and replicates must be positive")
    seqs = np.random.SeedSequence(seed).spawn(replicates)
    if workers > 1 and replicates > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: _one_replicate(s, p, rounds, strat1, strat2), seqs))
    else:
        results = [_one_replicate(s, p, rounds, strat1, strat2) for s in seqs]
    total = sum(r[0] for r in results)
    n = rounds * replicates
    mean = total / n
    rep_means = tuple(r[0] / rounds for r in results)
    gains = np.array([g for r in results for g, _ in r[1]], dtype=float)
    sizes = np.array([m for r in results for _, m in r[1]], dtype=float)
    batch = tuple(gains / sizes)
    k = gains.size
    if k >= 2:
        resid = gains - sizes * mean
        se = float(math.sqrt(k / (k - 1) * np.sum(resid**2)) / n)
    else:
        se = math.sqrt(max(mean * (1 - mean), 0.0) / n)
    return GameTrace(seed, rounds, replicates, total, mean, 1.96 * se, se, rep_means, batch,
                     strat1.name, strat2.name, p)


# automaton builders

def _ladder_nodes(P: GameParameter, depth: int):
    # rung r of the orbit of p is node r; rung r of the orbit of 1-p is node depth + r
    up = [to_float(t) for t in orbit_points(P.p, depth - 1, P)]
    down = [to_float(t) for t in orbit_points(1 - P.p, depth - 1, P)]
    beliefs = np.array(up + down)
    nT = np.empty(2 * depth, dtype=np.int64)
    nB = np.empty(2 * depth, dtype=np.int64)
    for r in range(2 * depth):
        nxt = r + 1 if (r + 1) % depth else r  # deepest rung wraps onto itself
        if beliefs[r] >= 0.5:
            nT[r], nB[r] = 0, nxt
        else:
            nT[r], nB[r] = nxt, depth
    return beliefs, nT, nB


def build_sigma_star(P, depth: int = DEFAULT_DEPTH) -> Player1Automaton:
    """The ladder strategy on the orbits of ``p`` and ``1 - p`` (cut at ``depth`` rungs)."""
    P = GameParameter.make(P)
    if depth < 1:
        raise DomainError("depth must be at least 1")
    beliefs, nT, nB = _ladder_nodes(P, depth)
    low = np.array([sigma_star_prob_T(HiddenState.LOW, t) for t in beliefs])
    high = np.array([sigma_star_prob_T(HiddenState.HIGH, t) for t in beliefs])
    return Player1Automaton("sigma_star", beliefs, low, high, nT, nB, 0, depth,
                            (f"orbits cut at {depth} rungs; the deepest rung repeats",))


def build_perturbed(P, k0: int, epsilon: float, depth: int = DEFAULT_DEPTH) -> Player1Automaton:
    """Shaded ladder strategy: the ladder strategy except at ``theta~`` and ``1 - theta~``.

    The shaded rungs are located by rung index (rung ``k0`` of either base
    orbit), never by comparing beliefs.
    """
    P = GameParameter.make(P)
    cfg = PerturbationConfig(k0, epsilon)
    tt, tte, pe = perturbed_beliefs(P, cfg)
    if depth <= k0:
        raise DomainError("depth must exceed k0")
    # blocks: base orbits of p and 1-p (k0+1 rungs), then four branch orbits
    starts = [("p", P.p, k0 + 1), ("1-p", 1 - P.p, k0 + 1),
              ("tte", tte, depth), ("1-tte", 1 - tte, depth), ("pe", pe, depth), ("1-pe", 1 - pe, depth)]
    offset = {}
    beliefs: List[float] = []
    for name, s, n in starts:
        offset[name] = len(beliefs)
        beliefs.extend(to_float(t) for t in orbit_points(s, n - 1, P))
    size = len(beliefs)
    nT = np.empty(size, dtype=np.int64)
    nB = np.empty(size, dtype=np.int64)
    low = np.empty(size)
    high = np.empty(size)
    base_p, base_q = offset["p"], offset["1-p"]
    for name, s, n in starts:
        o = offset[name]
        for r in range(n):
            i = o + r
            t = beliefs[i]
            low[i] = sigma_star_prob_T(HiddenState.LOW, t)
            high[i] = sigma_star_prob_T(HiddenState.HIGH, t)
            nxt = i + 1 if r + 1 < n else i
            if t >= 0.5:
                nT[i], nB[i] = base_p, nxt
            else:
                nT[i], nB[i] = nxt, base_q
    eps = float(epsilon)
    ttf = to_float(tt)
    i_tt = base_q + k0       # theta~ = phi^k0(1-p)
    i_mirror = base_p + k0   # 1 - theta~ = phi^k0(p)
    low[i_tt] = perturbed_action_probs(True, False, ttf, eps)
    high[i_tt] = perturbed_action_probs(False, False, ttf, eps)
    nT[i_tt], nB[i_tt] = offset["tte"], offset["1-pe"]
    low[i_mirror] = perturbed_action_probs(True, True, ttf, eps)
    high[i_mirror] = perturbed_action_probs(False, True, ttf, eps)
    nT[i_mirror], nB[i_mirror] = offset["pe"], offset["1-tte"]
    note = "after Bottom at 1 - theta~ the belief moves to 1 - theta~_eps (mirror of the Top move at theta~)"
    return Player1Automaton(f"perturbed(k0={k0},eps={eps:g})", np.array(beliefs), low, high, nT, nB,
                            base_p, base_q, (note,))


def _single_p1(name: str, t_low: float, t_high: float) -> Player1Automaton:
    z = np.zeros(1, dtype=np.int64)
    return Player1Automaton(name, np.array([0.5]), np.array([t_low]), np.array([t_high]), z, z.copy())


def build_uniform_p1() -> Player1Automaton:
    """Ignores the state: Top with probability ½."""
    return _single_p1("uniform", 0.5, 0.5)


def build_greedy() -> Player1Automaton:
    """Plays the winning row of the current state every round (fully revealing)."""
    return _single_p1("greedy", 1.0, 0.0)


def build_constant_p2(prob_L: float, name: Optional[str] = None) -> Player2Automaton:
    if not (0 <= prob_L <= 1):
        raise DomainError("prob_L must lie in [0, 1]")
    z = np.zeros(1, dtype=np.int64)
    label = name or {1.0: "always_L", 0.0: "always_R", 0.5: "uniform"}.get(float(prob_L), f"constant({prob_L:g})")
    return Player2Automaton(label, np.array([0.5]), np.array([float(prob_L)]), z, z.copy())


def build_tau_star(P) -> Player2Automaton:
    """Two-state strategy driven by Player 1's last move.

    After Top (belief above ½) play L with probability ``(2p-1)/(4p-1)``;
    after Bottom with ``2p/(4p-1)``.
    """
    P = GameParameter.make(P)
    p = to_float(P.p)
    notes = ()
    if p > 2 / 3 + 1e-15:
        msg = f"two-state response is only known to be optimal for p <= 2/3 (got p={p:.6g})"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes = (msg,)
    hi = (2 * p - 1) / (4 * p - 1)
    lo = 2 * p / (4 * p - 1)
    nT = np.array([0, 0], dtype=np.int64)
    nB = np.array([1, 1], dtype=np.int64)
    return Player2Automaton("tau_star", np.array([p, 1 - p]), np.array([hi, lo]), nT, nB, 0, 1, notes)


def build_x_automaton(P, solution, depth: int = DEFAULT_DEPTH) -> Player2Automaton:
    """Player 2 tracks the ladder belief and plays L with probability ``x(theta)``."""
    from .response import x_grid

    P = GameParameter.make(P)
    if depth < 1:
        raise DomainError("depth must be at least 1")
    beliefs, nT, nB = _ladder_nodes(P, depth)
    x = x_grid(beliefs, P, solution.v, solution.Z, solution.tol)
    notes = [f"orbits cut at {depth} rungs; the deepest rung repeats"]
    report = getattr(solution, "inequality_report", None)
    if report is not None and not report.passed:
        msg = f"inequality check failed: {', '.join(report.failures())}"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes.append(msg)
    x = np.clip(x, 0.0, 1.0)
    return Player2Automaton("x_automaton", beliefs, x, nT, nB, 0, depth, tuple(notes))


def build_counter() -> Player2Automaton:
    """Best reply to a fully revealing Player 1: after Top play R, after Bottom play L."""
    nT = np.array([1, 1, 1], dtype=np.int64)
    nB = np.array([2, 2, 2], dtype=np.int64)
    return Player2Automaton("counter", np.array([0.5, 1.0, 0.0]), np.array([0.5, 0.0, 1.0]), nT, nB, 0, 0)


@dataclass(frozen=True)
class IndependenceReport:
    difference: float
    stderr: float
    indistinguishable: bool
    traces: Tuple[GameTrace, GameTrace]

    def to_dict(self) -> dict:
        return {
            "difference": self.difference,
            "stderr": self.stderr,
            "indistinguishable": self.indistinguishable,
            "runs": [t.to_row() for t in self.traces],
        }


def payoff_independence_test(P, strat1: Player1Automaton, pair: Sequence[Player2Automaton],
                             rounds: int, seed: int = 0, replicates: int = 1) -> IndependenceReport:
    """Run ``strat1`` against two opponents on common random numbers.

    The standard error comes from paired batch differences; the opponents
    are indistinguishable when ``|difference| < 3 * stderr``.
    """
    a, b = pair
    ta = play(P, strat1, a, rounds, seed, replicates)
    tb = play(P, strat1, b, rounds, seed, replicates)
    d = np.asarray(ta.batch_means) - np.asarray(tb.batch_means)
    diff = ta.mean_gain - tb.mean_gain
    se = float(np.std(d, ddof=1) / math.sqrt(d.size)) if d.size >= 2 else math.inf
    ok = abs(diff) <= 3 * se if se > 0 else diff == 0
    return IndependenceReport(diff, se, bool(ok), (ta, tb))


def belief_trace(p, rounds: int, seed: int = 0) -> List[Tuple[Fraction, Fraction]]:
    """Ladder-strategy play in exact arithmetic.

    Returns ``(internal, external)`` pairs: the belief Player 1 tracks via
    ``f_T``/``f_B``, and Player 2's posterior from Bayes' rule on the
    strategy's own action probabilities followed by one step of the state
    chain.
    """
    P = GameParameter.make(p, "rational")
    rng = np.random.default_rng(seed)
    low = bool(rng.integers(0, 2) == 0)
    internal = P.p if low else 1 - P.p
    external = internal
    out = []
    for _ in range(rounds):
        pt_low = sigma_star_prob_T(HiddenState.LOW, internal)
        pt_high = sigma_star_prob_T(HiddenState.HIGH, internal)
        prob = pt_low if low else pt_high
        top = rng.random() < float(prob)
        a_low = pt_low if top else 1 - pt_low
        a_high = pt_high if top else 1 - pt_high
        post = external * a_low / (external * a_low + (1 - external) * a_high)
        external = P.p * post + (1 - P.p) * (1 - post)
        internal = f_T(internal, P) if top else f_B(internal, P)
        out.append((internal, external))
        if rng.random() >= float(P.p):
            low = not low
    return out
