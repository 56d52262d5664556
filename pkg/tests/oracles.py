"""Independent reference computations used only by the tests.

Nothing here imports the package's value formulas; the chains are built
from the raw belief maps and solved by brute force.
"""

from __future__ import annotations

import mpmath
import numpy as np


def phi_mp(t, p):
    g = 2 * p - 1
    if 2 * t >= 1:
        return (3 * p - 1) - g / t
    return (p * t + (1 - p) * (1 - 2 * t)) / (1 - t)


def perturbed_chain_value(p, k0, eps, depth=200, sweeps=4000, ctx=None):
    """Long-run payoff of the shaded ladder strategy by power iteration.

    States: base rungs 0..k0 on the orbit of 1-p, then two branches of
    ``depth`` rungs.  Each rung climbs with probability max(t, 1-t) and
    otherwise falls to the base; the deepest rung of a branch falls back
    always (its mass is negligible).  Payoff per state is the fall
    probability, except (1-eps)*theta~ at the shaded rung.
    """
    ctx = ctx or mpmath.mp
    t = 1 - p
    base = [t]
    for _ in range(k0):
        t = phi_mp(t, p)
        base.append(t)
    tt = base[-1]
    tte = (p * (1 - eps) * tt + (1 - p) * (1 - (2 - eps) * tt)) / (1 - tt)
    pe = p * (1 - eps) + (1 - p) * eps

    def orbit(s):
        out = [s]
        for _ in range(depth - 1):
            out.append(phi_mp(out[-1], p))
        return out

    b1, b2 = orbit(tte), orbit(1 - pe)
    up = lambda x: x if 2 * x >= 1 else 1 - x
    n = k0 + 1 + 2 * depth
    pi = [ctx.mpf(1) / n] * n
    for _ in range(sweeps):
        new = [ctx.mpf(0)] * n
        back = ctx.mpf(0)
        for i in range(k0):
            u = up(base[i])
            new[i + 1] += pi[i] * u
            back += pi[i] * (1 - u)
        new[k0 + 1] += pi[k0] * (1 - tt)
        new[k0 + 1 + depth] += pi[k0] * tt
        for off, pts in ((k0 + 1, b1), (k0 + 1 + depth, b2)):
            for j in range(depth):
                u = up(pts[j])
                if j + 1 < depth:
                    new[off + j + 1] += pi[off + j] * u
                    back += pi[off + j] * (1 - u)
                else:
                    back += pi[off + j]
        new[0] += back
        pi = new
    value = ctx.mpf(0)
    for i in range(k0):
        value += pi[i] * (1 - up(base[i]))
    value += pi[k0] * (1 - eps) * tt
    for off, pts in ((k0 + 1, b1), (k0 + 1 + depth, b2)):
        for j in range(depth):
            value += pi[off + j] * (1 - up(pts[j]))
    return value


def ladder_chain_value_numpy(p, n_states=400):
    """Stationary base mass of the ladder chain via a dense linear solve."""
    t = p
    ts = []
    for _ in range(n_states):
        ts.append(t)
        t = phi_mp(t, p)
    u = np.array([max(x, 1 - x) for x in ts])
    T = np.zeros((n_states, n_states))
    for i in range(n_states - 1):
        T[i, i + 1] = u[i]
        T[i, 0] = 1 - u[i]
    T[-1, 0] = 1.0
    A = T.T - np.eye(n_states)
    A[-1, :] = 1.0
    rhs = np.zeros(n_states)
    rhs[-1] = 1.0
    pi = np.linalg.solve(A, rhs)
    return float(pi[0])


def perturbed_chain_value_numpy(p, k0, eps, depth=300):
    """Float64 version of :func:`perturbed_chain_value` by a dense linear solve."""
    t = 1 - p
    base = [t]
    for _ in range(k0):
        t = phi_mp(t, p)
        base.append(t)
    tt = base[-1]
    tte = (p * (1 - eps) * tt + (1 - p) * (1 - (2 - eps) * tt)) / (1 - tt)
    pe = p * (1 - eps) + (1 - p) * eps

    def orbit(s):
        out = [s]
        for _ in range(depth - 1):
            out.append(phi_mp(out[-1], p))
        return out

    b1, b2 = orbit(tte), orbit(1 - pe)
    up = lambda x: max(x, 1 - x)
    n = k0 + 1 + 2 * depth
    T = np.zeros((n, n))
    pay = np.zeros(n)
    for i in range(k0):
        T[i, i + 1] = up(base[i])
        T[i, 0] = 1 - up(base[i])
        pay[i] = 1 - up(base[i])
    T[k0, k0 + 1] = 1 - tt
    T[k0, k0 + 1 + depth] = tt
    pay[k0] = (1 - eps) * tt
    for off, pts in ((k0 + 1, b1), (k0 + 1 + depth, b2)):
        for j in range(depth):
            u = up(pts[j])
            pay[off + j] = 1 - u
            if j + 1 < depth:
                T[off + j, off + j + 1] = u
                T[off + j, 0] = 1 - u
            else:
                T[off + j, 0] = 1.0
    A = T.T - np.eye(n)
    A[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    pi = np.linalg.solve(A, rhs)
    return float(pi @ pay)


def ladder_value_mp(p, terms=400, prec=256):
    """``1 / (1 + u0 + u0 u1 + ...)`` along the raw orbit of ``p``, in mpmath."""
    with mpmath.workprec(prec):
        p = mpmath.mpf(p) if not isinstance(p, str) else mpmath.mpf(p)
        t, prod, total = p, mpmath.mpf(1), mpmath.mpf(1)
        for _ in range(terms):
            prod *= max(t, 1 - t)
            total += prod
            t = phi_mp(t, p)
        return +(1 / total)


def response_w_numpy(p, n=400):
    """``w = sum_k A_{e0} ... A_{e(k-1)} (1, 1)`` along the orbit of ``p`` with plain numpy."""
    g = 2 * p - 1
    A = {0: np.array([[g, -g], [1 - p, p]]), 1: np.array([[p, 1 - p], [-g, g]])}
    prod = np.eye(2)
    w = np.ones(2)
    t = p
    for _ in range(n):
        prod = prod @ A[1 if t >= 0.5 else 0]
        w = w + prod @ np.ones(2)
        t = phi_mp(t, p)
    v = 1 / (p * w[0] + (1 - p) * w[1])
    return w, v, (w[0] - w[1]) * v / 2


def brute_preimage_sum(p, n, y=0.5):
    """``sum over alpha^n(t) = y, t in [1/2, p], of prod gamma / alpha^i(t)``.

    Preimages are found by sign changes of ``alpha^n - y`` on a fine grid and
    refined by bisection, so no branch inverse is used.
    """
    g = 2 * p - 1

    def alpha(t):
        f = (3 * p - 1) - g / t
        return np.maximum(f, 1 - f)

    # alpha touches 1/2 only at 2/3, so for y = 1/2 we look for transversal
    # crossings of alpha^(n-1) with 2/3 instead of tangencies with 1/2
    target, k = (2 / 3, n - 1) if y == 0.5 else (y, n)

    def F(t):
        x = t
        for _ in range(k):
            x = alpha(x)
        return x - target

    if k == 0:
        roots = [target] if 0.5 <= target <= p else []
        return (g / target if roots else 0.0), len(roots)
    ts = np.linspace(0.5, p, 1_000_001)
    vals = F(ts)
    roots = list(ts[vals == 0])
    idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    for i in idx:
        a, b = ts[i], ts[i + 1]
        fa = F(a)
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = F(m)
            if np.sign(fm) == np.sign(fa):
                a, fa = m, fm
            else:
                b = m
        roots.append(0.5 * (a + b))
    total = 0.0
    for t in roots:
        w, x = 1.0, float(t)
        for _ in range(n):
            w *= g / x
            x = alpha(x)
        total += w
    return total, len(roots)
