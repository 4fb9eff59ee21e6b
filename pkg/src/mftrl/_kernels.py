"""Hot inner loops, jit-compiled when numba is available.

Set MFTRL_NO_NUMBA=1 to run the same functions interpreted (plain numpy).
Every kernel is written with explicit loops so both paths execute identical
floating-point operation sequences.
"""

import os

import numpy as np

_FALLBACK = os.environ.get("MFTRL_NO_NUMBA", "") not in ("", "0")

if not _FALLBACK:
    try:
        from numba import njit
    except ImportError:
        _FALLBACK = True

if _FALLBACK:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f
        return wrap


def using_numba():
    return not _FALLBACK


# regularizer codes
ENTROPY = 0
EUCLIDEAN = 1

# learner codes
FTRL = 0
MFTRL = 1
OFTRL = 2

# flow codes (which mirror map the continuous dynamics correspond to)
FLOW_ENTROPY = 0
FLOW_EUCLIDEAN = 1

PROB_FLOOR = 1e-9


@njit(cache=True, nogil=True)
def mirror_into(reg, z, out):
    """Write argmax_{p in simplex} <z,p> - psi(p) into out.

    reg 0: softmax with max subtraction. reg 1: sort-based Euclidean
    projection (ascending sort scanned from the top; no negative strides).
    """
    n = z.shape[0]
    if reg == 0:
        m = z[0]
        for a in range(1, n):
            if z[a] > m:
                m = z[a]
        s = 0.0
        for a in range(n):
            out[a] = np.exp(z[a] - m)
            s += out[a]
        for a in range(n):
            out[a] /= s
    else:
        srt = np.sort(z)
        acc = 0.0
        lam = 0.0
        for k in range(n):
            j = n - 1 - k
            acc += srt[j]
            cand = (acc - 1.0) / (k + 1)
            if j == 0 or srt[j - 1] <= cand:
                lam = cand
                break
        for a in range(n):
            v = z[a] - lam
            out[a] = v if v > 0.0 else 0.0


@njit(cache=True, nogil=True)
def sample_index(p, u):
    """Inverse-CDF draw from p with a single uniform u; strict u < cdf so
    zero-probability actions are never chosen, ties go to the lowest index."""
    n = p.shape[0]
    acc = 0.0
    for a in range(n):
        acc += p[a]
        if u < acc:
            return a
    for a in range(n - 1, -1, -1):
        if p[a] > 0.0:
            return a
    return 0


@njit(cache=True, nogil=True)
def selfplay_full(u1, algo, reg, eta, mu, cc1, cc2, refresh, z1, z2,
                  last1, last2, T, record_every, rec1, rec2):
    """Simultaneous full-information self-play for T steps.

    z1, z2, the reference strategies cc1, cc2, and the optimistic prediction
    vectors last1, last2 are all caller-owned and mutated in place (the
    references only under a positive refresh period). Strategies after t
    updates are written to rec1/rec2 row t // record_every (row 0 holds the
    initial point). Returns the number of rows written.
    """
    n1, n2 = u1.shape
    p1 = np.empty(n1)
    p2 = np.empty(n2)
    q1 = np.empty(n1)
    q2 = np.empty(n2)
    w1 = np.empty(n1)
    w2 = np.empty(n2)
    tau = 0
    if algo == OFTRL:
        for a in range(n1):
            w1[a] = z1[a] + eta * last1[a]
        for a in range(n2):
            w2[a] = z2[a] + eta * last2[a]
        mirror_into(reg, w1, p1)
        mirror_into(reg, w2, p2)
    else:
        mirror_into(reg, z1, p1)
        mirror_into(reg, z2, p2)
    for a in range(n1):
        rec1[0, a] = p1[a]
    for a in range(n2):
        rec2[0, a] = p2[a]
    r = 1
    for t in range(1, T + 1):
        # both feedback vectors come from the same pre-update profile
        for a in range(n1):
            s = 0.0
            for b in range(n2):
                s += u1[a, b] * p2[b]
            q1[a] = s
        for b in range(n2):
            s = 0.0
            for a in range(n1):
                s += u1[a, b] * p1[a]
            q2[b] = -s
        if algo == MFTRL:
            for a in range(n1):
                d = p1[a] if p1[a] > PROB_FLOOR else PROB_FLOOR
                q1[a] += mu * (cc1[a] - p1[a]) / d
            for a in range(n2):
                d = p2[a] if p2[a] > PROB_FLOOR else PROB_FLOOR
                q2[a] += mu * (cc2[a] - p2[a]) / d
        for a in range(n1):
            z1[a] += eta * q1[a]
        for a in range(n2):
            z2[a] += eta * q2[a]
        if algo == OFTRL:
            for a in range(n1):
                last1[a] = q1[a]
            for a in range(n2):
                last2[a] = q2[a]
        if algo == MFTRL and refresh > 0:
            tau += 1
            if tau == refresh:
                for a in range(n1):
                    cc1[a] = p1[a]
                for a in range(n2):
                    cc2[a] = p2[a]
                tau = 0
        if algo == OFTRL:
            for a in range(n1):
                w1[a] = z1[a] + eta * last1[a]
            for a in range(n2):
                w2[a] = z2[a] + eta * last2[a]
            mirror_into(reg, w1, p1)
            mirror_into(reg, w2, p2)
        else:
            mirror_into(reg, z1, p1)
            mirror_into(reg, z2, p2)
        if t % record_every == 0:
            for a in range(n1):
                rec1[r, a] = p1[a]
            for a in range(n2):
                rec2[r, a] = p2[a]
            r += 1
    return r


@njit(cache=True, nogil=True)
def selfplay_bandit(u1, algo, reg, eta, mu, cc1, cc2, refresh, z1, z2,
                    last1, last2, un1, un2, u_max, record_every, rec1, rec2):
    """Simultaneous bandit self-play driven by pre-drawn uniforms un1, un2
    (one per player per step; T = len(un1)).

    The mutant learner uses the importance-weighted estimator with the
    mutation term evaluated on the full strategy; the others use the clipped
    estimator bounded above by u_max. In-place and recording conventions
    match selfplay_full.
    """
    n1, n2 = u1.shape
    T = un1.shape[0]
    p1 = np.empty(n1)
    p2 = np.empty(n2)
    q1 = np.empty(n1)
    q2 = np.empty(n2)
    w1 = np.empty(n1)
    w2 = np.empty(n2)
    tau = 0
    if algo == OFTRL:
        for a in range(n1):
            w1[a] = z1[a] + eta * last1[a]
        for a in range(n2):
            w2[a] = z2[a] + eta * last2[a]
        mirror_into(reg, w1, p1)
        mirror_into(reg, w2, p2)
    else:
        mirror_into(reg, z1, p1)
        mirror_into(reg, z2, p2)
    for a in range(n1):
        rec1[0, a] = p1[a]
    for a in range(n2):
        rec2[0, a] = p2[a]
    r = 1
    for t in range(1, T + 1):
        a1 = sample_index(p1, un1[t - 1])
        a2 = sample_index(p2, un2[t - 1])
        u = u1[a1, a2]
        if algo == MFTRL:
            for a in range(n1):
                d = p1[a] if p1[a] > PROB_FLOOR else PROB_FLOOR
                q1[a] = mu * (cc1[a] - p1[a]) / d
            for a in range(n2):
                d = p2[a] if p2[a] > PROB_FLOOR else PROB_FLOOR
                q2[a] = mu * (cc2[a] - p2[a]) / d
            q1[a1] += u / p1[a1]
            q2[a2] += -u / p2[a2]
        else:
            for a in range(n1):
                q1[a] = u_max
            for a in range(n2):
                q2[a] = u_max
            q1[a1] -= (u_max - u) / p1[a1]
            q2[a2] -= (u_max + u) / p2[a2]
        for a in range(n1):
            z1[a] += eta * q1[a]
        for a in range(n2):
            z2[a] += eta * q2[a]
        if algo == OFTRL:
            for a in range(n1):
                last1[a] = q1[a]
            for a in range(n2):
                last2[a] = q2[a]
        if algo == MFTRL and refresh > 0:
            tau += 1
            if tau == refresh:
                for a in range(n1):
                    cc1[a] = p1[a]
                for a in range(n2):
                    cc2[a] = p2[a]
                tau = 0
        if algo == OFTRL:
            for a in range(n1):
                w1[a] = z1[a] + eta * last1[a]
            for a in range(n2):
                w2[a] = z2[a] + eta * last2[a]
            mirror_into(reg, w1, p1)
            mirror_into(reg, w2, p2)
        else:
            mirror_into(reg, z1, p1)
            mirror_into(reg, z2, p2)
        if t % record_every == 0:
            for a in range(n1):
                rec1[r, a] = p1[a]
            for a in range(n2):
                rec2[r, a] = p2[a]
            r += 1
    return r


@njit(cache=True, nogil=True)
def flow_into(kind, u1, p1, p2, mu, c1, c2, o1, o2):
    """Continuous-time field at (p1, p2), written into o1, o2.

    kind 0: replicator-mutator, dp(a) = p(a)(q(a) - v) + mu(c(a) - p(a)).
    kind 1: interior flow of the squared-Euclidean mirror map, the mutated
    payoff vector minus its mean (tangent to the simplex).
    """
    n1, n2 = u1.shape
    q1 = np.empty(n1)
    q2 = np.empty(n2)
    for a in range(n1):
        s = 0.0
        for b in range(n2):
            s += u1[a, b] * p2[b]
        q1[a] = s
    for b in range(n2):
        s = 0.0
        for a in range(n1):
            s += u1[a, b] * p1[a]
        q2[b] = -s
    if kind == FLOW_ENTROPY:
        v1 = 0.0
        for a in range(n1):
            v1 += p1[a] * q1[a]
        v2 = 0.0
        for a in range(n2):
            v2 += p2[a] * q2[a]
        for a in range(n1):
            o1[a] = p1[a] * (q1[a] - v1) + mu * (c1[a] - p1[a])
        for a in range(n2):
            o2[a] = p2[a] * (q2[a] - v2) + mu * (c2[a] - p2[a])
    else:
        m1 = 0.0
        for a in range(n1):
            d = p1[a] if p1[a] > PROB_FLOOR else PROB_FLOOR
            o1[a] = q1[a] + mu * (c1[a] - p1[a]) / d
            m1 += o1[a]
        m1 /= n1
        for a in range(n1):
            o1[a] -= m1
        m2 = 0.0
        for a in range(n2):
            d = p2[a] if p2[a] > PROB_FLOOR else PROB_FLOOR
            o2[a] = q2[a] + mu * (c2[a] - p2[a]) / d
            m2 += o2[a]
        m2 /= n2
        for a in range(n2):
            o2[a] -= m2


@njit(cache=True, nogil=True)
def _renorm(p):
    n = p.shape[0]
    s = 0.0
    for a in range(n):
        if p[a] < 0.0:
            p[a] = 0.0
        s += p[a]
    if not (s > 0.0) or not np.isfinite(s):
        return 1
    for a in range(n):
        p[a] /= s
    return 0


@njit(cache=True, nogil=True)
def rk4_advance(kind, u1, p1, p2, mu, c1, c2, dt, nsteps):
    """Advance (p1, p2) in place by nsteps classical RK4 steps of size dt,
    renormalizing after each step. Returns -1, or the index of the first
    step that produced a non-finite state."""
    n1 = p1.shape[0]
    n2 = p2.shape[0]
    k11 = np.empty(n1)
    k12 = np.empty(n1)
    k13 = np.empty(n1)
    k14 = np.empty(n1)
    k21 = np.empty(n2)
    k22 = np.empty(n2)
    k23 = np.empty(n2)
    k24 = np.empty(n2)
    s1 = np.empty(n1)
    s2 = np.empty(n2)
    for step in range(nsteps):
        flow_into(kind, u1, p1, p2, mu, c1, c2, k11, k21)
        for a in range(n1):
            s1[a] = p1[a] + 0.5 * dt * k11[a]
        for a in range(n2):
            s2[a] = p2[a] + 0.5 * dt * k21[a]
        flow_into(kind, u1, s1, s2, mu, c1, c2, k12, k22)
        for a in range(n1):
            s1[a] = p1[a] + 0.5 * dt * k12[a]
        for a in range(n2):
            s2[a] = p2[a] + 0.5 * dt * k22[a]
        flow_into(kind, u1, s1, s2, mu, c1, c2, k13, k23)
        for a in range(n1):
            s1[a] = p1[a] + dt * k13[a]
        for a in range(n2):
            s2[a] = p2[a] + dt * k23[a]
        flow_into(kind, u1, s1, s2, mu, c1, c2, k14, k24)
        for a in range(n1):
            p1[a] += dt / 6.0 * (k11[a] + 2.0 * k12[a] + 2.0 * k13[a] + k14[a])
        for a in range(n2):
            p2[a] += dt / 6.0 * (k21[a] + 2.0 * k22[a] + 2.0 * k23[a] + k24[a])
        bad = _renorm(p1) + _renorm(p2)
        if bad != 0:
            return step
    return -1


@njit(cache=True, nogil=True)
def rmd_residual(u1, p1, p2, mu, c1, c2):
    """Max-norm of the replicator-mutator field at (p1, p2)."""
    f1 = np.empty(p1.shape[0])
    f2 = np.empty(p2.shape[0])
    flow_into(FLOW_ENTROPY, u1, p1, p2, mu, c1, c2, f1, f2)
    m = 0.0
    for a in range(f1.shape[0]):
        v = abs(f1[a])
        if v > m:
            m = v
    for a in range(f2.shape[0]):
        v = abs(f2[a])
        if v > m:
            m = v
    return m
