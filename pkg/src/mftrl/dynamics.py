"""Continuous-time dynamics for mutant self-play: the replicator-mutator
vector field, a fixed-step RK4 integrator, the interior stationary-point
solver, and the exponential-rate helpers built on it.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, games, regularizers
from ._kernels import FLOW_ENTROPY, FLOW_EUCLIDEAN

_SOLVER_DT = 0.2
_SOLVER_CHUNK = 250  # steps between residual checks


@dataclass(frozen=True)
class RmdParams:
    game: games.GameMatrix
    mu: float
    c1: np.ndarray
    c2: np.ndarray

    def __post_init__(self):
        # mu = 0 is allowed for field evaluation (plain replicator);
        # the stationary-point machinery requires mu > 0.
        if not self.mu >= 0:
            raise ValueError("mu must be nonnegative")
        c1 = games.validate_strategy(self.c1, self.game.n_actions_1)
        c2 = games.validate_strategy(self.c2, self.game.n_actions_2)
        if not (games.is_interior(c1) and games.is_interior(c2)):
            raise ValueError("reference strategies must be interior")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)


def uniform_references(g, mu):
    return RmdParams(g, mu, np.full(g.n_actions_1, 1.0 / g.n_actions_1),
                     np.full(g.n_actions_2, 1.0 / g.n_actions_2))


@dataclass(frozen=True)
class StationaryPoint:
    """Interior rest point of the replicator-mutator field, its residual
    (max-norm of the field there), and the rate coefficient
    xi = min over players, actions of c(a) / profile(a)."""
    p1: np.ndarray
    p2: np.ndarray
    mu: float
    residual: float
    xi: float


def flow_field(params, p1, p2, kind=FLOW_ENTROPY):
    """Velocity of the profile under the chosen continuous flow.

    FLOW_ENTROPY is the replicator-mutator field; FLOW_EUCLIDEAN is the
    interior flow of the squared-Euclidean mirror map (mutated payoff vector
    minus its mean). Both share the same interior rest points.
    """
    f1 = np.empty(params.game.n_actions_1)
    f2 = np.empty(params.game.n_actions_2)
    _kernels.flow_into(kind, params.game.u1, np.asarray(p1, dtype=np.float64),
                       np.asarray(p2, dtype=np.float64), params.mu,
                       params.c1, params.c2, f1, f2)
    return f1, f2


def rmd_field(params, p1, p2):
    """Replicator-mutator field: p(a)(q(a) - v) + mu (c(a) - p(a))
    per player; components sum to zero (tangent to the simplex)."""
    return flow_field(params, p1, p2, FLOW_ENTROPY)


def residual(params, p1, p2):
    return float(_kernels.rmd_residual(params.game.u1, p1, p2, params.mu,
                                       params.c1, params.c2))


def advance(params, p1, p2, dt, nsteps, kind=FLOW_ENTROPY):
    """nsteps RK4 steps of size dt from (p1, p2); returns the new profile.

    Each step renormalizes (tiny negatives clamped, then divided by the
    sum). Raises if a step produces a non-finite state.
    """
    q1 = np.array(p1, dtype=np.float64)
    q2 = np.array(p2, dtype=np.float64)
    bad = _kernels.rk4_advance(kind, params.game.u1, q1, q2, params.mu,
                               params.c1, params.c2, dt, nsteps)
    if bad >= 0:
        raise ArithmeticError(f"integration produced a non-finite state "
                              f"after step {bad} (dt={dt})")
    return q1, q2


def integrate_rmd(params, start, t_end, dt=1e-2, kind=FLOW_ENTROPY):
    """Integrate the flow from `start` for time t_end with fixed step dt.

    Returns (times, traj1, traj2) with one row per step, including both the
    initial and final states.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    p1 = games.validate_strategy(start[0], params.game.n_actions_1)
    p2 = games.validate_strategy(start[1], params.game.n_actions_2)
    nsteps = int(round(t_end / dt))
    times = np.arange(nsteps + 1) * dt
    traj1 = np.empty((nsteps + 1, p1.shape[0]))
    traj2 = np.empty((nsteps + 1, p2.shape[0]))
    traj1[0] = p1
    traj2[0] = p2
    for k in range(nsteps):
        try:
            p1, p2 = advance(params, p1, p2, dt, 1, kind)
        except ArithmeticError:
            raise ArithmeticError(
                f"integration produced a non-finite state at t={times[k + 1]}")
        traj1[k + 1] = p1
        traj2[k + 1] = p2
    return times, traj1, traj2


def solve_stationary(params, tol=1e-10, start=None, max_field_evals=10**7):
    """Find the interior rest point by integrating the replicator-mutator
    flow until its residual drops to tol, then sharpening with a guarded
    damped fixed-point polish (kept only while it improves the residual).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not params.mu > 0:
        raise ValueError("an interior rest point requires mu > 0")
    g = params.game
    if start is None:
        p1 = np.full(g.n_actions_1, 1.0 / g.n_actions_1)
        p2 = np.full(g.n_actions_2, 1.0 / g.n_actions_2)
    else:
        p1 = games.validate_strategy(start[0], g.n_actions_1)
        p2 = games.validate_strategy(start[1], g.n_actions_2)
    evals = 0
    res = residual(params, p1, p2)
    while res > tol:
        if evals >= max_field_evals:
            raise RuntimeError(
                f"stationary solver hit the field-evaluation cap "
                f"({max_field_evals}) at residual {res:.3e} > tol {tol:.3e}")
        p1, p2 = advance(params, p1, p2, _SOLVER_DT, _SOLVER_CHUNK)
        evals += 4 * _SOLVER_CHUNK
        res = residual(params, p1, p2)
    best = (p1.copy(), p2.copy(), res)
    for _ in range(100):
        f1, f2 = rmd_field(params, p1, p2)
        p1 = p1 + 0.5 * f1
        p2 = p2 + 0.5 * f2
        np.clip(p1, 0.0, None, out=p1)
        np.clip(p2, 0.0, None, out=p2)
        p1 /= p1.sum()
        p2 /= p2.sum()
        res = residual(params, p1, p2)
        if res >= best[2]:
            break
        best = (p1.copy(), p2.copy(), res)
    p1, p2, res = best
    xi = float(min((params.c1 / p1).min(), (params.c2 / p2).min()))
    return StationaryPoint(p1=p1, p2=p2, mu=params.mu, residual=res, xi=xi)


def theorem2_rhs(params, sp, p1, p2):
    """Time derivative of the divergence to the rest point along the matched
    flow: -mu * sum over players, actions of
    c(a) (sqrt(p(a)/p*(a)) - sqrt(p*(a)/p(a)))^2. Nonpositive, zero only at
    the rest point."""
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    if np.any(p1 <= 0) or np.any(p2 <= 0):
        raise ValueError("profile must be interior")
    total = 0.0
    for c, p, ps in ((params.c1, p1, sp.p1), (params.c2, p2, sp.p2)):
        r = np.sqrt(p / ps) - np.sqrt(ps / p)
        total += float(np.sum(c * r * r))
    return -params.mu * total


def lemma1_rhs(params, fixed, prof_t):
    """Time derivative of D_psi(fixed, profile_t) along the matched flow:
    sum_i v_i(own part of profile_t vs fixed opponent) + 2 mu
    - mu sum_i sum_a c_i(a) fixed_i(a) / profile_t_i(a)."""
    g = params.game
    f1, f2 = fixed
    t1, t2 = prof_t
    v1 = games.expected_value(g, t1, f2, 1)
    v2 = games.expected_value(g, f1, t2, 2)
    corr = float(np.sum(params.c1 * np.asarray(f1) / np.asarray(t1))
                 + np.sum(params.c2 * np.asarray(f2) / np.asarray(t2)))
    return v1 + v2 + 2.0 * params.mu - params.mu * corr


def lemma2_identity(params, sp, test, player):
    """Both sides of the rest-point payoff identity
    v_i(test, opponent at rest) = v_i(rest) + mu - mu sum_a c(a) test(a)/p*(a).
    Returns (lhs, rhs)."""
    g = params.game
    test = games.validate_strategy(test, g.n_actions(player))
    if player == 1:
        lhs = games.expected_value(g, test, sp.p2, 1)
        c, ps = params.c1, sp.p1
    else:
        lhs = games.expected_value(g, sp.p1, test, 2)
        c, ps = params.c2, sp.p2
    v_star = games.expected_value(g, sp.p1, sp.p2, player)
    rhs = v_star + sp.mu - sp.mu * float(np.sum(c * test / ps))
    return lhs, rhs


def exploitability_bound(sp, kl0, u_max, t):
    """Exploitability envelope at continuous time t when starting kl0 away
    from the rest point: 2 mu + 2 u_max sqrt(ln 2 * kl0) exp(-mu xi t / 2)."""
    if kl0 < 0:
        raise ValueError("kl0 must be nonnegative")
    return 2.0 * sp.mu + 2.0 * u_max * math.sqrt(math.log(2.0) * kl0) \
        * math.exp(-sp.mu * sp.xi * t / 2.0)


def kl_decay_certificate(params, start, horizon, dt=1e-2, sample_every=None,
                         sp=None):
    """Integrate the replicator-mutator flow and compare KL(rest, state) to
    the exponential envelope kl0 * exp(-mu xi t).

    Returns a dict with the sample times, divergences, pointwise bound
    satisfaction (factor 1 + 1e-6), the fitted log-slope, and the rate
    -mu xi it must beat.
    """
    if sp is None:
        sp = solve_stationary(params, tol=1e-11)
    if sample_every is None:
        sample_every = max(1, int(round(0.5 / dt)))
    times, tr1, tr2 = integrate_rmd(params, start, horizon, dt)
    idx = np.arange(0, times.shape[0], sample_every)
    if idx[-1] != times.shape[0] - 1:
        idx = np.append(idx, times.shape[0] - 1)
    ts = times[idx]
    kls = np.array([regularizers.profile_kl((sp.p1, sp.p2),
                                            (tr1[i], tr2[i])) for i in idx])
    kl0 = kls[0]
    rate = params.mu * sp.xi
    envelope = kl0 * np.exp(-rate * ts)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(envelope > 0, kls / envelope, np.inf)
        ratios[kls == 0.0] = 0.0
    max_ratio = float(ratios.max()) if kl0 > 0 else 0.0
    holds = bool(max_ratio <= 1.0 + 1e-6)
    # fit the decay rate above the numerical floor only
    mask = kls > 1e-13
    if mask.sum() >= 2:
        slope = float(np.polyfit(ts[mask], np.log(kls[mask]), 1)[0])
    else:
        slope = -math.inf
    return {"times": ts, "kls": kls, "kl0": float(kl0), "rate": rate,
            "max_ratio": max_ratio, "holds": holds, "slope": slope,
            "stationary": sp}


def stationary_is_2mu_nash(g, sp):
    """Whether the rest point's exploitability is within 2 mu (plus twice
    the solver residual as slack)."""
    return games.exploitability(g, sp.p1, sp.p2) <= 2.0 * sp.mu + 2.0 * sp.residual
