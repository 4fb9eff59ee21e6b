"""Discrete-time self-play learners: FTRL, mutant FTRL, and optimistic FTRL,
under full-information or bandit feedback.

Scores follow the z = eta * (sum of utility vectors) bookkeeping, so the
played strategy is always mirror_argmax(reg, z).
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import _kernels, games, regularizers
from ._kernels import PROB_FLOOR

ALGO_CODES = {"ftrl": _kernels.FTRL, "mftrl": _kernels.MFTRL,
              "oftrl": _kernels.OFTRL}


@dataclass(frozen=True)
class MutationConfig:
    mu: float
    reference: np.ndarray
    refresh_period: Optional[int] = None

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        ref = games.validate_strategy(self.reference)
        if not games.is_interior(ref):
            raise ValueError("reference strategy must be interior")
        object.__setattr__(self, "reference", ref)
        if self.refresh_period is not None and self.refresh_period < 1:
            raise ValueError("refresh_period must be a positive integer")


@dataclass(frozen=True)
class LearnerState:
    player: int
    scores: np.ndarray
    eta: float
    reg: int
    algo: str
    mutation: Optional[MutationConfig] = None
    last_utility_vector: Optional[np.ndarray] = None
    refresh_counter: int = 0

    def __post_init__(self):
        if self.algo not in ALGO_CODES:
            raise ValueError(f"unknown algorithm {self.algo!r}")
        if self.algo == "mftrl" and self.mutation is None:
            raise ValueError("mftrl requires a MutationConfig")
        if not self.eta > 0:
            raise ValueError("eta must be positive")


def init_scores(reg, strategy):
    """Scores z0 whose mirror image is the given strategy: log probabilities
    for entropy (interior required), the strategy itself for Euclidean."""
    p = games.validate_strategy(strategy)
    if reg == _kernels.ENTROPY:
        if not games.is_interior(p):
            raise ValueError("entropy initialization needs an interior strategy")
        return np.log(p)
    return p.copy()


def make_learner(player, n_actions, eta, reg, algo, mutation=None,
                 init_strategy=None):
    if init_strategy is None:
        init_strategy = np.full(n_actions, 1.0 / n_actions)
    z = init_scores(reg, games.validate_strategy(init_strategy, n_actions))
    return LearnerState(player=player, scores=z, eta=eta, reg=reg, algo=algo,
                        mutation=mutation)


def current_strategy(s):
    return regularizers.mirror_argmax(s.reg, s.scores)


def optimistic_strategy(s):
    """Strategy played by optimistic FTRL: the mirror image of the scores
    shifted by eta times the last observed utility vector (zero before the
    first observation)."""
    if s.algo != "oftrl":
        raise ValueError("optimistic_strategy requires an oftrl state")
    if s.last_utility_vector is None:
        return current_strategy(s)
    return regularizers.mirror_argmax(s.reg, s.scores + s.eta * s.last_utility_vector)


def played_strategy(s):
    return optimistic_strategy(s) if s.algo == "oftrl" else current_strategy(s)


def mutant_drift(mu_cfg, pi, q):
    """Utility vector augmented by the mutation pull toward the reference:
    q(a) + (mu / pi(a)) (c(a) - pi(a)). Probabilities below the floor are
    clamped in the denominator (only reachable with non-entropy mirrors)."""
    pi = np.asarray(pi, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    denom = np.maximum(pi, PROB_FLOOR)
    return q + mu_cfg.mu * (mu_cfg.reference - pi) / denom


def _advance_reference(s, pre_step_strategy):
    """Algorithm bookkeeping for the adaptive reference: count steps and copy
    the pre-update strategy into the reference every refresh_period steps."""
    cfg = s.mutation
    if cfg is None or cfg.refresh_period is None:
        return s.mutation, s.refresh_counter
    tau = s.refresh_counter + 1
    if tau == cfg.refresh_period:
        return replace(cfg, reference=pre_step_strategy.copy()), 0
    return cfg, tau


def full_info_step(s, q):
    """One exact-feedback update; returns the new state."""
    q = np.asarray(q, dtype=np.float64)
    if q.shape != s.scores.shape:
        raise ValueError("utility vector has wrong shape")
    pi = played_strategy(s)
    if s.algo == "mftrl":
        d = mutant_drift(s.mutation, pi, q)
    else:
        d = q
    z = s.scores + s.eta * d
    mutation, tau = _advance_reference(s, pi)
    last = q.copy() if s.algo == "oftrl" else s.last_utility_vector
    return replace(s, scores=z, mutation=mutation, refresh_counter=tau,
                   last_utility_vector=last)


def bandit_estimate_mutant(s, chosen, realized_utility):
    """Unbiased estimator of the mutated utility vector from one arm pull:
    importance-weighted utility spike plus the exactly-known mutation term."""
    pi = played_strategy(s)
    if pi[chosen] <= 0:
        raise ValueError("chosen action has zero probability")
    cfg = s.mutation
    denom = np.maximum(pi, PROB_FLOOR)
    est = cfg.mu * (cfg.reference - pi) / denom
    est[chosen] += realized_utility / pi[chosen]
    return est


def bandit_estimate_clipped(pi, u_max, chosen, realized_utility):
    """Unbiased estimator of the plain utility vector, clipped above:
    u_max everywhere minus an importance-weighted shortfall at the chosen
    arm, so every component stays <= u_max."""
    pi = np.asarray(pi, dtype=np.float64)
    if pi[chosen] <= 0:
        raise ValueError("chosen action has zero probability")
    est = np.full(pi.shape[0], float(u_max))
    est[chosen] -= (u_max - realized_utility) / pi[chosen]
    return est


def bandit_step(s, rng, opponent_action, g):
    """Sample an action, observe only its realized utility, and update.

    Returns (new state, chosen action). The estimator is the mutant form for
    mftrl and the clipped form for ftrl/oftrl; oftrl also stores the
    estimate as its next prediction.
    """
    pi = played_strategy(s)
    chosen = int(_kernels.sample_index(pi, rng.random()))
    if s.player == 1:
        u = float(g.u1[chosen, opponent_action])
    else:
        u = -float(g.u1[opponent_action, chosen])
    if s.algo == "mftrl":
        est = bandit_estimate_mutant(s, chosen, u)
    else:
        est = bandit_estimate_clipped(pi, g.u_max, chosen, u)
    z = s.scores + s.eta * est
    mutation, tau = _advance_reference(s, pi)
    last = est if s.algo == "oftrl" else s.last_utility_vector
    return replace(s, scores=z, mutation=mutation, refresh_counter=tau,
                   last_utility_vector=last), chosen


@dataclass
class SelfPlayResult:
    """Recorded self-play trajectory: strategies after `iterations[k]`
    updates (row 0 is the initial profile) plus the final learner states."""
    iterations: np.ndarray
    strat1: np.ndarray
    strat2: np.ndarray
    final1: LearnerState
    final2: LearnerState


def _algo_params(s):
    if s.algo == "mftrl":
        return s.mutation.mu, s.mutation.reference.copy(), \
            s.mutation.refresh_period or 0
    return 0.0, np.full(s.scores.shape[0], 1.0 / s.scores.shape[0]), 0


def run_selfplay(g, s1, s2, T, feedback="full", record_every=None, rng_seed=0):
    """Run T simultaneous self-play iterations and record every
    record_every steps (defaults: 100 full-information, 1000 bandit).

    Both players must share eta, regularizer, and algorithm so the run maps
    onto one fused kernel; per-player uniform streams are seeded
    (rng_seed, player) for bandit feedback.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    if feedback not in ("full", "bandit"):
        raise ValueError(f"unknown feedback {feedback!r}")
    if (s1.algo, s1.eta, s1.reg) != (s2.algo, s2.eta, s2.reg):
        raise ValueError("players must share algo, eta, and regularizer")
    for s, n in ((s1, g.n_actions_1), (s2, g.n_actions_2)):
        if s.scores.shape[0] != n:
            raise ValueError("learner size does not match the game")
        cfg = s.mutation
        if cfg is not None and cfg.refresh_period is not None \
                and cfg.refresh_period > T:
            raise ValueError("refresh_period exceeds the run length")
    if record_every is None:
        record_every = 100 if feedback == "full" else 1000
    if record_every < 1:
        raise ValueError("record_every must be positive")

    algo = ALGO_CODES[s1.algo]
    mu1, c1, refresh1 = _algo_params(s1)
    mu2, c2, refresh2 = _algo_params(s2)
    if (mu1, refresh1) != (mu2, refresh2):
        raise ValueError("players must share mu and refresh_period")
    z1 = s1.scores.copy()
    z2 = s2.scores.copy()
    last1 = np.zeros(g.n_actions_1) if s1.last_utility_vector is None \
        else s1.last_utility_vector.copy()
    last2 = np.zeros(g.n_actions_2) if s2.last_utility_vector is None \
        else s2.last_utility_vector.copy()
    nrec = T // record_every + 1
    rec1 = np.empty((nrec, g.n_actions_1))
    rec2 = np.empty((nrec, g.n_actions_2))
    if feedback == "full":
        rows = _kernels.selfplay_full(g.u1, algo, s1.reg, s1.eta, mu1, c1, c2,
                                      refresh1, z1, z2, last1, last2, T,
                                      record_every, rec1, rec2)
    else:
        un1 = np.random.default_rng([rng_seed, 1]).random(T)
        un2 = np.random.default_rng([rng_seed, 2]).random(T)
        rows = _kernels.selfplay_bandit(g.u1, algo, s1.reg, s1.eta, mu1,
                                        c1, c2, refresh1, z1, z2, last1,
                                        last2, un1, un2, g.u_max,
                                        record_every, rec1, rec2)
    iters = np.arange(rows, dtype=np.int64) * record_every
    tau1 = T % refresh1 if refresh1 > 0 else s1.refresh_counter
    tau2 = T % refresh2 if refresh2 > 0 else s2.refresh_counter
    f1 = replace(s1, scores=z1, refresh_counter=tau1,
                 last_utility_vector=last1 if s1.algo == "oftrl" else
                 s1.last_utility_vector,
                 mutation=replace(s1.mutation, reference=c1)
                 if s1.mutation else None)
    f2 = replace(s2, scores=z2, refresh_counter=tau2,
                 last_utility_vector=last2 if s2.algo == "oftrl" else
                 s2.last_utility_vector,
                 mutation=replace(s2.mutation, reference=c2)
                 if s2.mutation else None)
    return SelfPlayResult(iterations=iters, strat1=rec1[:rows],
                          strat2=rec2[:rows], final1=f1, final2=f2)
