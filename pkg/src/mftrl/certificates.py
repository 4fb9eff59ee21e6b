"""Numerical certificates for the convergence guarantees: each suite checks
one identity or bound at desk scale and reports an observed worst case
against its threshold."""

from dataclasses import dataclass

import numpy as np

from . import dynamics, games, learners, regularizers
from ._kernels import ENTROPY, EUCLIDEAN, FLOW_ENTROPY, FLOW_EUCLIDEAN

FD_H = 1e-4  # centered-difference half step, in flow time
_MIN_INTERIOR = 1e-6  # flow samples below this probability are excluded


@dataclass
class CertResult:
    name: str
    passed: bool
    observed: float
    threshold: float
    detail: str = ""

    def summary_line(self):
        status = "pass" if self.passed else "fail"
        return f"{self.name},{status},{self.observed!r},{self.threshold!r}"


def _rel_tol_ratio(err, value):
    return err / max(1e-6, 1e-3 * abs(value))


def check_euler_consistency():
    """One discrete entropy mutant-FTRL step approximates an explicit Euler
    step of the continuous field to second order: halving eta shrinks the
    gap about 4x."""
    g = games.make_brps()
    mu = 0.1
    params = dynamics.uniform_references(g, mu)
    cfg = learners.MutationConfig(mu=mu, reference=np.full(3, 1 / 3))
    ratios = []
    for k in range(10):
        rng = np.random.default_rng([101, k])
        p1 = games.sample_interior_strategy(3, rng)
        p2 = games.sample_interior_strategy(3, rng)
        f1, f2 = dynamics.rmd_field(params, p1, p2)
        gaps = []
        for eta in (1e-2, 5e-3):
            gap = 0.0
            for p, other, f, player in ((p1, p2, f1, 1), (p2, p1, f2, 2)):
                s = learners.make_learner(player, p.shape[0], eta, ENTROPY,
                                          "mftrl", mutation=cfg,
                                          init_strategy=p)
                q = games.conditional_utilities(g, other, player)
                stepped = learners.current_strategy(learners.full_info_step(s, q))
                gap = max(gap, float(np.abs(stepped - (p + eta * f)).max()))
            gaps.append(gap)
        ratios.append(gaps[0] / gaps[1])
    observed = max(abs(r - 4.0) for r in ratios)
    return CertResult(
        name="theorem1", passed=observed <= 0.5, observed=observed,
        threshold=0.5,
        detail="max deviation of the eta-halving gap ratio from 4 "
               f"(ratios {np.round(ratios, 3).tolist()})")


def _fd_derivative(params, p1, p2, kind, value_fn):
    fw = dynamics.advance(params, p1, p2, FD_H, 1, kind)
    bw = dynamics.advance(params, p1, p2, -FD_H, 1, kind)
    return (value_fn(*fw) - value_fn(*bw)) / (2 * FD_H)


def _flow_samples(params, kind, n_samples, spacing, warmup):
    p1 = np.full(params.game.n_actions_1, 1.0 / params.game.n_actions_1)
    p2 = np.full(params.game.n_actions_2, 1.0 / params.game.n_actions_2)
    p1, p2 = dynamics.advance(params, p1, p2, 1e-2, int(warmup / 1e-2), kind)
    out = []
    for _ in range(n_samples):
        p1, p2 = dynamics.advance(params, p1, p2, 1e-2, int(spacing / 1e-2), kind)
        if min(p1.min(), p2.min()) > _MIN_INTERIOR:
            out.append((p1.copy(), p2.copy()))
    return out


def check_divergence_derivative():
    """Centered finite differences of the divergence to the rest point along
    each mirror map's flow match the closed-form derivative."""
    worst = 0.0
    excluded = 0
    for make in (games.make_brps, games.make_meq):
        g = make()
        params = dynamics.uniform_references(g, 0.1)
        sp = dynamics.solve_stationary(params, tol=1e-11)
        for reg, kind in ((ENTROPY, FLOW_ENTROPY), (EUCLIDEAN, FLOW_EUCLIDEAN)):
            samples = _flow_samples(params, kind, 20, 2.0, 2.0)
            excluded += 20 - len(samples)

            def div(a, b):
                return regularizers.profile_bregman(reg, (sp.p1, sp.p2), (a, b))

            for p1, p2 in samples:
                fd = _fd_derivative(params, p1, p2, kind, div)
                rhs = dynamics.theorem2_rhs(params, sp, p1, p2)
                worst = max(worst, _rel_tol_ratio(abs(fd - rhs), rhs))
    detail = "worst |fd - closed form| over max(1e-6, 1e-3|value|)"
    if excluded:
        detail += f"; {excluded} samples excluded for min prob <= {_MIN_INTERIOR}"
    return CertResult(name="theorem2", passed=worst <= 1.0, observed=worst,
                      threshold=1.0, detail=detail)


def check_kl_decay():
    """KL to the rest point decays at least as fast as exp(-mu xi t) along
    the replicator-mutator flow, pointwise and in fitted slope."""
    g = games.make_brps()
    params = dynamics.uniform_references(g, 0.1)
    start = (np.full(3, 1 / 3), np.full(3, 1 / 3))
    rep = dynamics.kl_decay_certificate(params, start, horizon=200.0)
    slope_ok = rep["slope"] <= -0.95 * rep["rate"]
    passed = rep["holds"] and slope_ok
    return CertResult(
        name="corollary1", passed=passed, observed=rep["max_ratio"],
        threshold=1.0 + 1e-6,
        detail=f"max KL/envelope ratio; fitted slope {rep['slope']:.4f} vs "
               f"required <= {-0.95 * rep['rate']:.4f}")


def check_trajectory_bound():
    """Discrete entropy mutant-FTRL with a small learning rate stays under
    the exploitability envelope (evaluated at continuous time eta * t)
    within 0.02 slack."""
    g = games.make_brps()
    mu, eta, T = 0.1, 1e-3, 100_000
    params = dynamics.uniform_references(g, mu)
    sp = dynamics.solve_stationary(params, tol=1e-11)
    cfg = learners.MutationConfig(mu=mu, reference=np.full(3, 1 / 3))
    s1 = learners.make_learner(1, 3, eta, ENTROPY, "mftrl", mutation=cfg)
    s2 = learners.make_learner(2, 3, eta, ENTROPY, "mftrl", mutation=cfg)
    res = learners.run_selfplay(g, s1, s2, T, feedback="full",
                                record_every=100)
    kl0 = regularizers.profile_kl((sp.p1, sp.p2), (res.strat1[0], res.strat2[0]))
    worst = -np.inf
    for i, t in enumerate(res.iterations):
        ex = games.exploitability(g, res.strat1[i], res.strat2[i])
        bound = dynamics.exploitability_bound(sp, kl0, g.u_max, eta * float(t))
        worst = max(worst, ex - bound)
    return CertResult(
        name="theorem3", passed=worst <= 0.02, observed=float(worst),
        threshold=0.02,
        detail="max exploitability overshoot above the envelope")


def check_fixed_point_derivative():
    """Finite differences of the divergence to an arbitrary fixed profile
    along each flow match the payoff-plus-mutation formula."""
    worst = 0.0
    for make in (games.make_brps, games.make_meq):
        g = make()
        params = dynamics.uniform_references(g, 0.1)
        rng = np.random.default_rng([477, g.n_actions_2])
        fixed = (games.sample_interior_strategy(g.n_actions_1, rng),
                 games.sample_interior_strategy(g.n_actions_2, rng))
        for reg, kind in ((ENTROPY, FLOW_ENTROPY), (EUCLIDEAN, FLOW_EUCLIDEAN)):
            def div(a, b):
                return regularizers.profile_bregman(reg, fixed, (a, b))

            for p1, p2 in _flow_samples(params, kind, 10, 2.0, 1.0):
                fd = _fd_derivative(params, p1, p2, kind, div)
                rhs = dynamics.lemma1_rhs(params, fixed, (p1, p2))
                worst = max(worst, _rel_tol_ratio(abs(fd - rhs), rhs))
    return CertResult(
        name="lemma1", passed=worst <= 1.0, observed=worst, threshold=1.0,
        detail="worst |fd - formula| over max(1e-6, 1e-3|value|)")


def check_rest_point_payoffs():
    """Deviation payoffs against the rest point obey the linear identity in
    the deviation's likelihood ratio."""
    worst = 0.0
    for make in (games.make_brps, games.make_meq):
        g = make()
        params = dynamics.uniform_references(g, 0.1)
        sp = dynamics.solve_stationary(params, tol=1e-12)
        for player in (1, 2):
            n = g.n_actions(player)
            tests = [np.eye(n)[a] for a in range(n)]
            rng = np.random.default_rng([31, player, n])
            tests += [games.sample_interior_strategy(n, rng)
                      for _ in range(100)]
            for test in tests:
                lhs, rhs = dynamics.lemma2_identity(params, sp, test, player)
                worst = max(worst, abs(lhs - rhs))
    return CertResult(name="lemma2", passed=worst <= 1e-8, observed=worst,
                      threshold=1e-8,
                      detail="max |lhs - rhs| over one-hot and random deviations")


def check_conjugate_identity():
    """Divergence to a mirror image equals the conjugate value minus the
    linear term plus the regularizer (checked per player and summed over a
    profile; Euclidean scores are kept to interior projections, where the
    multiplier argument applies)."""
    worst = 0.0
    rng = np.random.default_rng(5150)
    for reg in (ENTROPY, EUCLIDEAN):
        kept = 0
        while kept < 100:
            n = int(rng.integers(2, 7))
            scale = 3.0 if reg == ENTROPY else 0.3
            z = rng.normal(0.0, scale, size=n)
            p_star = regularizers.mirror_argmax(reg, z)
            if reg == EUCLIDEAN and p_star.min() <= 1e-12:
                continue
            kept += 1
            pi = games.sample_interior_strategy(n, rng)
            lhs = regularizers.bregman(reg, pi, p_star)
            rhs = regularizers.conjugate_value(reg, z) - float(z @ pi) \
                + regularizers.psi(reg, pi)
            worst = max(worst, abs(lhs - rhs))
    # summed over a two-player profile as well
    z1 = rng.normal(0.0, 0.2, size=3)
    z2 = rng.normal(0.0, 0.2, size=2)
    pi = (games.sample_interior_strategy(3, rng),
          games.sample_interior_strategy(2, rng))
    for reg in (ENTROPY, EUCLIDEAN):
        ims = (regularizers.mirror_argmax(reg, z1),
               regularizers.mirror_argmax(reg, z2))
        if reg == EUCLIDEAN and min(ims[0].min(), ims[1].min()) <= 1e-12:
            continue
        lhs = regularizers.profile_bregman(reg, pi, ims)
        rhs = sum(regularizers.conjugate_value(reg, z) - float(z @ p)
                  + regularizers.psi(reg, p)
                  for z, p in ((z1, pi[0]), (z2, pi[1])))
        worst = max(worst, abs(lhs - rhs))
    return CertResult(name="lemma3", passed=worst <= 1e-9, observed=worst,
                      threshold=1e-9,
                      detail="max |divergence - conjugate form| over fuzz")


def check_interior_rest_point():
    """Solved rest points stay strictly inside the simplex, above the
    conservative floor mu min_a c(a) / (2 u_max + mu)."""
    worst_margin = np.inf
    cases = [(games.make_brps(), m) for m in (0.01, 0.1)]
    cases += [(games.make_meq(), m) for m in (0.01, 0.1)]
    cases += [(games.make_random_game(5, 5, s), 0.05) for s in range(3)]
    for g, mu in cases:
        params = dynamics.uniform_references(g, mu)
        sp = dynamics.solve_stationary(params, tol=1e-10)
        floor = mu * min(params.c1.min(), params.c2.min()) / (2 * g.u_max + mu)
        worst_margin = min(worst_margin,
                           float(min(sp.p1.min(), sp.p2.min()) - floor))
    return CertResult(
        name="lemma4", passed=worst_margin > 0.0,
        observed=float(worst_margin), threshold=0.0,
        detail="min rest-point probability minus the interiority floor "
               "(must stay positive)")


def check_uniqueness():
    """The solver lands on the same rest point from 10 random interior
    starts, on the 3x3 benchmark game and a seed-0 random 10x10 game."""
    worst = 0.0
    for g in (games.make_brps(), games.make_random_game(10, 10, 0)):
        params = dynamics.uniform_references(g, 0.1)
        points = []
        for k in range(10):
            rng = np.random.default_rng([606, g.n_actions_1, k])
            start = (games.sample_interior_strategy(g.n_actions_1, rng),
                     games.sample_interior_strategy(g.n_actions_2, rng))
            sp = dynamics.solve_stationary(params, tol=1e-11, start=start)
            points.append(np.concatenate([sp.p1, sp.p2]))
        pts = np.stack(points)
        worst = max(worst, float((pts.max(axis=0) - pts.min(axis=0)).max()))
    return CertResult(name="uniqueness", passed=worst <= 1e-6,
                      observed=worst, threshold=1e-6,
                      detail="max per-coordinate spread across starts")


SUITES = {
    "theorem1": check_euler_consistency,
    "theorem2": check_divergence_derivative,
    "corollary1": check_kl_decay,
    "theorem3": check_trajectory_bound,
    "lemma1": check_fixed_point_derivative,
    "lemma2": check_rest_point_payoffs,
    "lemma3": check_conjugate_identity,
    "lemma4": check_interior_rest_point,
    "uniqueness": check_uniqueness,
}


def run_suite(name):
    if name not in SUITES:
        raise ValueError(f"unknown certificate suite {name!r}")
    return SUITES[name]()


def run_all():
    return [fn() for fn in SUITES.values()]
