import math

import numpy as np
import pytest

from mftrl import dynamics, games, regularizers
from mftrl._kernels import FLOW_ENTROPY, FLOW_EUCLIDEAN

UNIFORM3 = np.full(3, 1 / 3)
START = (np.array([0.6, 0.3, 0.1]), np.array([0.2, 0.5, 0.3]))


def brps_params(mu):
    return dynamics.uniform_references(games.make_brps(), mu)


def test_params_validation():
    g = games.make_brps()
    with pytest.raises(ValueError):
        dynamics.RmdParams(g, -0.1, UNIFORM3, UNIFORM3)
    with pytest.raises(ValueError):
        dynamics.RmdParams(g, 0.1, np.array([1.0, 0.0, 0.0]), UNIFORM3)
    with pytest.raises(ValueError):
        dynamics.RmdParams(g, 0.1, np.full(4, 0.25), UNIFORM3)


def test_field_example_no_mutation():
    # with mu = 0 the field reduces to the plain replicator p (q - v)
    params = brps_params(0.0)
    f1, f2 = dynamics.rmd_field(params, UNIFORM3, UNIFORM3)
    np.testing.assert_allclose(f1, [1 / 45, 0.0, -1 / 45], atol=1e-15)
    np.testing.assert_allclose(f2, [1 / 45, 0.0, -1 / 45], atol=1e-15)


def test_field_tangent_to_simplex():
    rng = np.random.default_rng(21)
    for _ in range(50):
        n1, n2 = (int(x) for x in rng.integers(2, 7, size=2))
        g = games.make_random_game(n1, n2, int(rng.integers(10_000)))
        params = dynamics.RmdParams(
            g, float(rng.uniform(0.001, 1.0)),
            games.sample_interior_strategy(n1, rng),
            games.sample_interior_strategy(n2, rng))
        p1 = games.sample_interior_strategy(n1, rng)
        p2 = games.sample_interior_strategy(n2, rng)
        for kind in (FLOW_ENTROPY, FLOW_EUCLIDEAN):
            f1, f2 = dynamics.flow_field(params, p1, p2, kind)
            assert abs(f1.sum()) <= 1e-12
            assert abs(f2.sum()) <= 1e-12


def test_field_pushes_off_extinct_actions():
    # an action with zero mass but positive reference weight gets inflow mu c(a)
    params = brps_params(0.3)
    p1 = np.array([0.0, 0.5, 0.5])
    f1, _ = dynamics.rmd_field(params, p1, UNIFORM3)
    assert f1[0] == pytest.approx(0.3 / 3, abs=1e-15)
    assert f1[0] > 0


def test_integrate_zero_horizon():
    params = brps_params(0.1)
    times, tr1, tr2 = dynamics.integrate_rmd(params, START, 0.0)
    assert times.shape == (1,)
    np.testing.assert_allclose(tr1[0], START[0], atol=1e-15)
    np.testing.assert_allclose(tr2[0], START[1], atol=1e-15)
    with pytest.raises(ValueError):
        dynamics.integrate_rmd(params, START, 1.0, dt=0.0)
    with pytest.raises(ValueError):
        dynamics.integrate_rmd(params, START, -1.0)


def test_integrate_records_every_step():
    params = brps_params(0.1)
    times, tr1, tr2 = dynamics.integrate_rmd(params, START, 1.0, dt=0.25)
    np.testing.assert_allclose(times, [0.0, 0.25, 0.5, 0.75, 1.0])
    assert tr1.shape == (5, 3) and tr2.shape == (5, 3)
    # rows stay on the simplex
    np.testing.assert_allclose(tr1.sum(axis=1), 1.0, atol=1e-12)
    assert tr1.min() >= 0


def test_integrate_matches_advance():
    params = brps_params(0.05)
    _, tr1, tr2 = dynamics.integrate_rmd(params, START, 2.0, dt=0.1)
    p1, p2 = dynamics.advance(params, START[0], START[1], 0.1, 20)
    np.testing.assert_allclose(tr1[-1], p1, atol=1e-13)
    np.testing.assert_allclose(tr2[-1], p2, atol=1e-13)


def test_rk4_fourth_order_self_convergence():
    # halving dt should shrink the endpoint error by about 2^4
    params = brps_params(0.1)
    _, r1, r2 = dynamics.integrate_rmd(params, START, 5.0, dt=0.0125)
    errs = []
    for dt in (0.2, 0.1):
        _, t1, t2 = dynamics.integrate_rmd(params, START, 5.0, dt=dt)
        errs.append(max(np.abs(t1[-1] - r1[-1]).max(),
                        np.abs(t2[-1] - r2[-1]).max()))
    ratio = errs[0] / errs[1]
    assert 12.0 <= ratio <= 20.0


def test_integrate_detects_blowup():
    big = games.GameMatrix(1e200 * games.make_brps().u1)
    params = dynamics.uniform_references(big, 0.1)
    with pytest.raises(ArithmeticError):
        dynamics.advance(params, UNIFORM3, UNIFORM3, 1.0, 5)
    with pytest.raises(ArithmeticError):
        dynamics.integrate_rmd(params, (UNIFORM3, UNIFORM3), 3.0, dt=1.0)


def test_solve_stationary_brps():
    params = brps_params(0.1)
    sp = dynamics.solve_stationary(params, tol=1e-11)
    assert sp.residual <= 1e-11
    # reported residual is the recomputed field norm at the returned point
    assert dynamics.residual(params, sp.p1, sp.p2) == pytest.approx(
        sp.residual, abs=1e-15)
    np.testing.assert_allclose(sp.p1, [0.39234129, 0.41814414, 0.18951457],
                               atol=1e-6)
    assert sp.xi == pytest.approx(min((params.c1 / sp.p1).min(),
                                      (params.c2 / sp.p2).min()), abs=1e-12)
    assert sp.xi == pytest.approx(0.797173, abs=1e-5)


def test_solve_stationary_validation():
    params = brps_params(0.1)
    with pytest.raises(ValueError):
        dynamics.solve_stationary(params, tol=0.0)
    with pytest.raises(ValueError):
        dynamics.solve_stationary(brps_params(0.0))
    with pytest.raises(RuntimeError):
        dynamics.solve_stationary(brps_params(1e-4), tol=1e-8,
                                  max_field_evals=1000)


def test_solve_stationary_small_mu_approaches_nash():
    sp = dynamics.solve_stationary(brps_params(1e-4), tol=1e-8)
    nash = np.array([0.2, 0.6, 0.2])
    assert np.abs(sp.p1 - nash).max() <= 2e-3
    assert np.abs(sp.p2 - nash).max() <= 2e-3


def test_solve_stationary_start_independent():
    params = brps_params(0.05)
    rng = np.random.default_rng(30)
    base = dynamics.solve_stationary(params, tol=1e-11)
    for _ in range(3):
        start = (games.sample_interior_strategy(3, rng),
                 games.sample_interior_strategy(3, rng))
        sp = dynamics.solve_stationary(params, tol=1e-11, start=start)
        np.testing.assert_allclose(sp.p1, base.p1, atol=1e-8)
        np.testing.assert_allclose(sp.p2, base.p2, atol=1e-8)


def test_stationary_interior_floor():
    # every rest-point probability stays above mu min(c) / (2 u_max + mu)
    for mu in (1e-3, 0.1):
        g = games.make_meq()
        params = dynamics.uniform_references(g, mu)
        sp = dynamics.solve_stationary(params, tol=1e-10)
        floor = mu * (1 / 3) / (2 * g.u_max + mu)
        assert sp.p1.min() > floor
        assert sp.p2.min() > mu * 0.5 / (2 * g.u_max + mu)


def test_euclidean_flow_shares_rest_point():
    params = brps_params(0.1)
    sp = dynamics.solve_stationary(params, tol=1e-12)
    f1, f2 = dynamics.flow_field(params, sp.p1, sp.p2, FLOW_EUCLIDEAN)
    assert max(np.abs(f1).max(), np.abs(f2).max()) <= 1e-9


def test_divergence_derivative_matches_field():
    # d/dt KL(rest, state) along the flow == the closed-form decay expression
    params = brps_params(0.1)
    sp = dynamics.solve_stationary(params, tol=1e-12)
    p1, p2 = START
    rhs = dynamics.theorem2_rhs(params, sp, p1, p2)
    h = 1e-5
    a1, a2 = dynamics.advance(params, p1, p2, h, 1)
    b1, b2 = dynamics.advance(params, p1, p2, -h, 1)
    fd = (regularizers.profile_kl((sp.p1, sp.p2), (a1, a2))
          - regularizers.profile_kl((sp.p1, sp.p2), (b1, b2))) / (2 * h)
    assert fd == pytest.approx(rhs, abs=max(1e-8, 1e-6 * abs(rhs)))


def test_theorem2_rhs_sign():
    params = brps_params(0.1)
    sp = dynamics.solve_stationary(params, tol=1e-12)
    assert dynamics.theorem2_rhs(params, sp, sp.p1, sp.p2) == pytest.approx(
        0.0, abs=1e-12)
    rng = np.random.default_rng(4)
    for _ in range(100):
        a = games.sample_interior_strategy(3, rng)
        b = games.sample_interior_strategy(3, rng)
        assert dynamics.theorem2_rhs(params, sp, a, b) < 0
    with pytest.raises(ValueError):
        dynamics.theorem2_rhs(params, sp, np.array([0.0, 0.5, 0.5]), UNIFORM3)


def test_lemma1_rhs_matches_finite_difference():
    params = brps_params(0.1)
    fixed = (np.array([0.25, 0.5, 0.25]), np.array([0.4, 0.25, 0.35]))
    prof = START
    rhs = dynamics.lemma1_rhs(params, fixed, prof)
    h = 1e-5
    a = dynamics.advance(params, prof[0], prof[1], h, 1)
    b = dynamics.advance(params, prof[0], prof[1], -h, 1)
    fd = (regularizers.profile_kl(fixed, a)
          - regularizers.profile_kl(fixed, b)) / (2 * h)
    assert fd == pytest.approx(rhs, abs=1e-8)


def test_lemma2_identity():
    params = brps_params(0.05)
    sp = dynamics.solve_stationary(params, tol=1e-11)
    # testing the rest point itself collapses both sides to its value
    lhs, rhs = dynamics.lemma2_identity(params, sp, sp.p1, 1)
    assert lhs == pytest.approx(rhs, abs=1e-10)
    assert lhs == pytest.approx(games.expected_value(params.game, sp.p1, sp.p2, 1),
                                abs=1e-12)
    for player in (1, 2):
        for a in range(3):
            e = np.zeros(3)
            e[a] = 1.0
            lhs, rhs = dynamics.lemma2_identity(params, sp, e, player)
            assert lhs == pytest.approx(rhs, abs=1e-8)


def test_exploitability_bound_shape():
    sp = dynamics.solve_stationary(brps_params(0.01), tol=1e-10)
    kl0 = math.log(3.0)
    at0 = dynamics.exploitability_bound(sp, kl0, 0.3, 0.0)
    assert at0 == pytest.approx(0.02 + 0.6 * math.sqrt(math.log(2) * kl0),
                                abs=1e-12)
    assert dynamics.exploitability_bound(sp, kl0, 0.3, 1e9) == pytest.approx(
        0.02, abs=1e-12)
    assert dynamics.exploitability_bound(sp, 0.0, 0.3, 5.0) == pytest.approx(
        0.02, abs=1e-15)
    ts = np.linspace(0, 50, 20)
    vals = [dynamics.exploitability_bound(sp, kl0, 0.3, t) for t in ts]
    assert all(x >= y for x, y in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        dynamics.exploitability_bound(sp, -1.0, 0.3, 0.0)


def test_kl_decay_certificate_brps():
    cert = dynamics.kl_decay_certificate(brps_params(0.1), START, horizon=200.0)
    assert cert["holds"]
    assert cert["max_ratio"] <= 1.0 + 1e-6
    assert cert["kl0"] == pytest.approx(0.195894, abs=1e-5)
    assert cert["rate"] == pytest.approx(0.079717, abs=1e-5)
    assert cert["slope"] <= -0.95 * cert["rate"]
    # divergence to the rest point never increases along the flow
    diffs = np.diff(cert["kls"])
    assert diffs.max() <= 1e-9
    # endpoint has essentially reached the rest point
    sp = cert["stationary"]
    _, tr1, tr2 = dynamics.integrate_rmd(brps_params(0.1), START, 200.0)
    assert np.abs(tr1[-1] - sp.p1).max() <= 1e-6
    assert np.abs(tr2[-1] - sp.p2).max() <= 1e-6


def test_kl_decay_from_rest_point():
    params = brps_params(0.1)
    sp = dynamics.solve_stationary(params, tol=1e-12)
    cert = dynamics.kl_decay_certificate(params, (sp.p1, sp.p2), horizon=5.0,
                                         sp=sp)
    assert cert["kls"].max() <= 1e-12
    assert cert["holds"]


def test_stationary_is_2mu_nash():
    g = games.make_brps()
    for mu in (0.01, 0.1):
        sp = dynamics.solve_stationary(dynamics.uniform_references(g, mu),
                                       tol=1e-10)
        assert dynamics.stationary_is_2mu_nash(g, sp)
        assert games.is_eps_nash(g, sp.p1, sp.p2, 2 * mu + 1e-6)
