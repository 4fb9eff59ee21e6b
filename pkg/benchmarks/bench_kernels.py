"""Benchmark the jitted hot kernels against the interpreted fallback.

Runs each workload in this process (jitted unless MFTRL_NO_NUMBA=1 is set),
then re-executes itself with the fallback forced to collect the comparison
column, and cross-checks that both paths agree on short runs.

Usage: python3 benchmarks/bench_kernels.py
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from mftrl import _kernels, dynamics, games, learners


def mftrl_pair(g, eta=0.1, mu=0.01):
    def mk(player, n):
        cfg = learners.MutationConfig(mu=mu, reference=np.full(n, 1.0 / n))
        return learners.make_learner(player, n, eta, 0, "mftrl", mutation=cfg)
    return mk(1, g.n_actions_1), mk(2, g.n_actions_2)


def run_full(g, T):
    s1, s2 = mftrl_pair(g)
    r = learners.run_selfplay(g, s1, s2, T, record_every=T)
    return np.concatenate([r.final1.scores, r.final2.scores])


def run_bandit(g, T):
    s1, s2 = mftrl_pair(g, eta=1e-3)
    r = learners.run_selfplay(g, s1, s2, T, feedback="bandit", record_every=T)
    return np.concatenate([r.final1.scores, r.final2.scores])


def run_flow(g, horizon):
    params = dynamics.uniform_references(g, 0.1)
    n1, n2 = g.n_actions_1, g.n_actions_2
    p1, p2 = dynamics.advance(params, np.full(n1, 1.0 / n1),
                              np.full(n2, 1.0 / n2), 1e-2,
                              int(horizon / 1e-2))
    return np.concatenate([p1, p2])


WORKLOADS = {
    "selfplay full 3x3 T=2e5": lambda: run_full(games.make_brps(), 200_000),
    "selfplay bandit 3x3 T=2e5": lambda: run_bandit(games.make_brps(), 200_000),
    "selfplay full 10x10 T=5e4": lambda: run_full(
        games.make_random_game(10, 10, 0), 50_000),
    "rk4 flow 3x3 t=100": lambda: run_flow(games.make_brps(), 100.0),
}

SHORT_CHECKS = {
    "full": lambda: run_full(games.make_brps(), 2_000),
    "bandit": lambda: run_bandit(games.make_brps(), 2_000),
    "flow": lambda: run_flow(games.make_brps(), 5.0),
}


def measure():
    out = {"using_numba": _kernels.using_numba(), "timings": {}, "short": {}}
    for name, fn in WORKLOADS.items():
        fn()  # warm up (and compile, on the jitted path)
        best = min(_timed(fn) for _ in range(3))
        out["timings"][name] = best
    for name, fn in SHORT_CHECKS.items():
        out["short"][name] = fn().tolist()
    return out


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--inner", action="store_true",
                        help="emit this process's measurements as JSON")
    args = parser.parse_args()

    mine = measure()
    if args.inner:
        json.dump(mine, sys.stdout)
        return 0

    if not mine["using_numba"]:
        print("MFTRL_NO_NUMBA is set: nothing to compare against")
        return 1
    env = dict(os.environ, MFTRL_NO_NUMBA="1")
    proc = subprocess.run([sys.executable, os.path.abspath(__file__),
                           "--inner"], env=env, capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        return 1
    theirs = json.loads(proc.stdout)
    assert theirs["using_numba"] is False

    width = max(len(n) for n in WORKLOADS)
    print(f"{'workload':<{width}}  {'fallback':>10}  {'jitted':>10}  speedup")
    for name in WORKLOADS:
        slow, fast = theirs["timings"][name], mine["timings"][name]
        print(f"{name:<{width}}  {slow:>9.3f}s  {fast:>9.3f}s  "
              f"{slow / fast:>6.1f}x")

    worst = 0.0
    for name in SHORT_CHECKS:
        diff = np.abs(np.asarray(mine["short"][name])
                      - np.asarray(theirs["short"][name])).max()
        worst = max(worst, diff)
    ok = worst <= 1e-9
    print(f"agreement on short runs: max |diff| = {worst:.3g} "
          f"({'OK' if ok else 'MISMATCH'})")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
