"""The jitted kernels and the interpreted fallback (MFTRL_NO_NUMBA=1) run the
same source, but libm differences make long runs drift at the last ulp, so
agreement is checked on short horizons at 1e-9."""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from mftrl import _kernels

WORKLOAD = r"""
import json
import numpy as np
from mftrl import _kernels, dynamics, games, learners

g = games.make_brps()
u3 = np.full(3, 1/3)

def pair(algo, **kw):
    mut = None
    if algo == "mftrl":
        mut = learners.MutationConfig(mu=0.05, reference=u3, **kw)
    mk = lambda p: learners.make_learner(p, 3, 0.01, 0, algo, mutation=mut)
    return mk(1), mk(2)

out = {"using_numba": _kernels.using_numba()}
s1, s2 = pair("mftrl", refresh_period=500)
r = learners.run_selfplay(g, s1, s2, 2000, record_every=2000)
out["full_scores"] = r.final1.scores.tolist() + r.final2.scores.tolist()
out["full_ref"] = r.final1.mutation.reference.tolist()
s1, s2 = pair("oftrl")
r = learners.run_selfplay(g, s1, s2, 2000, feedback="bandit",
                          record_every=2000, rng_seed=11)
out["bandit_scores"] = r.final1.scores.tolist() + r.final2.scores.tolist()
params = dynamics.uniform_references(g, 0.1)
_, t1, t2 = dynamics.integrate_rmd(params, (np.array([0.6, 0.3, 0.1]),
                                            np.array([0.2, 0.5, 0.3])), 5.0)
out["flow"] = t1[-1].tolist() + t2[-1].tolist()
print(json.dumps(out))
"""


def run_workload(no_numba):
    env = dict(os.environ)
    if no_numba:
        env["MFTRL_NO_NUMBA"] = "1"
    else:
        env.pop("MFTRL_NO_NUMBA", None)
    proc = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_fallback_matches_jitted_kernels():
    jit = run_workload(no_numba=False)
    plain = run_workload(no_numba=True)
    assert jit["using_numba"] is True
    assert plain["using_numba"] is False
    for key in ("full_scores", "full_ref", "bandit_scores", "flow"):
        np.testing.assert_allclose(jit[key], plain[key], atol=1e-9,
                                   err_msg=key)


@pytest.mark.skipif(os.environ.get("MFTRL_NO_NUMBA") == "1",
                    reason="fallback forced by the environment")
def test_kernels_are_jitted_by_default():
    assert _kernels.using_numba() is True


def test_sample_index_inverse_cdf():
    p = np.array([0.5, 0.5])
    assert _kernels.sample_index(p, 0.0) == 0
    assert _kernels.sample_index(p, 0.49) == 0
    # strict comparison: a draw equal to the cdf value falls to the right
    assert _kernels.sample_index(p, 0.5) == 1
    assert _kernels.sample_index(p, 0.999999) == 1
    one_hot = np.array([1.0, 0.0])
    assert _kernels.sample_index(one_hot, 0.9999999) == 0
