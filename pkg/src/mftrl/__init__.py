"""Mutant FTRL self-play and replicator-mutator dynamics for two-player
zero-sum normal-form games."""

from ._kernels import ENTROPY, EUCLIDEAN, FLOW_ENTROPY, FLOW_EUCLIDEAN, \
    using_numba
from .games import GameMatrix, best_response, conditional_utilities, \
    expected_value, exploitability, is_eps_nash, load_game, make_brps, \
    make_meq, make_random_game, sample_interior_strategy, validate_strategy
from .regularizers import bregman, conjugate_value, kl, mirror_argmax, \
    profile_bregman, profile_kl, psi, psi_grad, regularizer_from_name
from .learners import LearnerState, MutationConfig, SelfPlayResult, \
    bandit_estimate_clipped, bandit_estimate_mutant, bandit_step, \
    current_strategy, full_info_step, make_learner, mutant_drift, \
    optimistic_strategy, run_selfplay
from .dynamics import RmdParams, StationaryPoint, exploitability_bound, \
    integrate_rmd, kl_decay_certificate, lemma1_rhs, lemma2_identity, \
    rmd_field, solve_stationary, stationary_is_2mu_nash, theorem2_rhs, \
    uniform_references
from .harness import ExperimentConfig, run_experiment, sweep_mu
from .certificates import SUITES, run_all, run_suite

__version__ = "0.1.0"
