"""Seeded experiment harness: configuration, parallel batch execution over
seeds, metric computation, and deterministic CSV emission.

CSV schemas (headers are exact):
  metrics:    seed,iteration,exploitability,kl_to_stationary
  trajectory: seed,iteration,player,action,probability
  aggregate:  iteration,exploitability,kl_to_stationary (means over seeds)
  sweep:      mu,iteration,exploitability (means over seeds, keyed by mu)
"""

import dataclasses
import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import dynamics, games, learners, regularizers

METRICS_HEADER = "seed,iteration,exploitability,kl_to_stationary"
TRAJECTORY_HEADER = "seed,iteration,player,action,probability"
AGGREGATE_HEADER = "iteration,exploitability,kl_to_stationary"
SWEEP_HEADER = "mu,iteration,exploitability"


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    game: str = "brps"
    algo: str = "mftrl"
    regularizer: str = "entropy"
    feedback: str = "full"
    eta: float = 0.1
    mu: float = 0.01
    reference: Union[str, list] = "uniform"
    refresh_period: Optional[int] = None
    iterations: int = 100_000
    record_every: Optional[int] = None
    seeds: list = field(default_factory=lambda: [0])
    out_dir: str = "runs"

    def resolved_record_every(self):
        if self.record_every is not None:
            return self.record_every
        return 100 if self.feedback == "full" else 1000

    def validate(self):
        if self.algo not in ("ftrl", "mftrl", "oftrl"):
            raise ConfigError(f"unknown algo {self.algo!r}")
        if self.feedback not in ("full", "bandit"):
            raise ConfigError(f"unknown feedback {self.feedback!r}")
        if self.regularizer not in ("entropy", "euclidean"):
            raise ConfigError(f"unknown regularizer {self.regularizer!r}")
        if not self.eta > 0:
            raise ConfigError("eta must be positive")
        if self.algo == "mftrl" and not self.mu > 0:
            raise ConfigError("mftrl requires mu > 0")
        if self.iterations < 1:
            raise ConfigError("iterations must be positive")
        if self.resolved_record_every() > self.iterations:
            raise ConfigError("record_every must not exceed iterations")
        if self.resolved_record_every() < 1:
            raise ConfigError("record_every must be positive")
        if self.refresh_period is not None:
            if self.refresh_period < 1:
                raise ConfigError("refresh_period must be positive")
            if self.refresh_period > self.iterations:
                raise ConfigError("refresh_period must not exceed iterations")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if isinstance(self.reference, str) and self.reference != "uniform":
            raise ConfigError(f"unknown reference {self.reference!r}")
        return self

    def to_file(self, path):
        with open(path, "w") as f:
            json.dump(dataclasses.asdict(self), f, indent=1, sort_keys=True)
            f.write("\n")

    @classmethod
    def from_file(cls, path):
        with open(path) as f:
            data = json.load(f)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)

    def hash(self):
        blob = json.dumps(dataclasses.asdict(self), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _reference_vectors(cfg, g):
    if cfg.reference == "uniform":
        return (np.full(g.n_actions_1, 1.0 / g.n_actions_1),
                np.full(g.n_actions_2, 1.0 / g.n_actions_2))
    ref = np.asarray(cfg.reference, dtype=np.float64)
    if ref.shape[0] != g.n_actions_1 or ref.shape[0] != g.n_actions_2:
        raise ConfigError("explicit reference must match both action counts")
    ref = games.validate_strategy(ref)
    if not games.is_interior(ref):
        raise ConfigError("reference strategy must be interior")
    return ref.copy(), ref.copy()


def _kl_metric(sp, p1, p2):
    # a large-mu transient can underflow a probability to exactly zero,
    # where the divergence to the interior rest point is infinite
    try:
        return regularizers.profile_kl((sp.p1, sp.p2), (p1, p2))
    except ValueError:
        return math.inf


@dataclass
class SeedResult:
    """One seed's recorded run plus its derived metric columns."""
    seed: int
    iterations: np.ndarray
    strat1: np.ndarray
    strat2: np.ndarray
    exploitability: np.ndarray
    kl_to_stationary: Optional[np.ndarray]


def _run_one_seed(cfg, seed):
    g = games.load_game(cfg.game, rng_seed=seed)
    c1, c2 = _reference_vectors(cfg, g)
    rng = np.random.default_rng([seed, 0])
    p1 = games.sample_interior_strategy(g.n_actions_1, rng)
    p2 = games.sample_interior_strategy(g.n_actions_2, rng)
    reg = regularizers.regularizer_from_name(cfg.regularizer)
    mut1 = mut2 = None
    if cfg.algo == "mftrl":
        mut1 = learners.MutationConfig(mu=cfg.mu, reference=c1,
                                       refresh_period=cfg.refresh_period)
        mut2 = learners.MutationConfig(mu=cfg.mu, reference=c2,
                                       refresh_period=cfg.refresh_period)
    s1 = learners.make_learner(1, g.n_actions_1, cfg.eta, reg, cfg.algo,
                               mutation=mut1, init_strategy=p1)
    s2 = learners.make_learner(2, g.n_actions_2, cfg.eta, reg, cfg.algo,
                               mutation=mut2, init_strategy=p2)
    res = learners.run_selfplay(g, s1, s2, cfg.iterations,
                                feedback=cfg.feedback,
                                record_every=cfg.resolved_record_every(),
                                rng_seed=seed)
    ex = np.array([games.exploitability(g, res.strat1[i], res.strat2[i])
                   for i in range(res.iterations.shape[0])])
    kl = None
    # only meaningful with a fixed reference, where the rest point is static
    if cfg.algo == "mftrl" and cfg.refresh_period is None:
        sp = dynamics.solve_stationary(
            dynamics.RmdParams(g, cfg.mu, c1, c2), tol=1e-10)
        kl = np.array([_kl_metric(sp, res.strat1[i], res.strat2[i])
                       for i in range(res.iterations.shape[0])])
    return SeedResult(seed=seed, iterations=res.iterations,
                      strat1=res.strat1, strat2=res.strat2,
                      exploitability=ex, kl_to_stationary=kl)


def _fmt(x):
    return "" if x is None else repr(float(x))


def write_metrics_csv(path, results):
    with open(path, "w", newline="") as f:
        f.write(METRICS_HEADER + "\n")
        for r in results:
            for i, t in enumerate(r.iterations):
                klv = "" if r.kl_to_stationary is None \
                    else _fmt(r.kl_to_stationary[i])
                f.write(f"{r.seed},{int(t)},{_fmt(r.exploitability[i])},{klv}\n")


def write_trajectory_csv(path, results):
    with open(path, "w", newline="") as f:
        f.write(TRAJECTORY_HEADER + "\n")
        for r in results:
            for i, t in enumerate(r.iterations):
                for player, strat in ((1, r.strat1), (2, r.strat2)):
                    for a in range(strat.shape[1]):
                        f.write(f"{r.seed},{int(t)},{player},{a},"
                                f"{_fmt(strat[i, a])}\n")


def write_aggregate_csv(path, results):
    """Arithmetic mean of the per-seed metric columns, by iteration."""
    iters = results[0].iterations
    ex = np.mean([r.exploitability for r in results], axis=0)
    have_kl = all(r.kl_to_stationary is not None for r in results)
    kl = np.mean([r.kl_to_stationary for r in results], axis=0) \
        if have_kl else None
    with open(path, "w", newline="") as f:
        f.write(AGGREGATE_HEADER + "\n")
        for i, t in enumerate(iters):
            klv = _fmt(kl[i]) if kl is not None else ""
            f.write(f"{int(t)},{_fmt(ex[i])},{klv}\n")
    return ex, kl


def run_experiment(cfg, write=True):
    """Execute one config over all its seeds (parallel over a bounded
    thread pool; the jitted kernels release the interpreter lock) and write
    per-seed metric/trajectory CSVs plus a mean-aggregate CSV.

    Returns the per-seed results sorted by seed.
    """
    cfg.validate()
    workers = min(len(cfg.seeds), os.cpu_count() or 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: _run_one_seed(cfg, s), cfg.seeds))
    else:
        results = [_run_one_seed(cfg, s) for s in cfg.seeds]
    results.sort(key=lambda r: r.seed)
    if write:
        os.makedirs(cfg.out_dir, exist_ok=True)
        cfg.to_file(os.path.join(cfg.out_dir, "config.json"))
        with open(os.path.join(cfg.out_dir, "config_hash.txt"), "w") as f:
            f.write(cfg.hash() + "\n")
        for r in results:
            write_metrics_csv(
                os.path.join(cfg.out_dir, f"metrics_seed{r.seed}.csv"), [r])
            write_trajectory_csv(
                os.path.join(cfg.out_dir, f"trajectory_seed{r.seed}.csv"), [r])
        write_aggregate_csv(
            os.path.join(cfg.out_dir, "metrics_mean.csv"), results)
    return results


def sweep_mu(base, mus, write=True):
    """Run the base config once per mutation rate and emit one long-format
    CSV of mean exploitability keyed by mu."""
    if not mus:
        raise ConfigError("mu sweep needs at least one value")
    base.validate()
    if base.algo != "mftrl":
        raise ConfigError("mu sweep requires the mutant learner")
    rows = []
    table = {}
    for mu in mus:
        cfg = dataclasses.replace(base, mu=float(mu))
        results = run_experiment(cfg, write=False)
        ex = np.mean([r.exploitability for r in results], axis=0)
        table[float(mu)] = (results[0].iterations, ex)
        for i, t in enumerate(results[0].iterations):
            rows.append((float(mu), int(t), ex[i]))
    if write:
        os.makedirs(base.out_dir, exist_ok=True)
        path = os.path.join(base.out_dir, "sweep.csv")
        with open(path, "w", newline="") as f:
            f.write(SWEEP_HEADER + "\n")
            for mu, t, ex in rows:
                f.write(f"{_fmt(mu)},{t},{_fmt(ex)}\n")
    return table
