import csv
import dataclasses
import subprocess
import sys

import numpy as np
import pytest

from mftrl import certificates, cli, dynamics, games, harness, regularizers


def tiny_config(out_dir, **kw):
    base = dict(game="brps", algo="mftrl", feedback="full", eta=0.1, mu=0.01,
                iterations=200, record_every=100, seeds=[0, 1],
                out_dir=str(out_dir))
    base.update(kw)
    return harness.ExperimentConfig(**base)


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_config_defaults_and_record_every():
    cfg = harness.ExperimentConfig()
    cfg.validate()
    assert cfg.resolved_record_every() == 100
    assert harness.ExperimentConfig(feedback="bandit").resolved_record_every() \
        == 1000
    assert harness.ExperimentConfig(record_every=7).resolved_record_every() == 7


@pytest.mark.parametrize("kw", [
    dict(algo="sgd"),
    dict(feedback="oracle"),
    dict(regularizer="tsallis"),
    dict(eta=0.0),
    dict(algo="mftrl", mu=0.0),
    dict(iterations=0),
    dict(record_every=200_000),
    dict(record_every=0, iterations=10),
    dict(refresh_period=0),
    dict(refresh_period=200_000),
    dict(seeds=[]),
    dict(reference="nash"),
])
def test_config_validation_errors(kw):
    with pytest.raises(harness.ConfigError):
        harness.ExperimentConfig(**kw).validate()


def test_config_file_round_trip(tmp_path):
    cfg = tiny_config(tmp_path, refresh_period=50, reference=[0.2, 0.3, 0.5])
    path = tmp_path / "config.json"
    cfg.to_file(path)
    back = harness.ExperimentConfig.from_file(path)
    assert back == cfg
    assert back.hash() == cfg.hash()
    path.write_text('{"algo": "mftrl", "turbo": true}')
    with pytest.raises(harness.ConfigError):
        harness.ExperimentConfig.from_file(path)


def test_config_hash_distinguishes():
    a = harness.ExperimentConfig()
    b = harness.ExperimentConfig(mu=0.02)
    assert a.hash() != b.hash()
    assert a.hash() == harness.ExperimentConfig().hash()


def test_run_experiment_writes_files(tmp_path):
    cfg = tiny_config(tmp_path)
    results = harness.run_experiment(cfg)
    assert [r.seed for r in results] == [0, 1]
    for name in ("config.json", "config_hash.txt", "metrics_seed0.csv",
                 "metrics_seed1.csv", "trajectory_seed0.csv",
                 "trajectory_seed1.csv", "metrics_mean.csv"):
        assert (tmp_path / name).exists(), name
    rows = read_csv(tmp_path / "metrics_seed0.csv")
    assert rows[0] == harness.METRICS_HEADER.split(",")
    assert [r[1] for r in rows[1:]] == ["0", "100", "200"]
    assert all(r[0] == "0" for r in rows[1:])
    agg = read_csv(tmp_path / "metrics_mean.csv")
    assert agg[0] == harness.AGGREGATE_HEADER.split(",")
    assert len(agg) == 4


def test_single_record_window(tmp_path):
    cfg = tiny_config(tmp_path, iterations=100, record_every=100, seeds=[3])
    harness.run_experiment(cfg)
    rows = read_csv(tmp_path / "metrics_seed3.csv")
    assert [r[1] for r in rows[1:]] == ["0", "100"]


def test_runs_are_byte_deterministic(tmp_path):
    cfg_a = tiny_config(tmp_path / "a", feedback="bandit", eta=0.01,
                        iterations=2000, record_every=500)
    cfg_b = dataclasses.replace(cfg_a, out_dir=str(tmp_path / "b"))
    harness.run_experiment(cfg_a)
    harness.run_experiment(cfg_b)
    for name in ("metrics_seed0.csv", "metrics_seed1.csv",
                 "trajectory_seed0.csv", "metrics_mean.csv"):
        a = (tmp_path / "a" / name).read_bytes()
        b = (tmp_path / "b" / name).read_bytes()
        assert a == b, name


def test_aggregate_is_mean_of_seeds(tmp_path):
    cfg = tiny_config(tmp_path, seeds=[0, 1, 2])
    results = harness.run_experiment(cfg)
    agg = read_csv(tmp_path / "metrics_mean.csv")[1:]
    ex = np.mean([r.exploitability for r in results], axis=0)
    kl = np.mean([r.kl_to_stationary for r in results], axis=0)
    for i, row in enumerate(agg):
        assert float(row[1]) == pytest.approx(ex[i], abs=1e-12)
        assert float(row[2]) == pytest.approx(kl[i], abs=1e-12)


def test_kl_column_only_for_fixed_reference_mutant(tmp_path):
    for kw, expect in ((dict(algo="ftrl"), False),
                       (dict(refresh_period=50), False),
                       (dict(), True)):
        cfg = tiny_config(tmp_path / str(expect) / str(len(kw)), seeds=[0], **kw)
        res = harness.run_experiment(cfg, write=False)[0]
        assert (res.kl_to_stationary is not None) == expect
    cfg = tiny_config(tmp_path, seeds=[0], algo="ftrl")
    harness.run_experiment(cfg)
    rows = read_csv(tmp_path / "metrics_seed0.csv")
    assert all(r[3] == "" for r in rows[1:])


def test_kl_column_values(tmp_path):
    cfg = tiny_config(tmp_path, seeds=[4])
    res = harness.run_experiment(cfg, write=False)[0]
    g = games.make_brps()
    sp = dynamics.solve_stationary(dynamics.uniform_references(g, 0.01),
                                   tol=1e-10)
    want = regularizers.profile_kl((sp.p1, sp.p2), (res.strat1[0], res.strat2[0]))
    assert res.kl_to_stationary[0] == pytest.approx(want, abs=1e-9)


def test_trajectory_rows_are_simplex_points(tmp_path):
    cfg = tiny_config(tmp_path, seeds=[0], game="meq")
    harness.run_experiment(cfg)
    rows = read_csv(tmp_path / "trajectory_seed0.csv")
    assert rows[0] == harness.TRAJECTORY_HEADER.split(",")
    body = rows[1:]
    # 3 record points x (3 + 2 actions)
    assert len(body) == 3 * 5
    sums = {}
    for seed, it, player, action, prob in body:
        p = float(prob)
        assert 0.0 <= p <= 1.0
        sums[(it, player)] = sums.get((it, player), 0.0) + p
    assert all(abs(s - 1.0) <= 1e-9 for s in sums.values())


def test_explicit_reference_must_fit_game(tmp_path):
    cfg = tiny_config(tmp_path, game="meq", reference=[0.2, 0.3, 0.5], seeds=[0])
    with pytest.raises(harness.ConfigError):
        harness.run_experiment(cfg, write=False)


def test_random_game_uses_seed_as_matrix_seed(tmp_path):
    cfg = tiny_config(tmp_path, game="random:4x6", seeds=[0, 1])
    results = harness.run_experiment(cfg, write=False)
    assert results[0].strat1.shape[1] == 4
    assert results[0].strat2.shape[1] == 6
    # different seeds draw different matrices, so different trajectories
    assert not np.allclose(results[0].exploitability,
                           results[1].exploitability)


def test_sweep_mu(tmp_path):
    base = tiny_config(tmp_path, iterations=300, record_every=100)
    table = harness.sweep_mu(base, [0.01, 0.1])
    assert set(table) == {0.01, 0.1}
    rows = read_csv(tmp_path / "sweep.csv")
    assert rows[0] == harness.SWEEP_HEADER.split(",")
    assert len(rows) == 1 + 2 * 4
    assert rows[1][0] == repr(0.01)
    with pytest.raises(harness.ConfigError):
        harness.sweep_mu(base, [])
    with pytest.raises(harness.ConfigError):
        harness.sweep_mu(dataclasses.replace(base, algo="ftrl"), [0.01])


def test_parse_seeds():
    assert cli.parse_seeds("5") == [5]
    assert cli.parse_seeds("0..3") == [0, 1, 2, 3]
    assert cli.parse_seeds("1,3..5,9") == [1, 3, 4, 5, 9]
    with pytest.raises(ValueError):
        cli.parse_seeds("")
    with pytest.raises(ValueError):
        cli.parse_seeds("a..b")


def test_parse_reference():
    assert cli.parse_reference("uniform") == "uniform"
    assert cli.parse_reference("0.2,0.3,0.5") == [0.2, 0.3, 0.5]


def test_cli_simulate(tmp_path, capsys):
    rc = cli.main(["simulate", "--game", "brps", "--algo", "mftrl",
                   "--mu", "0.01", "--eta", "0.1", "--iters", "200",
                   "--record-every", "100", "--seeds", "0..1",
                   "--out", str(tmp_path / "runs")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "mean exploitability" in out
    assert (tmp_path / "runs" / "metrics_mean.csv").exists()


def test_cli_simulate_config_file(tmp_path, capsys):
    cfg = tiny_config(tmp_path / "runs", seeds=[0])
    path = tmp_path / "cfg.json"
    cfg.to_file(path)
    rc = cli.main(["simulate", "--config", str(path), "--iters", "100"])
    assert rc == 0
    back = harness.ExperimentConfig.from_file(tmp_path / "runs" / "config.json")
    assert back.iterations == 100  # flag overrides the file
    assert back.mu == cfg.mu


def test_cli_usage_errors(tmp_path):
    assert cli.main(["simulate", "--turbo"]) == 1
    assert cli.main(["simulate", "--algo", "sgd"]) == 1
    assert cli.main([]) == 1
    assert cli.main(["frobnicate"]) == 1
    assert cli.main(["simulate", "--algo", "mftrl", "--mu", "0",
                     "--iters", "10"]) == 1
    assert cli.main(["simulate", "--iters", "10", "--record-every", "100"]) == 1
    assert cli.main(["simulate", "--config", str(tmp_path / "nope.json")]) == 1
    assert cli.main(["stationary", "--game", "brps", "--mu", "0"]) == 1


def test_cli_stationary(capsys):
    rc = cli.main(["stationary", "--game", "brps", "--mu", "0.1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "0.3923" in out
    assert "xi: 0.797" in out
    assert "exploitability" in out


def test_cli_sweep(tmp_path, capsys):
    rc = cli.main(["sweep", "--mu-list", "0.01,0.1", "--game", "brps",
                   "--iters", "200", "--record-every", "100",
                   "--seeds", "0", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "sweep.csv").exists()


def test_cli_verify_suite(tmp_path, capsys):
    out = tmp_path / "summary.csv"
    rc = cli.main(["verify", "--suite", "lemma2", "--out", str(out)])
    assert rc == 0
    line = out.read_text().strip()
    name, status, observed, threshold = line.split(",")
    assert (name, status) == ("lemma2", "pass")
    assert float(observed) <= float(threshold)
    assert "[PASS] lemma2" in capsys.readouterr().out


def test_cli_verify_failure_exit_code(tmp_path, monkeypatch):
    def fake(name):
        return certificates.CertResult(name=name, passed=False, observed=1.0,
                                       threshold=0.5, detail="forced")
    monkeypatch.setattr(certificates, "run_suite", fake)
    rc = cli.main(["verify", "--suite", "lemma2",
                   "--out", str(tmp_path / "s.csv")])
    assert rc == 2
    assert "lemma2,fail" in (tmp_path / "s.csv").read_text()


def test_cli_verify_unknown_suite():
    assert cli.main(["verify", "--suite", "fermat"]) == 1


def test_console_script_entry(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "mftrl.cli", "simulate", "--game", "brps",
         "--iters", "100", "--record-every", "100", "--seeds", "0",
         "--out", str(tmp_path)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "metrics_seed0.csv").exists()
