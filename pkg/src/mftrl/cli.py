"""Command-line interface.

Subcommands: simulate (one experiment config), stationary (rest-point
report), sweep (mu grid), verify (numerical certificates). Exit codes:
0 success, 1 configuration/usage error, 2 certificate failure.
"""

import argparse
import dataclasses
import sys

import numpy as np

from . import certificates, dynamics, games, harness


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract here is exit 1
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def parse_seeds(text):
    """Seed list syntax: '7', '0,3,9', or inclusive ranges '0..99'."""
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        elif part:
            seeds.append(int(part))
    if not seeds:
        raise ValueError(f"empty seed list {text!r}")
    return seeds


def parse_reference(text):
    if text == "uniform":
        return "uniform"
    return [float(x) for x in text.split(",")]


def _add_simulate_flags(p, with_mu=True):
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--game")
    p.add_argument("--algo", choices=["ftrl", "mftrl", "oftrl"])
    p.add_argument("--regularizer", choices=["entropy", "euclidean"])
    p.add_argument("--feedback", choices=["full", "bandit"])
    p.add_argument("--eta", type=float)
    if with_mu:
        p.add_argument("--mu", type=float)
    p.add_argument("--reference")
    p.add_argument("--refresh-period", type=int, dest="refresh_period")
    p.add_argument("--iters", type=int)
    p.add_argument("--record-every", type=int, dest="record_every")
    p.add_argument("--seeds")
    p.add_argument("--out", dest="out_dir")


def _config_from_args(args):
    if args.config:
        cfg = harness.ExperimentConfig.from_file(args.config)
    else:
        cfg = harness.ExperimentConfig()
    overrides = {}
    for name in ("game", "algo", "regularizer", "feedback", "eta", "mu",
                 "refresh_period", "out_dir"):
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = v
    if getattr(args, "iters", None) is not None:
        overrides["iterations"] = args.iters
    if getattr(args, "record_every", None) is not None:
        overrides["record_every"] = args.record_every
    if getattr(args, "seeds", None) is not None:
        overrides["seeds"] = parse_seeds(args.seeds)
    if getattr(args, "reference", None) is not None:
        overrides["reference"] = parse_reference(args.reference)
    return dataclasses.replace(cfg, **overrides).validate()


def cmd_simulate(args):
    cfg = _config_from_args(args)
    results = harness.run_experiment(cfg)
    last = results[0].iterations[-1]
    ex = np.mean([r.exploitability[-1] for r in results])
    print(f"wrote {len(results)} seed runs to {cfg.out_dir}")
    print(f"mean exploitability at iteration {int(last)}: {ex:.6g}")
    return 0


def cmd_stationary(args):
    g = games.load_game(args.game, rng_seed=args.seed)
    ref = parse_reference(args.reference)
    if ref == "uniform":
        params = dynamics.uniform_references(g, args.mu)
    else:
        ref = np.asarray(ref, dtype=np.float64)
        params = dynamics.RmdParams(g, args.mu, ref, ref)
    sp = dynamics.solve_stationary(params, tol=args.tol)
    ex = games.exploitability(g, sp.p1, sp.p2)
    print(f"player 1: {np.array2string(sp.p1, precision=10)}")
    print(f"player 2: {np.array2string(sp.p2, precision=10)}")
    print(f"residual: {sp.residual:.3e}")
    print(f"xi: {sp.xi:.10g}")
    print(f"exploitability: {ex:.10g} (2*mu = {2 * args.mu:.10g})")
    return 0


def cmd_sweep(args):
    cfg = _config_from_args(args)
    mus = [float(x) for x in args.mu_list.split(",") if x.strip()]
    harness.sweep_mu(cfg, mus)
    print(f"wrote sweep over mu={mus} to {cfg.out_dir}/sweep.csv")
    return 0


def _run_suite_reported(name):
    try:
        return certificates.run_suite(name)
    except RuntimeError as e:
        # e.g. the stationary solver hit its evaluation cap: report, not raise
        return certificates.CertResult(name=name, passed=False,
                                       observed=float("inf"),
                                       threshold=float("nan"), detail=str(e))


def cmd_verify(args):
    if args.suite == "all":
        results = [_run_suite_reported(n) for n in certificates.SUITES]
    else:
        results = [_run_suite_reported(args.suite)]
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: observed {r.observed:.6g} vs "
              f"threshold {r.threshold:.6g} ({r.detail})")
        lines.append(r.summary_line())
    with open(args.out, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"summary written to {args.out}")
    return 0 if all(r.passed for r in results) else 2


def build_parser():
    p = _Parser(prog="mftrl",
                description="Mutant-FTRL self-play and replicator-mutator "
                            "dynamics for zero-sum matrix games")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", parents=[], help="run one experiment",
                        add_help=True)
    _add_simulate_flags(ps)
    ps.set_defaults(fn=cmd_simulate)

    pt = sub.add_parser("stationary", help="solve and report the rest point")
    pt.add_argument("--game", required=True)
    pt.add_argument("--mu", type=float, required=True)
    pt.add_argument("--reference", default="uniform")
    pt.add_argument("--tol", type=float, default=1e-10)
    pt.add_argument("--seed", type=int, default=0,
                    help="matrix seed for random games")
    pt.set_defaults(fn=cmd_stationary)

    pw = sub.add_parser("sweep", help="run a mutation-rate sweep")
    pw.add_argument("--mu-list", required=True, dest="mu_list")
    _add_simulate_flags(pw, with_mu=False)
    pw.set_defaults(fn=cmd_sweep)

    pv = sub.add_parser("verify", help="run numerical certificates")
    pv.add_argument("--suite", default="all",
                    choices=sorted(certificates.SUITES) + ["all"])
    pv.add_argument("--out", default="verify_summary.csv")
    pv.set_defaults(fn=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    except (harness.ConfigError, ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
