"""Command-line interface: solve, path, datagen, bench."""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .baselines import BaselineConfig, BaselineMethod, solve_first_order
from .bench import DataGenConfig, bench_grid, generate
from .exceptions import ConfigurationError
from .model import PenaltyFamily, PenaltySpec, load_problem_csv
from .solver import SolveConfig, default_lambda1_grid, solve, solve_path

_FAMILIES = {"enet": PenaltyFamily.ELASTIC_NET, "grpinf": PenaltyFamily.GROUP_LINF_ONE}


def _add_common_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="CSV: first column y, remaining columns X")
    p.add_argument("--groups", default=None, help="JSON array of 1-based column index arrays")
    p.add_argument("--penalty", choices=sorted(_FAMILIES), default="enet")
    p.add_argument("--tau", type=float, default=1e-2)
    p.add_argument("--max-outer", type=int, default=None)
    p.add_argument("--method", choices=["quadratic", "coordinate", "proximal"], default="quadratic")


def _parse_certify(text: str):
    if text in ("none", "final"):
        return text
    if text.startswith("every-k:"):
        return ("every", int(text.split(":")[1]))
    raise ConfigurationError(f"bad --certify value {text!r}")


def _run_solve(args) -> int:
    problem = load_problem_csv(args.input, args.groups)
    penalty = PenaltySpec(_FAMILIES[args.penalty], args.lambda1, args.lambda2)
    config = SolveConfig(tau=args.tau, max_outer=args.max_outer, certify=_parse_certify(args.certify))
    if args.method == "quadratic":
        sol = solve(problem, penalty, config)
    else:
        sol = solve_first_order(
            problem, penalty, config, BaselineConfig(method=BaselineMethod(args.method))
        )
    payload = {
        "beta": [float(b) for b in sol.beta],
        "objective": {
            "user_value": sol.objective.user_value,
            "minimax_value": sol.objective.minimax_value,
            "constant_offset": sol.objective.constant_offset,
        },
        "kkt_residual": sol.kkt_residual,
        "iterations": {"n_outer": sol.n_outer, "n_solves": sol.n_solves, "n_backtracks": sol.n_backtracks},
        "wall_time_s": sol.wall_time_s,
        "status": sol.status,
    }
    if sol.certificates is not None:
        payload["certificates"] = [
            {"iter": c.iteration, "method": c.method, "lower_bound": c.lower_bound, "gap": c.gap}
            for c in sol.certificates
        ]
    text = json.dumps(payload, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _parse_grid(text: str, auto):
    if text.startswith("auto:"):
        return auto(int(text.split(":")[1]))
    return np.array([float(tok) for tok in text.split(",")])


def _run_path(args) -> int:
    problem = load_problem_csv(args.input, args.groups)
    family = _FAMILIES[args.penalty]
    lam1s = _parse_grid(args.lambda1_grid, lambda k: default_lambda1_grid(problem, family, num=k))
    lam2s = _parse_grid(args.lambda2_grid, lambda k: np.geomspace(1e-2, 1e2, k))
    config = SolveConfig(tau=args.tau, max_outer=args.max_outer)
    if args.method == "quadratic":
        result = solve_path(problem, family, lam1s, lam2s, config)
    else:
        base = BaselineConfig(method=BaselineMethod(args.method))

        def runner(prob, pen, cfg):
            return solve_first_order(prob, pen, cfg, base)

        result = solve_path(problem, family, lam1s, lam2s, config, solver=runner)
    with open(args.output_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["lambda1", "lambda2", "objective", "n_active", "kkt_residual", "n_outer", "wall_time_s"]
        )
        for (lam1, lam2), sol in zip(result.grid, result.solutions):
            if sol is None:
                continue
            writer.writerow(
                [
                    repr(lam1),
                    repr(lam2),
                    repr(sol.objective.user_value),
                    int(np.count_nonzero(sol.beta)),
                    repr(sol.kkt_residual),
                    sol.n_outer,
                    repr(sol.wall_time_s),
                ]
            )
    if result.failures:
        print(f"{len(result.failures)} cell(s) failed", file=sys.stderr)
    return 0


def _write_problem_csv(path, X, y) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["y"] + [f"x{j + 1}" for j in range(X.shape[1])])
        for i in range(X.shape[0]):
            writer.writerow([repr(float(y[i]))] + [repr(float(v)) for v in X[i]])


def _run_datagen(args) -> int:
    cfg = DataGenConfig(
        n=args.n, p=args.p, rho=args.rho, s=args.s, r_squared_target=args.r2, seed=args.seed
    )
    train, test, beta_star, sigma = generate(cfg)
    _write_problem_csv(f"{args.out}_train.csv", train.X, train.y)
    _write_problem_csv(f"{args.out}_test.csv", test.X, test.y)
    with open(f"{args.out}_beta_star.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["beta_star"])
        for v in beta_star:
            writer.writerow([repr(float(v))])
    meta = {
        "n": args.n,
        "p": args.p,
        "rho": args.rho,
        "s": args.s,
        "r_squared_target": args.r2,
        "seed": args.seed,
        "sigma": sigma,
        "rng": "numpy default_rng (PCG64, ziggurat normals)",
    }
    with open(f"{args.out}_meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    return 0


def _run_bench(args) -> int:
    methods = args.methods.split(",")
    rhos = [float(tok) for tok in args.rho.split(",")] if args.rho else None
    bench_grid(
        scenario=args.scenario,
        methods=methods,
        reps=args.reps,
        tau=args.tau,
        seed0=args.seed0,
        rhos=rhos,
        out_csv=args.out,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wcqpen")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one penalized problem")
    _add_common_solver_args(p_solve)
    p_solve.add_argument("--lambda1", type=float, required=True)
    p_solve.add_argument("--lambda2", type=float, required=True)
    p_solve.add_argument("--certify", default="none", help="none | final | every-k:<int>")
    p_solve.add_argument("--output", default=None, help="JSON output path (default stdout)")
    p_solve.set_defaults(func=_run_solve)

    p_path = sub.add_parser("path", help="solve over a penalty grid with warm starts")
    _add_common_solver_args(p_path)
    p_path.add_argument("--lambda1-grid", default="auto:50", help='comma list or "auto:<k>"')
    p_path.add_argument("--lambda2-grid", default="auto:50", help='comma list or "auto:<k>"')
    p_path.add_argument("--output-csv", required=True)
    p_path.set_defaults(func=_run_path)

    p_gen = sub.add_parser("datagen", help="generate a synthetic instance")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--p", type=int, required=True)
    p_gen.add_argument("--rho", type=float, required=True)
    p_gen.add_argument("--s", type=int, required=True)
    p_gen.add_argument("--r2", type=float, default=0.8)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="output prefix")
    p_gen.set_defaults(func=_run_datagen)

    p_bench = sub.add_parser("bench", help="run a benchmark scenario")
    p_bench.add_argument("--scenario", choices=["fig2", "fig3", "accuracy"], default="fig3")
    p_bench.add_argument("--methods", default="quadratic,coordinate,proximal")
    p_bench.add_argument("--reps", type=int, default=10)
    p_bench.add_argument("--tau", type=float, default=1e-2)
    p_bench.add_argument("--seed0", type=int, default=0)
    p_bench.add_argument("--rho", default=None, help="comma list overriding the preset")
    p_bench.add_argument("--out", required=True, help="results CSV path")
    p_bench.set_defaults(func=_run_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
