"""Synthetic data generation, benchmark drivers, metrics, CSV emission.

The generator draws equicorrelated Gaussian designs (every pair of
predictors shares the same correlation rho) with a sign-balanced sparse
coefficient vector and noise calibrated to a target coefficient of
determination.  Presets reproduce the timing grid, the gap-monitoring setup,
and the accuracy-versus-prediction study at desk scale.  Records go to CSV
with one row per (method, grid cell, repetition).

Randomness comes from numpy's default 64-bit generator (PCG64, ziggurat
normals) seeded explicitly, so a seed reproduces a dataset bit-for-bit on
the same numpy version; cross-implementation comparisons should exchange
the CSV files, not seeds.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, fields, replace

import numpy as np

from .baselines import BaselineConfig, BaselineMethod, solve_first_order
from .exceptions import ConfigurationError
from .model import PenaltyFamily, PenaltySpec, ProblemData, evaluate_objective
from .solver import PathResult, SolveConfig, default_lambda1_grid, solve, solve_path


@dataclass(frozen=True)
class DataGenConfig:
    """Synthetic linear-model settings."""

    n: int
    p: int
    rho: float
    s: int
    r_squared_target: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ConfigurationError("n and p must be positive")
        if not (0.0 <= self.rho < 1.0):
            raise ConfigurationError("rho must lie in [0, 1)")
        if self.s % 2 != 0 or not (0 < self.s <= self.p):
            raise ConfigurationError("s must be even with 0 < s <= p")
        if not (0.0 < self.r_squared_target < 1.0):
            raise ConfigurationError("r_squared_target must lie in (0, 1)")


def signal_variance(config: DataGenConfig) -> float:
    """Var(X beta*) under equicorrelation: (1-rho)||beta*||^2 + rho (sum beta*)^2.

    The sign-balanced coefficient vector makes the second term vanish, so
    this equals 4 s (1 - rho).
    """
    return 4.0 * config.s * (1.0 - config.rho)


def noise_variance(config: DataGenConfig) -> float:
    """sigma^2 = Var(X beta*) (1 - R^2) / R^2."""
    r2 = config.r_squared_target
    return signal_variance(config) * (1.0 - r2) / r2


def true_beta(config: DataGenConfig) -> np.ndarray:
    half = config.s // 2
    beta = np.zeros(config.p)
    beta[:half] = 2.0
    beta[half : config.s] = -2.0
    return beta


def _draw_design(rng: np.random.Generator, m: int, p: int, rho: float) -> np.ndarray:
    # x = sqrt(rho) z 1 + sqrt(1-rho) e gives exact equicorrelation rho.
    z = rng.standard_normal(m)
    e = rng.standard_normal((m, p))
    return np.sqrt(rho) * z[:, None] + np.sqrt(1.0 - rho) * e


def generate(config: DataGenConfig) -> tuple[ProblemData, ProblemData, np.ndarray, float]:
    """Draw (train, test, beta_star, sigma); the test set has 10 n rows."""
    rng = np.random.default_rng(config.seed)
    beta = true_beta(config)
    sigma = float(np.sqrt(noise_variance(config)))
    X = _draw_design(rng, config.n, config.p, config.rho)
    y = X @ beta + sigma * rng.standard_normal(config.n)
    Xt = _draw_design(rng, 10 * config.n, config.p, config.rho)
    yt = Xt @ beta + sigma * rng.standard_normal(10 * config.n)
    return ProblemData(X=X, y=y), ProblemData(X=Xt, y=yt), beta, sigma


def support_error_rate(beta_hat: np.ndarray, beta_star: np.ndarray, zero_tol: float = 0.0) -> float:
    """Fraction of coordinates whose zero/nonzero status disagrees.

    ``zero_tol`` is relative to max|beta_hat|: 0 means an exact-zero test
    (appropriate for the active-set solver), baselines use 1e-8.
    """
    beta_hat = np.asarray(beta_hat, dtype=float).ravel()
    beta_star = np.asarray(beta_star, dtype=float).ravel()
    if beta_hat.shape != beta_star.shape:
        raise ConfigurationError("coefficient vectors differ in length")
    thr = zero_tol * float(np.max(np.abs(beta_hat), initial=0.0))
    return float(np.mean((np.abs(beta_hat) > thr) != (beta_star != 0)))


def distance_to_optimum(path_ref: PathResult, path_method: PathResult) -> float:
    """Root mean square objective excess over the shared penalty grid."""
    if path_ref.grid != path_method.grid:
        raise ConfigurationError("paths were computed on different grids")
    diffs = []
    for ref, sol in zip(path_ref.solutions, path_method.solutions):
        if ref is None or sol is None:
            continue
        diffs.append(ref.objective.user_value - sol.objective.user_value)
    if not diffs:
        raise ConfigurationError("no comparable cells")
    d = np.asarray(diffs)
    return float(np.sqrt(np.mean(d * d)))


@dataclass
class BenchRecord:
    method: str
    lambda1: float
    lambda2: float
    rho: float
    n: int
    p: int
    s: int
    seed: int
    wall_time_s: float
    objective_gap: float
    n_active: int
    kkt_residual: float
    mse_test: float
    support_error_rate: float


BENCH_COLUMNS = [f.name for f in fields(BenchRecord)]

REFERENCE_TAU = 1e-12

# lambda2 grids: the timing grid sweeps it log-spaced, the monitoring setup
# uses a fixed ridge, the accuracy study runs the pure Lasso.
SCENARIOS = {
    "fig3": dict(n=50, p=100, s=30, rhos=(0.1, 0.4, 0.8), n_lambda1=50, lambda2="grid50"),
    "fig2": dict(n=50, p=200, s=30, rhos=(0.1,), n_lambda1=5, lambda2=(1.0,)),
    "accuracy": dict(n=(50, 100, 200), p=100, s=30, rhos=(0.8,), n_lambda1=50, lambda2=(0.0,)),
}


def _scenario_lambda2(spec) -> np.ndarray:
    if spec["lambda2"] == "grid50":
        return np.geomspace(1e-2, 1e2, 50)
    return np.asarray(spec["lambda2"], dtype=float)


def _method_solver(method: str, tau: float, inner_tol: float | None = None):
    cfg = SolveConfig(tau=tau)
    if method == "quadratic":
        return cfg, None
    base = BaselineConfig(method=BaselineMethod(method), inner_tol=inner_tol)
    return cfg, base


def _run_path_cells(problem, family, lam1s, lam2s, config, baseline):
    """Warm-started sweep returning per-cell (solution, wall_time) lists."""
    out = []
    for lam2 in lam2s:
        warm = None
        for lam1 in lam1s:
            pen = PenaltySpec(family, float(lam1), float(lam2))
            cfg = replace(config, beta0=warm)
            t0 = time.perf_counter()
            try:
                if baseline is None:
                    sol = solve(problem, pen, cfg)
                else:
                    sol = solve_first_order(problem, pen, cfg, baseline)
            except Exception as exc:  # cell failure: record, keep sweeping
                out.append((float(lam1), float(lam2), None, 0.0, repr(exc)))
                continue
            wall = time.perf_counter() - t0
            warm = sol.beta
            out.append((float(lam1), float(lam2), sol, wall, None))
    return out


def bench_grid(
    scenario: str = "fig3",
    methods=("quadratic", "coordinate", "proximal"),
    reps: int = 10,
    tau: float = 1e-2,
    seed0: int = 0,
    rhos=None,
    out_csv=None,
    lambda2_grid=None,
    method_taus=None,
    reference: bool = True,
) -> list[BenchRecord]:
    """Run a preset scenario and return one record per (method, cell, repetition).

    Every repetition resamples the data with seed = seed0 + rep.  Wall times
    wrap the per-cell solve only; the reference path (quadratic at the
    reference tolerance) is computed separately per dataset and provides the
    objective gaps.  ``reference=False`` skips it (gaps become NaN) when only
    prediction metrics are wanted.
    """
    if scenario not in SCENARIOS:
        raise ConfigurationError(f"unknown scenario {scenario!r}")
    spec = SCENARIOS[scenario]
    rhos = tuple(rhos) if rhos is not None else spec["rhos"]
    ns = spec["n"] if isinstance(spec["n"], tuple) else (spec["n"],)
    method_taus = method_taus or {}

    records: list[BenchRecord] = []
    family = PenaltyFamily.ELASTIC_NET
    for n in ns:
        for rho in rhos:
            for rep in range(reps):
                seed = seed0 + rep
                cfg = DataGenConfig(n=n, p=spec["p"], rho=rho, s=spec["s"], seed=seed)
                train, test, beta_star, _sigma = generate(cfg)
                lam1s = default_lambda1_grid(train, family, num=spec["n_lambda1"])
                lam2s = (
                    np.asarray(lambda2_grid, dtype=float)
                    if lambda2_grid is not None
                    else _scenario_lambda2(spec)
                )
                ref_obj = {}
                if reference:
                    ref_cells = _run_path_cells(
                        train, family, lam1s, lam2s, SolveConfig(tau=REFERENCE_TAU), None
                    )
                    ref_obj = {
                        (l1, l2): (sol.objective.user_value if sol else None)
                        for l1, l2, sol, _, _ in ref_cells
                    }
                for method in methods:
                    m_tau = method_taus.get(method, tau)
                    config, baseline = _method_solver(method, m_tau)
                    cells = _run_path_cells(train, family, lam1s, lam2s, config, baseline)
                    for lam1, lam2, sol, wall, _err in cells:
                        if sol is None:
                            continue
                        ref = ref_obj.get((lam1, lam2))
                        gap = (sol.objective.user_value - ref) if ref is not None else float("nan")
                        pred = test.X @ sol.beta
                        zero_tol = 0.0 if method == "quadratic" else 1e-8
                        records.append(
                            BenchRecord(
                                method=method,
                                lambda1=lam1,
                                lambda2=lam2,
                                rho=rho,
                                n=n,
                                p=spec["p"],
                                s=spec["s"],
                                seed=seed,
                                wall_time_s=wall,
                                objective_gap=gap,
                                n_active=int(np.count_nonzero(sol.beta)),
                                kkt_residual=sol.kkt_residual,
                                mse_test=float(np.mean((pred - test.y) ** 2)),
                                support_error_rate=support_error_rate(
                                    sol.beta, beta_star, zero_tol
                                ),
                            )
                        )
    if out_csv is not None:
        write_records(records, out_csv)
    return records


def write_records(records: list[BenchRecord], path) -> None:
    """CSV emission: header row, shortest round-trip decimals."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_COLUMNS)
        for rec in records:
            row = []
            for name in BENCH_COLUMNS:
                val = getattr(rec, name)
                row.append(repr(float(val)) if isinstance(val, float) else str(val))
            writer.writerow(row)


def read_records(path) -> list[BenchRecord]:
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            out.append(
                BenchRecord(
                    method=row["method"],
                    lambda1=float(row["lambda1"]),
                    lambda2=float(row["lambda2"]),
                    rho=float(row["rho"]),
                    n=int(row["n"]),
                    p=int(row["p"]),
                    s=int(row["s"]),
                    seed=int(row["seed"]),
                    wall_time_s=float(row["wall_time_s"]),
                    objective_gap=float(row["objective_gap"]),
                    n_active=int(row["n_active"]),
                    kkt_residual=float(row["kkt_residual"]),
                    mse_test=float(row["mse_test"]),
                    support_error_rate=float(row["support_error_rate"]),
                )
            )
    return out
