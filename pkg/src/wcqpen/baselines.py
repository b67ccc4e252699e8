"""First-order reference solvers sharing the active-set outer loop.

Coordinate descent (elastic net) and an accelerated proximal gradient method
(both penalties) replace the exact quadratic subproblem of the main solver;
the outer loop -- violation scores, downgrades, activations, halting rule --
is the same, so timing comparisons isolate the inner solver.  At tight inner
tolerances they double as independent correctness oracles.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError
from .model import PenaltyFamily, PenaltySpec, ProblemData, evaluate_objective
from .oracle import enet_signed_residual, group_violation
from .oracle import kkt_value as _kkt_value
from .oracle import stationarity_vector, water_fill_level
from .solver import SCORE_TOL, ZERO_TOL, SolveConfig, Solution

# Power-iteration policy for the Lipschitz constant of the smooth part.
POWER_ITERS = 30
POWER_RTOL = 1e-6


class BaselineMethod(enum.Enum):
    COORDINATE = "coordinate"
    PROXIMAL = "proximal"


@dataclass
class BaselineConfig:
    method: BaselineMethod = BaselineMethod.COORDINATE
    inner_tol: float | None = None  # defaults to the outer tau
    inner_max_iter: int = 100_000
    restart: bool = False  # proximal restart on objective increase (oracle role)

    def __post_init__(self):
        if self.inner_tol is not None and self.inner_tol <= 0:
            raise ConfigurationError("inner_tol must be positive")
        if self.inner_max_iter < 1:
            raise ConfigurationError("inner_max_iter must be at least 1")


def kkt_violation(problem: ProblemData, penalty: PenaltySpec, beta: np.ndarray) -> float:
    """Shared halting measure: max_j |x_j^T (y - X beta) - lambda2 beta_j| - lambda1.

    Non-positive exactly at a minimizer; the group analog uses the
    water-filling score.
    """
    return _kkt_value(problem, penalty, beta)


def soft_threshold(v, thr):
    return np.sign(v) * np.maximum(np.abs(v) - thr, 0.0)


def project_l1_ball(v: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection onto the l1 ball, by sorting."""
    theta = water_fill_level(v, radius)
    return soft_threshold(v, theta)


def prox_linf(v: np.ndarray, weight: float) -> np.ndarray:
    """prox of weight * ||.||_inf via Moreau: v minus the l1-ball projection."""
    if weight <= 0:
        return v.copy()
    return v - project_l1_ball(v, weight)


def _lipschitz(X_A: np.ndarray, lam2: float) -> float:
    """Largest eigenvalue of X_A^T X_A + lam2 I by power iteration."""
    k = X_A.shape[1]
    if k == 0:
        return lam2
    v = np.ones(k) / np.sqrt(k)
    est = 0.0
    for _ in range(POWER_ITERS):
        w = X_A.T @ (X_A @ v)
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            raise ConfigurationError("active columns are all zero; no step size")
        new_est = nw
        v = w / nw
        if abs(new_est - est) <= POWER_RTOL * new_est:
            est = new_est
            break
        est = new_est
    return est + lam2


def _within_active_kkt(X_A, y, lam1, lam2, beta, penalty, groups_local) -> float:
    # The signed subgradient residual: the unsigned path measure can pass far
    # from the optimum when active coordinates are off their stationarity.
    c = X_A.T @ (X_A @ beta - y) + lam2 * beta
    if penalty.family is PenaltyFamily.ELASTIC_NET:
        return enet_signed_residual(c, beta, lam1) if c.size else 0.0
    return max(group_violation(c[idx], beta[idx], lam1) for idx in groups_local)


try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None


def _cd_sweeps_python(X_A, col_sq, beta, r, lam1, lam2, tol, max_iter):
    for _ in range(max_iter):
        max_delta = 0.0
        for i in range(beta.shape[0]):
            xi = X_A[:, i]
            rho = float(xi @ r) + col_sq[i] * beta[i]
            new = soft_threshold(rho, lam1) / (col_sq[i] + lam2)
            delta = new - beta[i]
            if delta != 0.0:
                r -= xi * delta
                beta[i] = new
                max_delta = max(max_delta, abs(delta))
        if max_delta == 0.0:
            break
        c = lam2 * beta - X_A.T @ r
        if enet_signed_residual(c, beta, lam1) <= tol:
            break
    return beta


def _cd_sweeps_impl(X_A, col_sq, beta, r, lam1, lam2, tol, max_iter):
    n, k = X_A.shape
    for _ in range(max_iter):
        max_delta = 0.0
        for i in range(k):
            rho = col_sq[i] * beta[i]
            for t in range(n):
                rho += X_A[t, i] * r[t]
            if rho > lam1:
                new = (rho - lam1) / (col_sq[i] + lam2)
            elif rho < -lam1:
                new = (rho + lam1) / (col_sq[i] + lam2)
            else:
                new = 0.0
            delta = new - beta[i]
            if delta != 0.0:
                for t in range(n):
                    r[t] -= X_A[t, i] * delta
                beta[i] = new
                ad = abs(delta)
                if ad > max_delta:
                    max_delta = ad
        if max_delta == 0.0:
            break
        worst = 0.0
        for i in range(k):
            ci = lam2 * beta[i]
            for t in range(n):
                ci -= X_A[t, i] * r[t]
            if beta[i] > 0.0:
                v = abs(ci + lam1)
            elif beta[i] < 0.0:
                v = abs(ci - lam1)
            else:
                v = abs(ci) - lam1
                if v < 0.0:
                    v = 0.0
            if v > worst:
                worst = v
        if worst <= tol:
            break
    return beta


_cd_sweeps = njit(cache=True)(_cd_sweeps_impl) if njit is not None else _cd_sweeps_python


def coordinate_descent_inner(
    problem: ProblemData,
    penalty: PenaltySpec,
    active,
    beta_init: np.ndarray,
    config: BaselineConfig,
    tol: float,
) -> np.ndarray:
    """Cyclic soft-threshold updates on the active coordinates (elastic net).

    A sweep that moves nothing is an exact fixed point; otherwise the loop
    halts on the within-active first-order residual (coordinate changes alone
    can be tiny long before stationarity on ill-conditioned problems).
    """
    if penalty.family is not PenaltyFamily.ELASTIC_NET:
        raise ConfigurationError("coordinate descent covers the elastic net only")
    active = np.asarray(active, dtype=int)
    X_A = np.asfortranarray(problem.X[:, active])
    lam1, lam2 = penalty.lambda1, penalty.lambda2
    col_sq = np.einsum("ij,ij->j", X_A, X_A)
    beta = np.asarray(beta_init, dtype=float).copy()
    r = problem.y - X_A @ beta
    return _cd_sweeps(X_A, col_sq, beta, r, lam1, lam2, tol, config.inner_max_iter)


def proximal_inner(
    problem: ProblemData,
    penalty: PenaltySpec,
    active,
    beta_init: np.ndarray,
    config: BaselineConfig,
    tol: float,
) -> np.ndarray:
    """Accelerated proximal gradient on the active coordinates.

    Constant step 1/L with L from power iteration, momentum
    t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2, optional restart on objective
    increase.  Stops on the within-active first-order violation.
    """
    active = np.asarray(active, dtype=int)
    X_A = problem.X[:, active]
    y = problem.y
    lam1, lam2 = penalty.lambda1, penalty.lambda2
    L = _lipschitz(X_A, lam2)

    groups_local = None
    if penalty.family is PenaltyFamily.GROUP_LINF_ONE:
        pos = {int(j): i for i, j in enumerate(active)}
        groups_local = []
        for g in problem.groups:
            loc = [pos[int(j)] for j in g if int(j) in pos]
            if loc:
                groups_local.append(np.asarray(loc, dtype=int))

    def prox(v):
        if penalty.family is PenaltyFamily.ELASTIC_NET:
            return soft_threshold(v, lam1 / L)
        out = v.copy()
        for idx in groups_local:
            out[idx] = prox_linf(v[idx], lam1 / L)
        return out

    def objective(b):
        r = X_A @ b - y
        if penalty.family is PenaltyFamily.ELASTIC_NET:
            pen = lam1 * float(np.sum(np.abs(b)))
        else:
            pen = lam1 * float(sum(np.max(np.abs(b[idx])) for idx in groups_local))
        return 0.5 * float(r @ r) + pen + 0.5 * lam2 * float(b @ b)

    beta = np.asarray(beta_init, dtype=float).copy()
    momentum_pt = beta.copy()
    t_k = 1.0
    f_prev = objective(beta)
    for _ in range(config.inner_max_iter):
        grad = X_A.T @ (X_A @ momentum_pt - y) + lam2 * momentum_pt
        beta_new = prox(momentum_pt - grad / L)
        t_next = (1.0 + np.sqrt(1.0 + 4.0 * t_k * t_k)) / 2.0
        momentum_pt = beta_new + ((t_k - 1.0) / t_next) * (beta_new - beta)
        t_k = t_next
        if config.restart:
            f_new = objective(beta_new)
            if f_new > f_prev:
                momentum_pt = beta_new.copy()
                t_k = 1.0
            f_prev = f_new
        beta = beta_new
        if _within_active_kkt(X_A, y, lam1, lam2, beta, penalty, groups_local) <= tol:
            break
    return beta


def solve_first_order(
    problem: ProblemData,
    penalty: PenaltySpec,
    config: SolveConfig | None = None,
    baseline: BaselineConfig | None = None,
) -> Solution:
    """Active-set outer loop with a first-order inner solver.

    Identical Step-3 logic to the quadratic solver (scores, one-at-a-time
    activation, zero-with-zero-score downgrades, halting at tau); only the
    inner optimization differs.
    """
    config = config or SolveConfig()
    baseline = baseline or BaselineConfig()
    if penalty.family is PenaltyFamily.GROUP_LINF_ONE:
        if problem.groups is None:
            raise ConfigurationError("group penalty requires a group partition")
        if baseline.method is BaselineMethod.COORDINATE:
            raise ConfigurationError("the group baseline is proximal only")
    inner = (
        coordinate_descent_inner
        if baseline.method is BaselineMethod.COORDINATE
        else proximal_inner
    )
    tol = baseline.inner_tol if baseline.inner_tol is not None else config.tau
    grouped = penalty.family is PenaltyFamily.GROUP_LINF_ONE

    t0 = time.perf_counter()
    beta = np.zeros(problem.p)
    if config.beta0 is not None:
        beta = np.asarray(config.beta0, dtype=float).copy()
    if grouped:
        active_groups = [k for k, g in enumerate(problem.groups) if np.any(beta[g] != 0)]
    else:
        active = list(np.nonzero(beta)[0])

    n_outer = 0
    n_solves = 0
    status = "max_outer"
    max_outer = config.resolved_max_outer(problem.p)
    for outer in range(1, max_outer + 1):
        n_outer = outer
        coords = (
            np.concatenate([problem.groups[k] for k in active_groups]).astype(int)
            if grouped and active_groups
            else (np.asarray(active, dtype=int) if not grouped else np.asarray([], dtype=int))
        )
        if coords.size:
            beta[coords] = inner(problem, penalty, coords, beta[coords], baseline, tol)
            n_solves += 1

        c = stationarity_vector(problem, penalty, beta)
        gtol = SCORE_TOL * (1.0 + penalty.lambda1)
        if grouped:
            scores = np.array([water_fill_level(c[g], penalty.lambda1) for g in problem.groups])
            removed = False
            for k in list(active_groups):
                if np.all(np.abs(beta[problem.groups[k]]) <= ZERO_TOL) and scores[k] <= gtol:
                    active_groups.remove(k)
                    beta[problem.groups[k]] = 0.0
                    removed = True
                    break
            if removed:
                continue
            inactive = [k for k in range(len(problem.groups)) if k not in active_groups]
            best = max(inactive, key=lambda k: scores[k], default=None)
            if best is None or scores[best] <= config.tau:
                status = "converged"
                break
            active_groups.append(best)
        else:
            scores = np.abs(c) - penalty.lambda1
            removed = False
            for j in list(active):
                if abs(beta[j]) <= ZERO_TOL and max(scores[j], 0.0) <= gtol:
                    active.remove(j)
                    beta[j] = 0.0
                    removed = True
                    break
            if removed:
                continue
            active_set = set(active)
            inactive = [j for j in range(problem.p) if j not in active_set]
            best = max(inactive, key=lambda j: scores[j], default=None)
            if best is None or scores[best] <= config.tau:
                status = "converged"
                break
            active.append(best)

    wall = time.perf_counter() - t0
    return Solution(
        beta=beta.copy(),
        objective=evaluate_objective(problem, penalty, beta),
        kkt_residual=kkt_violation(problem, penalty, beta),
        n_outer=n_outer,
        n_solves=n_solves,
        n_backtracks=0,
        wall_time_s=wall,
        status=status,
    )


def fit(
    problem: ProblemData,
    penalty: PenaltySpec,
    config: SolveConfig | None = None,
    method: str = "quadratic",
    baseline: BaselineConfig | None = None,
) -> Solution:
    """Dispatch a solve to the quadratic engine or a first-order baseline."""
    if method == "quadratic":
        from .solver import solve

        return solve(problem, penalty, config)
    if method in ("coordinate", "proximal"):
        base = baseline or BaselineConfig(method=BaselineMethod(method))
        if base.method.value != method:
            base = BaselineConfig(
                method=BaselineMethod(method),
                inner_tol=base.inner_tol,
                inner_max_iter=base.inner_max_iter,
                restart=base.restart,
            )
        return solve_first_order(problem, penalty, config, base)
    raise ConfigurationError(f"unknown method {method!r}")
