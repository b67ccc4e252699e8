"""Certified lower bounds on the minimax optimum.

All three certificates start from an infeasible adversarial vector gamma
(its dual norm exceeds the radius eta) obtained by nulling the gradient off
the active set, so that the current iterate is the exact minimizer
beta*(gamma) of J(., gamma).  Shrinking gamma back into the uncertainty set
costs a quantifiable amount, which turns J(beta*(gamma), gamma) into a lower
bound on min_beta max_gamma J:

* the main bound shrinks gamma uniformly by eta / ||gamma||*;
* the tight variant keeps a set S (the active coordinates) unshrunk and
  scales only the complement, which is never worse;
* the Fenchel bound (elastic net only) evaluates the dual objective of the
  penalized problem at the scaled residual point.

The dual norm is l-infinity for the elastic net and the per-group maximum of
groupwise l1 norms for the group penalty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, MonitoringUnsupportedError
from .model import PenaltyFamily, PenaltySpec, ProblemData, evaluate_objective
from .oracle import GammaValue

# A certificate whose stationarity precondition is violated by more than this
# (relative) is meaningless; callers are expected to pass exact minimizers.
STATIONARITY_RTOL = 1e-8


@dataclass
class GapCertificate:
    """A lower bound on the minimax optimum and the induced optimality gap.

    ``current_value`` is the value the bound is measured against: for the
    shrinkage certificates it is J(beta*(gamma), gamma) at the certificate's
    own gamma (the bound's natural scale, which the lower bound reaches when
    gamma becomes feasible); for the Fenchel certificate it is the worst-case
    objective at beta*(gamma), which the dual value reaches at the optimum.
    Either way the gap contracts to zero at convergence and never goes
    negative beyond roundoff.
    """

    method: str
    lower_bound: float
    current_value: float
    gap: float
    gamma_norm: float
    alpha: float | None = None
    kept_set: np.ndarray | None = None
    iteration: int | None = None


def dual_norm(gamma_values: np.ndarray, penalty: PenaltySpec, groups=None) -> float:
    """Gauge of the uncertainty set: l-infinity, or max of groupwise l1 norms."""
    g = np.asarray(gamma_values, dtype=float).ravel()
    if penalty.family is PenaltyFamily.ELASTIC_NET:
        return float(np.max(np.abs(g))) if g.size else 0.0
    if groups is None:
        raise ConfigurationError("group penalty requires a group partition")
    return float(max(np.sum(np.abs(g[idx])) for idx in groups))


def minimize_quadratic(problem: ProblemData, lam: float, gamma: np.ndarray) -> np.ndarray:
    """Exact minimizer of ||X b - y||^2 + lam ||b - gamma||^2 (lam > 0).

    Uses the p x p normal equations when p <= n, otherwise the matrix
    inversion lemma through the n x n kernel system.
    """
    if lam <= 0:
        raise MonitoringUnsupportedError("the quadratic completion requires lambda2 > 0")
    X, y = problem.X, problem.y
    n, p = X.shape
    rhs = X.T @ y + lam * np.asarray(gamma, dtype=float).ravel()
    if p <= n:
        return np.linalg.solve(X.T @ X + lam * np.eye(p), rhs)
    W = X @ X.T + lam * np.eye(n)
    return (rhs - X.T @ np.linalg.solve(W, X @ rhs)) / lam


def _values(gamma) -> np.ndarray:
    return gamma.values if isinstance(gamma, GammaValue) else np.asarray(gamma, dtype=float).ravel()


def _j_at(problem: ProblemData, lam: float, beta: np.ndarray, gamma: np.ndarray) -> float:
    r = problem.X @ beta - problem.y
    d = beta - gamma
    return float(r @ r + lam * (d @ d))


def _prepare(problem, penalty, gamma, beta_star):
    if penalty.lambda2 <= 0:
        raise MonitoringUnsupportedError("gap certificates require lambda2 > 0")
    g = _values(gamma)
    beta = np.asarray(beta_star, dtype=float).ravel()
    return g, beta


def bound_main(problem: ProblemData, penalty: PenaltySpec, gamma, beta_star_gamma) -> GapCertificate:
    """Uniform-shrinkage lower bound.

    With nrm = ||gamma||* >= eta and J0 = J(beta*(gamma), gamma),

        lower = (eta / nrm) J0 - lam * eta * (nrm - eta) / nrm^2 * ||gamma||^2.

    A feasible gamma (nrm <= eta) certifies J0 itself.
    """
    g, beta = _prepare(problem, penalty, gamma, beta_star_gamma)
    lam, eta = penalty.lam, penalty.eta_gamma
    nrm = dual_norm(g, penalty, problem.groups)
    j0 = _j_at(problem, lam, beta, g)
    if nrm <= eta:
        lower = j0
        alpha = 1.0
    else:
        alpha = eta / nrm
        lower = alpha * j0 - lam * eta * (nrm - eta) / nrm**2 * float(g @ g)
    return GapCertificate(
        method="wcq-main",
        lower_bound=lower,
        current_value=j0,
        gap=j0 - lower,
        gamma_norm=nrm,
        alpha=alpha,
    )


def bound_tight(
    problem: ProblemData,
    penalty: PenaltySpec,
    gamma,
    beta_star_gamma,
    kept=None,
    alpha: float | None = None,
) -> GapCertificate:
    """Partial-shrinkage lower bound: keep gamma on ``kept``, scale the rest.

    With alpha in (0, 1] the largest value making (gamma_S, alpha gamma_Sc)
    feasible,

        lower = alpha * J(beta*(gamma), gamma) - lam * alpha * (1 - alpha) * ||gamma_Sc||^2.

    ``kept`` defaults to the support of the minimizer (whole groups for the
    group penalty).  If gamma restricted to ``kept`` is already infeasible,
    the bound falls back to full shrinkage (the main bound).
    """
    g, beta = _prepare(problem, penalty, gamma, beta_star_gamma)
    lam, eta = penalty.lam, penalty.eta_gamma
    p = problem.p
    if kept is None:
        if penalty.family is PenaltyFamily.ELASTIC_NET:
            kept = np.nonzero(beta)[0]
        else:
            kept = np.concatenate(
                [idx for idx in problem.groups if np.any(beta[idx] != 0)] or [np.array([], dtype=int)]
            )
    kept = np.asarray(kept, dtype=int)
    mask = np.zeros(p, dtype=bool)
    mask[kept] = True

    g_kept = np.where(mask, g, 0.0)
    g_rest = np.where(mask, 0.0, g)
    nrm = dual_norm(g, penalty, problem.groups)
    nrm_kept = dual_norm(g_kept, penalty, problem.groups)
    nrm_rest = dual_norm(g_rest, penalty, problem.groups)
    # Keeping whole groups/coordinates means feasibility splits over S and Sc.
    if nrm_kept > eta * (1 + 1e-12):
        cert = bound_main(problem, penalty, gamma, beta_star_gamma)
        cert.method = "wcq-tight"
        cert.kept_set = kept
        return cert
    if alpha is None:
        alpha = 1.0 if nrm_rest <= eta else eta / nrm_rest
    j0 = _j_at(problem, lam, beta, g)
    lower = alpha * j0 - lam * alpha * (1.0 - alpha) * float(g_rest @ g_rest)
    return GapCertificate(
        method="wcq-tight",
        lower_bound=lower,
        current_value=j0,
        gap=j0 - lower,
        gamma_norm=nrm,
        alpha=alpha,
        kept_set=kept,
    )


def fenchel_gap(problem: ProblemData, penalty: PenaltySpec, gamma, beta_star_gamma) -> GapCertificate:
    """Fenchel-dual lower bound for the elastic net.

    The dual point is the scaled residual kappa = -2 s r with r = X beta* - y
    and s = min(1, eta / ||gamma||_inf); the gradient-nulling completion
    guarantees s |x_j^T r| <= lam * eta off the support, so the dual penalty
    terms there vanish.  In the squared-loss convention the dual value is

        -2 s r^T y - s^2 ||r||^2 - sum_j max(2 s |x_j^T r| - 2 lambda1, 0)^2 / (4 lam),

    mapped onto the minimax scale by adding the constant lam * eta^2 * p.
    Exact at the optimum (strong duality), valid at every iterate.
    """
    if penalty.family is not PenaltyFamily.ELASTIC_NET:
        raise MonitoringUnsupportedError("the Fenchel certificate covers the elastic net only")
    g, beta = _prepare(problem, penalty, gamma, beta_star_gamma)
    current = evaluate_objective(problem, penalty, beta).minimax_value
    lam, eta = penalty.lam, penalty.eta_gamma
    nrm = dual_norm(g, penalty, None)
    s = 1.0 if nrm <= eta else eta / nrm
    r = problem.X @ beta - problem.y
    xtr = problem.X.T @ r
    excess = np.maximum(2.0 * s * np.abs(xtr) - 2.0 * penalty.lambda1, 0.0)
    dual_value = (
        -2.0 * s * float(r @ problem.y)
        - s * s * float(r @ r)
        - float(excess @ excess) / (4.0 * lam)
    )
    lower = dual_value + lam * eta * eta * problem.p
    return GapCertificate(
        method="fenchel",
        lower_bound=lower,
        current_value=current,
        gap=current - lower,
        gamma_norm=nrm,
        alpha=s,
    )
