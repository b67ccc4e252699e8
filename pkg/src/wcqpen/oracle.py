"""Worst-case perturbation machinery.

Everything gamma-related lives here: picking the adversarial gamma for a
coefficient vector, testing whether a gamma is (still) worst-case, locating
the boundary where it stops being worst-case along a segment, the violation
scores that drive active-set updates, the gradient-nulling completion used by
the gap certificates, and the rank-one data perturbation that attains the
robust-regression upper bound.

The uncertainty sets are polytopes: the elastic net uses the l-infinity ball
of radius eta (vertices {-eta, +eta}^p), the group penalty uses a per-group
l1 ball of radius eta (vertices +-eta e_j).  Worst-case values sit at
vertices; tied situations are resolved with gradient information, then by
a deterministic index rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    ConfigurationError,
    ContractViolationError,
    DegenerateDirectionError,
    MonitoringUnsupportedError,
)
from .model import PenaltyFamily, PenaltySpec, ProblemData

# Absolute-relative hybrid so the test is scale-free near beta = 0.
COHERENCE_RTOL = 1e-12


@dataclass
class GammaValue:
    """An adversarial gamma with optional support metadata.

    ``carriers`` maps a group index to its vertex (coordinate, sign); a tied
    block stores the equal-magnitude index set and the convex mass split.
    """

    values: np.ndarray
    carriers: dict[int, tuple[int, float]] | None = None
    tied_blocks: dict[int, tuple[tuple[int, ...], tuple[float, ...]]] | None = None


@dataclass
class BacktrackResult:
    """Largest coherent step along a segment.

    ``rho`` in [0, 1] is the step fraction; ``boundary_index`` the coordinate
    whose constraint became active (None when rho = 1); ``beta_at_boundary``
    has the boundary coordinate snapped exactly (zero crossing or exact tie).
    """

    rho: float
    boundary_index: int | None
    beta_at_boundary: np.ndarray


def _iter_groups(beta: np.ndarray, penalty: PenaltySpec, groups):
    if penalty.family is PenaltyFamily.ELASTIC_NET:
        for j in range(beta.shape[0]):
            yield np.array([j])
    else:
        if groups is None:
            raise ConfigurationError("group penalty requires a group partition")
        yield from groups


def max_squared_distance(beta: np.ndarray, penalty: PenaltySpec, groups=None) -> float:
    """max over the uncertainty set of ||beta - gamma||^2 (attained at vertices)."""
    beta = np.asarray(beta, dtype=float)
    eta = penalty.eta_gamma
    if penalty.family is PenaltyFamily.ELASTIC_NET:
        return float(np.sum((np.abs(beta) + eta) ** 2))
    if groups is None:
        raise ConfigurationError("group penalty requires a group partition")
    total = 0.0
    for g in groups:
        bg = beta[g]
        total += float(bg @ bg) + 2.0 * eta * float(np.max(np.abs(bg))) + eta * eta
    return total


def worst_case_gamma(
    beta: np.ndarray,
    penalty: PenaltySpec,
    descent_dir: np.ndarray | None = None,
    groups=None,
) -> GammaValue:
    """Pick a gamma maximizing ||beta - gamma||^2 over the uncertainty set.

    Ties (zero coordinates, equal group maxima) are broken with the descent
    direction when given: the chosen vertex is the one that remains worst as
    beta moves along it.  Without a direction the rule is +eta for the
    elastic net and the lowest index for groups.
    """
    beta = np.asarray(beta, dtype=float).ravel()
    eta = penalty.eta_gamma
    d = None if descent_dir is None else np.asarray(descent_dir, dtype=float).ravel()
    if d is not None and d.shape != beta.shape:
        raise ConfigurationError("descent_dir must match beta in length")

    if penalty.family is PenaltyFamily.ELASTIC_NET:
        gamma = np.where(beta > 0, -eta, np.where(beta < 0, eta, np.nan))
        zeros = np.isnan(gamma)
        if np.any(zeros):
            fill = np.full(int(zeros.sum()), eta)
            if d is not None:
                dz = d[zeros]
                fill = np.where(dz > 0, -eta, np.where(dz < 0, eta, eta))
            gamma[zeros] = fill
        return GammaValue(values=gamma)

    if groups is None:
        raise ConfigurationError("group penalty requires a group partition")
    gamma = np.zeros_like(beta)
    carriers: dict[int, tuple[int, float]] = {}
    for k, g in enumerate(groups):
        bg = np.abs(beta[g])
        m = bg.max()
        tied = np.nonzero(bg == m)[0]
        if tied.size == 1 or d is None:
            loc = int(tied[0])
        elif m > 0:
            # First-order growth of the vertex value along d is sign(beta_j) d_j.
            loc = int(tied[np.argmax(np.sign(beta[g][tied]) * d[g][tied])])
        else:
            loc = int(tied[np.argmax(np.abs(d[g][tied]))])
        j = int(g[loc])
        if beta[j] != 0:
            sign = -float(np.sign(beta[j]))
        elif d is not None and d[j] != 0:
            sign = -float(np.sign(d[j]))
        else:
            sign = 1.0
        gamma[j] = sign * eta
        carriers[k] = (j, sign)
    return GammaValue(values=gamma, carriers=carriers)


def is_coherent(beta: np.ndarray, gamma, penalty: PenaltySpec, groups=None) -> bool:
    """True iff ||beta - gamma||^2 attains the worst-case maximum (within tolerance)."""
    beta = np.asarray(beta, dtype=float).ravel()
    gv = gamma.values if isinstance(gamma, GammaValue) else np.asarray(gamma, dtype=float).ravel()
    diff = beta - gv
    val = float(diff @ diff)
    best = max_squared_distance(beta, penalty, groups)
    return best - val <= COHERENCE_RTOL * (1.0 + float(beta @ beta))


def _crossing(h_old: float, h_new: float) -> float | None:
    """First root in (0, 1] of the affine h(t) starting from h_old >= 0."""
    if h_new >= 0:
        return None
    return h_old / (h_old - h_new)


def backtrack(
    beta_old: np.ndarray,
    beta_new: np.ndarray,
    gamma,
    penalty: PenaltySpec,
    groups=None,
) -> BacktrackResult:
    """Largest step t such that gamma stays worst-case along beta_old + t (beta_new - beta_old).

    Raises
    ------
    ContractViolationError
        If gamma is not worst-case for beta_old to begin with.
    """
    beta_old = np.asarray(beta_old, dtype=float).ravel()
    beta_new = np.asarray(beta_new, dtype=float).ravel()
    gv = gamma.values if isinstance(gamma, GammaValue) else np.asarray(gamma, dtype=float).ravel()
    if not is_coherent(beta_old, gv, penalty, groups):
        raise ContractViolationError("gamma is not worst-case for beta_old")

    eta = penalty.eta_gamma
    rho = 1.0
    boundary: int | None = None

    if penalty.family is PenaltyFamily.ELASTIC_NET:
        for j in range(beta_old.shape[0]):
            if gv[j] == 0:  # eta = 0: no sign constraint
                continue
            s = -np.sign(gv[j])
            t = _crossing(s * beta_old[j], s * beta_new[j])
            if t is not None and t < rho:
                rho, boundary = t, j
        bb = beta_old + rho * (beta_new - beta_old)
        if boundary is not None:
            bb[boundary] = 0.0
        return BacktrackResult(rho=rho, boundary_index=boundary, beta_at_boundary=bb)

    if groups is None:
        raise ConfigurationError("group penalty requires a group partition")
    snap: tuple[int, int] | None = None  # (boundary coord, carrier) for tie snapping
    for g in groups:
        gg = gv[g]
        if not np.any(gg != 0):
            continue
        loc = int(np.argmax(np.abs(gg)))
        jstar = int(g[loc])
        s = -np.sign(gv[jstar])
        m_old, m_new = s * beta_old[jstar], s * beta_new[jstar]
        t = _crossing(m_old, m_new)
        if t is not None and t < rho:
            rho, boundary, snap = t, jstar, None
        for j in g:
            if j == jstar:
                continue
            for sf in (1.0, -1.0):
                t = _crossing(m_old - sf * beta_old[j], m_new - sf * beta_new[j])
                if t is not None and t < rho:
                    rho, boundary, snap = t, int(j), (int(j), jstar)
    bb = beta_old + rho * (beta_new - beta_old)
    if boundary is not None:
        if snap is None:
            bb[boundary] = 0.0
        else:
            f, jstar = snap
            bb[f] = np.sign(bb[f]) * abs(bb[jstar])
    return BacktrackResult(rho=rho, boundary_index=boundary, beta_at_boundary=bb)


def water_fill_level(values: np.ndarray, budget: float) -> float:
    """Level v >= 0 with sum_j max(|values_j| - v, 0) = budget (0 if within budget).

    Solved exactly by sorting; this is the l1-ball projection threshold.
    """
    a = np.abs(np.asarray(values, dtype=float).ravel())
    if a.size == 0:
        return 0.0
    if budget <= 0:
        return float(a.max())
    if float(a.sum()) <= budget:
        return 0.0
    s = np.sort(a)[::-1]
    cum = np.cumsum(s)
    ks = np.arange(1, s.size + 1)
    cand = (cum - budget) / ks
    k = int(np.nonzero(s - cand > 0)[0].max())
    return float(cand[k])


def worst_case_gradient(
    problem: ProblemData,
    penalty: PenaltySpec,
    beta: np.ndarray,
    active_set=None,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Per-coordinate violation scores, plus per-group scores for the group penalty.

    With c_j = x_j^T (X beta - y) + lambda2 beta_j, the elastic-net score is
    g_j = max(|c_j| - lambda1, 0).  For the group penalty the group score v_k
    is the residual water level after optimally spending the group's budget;
    each coordinate reports min(|c_j|, v_k).  All scores vanish exactly at a
    minimizer of the user objective.
    """
    beta = np.asarray(beta, dtype=float).ravel()
    c = problem.X.T @ (problem.X @ beta - problem.y) + penalty.lambda2 * beta
    if penalty.family is PenaltyFamily.ELASTIC_NET:
        return np.maximum(np.abs(c) - penalty.lambda1, 0.0), None
    if problem.groups is None:
        raise ConfigurationError("group penalty requires a group partition")
    g = np.empty_like(c)
    v = np.empty(len(problem.groups))
    for k, idx in enumerate(problem.groups):
        v[k] = water_fill_level(c[idx], penalty.lambda1)
        g[idx] = np.minimum(np.abs(c[idx]), v[k])
    return g, v


def stationarity_vector(problem: ProblemData, penalty: PenaltySpec, beta: np.ndarray) -> np.ndarray:
    """c = X^T (X beta - y) + lambda2 beta, the smooth part of the optimality system."""
    beta = np.asarray(beta, dtype=float).ravel()
    return problem.X.T @ (problem.X @ beta - problem.y) + penalty.lambda2 * beta


# Relative band for detecting tied group maxima in approximate iterates.
GROUP_TIE_RTOL = 1e-9


def enet_signed_residual(c: np.ndarray, beta: np.ndarray, lam1: float) -> float:
    """Exact l1-subgradient violation: active coordinates must satisfy
    c_j = -lam1 sign(beta_j), inactive ones |c_j| <= lam1."""
    active = beta != 0
    worst = 0.0
    if np.any(active):
        worst = float(np.max(np.abs(c[active] + lam1 * np.sign(beta[active]))))
    if np.any(~active):
        worst = max(worst, float(np.max(np.maximum(np.abs(c[~active]) - lam1, 0.0))))
    return worst


def group_violation(c_g: np.ndarray, beta_g: np.ndarray, lam1: float, tie_rtol: float = GROUP_TIE_RTOL) -> float:
    """Exact subgradient violation of one group of the l-infinity,1 penalty.

    Inactive group: the water level (0 when sum|c| <= lam1).  Active group:
    the smallest level t such that a non-negative mass allocation over the
    (tolerance-banded) tied set exists with total lam1, each within t of its
    stationarity target -sign(beta_j) c_j, while off-max coordinates need
    |c_j| <= t.  Zero exactly at minimizers.
    """
    absb = np.abs(beta_g)
    m = float(absb.max()) if absb.size else 0.0
    if m == 0.0:
        tot = float(np.sum(np.abs(c_g)))
        return water_fill_level(c_g, lam1) if tot > lam1 else 0.0
    tied = absb >= m - tie_rtol * m
    viol = float(np.max(np.abs(c_g[~tied]), initial=0.0))
    a = -np.sign(beta_g[tied]) * c_g[tied]
    viol = max(viol, float(np.max(-a, initial=0.0)))
    viol = max(viol, water_fill_level(np.maximum(a, 0.0), lam1))
    viol = max(viol, (lam1 - float(np.sum(a))) / int(tied.sum()))
    return max(viol, 0.0)


def subgradient_residual(problem: ProblemData, penalty: PenaltySpec, beta: np.ndarray) -> float:
    """Exact first-order violation of the user objective (0 iff optimal)."""
    beta = np.asarray(beta, dtype=float).ravel()
    c = stationarity_vector(problem, penalty, beta)
    if penalty.family is PenaltyFamily.ELASTIC_NET:
        return enet_signed_residual(c, beta, penalty.lambda1)
    if problem.groups is None:
        raise ConfigurationError("group penalty requires a group partition")
    return max(group_violation(c[g], beta[g], penalty.lambda1) for g in problem.groups)


def kkt_value(problem: ProblemData, penalty: PenaltySpec, beta: np.ndarray) -> float:
    """First-order violation shared by every solver as the halting measure.

    Elastic net: max_j |x_j^T (y - X beta) - lambda2 beta_j| - lambda1 (the
    classic path-solver residual; negative slack means strict interior).
    Group penalty: the largest per-group subgradient violation, which also
    accounts for mass alignment on the tied maxima of active groups.
    """
    beta = np.asarray(beta, dtype=float).ravel()
    c = stationarity_vector(problem, penalty, beta)
    if penalty.family is PenaltyFamily.ELASTIC_NET:
        return float(np.max(np.abs(c)) - penalty.lambda1)
    if problem.groups is None:
        raise ConfigurationError("group penalty requires a group partition")
    return max(group_violation(c[g], beta[g], penalty.lambda1) for g in problem.groups)


def complete_gamma_inactive(
    problem: ProblemData,
    penalty: PenaltySpec,
    beta: np.ndarray,
    gamma_active,
    active=None,
) -> GammaValue:
    """Extend an active-set gamma to all of {1..p} by nulling the gradient.

    Off the active set the returned gamma_j = c_j / lambda makes the
    stationarity residual of the quadratic-penalty objective vanish exactly
    at the current beta.  The result may violate the uncertainty-set bound;
    that excess is what the gap certificates consume.
    """
    if penalty.lambda2 <= 0:
        raise MonitoringUnsupportedError("gamma completion requires lambda2 > 0")
    beta = np.asarray(beta, dtype=float).ravel()
    gv = gamma_active.values if isinstance(gamma_active, GammaValue) else np.asarray(gamma_active, dtype=float).ravel()
    if active is None:
        if penalty.family is PenaltyFamily.ELASTIC_NET:
            active = np.nonzero(beta)[0]
        else:
            active = np.concatenate(
                [g for g in problem.groups if np.any(beta[g] != 0)]
            ) if problem.groups else np.array([], dtype=int)
    active = np.asarray(active, dtype=int)
    mask = np.ones(problem.p, dtype=bool)
    mask[active] = False
    c = stationarity_vector(problem, penalty, beta)
    out = gv.copy()
    out[mask] = c[mask] / penalty.lam
    return GammaValue(values=out)


def adversarial_perturbation(
    beta: np.ndarray,
    gamma: np.ndarray,
    problem: ProblemData,
    eta_X: float,
    eta_eps: float,
    eps_per_obs: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Design and response perturbations attaining the robust upper bound.

    Returns (Delta, eps) with ||Delta||_F = eta_X and ||eps|| = n * eta_eps
    (or eta_eps when ``eps_per_obs`` is False; the two scalings reflect the
    two readings of the noise budget).  Both are collinear with the residual
    X (beta + gamma) - y, so

        ||(X - Delta) beta + X gamma + eps - y||
            = ||X (beta + gamma) - y|| + eta_X ||beta|| + ||eps||

    holds with equality, and no feasible perturbation can exceed it.
    """
    beta = np.asarray(beta, dtype=float).ravel()
    gamma = np.asarray(gamma, dtype=float).ravel()
    n, p = problem.X.shape
    r = problem.X @ (beta + gamma) - problem.y
    r_norm = float(np.linalg.norm(r))
    b_norm = float(np.linalg.norm(beta))
    if (eta_X > 0 or eta_eps > 0) and r_norm == 0:
        raise DegenerateDirectionError("zero residual: perturbation direction undefined")
    if eta_X > 0 and b_norm == 0:
        raise DegenerateDirectionError("zero beta: design perturbation direction undefined")

    delta = np.zeros((n, p))
    eps = np.zeros(n)
    if eta_X > 0:
        # -Delta beta must point along the residual for the bound to be met.
        delta = -eta_X * np.outer(r / r_norm, beta / b_norm)
    if eta_eps > 0:
        scale = n * eta_eps if eps_per_obs else eta_eps
        eps = scale * (r / r_norm)
    return delta, eps
