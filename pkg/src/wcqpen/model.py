"""Problem data, penalty parametrizations and objective evaluation.

Two objective conventions coexist.  The user-facing one is

    F(beta) = 1/2 ||X beta - y||^2 + lambda1 * Omega(beta) + lambda2/2 ||beta||^2,

with Omega the l1 norm (elastic net) or the sum of groupwise l-infinity norms.
The internal minimax convention is

    J(beta, gamma) = ||X beta - y||^2 + lambda ||beta - gamma||^2,

maximized over gamma in an uncertainty set of radius eta_gamma, with
lambda = lambda2 and eta_gamma = lambda1 / lambda2.  When gamma is worst-case
for beta the two agree through an affine map with a constant offset
lambda * eta_gamma^2 * p (elastic net) or * K (group penalty).
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError, InstanceError, PureLassoMode


class PenaltyFamily(enum.Enum):
    ELASTIC_NET = "enet"
    GROUP_LINF_ONE = "grpinf"


@dataclass(frozen=True)
class ProblemData:
    """An immutable regression instance.

    Parameters
    ----------
    X : ndarray of shape (n, p)
        Dense design matrix.
    y : ndarray of shape (n,)
        Response vector.
    groups : list of ndarray, optional
        Partition of {0..p-1} into disjoint non-empty index sets.  Required
        by the group penalty, ignored by the elastic net.
    """

    X: np.ndarray
    y: np.ndarray
    groups: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        X = np.ascontiguousarray(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        if X.ndim != 2:
            raise InstanceError(f"X must be a 2-d matrix, got ndim={X.ndim}")
        n, p = X.shape
        if n < 1 or p < 1:
            raise InstanceError(f"need n >= 1 and p >= 1, got shape {X.shape}")
        if y.shape[0] != n:
            raise InstanceError(f"y has length {y.shape[0]}, expected {n}")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if self.groups is not None:
            groups = tuple(np.asarray(g, dtype=int).ravel() for g in self.groups)
            if not groups:
                raise InstanceError("groups must contain at least one index set")
            concat = np.concatenate(groups)
            if any(g.size == 0 for g in groups):
                raise InstanceError("empty group in partition")
            if np.any(concat < 0) or np.any(concat >= p):
                raise InstanceError("group indices out of range")
            if not np.array_equal(np.sort(concat), np.arange(p)):
                raise InstanceError("groups must partition {0..p-1} without overlap")
            for g in groups:
                g.setflags(write=False)
            object.__setattr__(self, "groups", groups)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def n_groups(self) -> int:
        if self.groups is None:
            raise ConfigurationError("problem has no group partition")
        return len(self.groups)


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty family and weights.

    lambda1 weighs the sparsity term (l1 or sum of groupwise l-infinity),
    lambda2 weighs the ridge term.  Both must be non-negative.  lambda2 = 0
    with lambda1 > 0 is the pure-Lasso boundary: the (lambda, eta_gamma)
    parametrization is then undefined and algorithms carry the product
    lambda * eta_gamma = lambda1 instead.
    """

    family: PenaltyFamily
    lambda1: float
    lambda2: float

    def __post_init__(self):
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ConfigurationError(
                f"penalty weights must be non-negative, got ({self.lambda1}, {self.lambda2})"
            )

    @property
    def lam(self) -> float:
        """Quadratic-penalty weight of the minimax convention (= lambda2)."""
        return self.lambda2

    @property
    def is_pure_lasso(self) -> bool:
        return self.lambda2 == 0.0 and self.lambda1 > 0.0

    @property
    def eta_gamma(self) -> float:
        """Uncertainty radius lambda1 / lambda2; raises in pure-Lasso mode."""
        if self.lambda2 > 0:
            return self.lambda1 / self.lambda2
        if self.lambda1 == 0.0:
            return 0.0
        raise PureLassoMode("eta_gamma undefined for lambda2 = 0 with lambda1 > 0")


def parametrization_map(lambda1: float, lambda2: float) -> tuple[float, float]:
    """Map user weights (lambda1, lambda2) to minimax parameters (lambda, eta_gamma).

    Raises
    ------
    PureLassoMode
        If lambda2 = 0 while lambda1 > 0; the caller should use the product
        form lambda * eta_gamma = lambda1.
    """
    if lambda1 < 0 or lambda2 < 0:
        raise ConfigurationError("penalty weights must be non-negative")
    if lambda2 == 0:
        if lambda1 == 0:
            return 0.0, 0.0
        raise PureLassoMode("lambda2 = 0: use the product lambda*eta_gamma = lambda1")
    return lambda2, lambda1 / lambda2


@dataclass(frozen=True)
class Objective:
    """Objective value in both conventions.

    ``minimax_value`` and ``constant_offset`` are NaN in pure-Lasso mode,
    where the minimax convention degenerates.  Otherwise

        user_value = (minimax_value - constant_offset) / 2

    whenever the worst-case gamma was used, which ``evaluate_objective``
    guarantees.
    """

    user_value: float
    minimax_value: float = math.nan
    constant_offset: float = math.nan


def penalty_term(problem: ProblemData, penalty: PenaltySpec, beta: np.ndarray) -> float:
    """Omega(beta): l1 norm or sum of groupwise l-infinity norms."""
    if penalty.family is PenaltyFamily.ELASTIC_NET:
        return float(np.sum(np.abs(beta)))
    if problem.groups is None:
        raise ConfigurationError("group penalty requires a group partition")
    return float(sum(np.max(np.abs(beta[g])) for g in problem.groups))


def evaluate_objective(problem: ProblemData, penalty: PenaltySpec, beta: np.ndarray) -> Objective:
    """Evaluate both objective conventions at ``beta``.

    The minimax value uses the worst-case gamma for ``beta``; it is NaN in
    pure-Lasso mode where the quadratic-penalty form does not exist.
    """
    beta = np.asarray(beta, dtype=float).ravel()
    if beta.shape[0] != problem.p:
        raise InstanceError(f"beta has length {beta.shape[0]}, expected {problem.p}")
    if penalty.family is PenaltyFamily.GROUP_LINF_ONE and problem.groups is None:
        raise ConfigurationError("group penalty requires a group partition")

    resid = problem.X @ beta - problem.y
    rss = float(resid @ resid)
    omega = penalty_term(problem, penalty, beta)
    sq = float(beta @ beta)
    user = 0.5 * rss + penalty.lambda1 * omega + 0.5 * penalty.lambda2 * sq

    if penalty.is_pure_lasso:
        return Objective(user_value=user)

    lam = penalty.lam
    eta = penalty.eta_gamma
    n_units = problem.p if penalty.family is PenaltyFamily.ELASTIC_NET else problem.n_groups
    offset = lam * eta * eta * n_units
    # ||beta - gamma||^2 at a worst-case gamma expands to
    # ||beta||^2 + 2 eta Omega(beta) + eta^2 * n_units.
    minimax = rss + lam * (sq + 2.0 * eta * omega) + offset
    return Objective(user_value=user, minimax_value=minimax, constant_offset=offset)


def lambda1_max(problem: ProblemData, family: PenaltyFamily) -> float:
    """Smallest lambda1 for which beta = 0 is optimal (any lambda2)."""
    corr = problem.X.T @ problem.y
    if family is PenaltyFamily.ELASTIC_NET:
        return float(np.max(np.abs(corr))) if corr.size else 0.0
    if problem.groups is None:
        raise ConfigurationError("group penalty requires a group partition")
    return float(max(np.sum(np.abs(corr[g])) for g in problem.groups))


def load_problem_csv(path, groups_path=None) -> ProblemData:
    """Read a problem instance from CSV: first column y, remaining columns X.

    A non-numeric first row is treated as a header.  ``groups_path`` points to
    a JSON array of integer arrays with 1-based column indices into X.
    """
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for i, row in enumerate(reader):
            row = [cell.strip() for cell in row if cell.strip() != ""]
            if not row:
                continue
            if i == 0:
                try:
                    float(row[0])
                except ValueError:
                    continue
            rows.append([float(cell) for cell in row])
    if not rows:
        raise InstanceError(f"no data rows in {path}")
    data = np.asarray(rows, dtype=float)
    if data.shape[1] < 2:
        raise InstanceError("need at least two columns (y and one predictor)")
    y, X = data[:, 0], data[:, 1:]
    groups = None
    if groups_path is not None:
        groups = load_groups_json(groups_path)
    return ProblemData(X=X, y=y, groups=groups)


def load_groups_json(path) -> tuple[np.ndarray, ...]:
    """Read a group partition (JSON array of 1-based integer arrays)."""
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, list) or not all(isinstance(g, list) for g in raw):
        raise ConfigurationError("groups file must be a JSON array of integer arrays")
    return tuple(np.asarray(g, dtype=int) - 1 for g in raw)
