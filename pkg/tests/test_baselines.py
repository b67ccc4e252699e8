import numpy as np
import pytest

from wcqpen import (
    BaselineConfig,
    BaselineMethod,
    ConfigurationError,
    PenaltyFamily,
    ProblemData,
    SolveConfig,
    fit,
    kkt_violation,
    solve,
    solve_first_order,
)
from wcqpen.baselines import (
    coordinate_descent_inner,
    project_l1_ball,
    prox_linf,
    proximal_inner,
    soft_threshold,
)
from wcqpen.oracle import group_violation, stationarity_vector

from conftest import enet, grp, random_group_problem, random_problem


def group_violation_bisect(c_g, beta_g, lam1, iters=80):
    """Independent subgradient-distance oracle: bisection on the level t."""
    absb = np.abs(beta_g)
    m = absb.max()
    if m == 0:
        tot = np.sum(np.abs(c_g))
        if tot <= lam1:
            return 0.0
        lo, hi = 0.0, float(np.max(np.abs(c_g)))
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            if np.sum(np.maximum(np.abs(c_g) - mid, 0.0)) > lam1:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    tied = absb >= m - 1e-9 * m
    a = -np.sign(beta_g[tied]) * c_g[tied]
    off = np.abs(c_g[~tied])

    def feasible(t):
        if off.size and off.max() > t:
            return False
        lows = np.maximum(a - t, 0.0)
        highs = a + t
        if np.any(highs < 0):
            return False
        return np.sum(lows) <= lam1 <= np.sum(np.maximum(highs, 0.0))

    lo, hi = 0.0, float(np.max(np.abs(c_g), initial=0.0) + lam1 + 1.0)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


class TestArithmetic:
    def test_soft_threshold(self):
        assert soft_threshold(3.0, 1.0) / (1 + 1) == pytest.approx(1.0)
        assert soft_threshold(0.5, 1.0) == 0.0

    def test_momentum_sequence(self):
        t1 = 1.0
        t2 = (1 + np.sqrt(1 + 4 * t1 * t1)) / 2
        assert t2 == pytest.approx(1.6180339887, abs=1e-9)

    def test_linf_prox(self):
        out = prox_linf(np.array([3.0, 1.0]), 1.0)
        np.testing.assert_allclose(out, [2.0, 1.0])

    def test_l1_projection_oracle(self, rng):
        for _ in range(100):
            k = int(rng.integers(1, 7))
            v = rng.standard_normal(k) * 3
            radius = float(rng.uniform(0.1, 4.0))
            proj = project_l1_ball(v, radius)
            assert np.sum(np.abs(proj)) <= radius * (1 + 1e-12)
            # projection optimality: no feasible point is closer
            for _ in range(20):
                cand = rng.standard_normal(k)
                cand *= radius / max(np.sum(np.abs(cand)), radius)
                assert np.sum((v - proj) ** 2) <= np.sum((v - cand) ** 2) + 1e-10


class TestInnerSolvers:
    def test_cd_orthonormal_one_sweep(self, rng):
        y = rng.standard_normal(6)
        prob = ProblemData(X=np.eye(6), y=y)
        pen = enet(0.4, 0.6)
        cfg = BaselineConfig(method=BaselineMethod.COORDINATE, inner_max_iter=1)
        beta = coordinate_descent_inner(prob, pen, np.arange(6), np.zeros(6), cfg, tol=1e-12)
        np.testing.assert_allclose(beta, soft_threshold(y, 0.4) / (1 + 0.6), atol=1e-12)

    def test_cd_group_rejected(self, rng):
        prob = random_group_problem(rng, n=10, p=6)
        with pytest.raises(ConfigurationError):
            solve_first_order(
                prob, grp(0.5, 0.5), SolveConfig(), BaselineConfig(method=BaselineMethod.COORDINATE)
            )

    def test_proximal_matches_cd_enet(self, rng):
        prob = random_problem(rng, n=15, p=6)
        pen = enet(0.5, 0.5)
        cfg = BaselineConfig(method=BaselineMethod.PROXIMAL, restart=True)
        active = np.arange(6)
        b_prox = proximal_inner(prob, pen, active, np.zeros(6), cfg, tol=1e-12)
        b_cd = coordinate_descent_inner(
            prob, pen, active, np.zeros(6), BaselineConfig(), tol=1e-12
        )
        np.testing.assert_allclose(b_prox, b_cd, atol=1e-8)


class TestKktViolation:
    def test_identity_optimum_nonpositive(self, rng):
        y = rng.standard_normal(5)
        prob = ProblemData(X=np.eye(5), y=y)
        pen = enet(0.5, 0.5)
        beta = soft_threshold(y, 0.5) / 1.5
        assert kkt_violation(prob, pen, beta) <= 1e-12

    def test_null_model_slack_negative(self, rng):
        prob = random_problem(rng, n=10, p=4)
        top = float(np.max(np.abs(prob.X.T @ prob.y)))
        assert kkt_violation(prob, enet(top * 1.5, 0.5), np.zeros(4)) < 0

    def test_matches_independent_subgradient_oracle(self, rng):
        for _ in range(50):
            prob = random_group_problem(rng, n=10, p=8, max_size=4)
            pen = grp(0.6, 0.4)
            beta = np.where(rng.random(8) < 0.4, 0.0, rng.standard_normal(8))
            got = kkt_violation(prob, pen, beta)
            c = stationarity_vector(prob, pen, beta)
            want = max(
                group_violation_bisect(c[g], beta[g], pen.lambda1) for g in prob.groups
            )
            assert got == pytest.approx(want, abs=1e-10)

    def test_enet_value_is_path_residual(self, rng):
        prob = random_problem(rng, n=10, p=5)
        pen = enet(0.7, 0.3)
        beta = rng.standard_normal(5)
        c = prob.X.T @ (prob.X @ beta - prob.y) + 0.3 * beta
        assert kkt_violation(prob, pen, beta) == pytest.approx(
            np.max(np.abs(c)) - 0.7, rel=1e-12
        )


class TestOuterLoop:
    def test_oracle_triangle_small(self, rng):
        for _ in range(5):
            prob = random_problem(rng, n=25, p=10)
            pen = enet(float(rng.uniform(0.2, 1.0)), float(rng.uniform(0.2, 1.0)))
            vals = [
                solve(prob, pen, SolveConfig(tau=1e-12)).objective.user_value,
                solve_first_order(
                    prob, pen, SolveConfig(tau=1e-12),
                    BaselineConfig(method=BaselineMethod.COORDINATE, inner_tol=1e-12),
                ).objective.user_value,
                solve_first_order(
                    prob, pen, SolveConfig(tau=1e-12),
                    BaselineConfig(method=BaselineMethod.PROXIMAL, inner_tol=1e-12, restart=True),
                ).objective.user_value,
            ]
            ref = vals[0]
            for v in vals[1:]:
                assert v == pytest.approx(ref, rel=1e-6)

    def test_stopping_parity(self, rng):
        prob = random_problem(rng, n=30, p=12)
        pen = enet(0.3, 0.3)
        tau = 1e-3
        for method in ("quadratic", "coordinate", "proximal"):
            sol = fit(prob, pen, SolveConfig(tau=tau), method=method)
            assert sol.status == "converged"
            assert sol.kkt_residual <= tau

    def test_group_proximal_agreement(self, rng):
        for _ in range(4):
            prob = random_group_problem(rng, n=20, p=10, max_size=4)
            pen = grp(0.5, 0.6)
            q = solve(prob, pen, SolveConfig(tau=1e-10))
            p_ = solve_first_order(
                prob, pen, SolveConfig(tau=1e-10),
                BaselineConfig(method=BaselineMethod.PROXIMAL, inner_tol=1e-11, restart=True),
            )
            assert q.objective.user_value == pytest.approx(
                p_.objective.user_value, rel=1e-6
            )

    def test_baseline_monotone_objective(self, rng):
        # coordinate descent decreases the objective at every sweep
        prob = random_problem(rng, n=20, p=8)
        pen = enet(0.4, 0.4)

        def objective(b):
            r = prob.X @ b - prob.y
            return 0.5 * r @ r + 0.4 * np.abs(b).sum() + 0.2 * b @ b

        beta = np.zeros(8)
        prev = objective(beta)
        cfg = BaselineConfig(inner_max_iter=1)
        for _ in range(30):
            beta = coordinate_descent_inner(prob, pen, np.arange(8), beta, cfg, tol=0.0)
            cur = objective(beta)
            assert cur <= prev + 1e-12
            prev = cur

    def test_fit_dispatch(self, rng):
        prob = random_problem(rng, n=10, p=4)
        pen = enet(0.5, 0.5)
        assert fit(prob, pen, method="quadratic").status == "converged"
        with pytest.raises(ConfigurationError):
            fit(prob, pen, method="nope")
