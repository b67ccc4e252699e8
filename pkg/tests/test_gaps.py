import numpy as np
import pytest

from wcqpen import (
    BaselineConfig,
    BaselineMethod,
    GammaValue,
    MonitoringUnsupportedError,
    PenaltyFamily,
    ProblemData,
    SolveConfig,
    bound_main,
    bound_tight,
    fenchel_gap,
    minimize_quadratic,
    solve,
    solve_first_order,
)
from wcqpen.gaps import dual_norm
from wcqpen.oracle import complete_gamma_inactive, worst_case_gamma

from conftest import enet, grp, random_group_problem, random_problem


def completed_gamma(prob, pen, beta):
    gamma0 = worst_case_gamma(beta, pen, groups=prob.groups).values
    gamma0[beta == 0] = 0.0
    if pen.family is PenaltyFamily.GROUP_LINF_ONE:
        for g in prob.groups:
            if not np.any(beta[g] != 0):
                gamma0[g] = 0.0
    return complete_gamma_inactive(prob, pen, beta, gamma0)


def reference_optimum(prob, pen):
    sol = solve(prob, pen, SolveConfig(tau=1e-13))
    return sol.objective.minimax_value, sol


class TestBoundMain:
    def test_formula_example(self, rng):
        # eta = 1, gamma = (2, 0): lower = J0 / 2 - lam*1*(2-1)/4 * ||gamma||^2
        prob = random_problem(rng, n=4, p=2)
        pen = enet(1.0, 1.0)
        gamma = np.array([2.0, 0.0])
        beta_star = minimize_quadratic(prob, pen.lam, gamma)
        r = prob.X @ beta_star - prob.y
        j0 = float(r @ r) + pen.lam * float((beta_star - gamma) @ (beta_star - gamma))
        cert = bound_main(prob, pen, GammaValue(values=gamma), beta_star)
        assert cert.gamma_norm == pytest.approx(2.0)
        assert cert.lower_bound == pytest.approx(j0 / 2 - 1.0 * (2 - 1) / 4 * 4.0, rel=1e-12)

    def test_feasible_gamma_exact_at_optimum(self, rng):
        prob = random_problem(rng, n=20, p=6)
        pen = enet(0.8, 0.9)
        sol = solve(prob, pen, SolveConfig(tau=1e-13))
        gv = completed_gamma(prob, pen, sol.beta)
        cert = bound_main(prob, pen, gv, sol.beta)
        assert cert.gamma_norm <= pen.eta_gamma * (1 + 1e-9)
        assert abs(cert.gap) <= 1e-8 * (1 + abs(cert.current_value))

    def test_lower_bounds_true_optimum(self, rng):
        for _ in range(100):
            prob = random_problem(rng, n=10, p=6)
            pen = enet(float(rng.uniform(0.2, 1.5)), float(rng.uniform(0.2, 1.5)))
            opt, _ = reference_optimum(prob, pen)
            gamma = rng.standard_normal(6) * 2  # arbitrary, generally infeasible
            nrm = dual_norm(gamma, pen, None)
            if nrm < pen.eta_gamma:
                gamma *= 1.5 * pen.eta_gamma / nrm
            beta_star = minimize_quadratic(prob, pen.lam, gamma)
            cert = bound_main(prob, pen, GammaValue(values=gamma), beta_star)
            assert cert.lower_bound <= opt + 1e-9 * (1 + abs(opt))

    def test_group_norm_used(self, rng):
        prob = random_group_problem(rng, n=10, p=6, max_size=3)
        pen = grp(0.5, 1.0)
        gamma = rng.standard_normal(6)
        beta_star = minimize_quadratic(prob, pen.lam, gamma)
        cert = bound_main(prob, pen, GammaValue(values=gamma), beta_star)
        assert cert.gamma_norm == pytest.approx(
            max(np.sum(np.abs(gamma[g])) for g in prob.groups)
        )


class TestBoundTight:
    def test_empty_kept_set_equals_main(self, rng):
        for _ in range(20):
            prob = random_problem(rng, n=8, p=5)
            pen = enet(0.6, 0.8)
            gamma = rng.standard_normal(5) * 3
            beta_star = minimize_quadratic(prob, pen.lam, gamma)
            gv = GammaValue(values=gamma)
            main = bound_main(prob, pen, gv, beta_star)
            tight0 = bound_tight(prob, pen, gv, beta_star, kept=np.array([], dtype=int))
            assert tight0.lower_bound == pytest.approx(main.lower_bound, rel=1e-12)

    def test_feasible_rest_alpha_one(self, rng):
        prob = random_problem(rng, n=8, p=4)
        pen = enet(1.0, 1.0)
        gamma = np.array([1.0, -1.0, 0.2, -0.1])  # feasible everywhere
        beta_star = minimize_quadratic(prob, pen.lam, gamma)
        cert = bound_tight(prob, pen, GammaValue(values=gamma), beta_star, kept=np.array([0, 1]))
        assert cert.alpha == 1.0
        r = prob.X @ beta_star - prob.y
        j0 = float(r @ r) + pen.lam * float((beta_star - gamma) @ (beta_star - gamma))
        assert cert.lower_bound == pytest.approx(j0, rel=1e-12)

    def test_dominates_main_with_default_policy(self, rng):
        for _ in range(50):
            prob = random_problem(rng, n=12, p=8)
            pen = enet(float(rng.uniform(0.2, 1.0)), float(rng.uniform(0.3, 1.2)))
            sol = solve(prob, pen, SolveConfig(tau=1e-6))
            gv = completed_gamma(prob, pen, sol.beta)
            kept = np.nonzero(sol.beta)[0]
            main = bound_main(prob, pen, gv, sol.beta)
            tight = bound_tight(prob, pen, gv, sol.beta, kept=kept)
            assert tight.lower_bound >= main.lower_bound - 1e-10 * (1 + abs(main.lower_bound))

    def test_infeasible_kept_falls_back(self, rng):
        prob = random_problem(rng, n=6, p=3)
        pen = enet(1.0, 1.0)
        gamma = np.array([3.0, 0.5, 0.5])  # kept part alone is infeasible
        beta_star = minimize_quadratic(prob, pen.lam, gamma)
        gv = GammaValue(values=gamma)
        cert = bound_tight(prob, pen, gv, beta_star, kept=np.array([0]))
        main = bound_main(prob, pen, gv, beta_star)
        assert cert.lower_bound == pytest.approx(main.lower_bound, rel=1e-12)
        assert cert.method == "wcq-tight"


class TestFenchel:
    def test_tight_at_machine_precision_optimum(self, rng):
        for _ in range(10):
            prob = random_problem(rng, n=20, p=8)
            pen = enet(float(rng.uniform(0.3, 1.0)), float(rng.uniform(0.3, 1.0)))
            sol = solve(prob, pen, SolveConfig(tau=1e-13))
            gv = completed_gamma(prob, pen, sol.beta)
            cert = fenchel_gap(prob, pen, gv, sol.beta)
            j = cert.current_value
            assert cert.gap <= 1e-8 * (1 + abs(j))

    def test_valid_lower_bound_on_iterates(self, rng):
        count = 0
        while count < 100:
            prob = random_problem(rng, n=12, p=8)
            pen = enet(float(rng.uniform(0.2, 1.0)), float(rng.uniform(0.3, 1.0)))
            opt, _ = reference_optimum(prob, pen)
            # rough iterate: loose solve, then certify
            rough = solve_first_order(
                prob, pen, SolveConfig(tau=5e-1),
                BaselineConfig(method=BaselineMethod.COORDINATE, inner_tol=1e-1),
            )
            gv = completed_gamma(prob, pen, rough.beta)
            beta_star = minimize_quadratic(prob, pen.lam, gv.values)
            cert = fenchel_gap(prob, pen, gv, beta_star)
            assert cert.lower_bound <= opt + 1e-9 * (1 + abs(opt))
            count += 1

    def test_group_unsupported(self, rng):
        prob = random_group_problem(rng, n=8, p=4)
        pen = grp(0.5, 0.5)
        with pytest.raises(MonitoringUnsupportedError):
            fenchel_gap(prob, pen, GammaValue(values=np.zeros(4)), np.zeros(4))


class TestSandwich:
    def test_certificates_during_solve(self, rng):
        for _ in range(5):
            prob = random_problem(rng, n=15, p=10)
            pen = enet(0.4, 0.6)
            opt, _ = reference_optimum(prob, pen)
            sol = solve(prob, pen, SolveConfig(tau=1e-10, certify=("every", 1)))
            assert sol.certificates
            for cert in sol.certificates:
                assert cert.lower_bound <= opt + 1e-9 * (1 + abs(opt))
                assert cert.gap >= -1e-9 * (1 + abs(cert.current_value))
                if cert.method == "fenchel":
                    # the worst-case value upper-bounds the optimum
                    assert opt <= cert.current_value + 1e-9 * (1 + abs(opt))
            final = [c for c in sol.certificates if c.iteration == sol.n_outer]
            for cert in final:
                assert cert.gap <= 1e-6 * (1 + abs(cert.current_value))

    def test_group_certificates(self, rng):
        prob = random_group_problem(rng, n=15, p=8)
        pen = grp(0.5, 0.7)
        sol = solve(prob, pen, SolveConfig(tau=1e-10, certify="final"))
        methods = {c.method for c in sol.certificates}
        assert methods == {"wcq-main", "wcq-tight"}
        for cert in sol.certificates:
            assert cert.gap <= 1e-6 * (1 + abs(cert.current_value))


class TestRidgeSolver:
    def test_tall_and_wide(self, rng):
        for n, p in ((12, 5), (5, 12)):
            X = rng.standard_normal((n, p))
            y = rng.standard_normal(n)
            prob = ProblemData(X=X, y=y)
            gamma = rng.standard_normal(p)
            lam = 0.7
            beta = minimize_quadratic(prob, lam, gamma)
            direct = np.linalg.solve(X.T @ X + lam * np.eye(p), X.T @ y + lam * gamma)
            np.testing.assert_allclose(beta, direct, atol=1e-10)

    def test_lam_zero_rejected(self, rng):
        prob = random_problem(rng, n=5, p=3)
        with pytest.raises(MonitoringUnsupportedError):
            minimize_quadratic(prob, 0.0, np.zeros(3))
