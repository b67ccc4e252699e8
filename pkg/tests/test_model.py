import itertools

import numpy as np
import pytest

from wcqpen import (
    ConfigurationError,
    InstanceError,
    PenaltyFamily,
    PenaltySpec,
    ProblemData,
    PureLassoMode,
    evaluate_objective,
    lambda1_max,
    load_problem_csv,
    parametrization_map,
)

from conftest import enet, grp, random_group_problem, random_problem


def brute_force_minimax(problem, penalty, beta):
    """Worst-case quadratic objective by enumerating every vertex gamma."""
    eta = penalty.eta_gamma
    rss = float(np.sum((problem.X @ beta - problem.y) ** 2))
    best = -np.inf
    if penalty.family is PenaltyFamily.ELASTIC_NET:
        for signs in itertools.product((-eta, eta), repeat=problem.p):
            d = beta - np.asarray(signs)
            best = max(best, float(d @ d))
    else:
        per_group = []
        for g in problem.groups:
            verts = []
            for loc, sign in itertools.product(range(len(g)), (-eta, eta)):
                v = np.zeros(len(g))
                v[loc] = sign
                verts.append(v)
            per_group.append(verts)
        for combo in itertools.product(*per_group):
            gamma = np.zeros(problem.p)
            for g, v in zip(problem.groups, combo):
                gamma[g] = v
            d = beta - gamma
            best = max(best, float(d @ d))
    return rss + penalty.lam * best


class TestProblemData:
    def test_dimensions_validated(self):
        with pytest.raises(InstanceError):
            ProblemData(X=np.zeros((3, 2)), y=np.zeros(4))
        with pytest.raises(InstanceError):
            ProblemData(X=np.zeros((0, 2)), y=np.zeros(0))

    def test_group_partition_validated(self):
        X, y = np.zeros((3, 4)), np.zeros(3)
        with pytest.raises(InstanceError):
            ProblemData(X=X, y=y, groups=[[0, 1], [1, 2, 3]])  # overlap
        with pytest.raises(InstanceError):
            ProblemData(X=X, y=y, groups=[[0, 1], [3]])  # missing 2
        prob = ProblemData(X=X, y=y, groups=[[0, 3], [1, 2]])
        assert prob.n_groups == 2

    def test_arrays_readonly(self):
        prob = random_problem(np.random.default_rng(0))
        with pytest.raises(ValueError):
            prob.X[0, 0] = 1.0
        with pytest.raises(ValueError):
            prob.y[0] = 1.0


class TestPenaltySpec:
    def test_negative_weights_rejected(self):
        with pytest.raises(ConfigurationError):
            PenaltySpec(PenaltyFamily.ELASTIC_NET, -1.0, 0.0)

    def test_parametrization_examples(self):
        assert parametrization_map(2.0, 4.0) == (4.0, 0.5)
        # ridge limit: eta_gamma vanishes
        assert parametrization_map(0.0, 3.0) == (3.0, 0.0)
        with pytest.raises(PureLassoMode):
            parametrization_map(5.0, 0.0)

    def test_round_trip(self, rng):
        for _ in range(20):
            lam1, lam2 = rng.uniform(0.01, 5.0, size=2)
            lam, eta = parametrization_map(lam1, lam2)
            assert lam * eta == pytest.approx(lam1, rel=1e-15)
            assert lam == lam2

    def test_pure_lasso_flag(self):
        assert enet(1.0, 0.0).is_pure_lasso
        assert not enet(1.0, 0.5).is_pure_lasso
        with pytest.raises(PureLassoMode):
            _ = enet(1.0, 0.0).eta_gamma


class TestEvaluateObjective:
    def test_exact_interpolation_no_penalty(self):
        prob = ProblemData(X=np.eye(2), y=np.array([1.0, 1.0]))
        obj = evaluate_objective(prob, enet(0.0, 0.0), np.array([1.0, 1.0]))
        assert obj.user_value == 0.0

    def test_identity_design_plug_in(self):
        # exact fit: 0 + 1*2 + 0.5*2 = 3
        prob = ProblemData(X=np.eye(2), y=np.array([1.0, -1.0]))
        obj = evaluate_objective(prob, enet(1.0, 1.0), np.array([1.0, -1.0]))
        assert obj.user_value == pytest.approx(3.0, abs=1e-15)
        # same beta against a zero response adds the residual term 0.5*2
        prob0 = ProblemData(X=np.eye(2), y=np.zeros(2))
        obj0 = evaluate_objective(prob0, enet(1.0, 1.0), np.array([1.0, -1.0]))
        assert obj0.user_value == pytest.approx(4.0, abs=1e-15)

    def test_convention_map_small_instance(self, rng):
        prob = random_problem(rng, n=5, p=3)
        pen = enet(0.7, 1.3)
        beta = rng.standard_normal(3)
        obj = evaluate_objective(prob, pen, beta)
        minimax = brute_force_minimax(prob, pen, beta)
        assert obj.minimax_value == pytest.approx(minimax, rel=1e-12)
        offset = pen.lam * pen.eta_gamma**2 * 3
        assert obj.constant_offset == pytest.approx(offset, rel=1e-15)
        assert obj.user_value == pytest.approx((minimax - offset) / 2, rel=1e-12)

    def test_convention_consistency_randomized(self, rng):
        for _ in range(100):
            if rng.random() < 0.5:
                prob = random_problem(rng, n=6, p=4)
                pen = enet(float(rng.uniform(0.05, 2)), float(rng.uniform(0.05, 2)))
            else:
                prob = random_group_problem(rng, n=6, p=4, max_size=2)
                pen = grp(float(rng.uniform(0.05, 2)), float(rng.uniform(0.05, 2)))
            beta = rng.standard_normal(prob.p)
            obj = evaluate_objective(prob, pen, beta)
            assert obj.user_value == pytest.approx(
                (obj.minimax_value - obj.constant_offset) / 2, rel=1e-12
            )
            assert obj.minimax_value == pytest.approx(
                brute_force_minimax(prob, pen, beta), rel=1e-12
            )

    def test_monotone_in_weights(self, rng):
        prob = random_problem(rng, n=8, p=5)
        beta = rng.standard_normal(5)
        vals = [
            evaluate_objective(prob, enet(l1, l2), beta).user_value
            for l1 in (0.1, 0.5, 1.0)
            for l2 in (0.1, 0.5, 1.0)
        ]
        for (l1a, l2a), (l1b, l2b) in [((0.1, 0.1), (0.5, 0.1)), ((0.5, 0.1), (0.5, 1.0))]:
            va = evaluate_objective(prob, enet(l1a, l2a), beta).user_value
            vb = evaluate_objective(prob, enet(l1b, l2b), beta).user_value
            assert vb >= va
        assert all(np.isfinite(vals))

    def test_pure_lasso_objective(self):
        prob = ProblemData(X=np.eye(2), y=np.array([1.0, 1.0]))
        obj = evaluate_objective(prob, enet(0.5, 0.0), np.array([1.0, 0.0]))
        assert obj.user_value == pytest.approx(0.5 + 0.5)
        assert np.isnan(obj.minimax_value)

    def test_errors(self, rng):
        prob = random_problem(rng, n=4, p=3)
        with pytest.raises(InstanceError):
            evaluate_objective(prob, enet(1.0, 1.0), np.zeros(5))
        with pytest.raises(ConfigurationError):
            evaluate_objective(prob, grp(1.0, 1.0), np.zeros(3))


class TestLambda1Max:
    def test_threshold(self, rng):
        prob = random_problem(rng, n=10, p=6)
        top = lambda1_max(prob, PenaltyFamily.ELASTIC_NET)
        assert top == pytest.approx(np.max(np.abs(prob.X.T @ prob.y)), rel=1e-15)

    def test_group_threshold(self, rng):
        prob = random_group_problem(rng, n=10, p=6)
        top = lambda1_max(prob, PenaltyFamily.GROUP_LINF_ONE)
        corr = prob.X.T @ prob.y
        assert top == pytest.approx(max(np.sum(np.abs(corr[g])) for g in prob.groups))


class TestCsvLoader:
    def test_round_trip(self, tmp_path, rng):
        X = rng.standard_normal((4, 3))
        y = rng.standard_normal(4)
        path = tmp_path / "d.csv"
        lines = ["y,x1,x2,x3"]
        for i in range(4):
            lines.append(",".join(repr(float(v)) for v in [y[i], *X[i]]))
        path.write_text("\n".join(lines) + "\n")
        prob = load_problem_csv(path)
        np.testing.assert_array_equal(prob.X, X)
        np.testing.assert_array_equal(prob.y, y)

    def test_headerless_and_groups(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("1.0,2.0,3.0\n4.0,5.0,6.0\n")
        gpath = tmp_path / "g.json"
        gpath.write_text("[[1], [2]]\n")
        prob = load_problem_csv(path, gpath)
        assert prob.p == 2 and prob.n == 2
        assert [list(g) for g in prob.groups] == [[0], [1]]
