import numpy as np
from wcqpen import (
    BaselineConfig, BaselineMethod, PenaltyFamily, PenaltySpec, ProblemData,
    SolveConfig, solve, solve_first_order, evaluate_objective,
)

rng = np.random.default_rng(0)

print("== elastic net vs coordinate descent ==")
bad = 0
for trial in range(40):
    n, p = rng.integers(5, 41), rng.integers(2, 21)
    X = rng.standard_normal((n, p))
    y = rng.standard_normal(n)
    lam1 = float(rng.uniform(0.05, 2.0))
    lam2 = float(rng.uniform(0.05, 2.0))
    prob = ProblemData(X=X, y=y)
    pen = PenaltySpec(PenaltyFamily.ELASTIC_NET, lam1, lam2)
    s_q = solve(prob, pen, SolveConfig(tau=1e-12))
    s_c = solve_first_order(prob, pen, SolveConfig(tau=1e-12),
                            BaselineConfig(method=BaselineMethod.COORDINATE, inner_tol=1e-13))
    rel = abs(s_q.objective.user_value - s_c.objective.user_value) / (1 + abs(s_c.objective.user_value))
    if rel > 1e-9 or s_q.kkt_residual > 1e-9 or s_q.status != "converged":
        bad += 1
        print(f"trial {trial}: rel={rel:.2e} kkt={s_q.kkt_residual:.2e} status={s_q.status} "
              f"n_outer={s_q.n_outer} bt={s_q.n_backtracks}")
print(f"bad: {bad}/40")

print("== group vs proximal ==")
bad = 0
for trial in range(25):
    n, p = int(rng.integers(8, 41)), int(rng.integers(4, 21))
    X = rng.standard_normal((n, p))
    y = rng.standard_normal(n)
    perm = rng.permutation(p)
    groups, i = [], 0
    while i < p:
        k = int(rng.integers(1, 5))
        groups.append(perm[i:i + k])
        i += k
    lam1 = float(rng.uniform(0.05, 2.0))
    lam2 = float(rng.uniform(0.05, 2.0))
    prob = ProblemData(X=X, y=y, groups=groups)
    pen = PenaltySpec(PenaltyFamily.GROUP_LINF_ONE, lam1, lam2)
    s_q = solve(prob, pen, SolveConfig(tau=1e-10))
    s_p = solve_first_order(prob, pen, SolveConfig(tau=1e-10),
                            BaselineConfig(method=BaselineMethod.PROXIMAL, inner_tol=1e-11,
                                           restart=True, inner_max_iter=200000))
    rel = abs(s_q.objective.user_value - s_p.objective.user_value) / (1 + abs(s_p.objective.user_value))
    if rel > 1e-7 or s_q.kkt_residual > 1e-8 or s_q.status != "converged":
        bad += 1
        print(f"trial {trial}: rel={rel:.2e} kktq={s_q.kkt_residual:.2e} kktp={s_p.kkt_residual:.2e} "
              f"status={s_q.status} n_outer={s_q.n_outer} bt={s_q.n_backtracks}")
print(f"bad: {bad}/25")
