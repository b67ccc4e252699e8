import numpy as np
from wcqpen import (
    BaselineConfig, BaselineMethod, PenaltyFamily, PenaltySpec, ProblemData,
    SolveConfig, solve, solve_first_order, kkt_violation,
)

rng = np.random.default_rng(0)
for trial in range(40):
    n, p = rng.integers(5, 41), rng.integers(2, 21)
    X = rng.standard_normal((n, p))
    y = rng.standard_normal(n)
    lam1 = float(rng.uniform(0.05, 2.0))
    lam2 = float(rng.uniform(0.05, 2.0))
    if trial != 15:
        continue
    prob = ProblemData(X=X, y=y)
    pen = PenaltySpec(PenaltyFamily.ELASTIC_NET, lam1, lam2)
    s_q = solve(prob, pen, SolveConfig(tau=1e-12))
    s_c = solve_first_order(prob, pen, SolveConfig(tau=1e-12),
                            BaselineConfig(method=BaselineMethod.COORDINATE, inner_tol=1e-13))
    print("n,p,lam1,lam2:", n, p, lam1, lam2)
    print("quad: obj", s_q.objective.user_value, "kkt", s_q.kkt_residual, "supp", np.nonzero(s_q.beta)[0])
    print("cd:   obj", s_c.objective.user_value, "kkt", s_c.kkt_residual, "supp", np.nonzero(s_c.beta)[0],
          "status", s_c.status, "n_outer", s_c.n_outer)
    print("cd beta:", s_c.beta)
    print("q  beta:", s_q.beta)
    print("cd full kkt:", kkt_violation(prob, pen, s_c.beta))
