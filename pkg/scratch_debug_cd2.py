import numpy as np
from wcqpen import (
    BaselineConfig, BaselineMethod, PenaltyFamily, PenaltySpec, ProblemData,
    SolveConfig, solve, solve_first_order,
)

rng = np.random.default_rng(0)
for trial in range(16):
    n, p = rng.integers(5, 41), rng.integers(2, 21)
    X = rng.standard_normal((n, p))
    y = rng.standard_normal(n)
    lam1 = float(rng.uniform(0.05, 2.0))
    lam2 = float(rng.uniform(0.05, 2.0))

prob = ProblemData(X=X, y=y)
pen = PenaltySpec(PenaltyFamily.ELASTIC_NET, lam1, lam2)

def signed_kkt(beta):
    c = X.T @ (X @ beta - y) + lam2 * beta
    worst = -np.inf
    for j in range(p):
        if beta[j] != 0:
            worst = max(worst, abs(c[j] + lam1 * np.sign(beta[j])))
        else:
            worst = max(worst, max(abs(c[j]) - lam1, 0.0))
    return worst

s_q = solve(prob, pen, SolveConfig(tau=1e-12))
s_c = solve_first_order(prob, pen, SolveConfig(tau=1e-12),
                        BaselineConfig(method=BaselineMethod.COORDINATE, inner_tol=1e-13))
print("quad signed kkt:", signed_kkt(s_q.beta), "obj", s_q.objective.user_value)
print("cd   signed kkt:", signed_kkt(s_c.beta), "obj", s_c.objective.user_value)
c_cd = X.T @ (X @ s_c.beta - y) + lam2 * s_c.beta
print("cd per-active c vs -lam1*sign:")
for j in np.nonzero(s_c.beta)[0]:
    print(f"  j={j} beta={s_c.beta[j]:+.6f} c={c_cd[j]:+.8f} target={-lam1*np.sign(s_c.beta[j]):+.8f}")
print("cd inactive max |c|:", np.max(np.abs(c_cd[s_c.beta == 0])), "lam1:", lam1)
