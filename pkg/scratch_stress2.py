import numpy as np
from wcqpen import (
    PenaltyFamily, PenaltySpec, ProblemData, SolveConfig, solve, solve_path,
    default_lambda1_grid,
)
from wcqpen.oracle import subgradient_residual

rng = np.random.default_rng(123)

print("== correlated/duplicate designs (ties stress) ==")
bad = 0
for trial in range(200):
    n = int(rng.integers(5, 40))
    p = int(rng.integers(4, 30))
    base = rng.standard_normal((n, max(2, p // 2)))
    # columns built from a small dictionary -> many near-duplicates and exact ties
    cols = []
    for j in range(p):
        k = int(rng.integers(0, base.shape[1]))
        sign = 1.0 if rng.random() < 0.7 else -1.0
        noise = 0.0 if rng.random() < 0.3 else 0.05 * rng.standard_normal(n)
        cols.append(sign * base[:, k] + noise)
    X = np.column_stack(cols)
    y = rng.standard_normal(n) * 2
    perm = rng.permutation(p)
    groups, i = [], 0
    while i < p:
        k = int(rng.integers(1, 6)); groups.append(perm[i:i + k]); i += k
    lam1 = float(10 ** rng.uniform(-2, 1)); lam2 = float(10 ** rng.uniform(-2, 1))
    for fam, gg in ((PenaltyFamily.ELASTIC_NET, None), (PenaltyFamily.GROUP_LINF_ONE, groups)):
        prob = ProblemData(X=X, y=y, groups=gg)
        pen = PenaltySpec(fam, lam1, lam2)
        s = solve(prob, pen, SolveConfig(tau=1e-10))
        res = subgradient_residual(prob, pen, s.beta)
        if s.status != "converged" or res > 1e-7 * (1 + lam1):
            bad += 1
            print(f"trial {trial} {fam.value}: status={s.status} res={res:.2e} "
                  f"outer={s.n_outer} bt={s.n_backtracks}")
print(f"bad: {bad}/400")

print("== group warm-start paths ==")
bad = 0
for trial in range(10):
    n, p = 25, 24
    X = rng.standard_normal((n, p))
    beta_true = np.zeros(p); beta_true[:6] = [2, 2, -2, 1, 1, -1]
    y = X @ beta_true + 0.5 * rng.standard_normal(n)
    groups = [np.arange(i, min(i + 3, p)) for i in range(0, p, 3)]
    prob = ProblemData(X=X, y=y, groups=groups)
    lam1s = default_lambda1_grid(prob, PenaltyFamily.GROUP_LINF_ONE, num=15)
    res = solve_path(prob, PenaltyFamily.GROUP_LINF_ONE, lam1s, [0.05, 0.5], SolveConfig(tau=1e-10))
    assert not res.failures, res.failures
    for (l1, l2), sol in zip(res.grid, res.solutions):
        pen = PenaltySpec(PenaltyFamily.GROUP_LINF_ONE, l1, l2)
        r = subgradient_residual(prob, pen, sol.beta)
        if r > 1e-7 * (1 + l1) or sol.status != "converged":
            bad += 1
            print(f"trial {trial} ({l1:.3g},{l2:.3g}): res={r:.2e} status={sol.status}")
print(f"bad cells: {bad}")

print("== monotone objective trace ==")
worst = 0.0
for trial in range(50):
    n, p = 20, 15
    X = rng.standard_normal((n, p)); y = rng.standard_normal(n)
    groups = [np.arange(i, min(i + 4, p)) for i in range(0, p, 4)]
    for fam, gg in ((PenaltyFamily.ELASTIC_NET, None), (PenaltyFamily.GROUP_LINF_ONE, groups)):
        prob = ProblemData(X=X, y=y, groups=gg)
        pen = PenaltySpec(fam, 0.3, 0.2)
        s = solve(prob, pen, SolveConfig(tau=1e-10, trace_objective=True))
        tr = np.asarray(s.objective_trace)
        if tr.size > 1:
            inc = np.max(np.diff(tr))
            worst = max(worst, inc)
print("worst objective increase along accepted moves:", worst)
