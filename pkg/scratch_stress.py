import numpy as np
from wcqpen import (
    BaselineConfig, BaselineMethod, PenaltyFamily, PenaltySpec, ProblemData,
    SolveConfig, solve, solve_first_order, solve_path, default_lambda1_grid,
)
from wcqpen.oracle import subgradient_residual

rng = np.random.default_rng(7)

print("== enet stress (wide lambdas, n<p) ==")
bad = 0
for trial in range(300):
    n = int(rng.integers(3, 60))
    p = int(rng.integers(2, 80))
    X = rng.standard_normal((n, p)) * rng.uniform(0.2, 5.0)
    y = rng.standard_normal(n) * rng.uniform(0.2, 5.0)
    lam1 = float(10 ** rng.uniform(-3, 1.5))
    lam2 = float(10 ** rng.uniform(-3, 1.5))
    prob = ProblemData(X=X, y=y)
    pen = PenaltySpec(PenaltyFamily.ELASTIC_NET, lam1, lam2)
    s = solve(prob, pen, SolveConfig(tau=1e-10))
    res = subgradient_residual(prob, pen, s.beta)
    scale = 1.0 + lam1
    if s.status != "converged" or res > 1e-8 * scale:
        bad += 1
        print(f"trial {trial}: status={s.status} res={res:.2e} n={n} p={p} lam=({lam1:.3g},{lam2:.3g}) "
              f"outer={s.n_outer} bt={s.n_backtracks}")
print(f"bad: {bad}/300")

print("== group stress ==")
bad = 0
for trial in range(200):
    n = int(rng.integers(5, 50))
    p = int(rng.integers(4, 40))
    X = rng.standard_normal((n, p)) * rng.uniform(0.2, 3.0)
    y = rng.standard_normal(n) * rng.uniform(0.2, 3.0)
    perm = rng.permutation(p)
    groups, i = [], 0
    while i < p:
        k = int(rng.integers(1, 6))
        groups.append(perm[i:i + k])
        i += k
    lam1 = float(10 ** rng.uniform(-2.5, 1.0))
    lam2 = float(10 ** rng.uniform(-2.5, 1.0))
    prob = ProblemData(X=X, y=y, groups=groups)
    pen = PenaltySpec(PenaltyFamily.GROUP_LINF_ONE, lam1, lam2)
    s = solve(prob, pen, SolveConfig(tau=1e-10))
    res = subgradient_residual(prob, pen, s.beta)
    scale = 1.0 + lam1
    if s.status != "converged" or res > 1e-8 * scale:
        bad += 1
        print(f"trial {trial}: status={s.status} res={res:.2e} n={n} p={p} lam=({lam1:.3g},{lam2:.3g}) "
              f"outer={s.n_outer} bt={s.n_backtracks}")
print(f"bad: {bad}/200")

print("== warm-start path (enet + group), incl. pure lasso rows ==")
bad = 0
for trial in range(15):
    n, p = 30, 40
    X = rng.standard_normal((n, p))
    y = X[:, :5] @ np.array([2.0, -2, 1.5, -1, 1]) + 0.5 * rng.standard_normal(n)
    prob = ProblemData(X=X, y=y)
    lam1s = default_lambda1_grid(prob, PenaltyFamily.ELASTIC_NET, num=20)
    res = solve_path(prob, PenaltyFamily.ELASTIC_NET, lam1s, [0.0, 0.1, 1.0], SolveConfig(tau=1e-10))
    for (l1, l2), sol in zip(res.grid, res.solutions):
        if sol is None:
            continue
        pen = PenaltySpec(PenaltyFamily.ELASTIC_NET, l1, l2)
        r = subgradient_residual(prob, pen, sol.beta)
        if r > 1e-8 * (1 + l1):
            bad += 1
            print(f"trial {trial} cell ({l1:.3g},{l2:.3g}): res={r:.2e} status={sol.status}")
    if res.failures:
        print(f"trial {trial}: {len(res.failures)} failures (expected on lasso rows when |A|>n)")
print(f"bad cells: {bad}")
