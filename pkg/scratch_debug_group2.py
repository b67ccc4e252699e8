import numpy as np
from wcqpen import PenaltyFamily, PenaltySpec, ProblemData
from wcqpen.solver import ActiveSetState
from wcqpen.oracle import stationarity_vector, water_fill_level, subgradient_residual

rng = np.random.default_rng(7)
for trial in range(300):
    n = int(rng.integers(3, 60)); p = int(rng.integers(2, 80))
    X = rng.standard_normal((n, p)) * rng.uniform(0.2, 5.0)
    y = rng.standard_normal(n) * rng.uniform(0.2, 5.0)
    lam1 = float(10 ** rng.uniform(-3, 1.5)); lam2 = float(10 ** rng.uniform(-3, 1.5))

TARGET = 3
for trial in range(TARGET + 1):
    n = int(rng.integers(5, 50)); p = int(rng.integers(4, 40))
    X = rng.standard_normal((n, p)) * rng.uniform(0.2, 3.0)
    y = rng.standard_normal(n) * rng.uniform(0.2, 3.0)
    perm = rng.permutation(p)
    groups, i = [], 0
    while i < p:
        k = int(rng.integers(1, 6)); groups.append(perm[i:i + k]); i += k
    lam1 = float(10 ** rng.uniform(-2.5, 1.0)); lam2 = float(10 ** rng.uniform(-2.5, 1.0))

print("n,p:", n, p, "lam:", lam1, lam2)
print("groups:", [list(map(int, g)) for g in groups])
prob = ProblemData(X=X, y=y, groups=groups)
pen = PenaltySpec(PenaltyFamily.GROUP_LINF_ONE, lam1, lam2)

state = ActiveSetState(prob, pen)
state.debug = True
tau = 1e-10
for outer in range(1, 25):
    c = stationarity_vector(prob, pen, state.beta)
    scores = np.array([water_fill_level(c[g], lam1) for g in prob.groups])
    active = state.active_groups()
    inact = [k for k in range(len(prob.groups)) if k not in active]
    best = max(inact, key=lambda k: scores[k], default=None)
    print(f"outer {outer}: res={subgradient_residual(prob, pen, state.beta):.3e} "
          f"active={sorted(active)} best={best} bestscore={scores[best] if best is not None else 0:.4f}")
    # removal check like solve()
    from wcqpen.solver import SCORE_TOL, ZERO_TOL
    removed = False
    for b in state.blocks:
        if abs(state.beta[b.tied[0]]) <= ZERO_TOL and scores[b.group] <= SCORE_TOL * (1 + lam1):
            print(f"  remove block group {b.group}")
            state.remove_block(b); removed = True; break
    if removed:
        state.inner_solve(); continue
    if best is None or scores[best] <= tau:
        print("converged"); break
    print(f"  activate group {best}")
    state.activate_group_from_scores(best, c)
    ok = state.inner_solve(cap=80)
    if not ok:
        print("inner guard!"); break
