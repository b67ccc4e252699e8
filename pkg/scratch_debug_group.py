import numpy as np
import wcqpen.solver as solver_mod
from wcqpen import PenaltyFamily, PenaltySpec, ProblemData, SolveConfig
from wcqpen.solver import ActiveSetState
from wcqpen.oracle import stationarity_vector, water_fill_level

rng = np.random.default_rng(0)
# regenerate trial 0 of the group loop (after the 40 enet trials)
for trial in range(40):
    n, p = rng.integers(5, 41), rng.integers(2, 21)
    X = rng.standard_normal((n, p))
    y = rng.standard_normal(n)
    lam1 = float(rng.uniform(0.05, 2.0))
    lam2 = float(rng.uniform(0.05, 2.0))

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
print("n,p:", n, p, "groups:", [list(g) for g in groups], "lam1,lam2:", lam1, lam2)

prob = ProblemData(X=X, y=y, groups=groups)
pen = PenaltySpec(PenaltyFamily.GROUP_LINF_ONE, lam1, lam2)

# drive the outer loop manually with debug on
state = ActiveSetState(prob, pen)
state.debug = True
tau = 1e-10
for outer in range(1, 40):
    c = stationarity_vector(prob, pen, state.beta)
    scores = np.array([water_fill_level(c[g], lam1) for g in prob.groups])
    active = state.active_groups()
    inact = [k for k in range(len(prob.groups)) if k not in active]
    best = max(inact, key=lambda k: scores[k], default=None)
    print(f"outer {outer}: scores={np.round(scores, 6)} active={sorted(active)} best={best}")
    if best is None or scores[best] <= tau:
        print("converged")
        break
    g = prob.groups[best]
    loc = int(np.argmax(np.abs(c[g])))
    carrier = int(g[loc])
    sgn = -float(np.sign(c[carrier])) or 1.0
    print(f"  activate group {best} carrier {carrier} sign {sgn}")
    state.activate_group(best, carrier, sgn)
    ok = state.inner_solve(cap=60)
    print(f"  inner ok={ok} beta={np.round(state.beta, 4)}")
    if not ok:
        break
