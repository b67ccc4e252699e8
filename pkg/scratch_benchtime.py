import time
import numpy as np
from wcqpen.bench import DataGenConfig, generate, bench_grid
from wcqpen.solver import SolveConfig, default_lambda1_grid, solve_path
from wcqpen.model import PenaltyFamily

# probe: one fig3-like dataset, quadratic full 50x50 path + reference
cfg = DataGenConfig(n=50, p=100, rho=0.8, s=30, seed=0)
t0 = time.perf_counter()
train, test, bstar, sigma = generate(cfg)
print("gen:", time.perf_counter() - t0)

lam1s = default_lambda1_grid(train, PenaltyFamily.ELASTIC_NET, num=50)
lam2s = np.geomspace(1e-2, 1e2, 50)

t0 = time.perf_counter()
path = solve_path(train, PenaltyFamily.ELASTIC_NET, lam1s, lam2s, SolveConfig(tau=1e-2))
t_quad = time.perf_counter() - t0
print(f"quadratic 50x50 path: {t_quad:.2f}s, failures={len(path.failures)}")

t0 = time.perf_counter()
path_ref = solve_path(train, PenaltyFamily.ELASTIC_NET, lam1s, lam2s, SolveConfig(tau=1e-12))
print(f"reference 50x50 path: {time.perf_counter() - t0:.2f}s")

# coordinate on the 10 smallest lambda2 rows only, to extrapolate
from wcqpen.baselines import BaselineConfig, BaselineMethod, solve_first_order

def runner(prob, pen, cfg2):
    return solve_first_order(prob, pen, cfg2, BaselineConfig(method=BaselineMethod.COORDINATE))

t0 = time.perf_counter()
path_cd = solve_path(train, PenaltyFamily.ELASTIC_NET, lam1s, lam2s[:10], SolveConfig(tau=1e-2), solver=runner)
t_cd = time.perf_counter() - t0
print(f"coordinate 50x10 rows: {t_cd:.2f}s -> full est {t_cd*5:.1f}s")

def runner_p(prob, pen, cfg2):
    return solve_first_order(prob, pen, cfg2, BaselineConfig(method=BaselineMethod.PROXIMAL))

t0 = time.perf_counter()
path_px = solve_path(train, PenaltyFamily.ELASTIC_NET, lam1s, lam2s[:10], SolveConfig(tau=1e-2), solver=runner_p)
t_px = time.perf_counter() - t0
print(f"proximal 50x10 rows: {t_px:.2f}s -> full est {t_px*5:.1f}s")
