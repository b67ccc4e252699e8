"""Active-set solver for the worst-case quadratic penalty problems.

The engine alternates three steps.  Step 1 solves the quadratic subproblem
restricted to the active structure, using an incrementally-updated Cholesky
factor of the active Gram system.  Step 2 verifies that the adversarial
gamma used by the subproblem is still worst-case for the new iterate; when a
coordinate crosses zero (or a group's max-magnitude carrier changes), the
iterate is backtracked to the boundary, an alternate worst-case gamma is
tried, and the structure is repaired (sign flip, carrier move, tied-block
grow/shrink, or downgrade) until coherence holds.  Step 3 scores all
coordinates with the worst-case gradient, removes exact zeros whose score
vanished, otherwise activates the worst violator, and stops when no
violation exceeds the tolerance.

Group penalties need one extra device: minimizers of the groupwise
l-infinity penalty generically tie several coordinates at the group maximum.
Tied coordinates are constrained equal in magnitude in the subproblem (one
aggregated column per tied block), and the adversarial mass implied by the
block's stationarity equations must stay non-negative; a negative mass
shrinks the block.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .chol import CholGram
from .exceptions import ConfigurationError, InstanceError, RankError
from .model import (
    Objective,
    PenaltyFamily,
    PenaltySpec,
    ProblemData,
    evaluate_objective,
    lambda1_max,
)
from .oracle import kkt_value, stationarity_vector, water_fill_level

# Step-3 removal safety net (exact zeros normally arise from backtracking).
ZERO_TOL = 1e-12
SCORE_TOL = 1e-12
# Tie tolerance when reconstructing blocks from a warm-start vector.
TIE_RTOL = 1e-10
# Implied block masses below -WEIGHT_RTOL*(1+lambda1) force a block shrink.
WEIGHT_RTOL = 1e-11


@dataclass
class SolveConfig:
    """Knobs of a single solve.

    ``tau`` is the first-order halting tolerance shared by all methods;
    ``certify`` is "none", "final", or ("every", k) to attach optimality-gap
    certificates; ``trace_objective`` records the user objective after every
    accepted move (testing hook).
    """

    tau: float = 1e-2
    max_outer: int | None = None
    beta0: np.ndarray | None = None
    certify: str | tuple[str, int] = "none"
    trace_objective: bool = False

    def resolved_max_outer(self, p: int) -> int:
        return self.max_outer if self.max_outer is not None else max(100, 10 * p)


@dataclass
class Solution:
    """Result of one solve."""

    beta: np.ndarray
    objective: Objective
    kkt_residual: float
    n_outer: int
    n_solves: int
    n_backtracks: int
    wall_time_s: float
    status: str
    certificates: list | None = None
    objective_trace: list[float] | None = None

    @property
    def converged(self) -> bool:
        return self.status == "converged"


@dataclass
class PathResult:
    """Solutions over a (lambda1, lambda2) grid with warm-start lineage."""

    grid: list[tuple[float, float]]
    solutions: list[Solution | None]
    warm_start_order: str
    failures: list[tuple[int, str]] = field(default_factory=list)


class _Block:
    """One active unit: a tied coordinate set plus the free rest of its group."""

    __slots__ = ("group", "tied", "signs", "free")

    def __init__(self, group: int, tied: list[int], signs: dict[int, float], free: list[int]):
        self.group = group
        self.tied = tied
        self.signs = signs
        self.free = free


class ActiveSetState:
    """Live state of the engine: structure, factor, iterate, counters.

    The factor covers the tie-reduced active Gram system: one column per
    free coordinate and one aggregated signed column per tied block of size
    two or more (ridge multiplier equal to the block size).  Elastic-net
    states only ever hold singleton blocks, whose columns stay unsigned with
    the sign carried by the right-hand side, so a sign flip costs nothing.
    """

    def __init__(self, problem: ProblemData, penalty: PenaltySpec):
        if penalty.family is PenaltyFamily.GROUP_LINF_ONE and problem.groups is None:
            raise ConfigurationError("group penalty requires a group partition")
        self.problem = problem
        self.penalty = penalty
        self.lam = penalty.lambda2
        self.lam1 = penalty.lambda1
        self.blocks: list[_Block] = []
        self.chol = CholGram(problem.n)
        self.tags: list[list] = []
        self.beta = np.zeros(problem.p)
        self.Xty = problem.X.T @ problem.y
        self.n_solves = 0
        self.n_backtracks = 0
        self.trace: list[float] | None = None

    # -- structure bookkeeping -------------------------------------------------

    def active_coords(self) -> list[int]:
        out: list[int] = []
        for b in self.blocks:
            out.extend(b.tied)
            out.extend(b.free)
        return out

    def active_groups(self) -> set[int]:
        return {b.group for b in self.blocks}

    def signature(self):
        return tuple(
            sorted(
                (b.group, tuple(sorted(b.tied)), tuple(b.signs[j] for j in sorted(b.tied)))
                for b in self.blocks
            )
        )

    def _col_index(self, kind: str, block: _Block, coord: int | None = None) -> int:
        for i, tag in enumerate(self.tags):
            if tag[0] == kind and tag[1] is block and (coord is None or tag[2] == coord):
                return i
        raise KeyError((kind, coord))

    def _block_column(self, b: _Block) -> np.ndarray:
        X = self.problem.X
        col = np.zeros(self.problem.n)
        for j in b.tied:
            col += b.signs[j] * X[:, j]
        return col

    def add_coordinate(self, j: int, sign: float = 1.0) -> _Block:
        """Activate a lone coordinate (elastic net) as its own block."""
        b = _Block(group=j, tied=[j], signs={j: float(sign)}, free=[])
        self.chol.add_column(self.problem.X[:, j], self.lam)
        self.tags.append(["coord", b])
        self.blocks.append(b)
        return b

    def activate_group(self, group: int, carrier: int, sign: float) -> _Block:
        """Activate a whole group with a single-carrier adversarial vertex."""
        idx = list(map(int, self.problem.groups[group]))
        free = [j for j in idx if j != carrier]
        b = _Block(group=group, tied=[carrier], signs={carrier: float(sign)}, free=free)
        self.chol.add_column(self.problem.X[:, carrier], self.lam)
        self.tags.append(["coord", b])
        for j in free:
            self.chol.add_column(self.problem.X[:, j], self.lam)
            self.tags.append(["free", b, j])
        self.blocks.append(b)
        return b

    def activate_group_from_scores(self, group: int, c: np.ndarray) -> _Block:
        """Activate a group with the tied block of its water-filling allocation.

        The adversarial mass that minimizes the worst-case gradient spreads
        over the coordinates whose |c_j| exceeds the water level; those enter
        tied (signs opposing c), the rest start free.  This is the steepest
        descent structure at beta_group = 0.
        """
        idx = list(map(int, self.problem.groups[group]))
        cg = c[idx]
        level = water_fill_level(cg, self.lam1)
        cut = level + 1e-12 * (1.0 + level)
        tied = [j for j, cj in zip(idx, cg) if abs(cj) > cut]
        if not tied:
            tied = [idx[int(np.argmax(np.abs(cg)))]]
        free = [j for j in idx if j not in tied]
        signs = {j: (-float(np.sign(c[j])) if c[j] != 0 else 1.0) for j in tied}
        b = _Block(group=group, tied=tied, signs=signs, free=free)
        if len(tied) == 1:
            self.chol.add_column(self.problem.X[:, tied[0]], self.lam)
            self.tags.append(["coord", b])
        else:
            self.chol.add_column(self._block_column(b), self.lam * len(tied))
            self.tags.append(["blockm", b])
        for j in free:
            self.chol.add_column(self.problem.X[:, j], self.lam)
            self.tags.append(["free", b, j])
        self.blocks.append(b)
        return b

    def remove_block(self, b: _Block) -> None:
        for i in reversed(range(len(self.tags))):
            if self.tags[i][1] is b:
                self.chol.remove_column(i)
                del self.tags[i]
        for j in b.tied + b.free:
            self.beta[j] = 0.0
        self.blocks.remove(b)

    def _flip(self, b: _Block) -> None:
        # Singleton block: the column is unsigned, only the rhs changes.
        j = b.tied[0]
        b.signs[j] = -b.signs[j]

    def _swap_carrier(self, b: _Block, f: int, sign_f: float) -> None:
        # Columns are identical (both ridge lam, unsigned); relabel tags only.
        old = b.tied[0]
        i_c = self._col_index("coord", b)
        i_f = self._col_index("free", b, f)
        self.tags[i_c] = ["free", b, old]
        self.tags[i_f] = ["coord", b]
        b.tied = [f]
        b.signs = {f: float(sign_f)}
        b.free = [j for j in b.free if j != f] + [old]

    def _grow(self, b: _Block, f: int, sign_f: float) -> None:
        if len(b.tied) == 1:
            i = self._col_index("coord", b)
        else:
            i = self._col_index("blockm", b)
        self.chol.remove_column(i)
        del self.tags[i]
        i_f = self._col_index("free", b, f)
        self.chol.remove_column(i_f)
        del self.tags[i_f]
        b.tied.append(f)
        b.signs[f] = float(sign_f)
        b.free.remove(f)
        self.chol.add_column(self._block_column(b), self.lam * len(b.tied))
        self.tags.append(["blockm", b])

    def _shrink(self, b: _Block, j: int) -> None:
        i = self._col_index("blockm", b)
        self.chol.remove_column(i)
        del self.tags[i]
        b.tied.remove(j)
        del b.signs[j]
        b.free.append(j)
        if len(b.tied) == 1:
            self.chol.add_column(self.problem.X[:, b.tied[0]], self.lam)
            self.tags.append(["coord", b])
        else:
            self.chol.add_column(self._block_column(b), self.lam * len(b.tied))
            self.tags.append(["blockm", b])
        self.chol.add_column(self.problem.X[:, j], self.lam)
        self.tags.append(["free", b, j])

    def init_from(self, beta0: np.ndarray) -> None:
        """Build the block structure matching a warm-start vector."""
        beta0 = np.asarray(beta0, dtype=float).ravel()
        if beta0.shape[0] != self.problem.p:
            raise InstanceError("beta0 has the wrong length")
        self.beta = np.zeros(self.problem.p)
        self.blocks = []
        cols: list[np.ndarray] = []
        ridges: list[float] = []
        self.tags = []
        if self.penalty.family is PenaltyFamily.ELASTIC_NET:
            for j in np.nonzero(beta0)[0]:
                b = _Block(group=int(j), tied=[int(j)], signs={int(j): float(np.sign(beta0[j]))}, free=[])
                self.blocks.append(b)
                cols.append(self.problem.X[:, j])
                ridges.append(self.lam)
                self.tags.append(["coord", b])
                self.beta[j] = beta0[j]
            self.chol.bulk_set(cols, ridges)
            return
        tol = TIE_RTOL * (1.0 + float(np.max(np.abs(beta0), initial=0.0)))
        for k, g in enumerate(self.problem.groups):
            bg = beta0[g]
            m = float(np.max(np.abs(bg)))
            if m == 0.0:
                continue
            tied = [int(j) for j in g if abs(beta0[j]) >= m - tol]
            free = [int(j) for j in g if int(j) not in tied]
            signs = {j: float(np.sign(beta0[j])) for j in tied}
            b = _Block(group=k, tied=tied, signs=signs, free=free)
            if len(tied) == 1:
                cols.append(self.problem.X[:, tied[0]])
                ridges.append(self.lam)
                self.tags.append(["coord", b])
            else:
                cols.append(self._block_column(b))
                ridges.append(self.lam * len(tied))
                self.tags.append(["blockm", b])
            for j in free:
                cols.append(self.problem.X[:, j])
                ridges.append(self.lam)
                self.tags.append(["free", b, j])
            self.blocks.append(b)
            for j in tied:
                self.beta[j] = signs[j] * m
            for j in free:
                self.beta[j] = beta0[j]
        self.chol.bulk_set(cols, ridges)

    def retarget(self, penalty: PenaltySpec) -> None:
        """Swap the penalty without touching the factor (lambda2 must match).

        The active Gram system depends on the structure and lambda2 only, so
        a warm-started sweep over lambda1 reuses the factorization as is.
        """
        if penalty.family is not self.penalty.family or penalty.lambda2 != self.lam:
            raise ConfigurationError("retarget requires the same family and lambda2")
        self.penalty = penalty
        self.lam1 = penalty.lambda1

    # -- subproblem ------------------------------------------------------------

    def _rhs(self) -> np.ndarray:
        rhs = np.empty(len(self.tags))
        for i, tag in enumerate(self.tags):
            kind, b = tag[0], tag[1]
            if kind == "coord":
                j = b.tied[0]
                rhs[i] = self.Xty[j] - self.lam1 * b.signs[j]
            elif kind == "blockm":
                rhs[i] = sum(b.signs[j] * self.Xty[j] for j in b.tied) - self.lam1
            else:
                rhs[i] = self.Xty[tag[2]]
        return rhs

    def _embed(self, z: np.ndarray) -> np.ndarray:
        beta = np.zeros(self.problem.p)
        for i, tag in enumerate(self.tags):
            kind, b = tag[0], tag[1]
            if kind == "coord":
                beta[b.tied[0]] = z[i]
            elif kind == "blockm":
                for j in b.tied:
                    beta[j] = b.signs[j] * z[i]
            else:
                beta[tag[2]] = z[i]
        return beta

    def solve_current(self) -> np.ndarray:
        """Exact subproblem solution for the current structure (full-length beta)."""
        rhs = self._rhs()
        z = self.chol.solve(rhs)
        if z.size:
            # One iterative-refinement pass keeps the stationarity residual at
            # machine precision, which the termination certificates rely on.
            C = np.column_stack(self.chol.columns)
            resid = rhs - (C.T @ (C @ z) + np.asarray(self.chol.ridges) * z)
            z = z + self.chol.solve(resid)
        self.n_solves += 1
        return self._embed(z)

    # -- coherence events --------------------------------------------------------

    def _first_event(self, beta_old: np.ndarray, beta_new: np.ndarray):
        """Earliest t in [0, 1) where the segment leaves the coherent region.

        Event kinds: "death" (a block magnitude reaches zero) and "catch"
        (a free coordinate reaches its block magnitude; ``side`` records the
        face, +1 or -1).  At equal times a catch wins: growing the tie is the
        information-preserving repair, and at a zero-magnitude stall it is
        the only move that can restore descent.
        """
        best = None
        best_key = None
        for b in self.blocks:
            j0 = b.tied[0]
            s0 = b.signs[j0]
            m_old = max(s0 * beta_old[j0], 0.0)
            m_new = s0 * beta_new[j0]
            if m_new < 0.0:
                t = m_old / (m_old - m_new)
                key = (t, 1)
                if best is None or key < best_key:
                    best, best_key = (t, "death", b, j0, 0.0), key
            for f in b.free:
                for side in (1.0, -1.0):
                    h_old = max(m_old - side * beta_old[f], 0.0)
                    h_new = m_new - side * beta_new[f]
                    if h_new < 0.0:
                        t = h_old / (h_old - h_new)
                        key = (t, 0)
                        if best is None or key < best_key:
                            best, best_key = (t, "catch", b, f, side), key
        return best

    def _weight_violation(self, beta_new: np.ndarray):
        """Most negative implied adversarial mass in a tied block, if any."""
        multi = [b for b in self.blocks if len(b.tied) > 1]
        if not multi:
            return None
        r = self.problem.X @ beta_new - self.problem.y
        worst = None
        tol = -WEIGHT_RTOL * (1.0 + self.lam1)
        for b in multi:
            for j in b.tied:
                mass = -b.signs[j] * (float(self.problem.X[:, j] @ r) + self.lam * beta_new[j])
                if mass < tol and (worst is None or mass < worst[0]):
                    worst = (mass, b, j)
        if worst is None:
            return None
        return worst[1], worst[2]

    def _record(self) -> None:
        if self.trace is not None:
            self.trace.append(evaluate_objective(self.problem, self.penalty, self.beta).user_value)

    def inner_solve(self, cap: int | None = None) -> bool:
        """Steps 1-2: iterate subproblem solves and coherence repairs.

        Returns False only if the repair loop hit its iteration cap.
        """
        cap = cap if cap is not None else max(64, 8 * self.problem.p)
        just_flipped: set[int] = set()
        last_swap: dict[int, int] = {}  # block id -> coordinate demoted by a carrier swap
        beta_old = self.beta
        for _ in range(cap):
            if not self.blocks:
                self.beta = np.zeros(self.problem.p)
                return True
            beta_new = self.solve_current()
            ev = self._first_event(beta_old, beta_new)
            if ev is None:
                self.beta = beta_new
                self._record()
                bad = self._weight_violation(beta_new)
                if bad is None:
                    return True
                self._shrink(*bad)
                beta_old = beta_new
                just_flipped.clear()
                last_swap.clear()
                continue
            t, kind, b, coord, side = ev
            self.n_backtracks += 1
            if t > 1e-12:
                just_flipped.clear()
                last_swap.clear()
            beta_b = beta_old + t * (beta_new - beta_old)
            if kind == "death":
                for j in b.tied + b.free:
                    beta_b[j] = 0.0
                if len(b.tied) == 1 and id(b) not in just_flipped:
                    self._flip(b)
                    just_flipped.add(id(b))
                else:
                    self.beta = beta_b
                    self.remove_block(b)
                    beta_b = self.beta
            else:
                j0 = b.tied[0]
                m = abs(beta_b[j0])
                beta_b[coord] = side * m
                slope = beta_new[coord] - beta_old[coord]
                sgn = side if m > 0 else (np.sign(slope) if slope != 0 else 1.0)
                # At a zero-magnitude tie the block genuinely grows (activation
                # cascade); a carrier swap is only meaningful on a moving tie.
                if m > 0 and len(b.tied) == 1 and last_swap.get(id(b)) != coord:
                    old_carrier = b.tied[0]
                    self._swap_carrier(b, coord, sgn)
                    last_swap[id(b)] = old_carrier
                else:
                    self._grow(b, coord, sgn)
                    last_swap.pop(id(b), None)
            self.beta = beta_b
            if t > 0:
                self._record()
            beta_old = beta_b
        return False


# -- module-level operations ------------------------------------------------


def solve_subproblem(state: ActiveSetState, problem=None, penalty=None) -> np.ndarray:
    """Step 1 alone: the exact quadratic solve for the current structure.

    Returns the full-length coefficient vector (zeros off the active set);
    no coherence check is performed.
    """
    if problem is not None and problem is not state.problem:
        raise InstanceError("state was built for a different problem")
    if penalty is not None and penalty is not state.penalty:
        raise InstanceError("state was built for a different penalty")
    return state.solve_current()


def update_factor_add(state: ActiveSetState, j_or_group: int, sign: float = 1.0) -> ActiveSetState:
    """Grow the active structure (and its factor) by a coordinate or group."""
    if state.penalty.family is PenaltyFamily.ELASTIC_NET:
        if j_or_group in state.active_coords():
            raise InstanceError(f"coordinate {j_or_group} already active")
        state.add_coordinate(j_or_group, sign)
    else:
        if j_or_group in state.active_groups():
            raise InstanceError(f"group {j_or_group} already active")
        g = state.problem.groups[j_or_group]
        state.activate_group(j_or_group, int(g[0]), sign)
    return state


def update_factor_remove(state: ActiveSetState, j_or_group: int) -> ActiveSetState:
    """Drop a coordinate (elastic net) or group from the structure and factor."""
    for b in state.blocks:
        key = b.group
        if key == j_or_group:
            state.remove_block(b)
            return state
    raise InstanceError(f"{j_or_group} is not active")


def _certify_state(state: ActiveSetState, iteration: int) -> list:
    from . import gaps
    from .oracle import GammaValue

    problem, penalty = state.problem, state.penalty
    c = stationarity_vector(problem, penalty, state.beta)
    gamma = c / penalty.lam
    for tag in state.tags:
        if tag[0] == "coord":
            b = tag[1]
            j = b.tied[0]
            gamma[j] = -penalty.eta_gamma * b.signs[j]
    gv = GammaValue(values=gamma)
    kept = np.asarray(state.active_coords(), dtype=int)
    certs = [
        gaps.bound_main(problem, penalty, gv, state.beta),
        gaps.bound_tight(problem, penalty, gv, state.beta, kept=kept),
    ]
    if penalty.family is PenaltyFamily.ELASTIC_NET:
        certs.append(gaps.fenchel_gap(problem, penalty, gv, state.beta))
    for cert in certs:
        cert.iteration = iteration
    return certs


def solve(problem: ProblemData, penalty: PenaltySpec, config: SolveConfig | None = None) -> Solution:
    """Run the full active-set loop to the first-order tolerance.

    Starts from ``config.beta0`` (default zero).  Status is "converged",
    "max_outer", "cycle_guard", or "inner_guard"; non-convergence returns the
    best iterate, never raises.  Rank errors from singular active systems
    (possible when lambda2 = 0) do raise.
    """
    config = config or SolveConfig()
    state = ActiveSetState(problem, penalty)
    if config.beta0 is not None and np.any(config.beta0):
        state.init_from(config.beta0)
    return _run(state, config)


def _run(state: ActiveSetState, config: SolveConfig) -> Solution:
    """Drive an existing engine state to termination (resets counters)."""
    problem, penalty = state.problem, state.penalty
    certify = config.certify
    if isinstance(certify, str) and certify.startswith("every"):
        certify = ("every", int(certify.split(":")[1]))
    if certify != "none" and penalty.lambda2 <= 0:
        raise ConfigurationError("gap certification requires lambda2 > 0")

    t0 = time.perf_counter()
    state.n_solves = 0
    state.n_backtracks = 0
    state.trace = [] if config.trace_objective else None

    certs: list | None = [] if certify != "none" else None
    status = "max_outer"
    max_outer = config.resolved_max_outer(problem.p)
    visits: dict = {}
    n_outer = 0

    if state.blocks and not state.inner_solve():
        status = "inner_guard"
        max_outer = 0

    grouped = penalty.family is PenaltyFamily.GROUP_LINF_ONE
    for outer in range(1, max_outer + 1):
        n_outer = outer
        c = stationarity_vector(problem, penalty, state.beta)
        if certs is not None and isinstance(certify, tuple) and (outer - 1) % certify[1] == 0:
            certs.extend(_certify_state(state, outer))

        if grouped:
            group_scores = np.empty(len(problem.groups))
            for k, g in enumerate(problem.groups):
                group_scores[k] = water_fill_level(c[g], penalty.lambda1)
        else:
            coord_scores = np.abs(c) - penalty.lambda1

        # Step 3a: downgrade an exact zero whose worst-case score vanished.
        removed = False
        gtol = SCORE_TOL * (1.0 + penalty.lambda1)
        for b in state.blocks:
            j0 = b.tied[0]
            if abs(state.beta[j0]) <= ZERO_TOL:
                score = group_scores[b.group] if grouped else max(coord_scores[j0], 0.0)
                if score <= gtol:
                    state.remove_block(b)
                    removed = True
                    break
        if removed:
            if not state.inner_solve():
                status = "inner_guard"
                break
            continue

        # Step 3b: activate the worst violator, or stop.
        if grouped:
            active = state.active_groups()
            best_k, best_v = -1, -np.inf
            for k in range(len(problem.groups)):
                if k in active:
                    continue
                if group_scores[k] > best_v:
                    best_k, best_v = k, group_scores[k]
            overall = max(group_scores.max(initial=-np.inf), -np.inf)
            if overall <= config.tau or best_k < 0 or best_v <= config.tau:
                status = "converged"
                break
            state.activate_group_from_scores(best_k, c)
        else:
            active = set(state.active_coords())
            inactive = [j for j in range(problem.p) if j not in active]
            best_v = max((coord_scores[j] for j in inactive), default=-np.inf)
            if max(coord_scores.max(initial=-np.inf), -np.inf) <= config.tau or best_v <= config.tau:
                status = "converged"
                break
            jstar = max(inactive, key=lambda j: coord_scores[j])
            state.add_coordinate(jstar, -float(np.sign(c[jstar])) or 1.0)

        sig = state.signature()
        visits[sig] = visits.get(sig, 0) + 1
        if visits[sig] == 3:
            state.chol.refactorize()
        elif visits[sig] > 3:
            status = "cycle_guard"
            break
        if not state.inner_solve():
            status = "inner_guard"
            break

    if certs is not None and certify == "final":
        certs.extend(_certify_state(state, n_outer))

    wall = time.perf_counter() - t0
    return Solution(
        beta=state.beta.copy(),
        objective=evaluate_objective(problem, penalty, state.beta),
        kkt_residual=kkt_value(problem, penalty, state.beta),
        n_outer=n_outer,
        n_solves=state.n_solves,
        n_backtracks=state.n_backtracks,
        wall_time_s=wall,
        status=status,
        certificates=certs,
        objective_trace=state.trace,
    )


def default_lambda1_grid(
    problem: ProblemData, family: PenaltyFamily, num: int = 50, decades: float = 3.0
) -> np.ndarray:
    """num log-spaced values from lambda1_max down to lambda1_max * 10^-decades."""
    top = lambda1_max(problem, family)
    if top <= 0:
        raise ConfigurationError("lambda1_max is zero: X^T y vanishes")
    return np.geomspace(top, top * 10.0 ** (-decades), num)


def solve_path(
    problem: ProblemData,
    family: PenaltyFamily,
    lambda1_grid=None,
    lambda2_grid=(1.0,),
    config: SolveConfig | None = None,
    solver=None,
) -> PathResult:
    """Warm-started sweep over the penalty grid.

    Within each lambda2 row, lambda1 runs in decreasing order and every solve
    starts from its predecessor's solution.  Per-cell failures (e.g. rank
    errors on the pure-Lasso boundary) are recorded and the sweep continues.
    ``solver`` swaps in a different solve callable (used by the baselines).
    """
    config = config or SolveConfig()
    if lambda1_grid is None:
        lambda1_grid = default_lambda1_grid(problem, family)
    lam1s = np.unique(np.asarray(lambda1_grid, dtype=float))[::-1]
    lam2s = np.asarray(lambda2_grid, dtype=float)
    if lam1s.size == 0 or lam2s.size == 0:
        raise ConfigurationError("penalty grids must be non-empty")

    grid: list[tuple[float, float]] = []
    solutions: list[Solution | None] = []
    failures: list[tuple[int, str]] = []
    idx = 0
    for lam2 in lam2s:
        warm = None
        state: ActiveSetState | None = None
        for lam1 in lam1s:
            grid.append((float(lam1), float(lam2)))
            pen = PenaltySpec(family, float(lam1), float(lam2))
            try:
                if solver is not None:
                    sol = solver(problem, pen, replace(config, beta0=warm))
                else:
                    # The factor depends on the structure and lambda2 only, so
                    # the engine (and its factorization) persists along the row.
                    if state is None:
                        state = ActiveSetState(problem, pen)
                        if warm is not None and np.any(warm):
                            state.init_from(warm)
                    else:
                        state.retarget(pen)
                    sol = _run(state, config)
                solutions.append(sol)
                warm = sol.beta
            except (RankError, ConfigurationError) as exc:
                solutions.append(None)
                failures.append((idx, repr(exc)))
                state = None  # a failed solve may leave the state half-edited
            idx += 1
    return PathResult(
        grid=grid,
        solutions=solutions,
        warm_start_order="lambda2-major; within a row lambda1 descends and each solve warm-starts from its predecessor",
        failures=failures,
    )
