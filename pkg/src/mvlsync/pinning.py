"""Pinning state-feedback synthesis for global approximate synchronization.

Pipeline: find the attractors that leave the synchronous set, redirect one
state of each (and, when no basin exists, make the synchronous set
invariant), read off which node projections changed, then solve
``H̄_i = M_i (K_i ∗ H_i)`` for every changed node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import AttractorReport, _as_mask, attractors, max_invariant_subset
from .errors import DimensionError, InfeasibleError, SynthesisError
from .network import AugmentedSystem, node_structure_from_L
from .stp import LogicMatrix, khatri_rao_fold
from .sync import SyncSpec, check_global_sync, global_sast, masb, sync_state_set

POLICIES = ("lowest-index", "seeded")


@dataclass(frozen=True)
class PerturbTargets:
    """Attractors with at least one state outside the synchronous set."""

    omega0: list

    def __len__(self):
        return len(self.omega0)

    def __iter__(self):
        return iter(self.omega0)


def attractors_to_perturb(report: AttractorReport, lam) -> PerturbTargets:
    mask = _as_mask(lam, report.per_state_transient.size)
    return PerturbTargets([list(c) for c in report.cycles if not mask[np.asarray(c) - 1].all()])


@dataclass
class PinningPlan:
    """Perturbed transition matrix and per-node feedback matrices.

    Node positions are 1-based over ``x1..xn, z1..zn``; ``p1`` lists pinned
    x-nodes and ``p2`` pinned z-nodes (numbered within their system).
    """

    k: int
    n: int
    L: LogicMatrix
    L_bar: LogicMatrix
    pinned: list
    redirects: list = field(default_factory=list)
    H: dict = field(default_factory=dict)
    Hbar: dict = field(default_factory=dict)
    K: dict = field(default_factory=dict)
    M: dict = field(default_factory=dict)

    @property
    def p1(self) -> list[int]:
        return [i for i in self.pinned if i <= self.n]

    @property
    def p2(self) -> list[int]:
        return [i - self.n for i in self.pinned if i > self.n]

    @property
    def solved(self) -> bool:
        return all(i in self.K and i in self.M for i in self.pinned)


class _Chooser:
    def __init__(self, policy: str, seed):
        if policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}, got {policy!r}")
        self.policy = policy
        self.rng = np.random.default_rng(seed) if policy == "seeded" else None

    def state_of(self, cycle) -> int:
        if self.rng is None:
            return min(cycle)
        return int(self.rng.choice(cycle))

    def target_in(self, pool: np.ndarray, cols: np.ndarray) -> int:
        """Pick a 1-based target from ``pool`` (a mask) given current columns."""
        idx = np.flatnonzero(pool)
        if idx.size == 0:
            raise InfeasibleError("no target state available")
        if self.rng is not None:
            return int(self.rng.choice(idx)) + 1
        fixed = idx[cols[idx] == idx + 1]
        return int((fixed if fixed.size else idx)[0]) + 1


def _pinned_nodes(L: LogicMatrix, L_bar: LogicMatrix, k: int, n: int) -> list[int]:
    return [i for i in range(1, 2 * n + 1)
            if node_structure_from_L(L, i, k) != node_structure_from_L(L_bar, i, k)]


def perturb_transition(sys: AugmentedSystem, lam, inv, phi_max, omega0: PerturbTargets,
                       policy: str = "lowest-index", seed=None) -> PinningPlan:
    """Perturb ``L`` so that every trajectory ends inside the synchronous set.

    Without a synchronization basin, every synchronous state whose successor
    leaves ``Λ`` is sent back into ``Λ`` and one state of each bad attractor
    is sent into ``Λ``. Otherwise one state of each bad attractor is sent
    into the maximum invariant subset ``inv``.
    """
    lam_m = _as_mask(lam, sys.size)
    inv_m = _as_mask(inv, sys.size)
    basin = _as_mask(phi_max, sys.size)
    if not lam_m.any():
        raise InfeasibleError("the synchronous state set is empty")
    pick = _Chooser(policy, seed)
    cols = sys.L.cols.copy()
    redirects = []
    if not basin.any():
        for i in np.flatnonzero(lam_m):
            if not lam_m[cols[i] - 1]:
                t = pick.target_in(lam_m, cols)
                redirects.append((int(i) + 1, t))
                cols[i] = t
        pool = lam_m
    else:
        if not inv_m.any():
            raise InfeasibleError("nonempty basin but empty invariant subset")
        pool = inv_m
    for cyc in omega0:
        s = pick.state_of(cyc)
        t = pick.target_in(pool, cols)
        redirects.append((s, t))
        cols[s - 1] = t
    L_bar = LogicMatrix(sys.L.rows, cols)
    pinned = _pinned_nodes(sys.L, L_bar, sys.k, sys.n)
    plan = PinningPlan(sys.k, sys.n, sys.L, L_bar, pinned, redirects)
    for i in pinned:
        plan.H[i] = node_structure_from_L(sys.L, i, sys.k)
        plan.Hbar[i] = node_structure_from_L(L_bar, i, sys.k)
    return plan


@dataclass(frozen=True)
class FeedbackSolveState:
    """Groups ``T[α, β] = {l : h_l = α, h̄_l = β}`` (1-based ``l``)."""

    k: int
    T: dict

    def family(self, sigma: int) -> list[int]:
        """Ascending ``β`` of the nonempty ``T[σ, β]``."""
        return sorted(b for (a, b), ls in self.T.items() if a == sigma and ls.size)


def t_sets(H: LogicMatrix, Hbar: LogicMatrix, k: int) -> FeedbackSolveState:
    _check_pair(H, Hbar, k)
    T = {}
    for a in range(1, k + 1):
        for b in range(1, k + 1):
            T[(a, b)] = np.flatnonzero((H.cols == a) & (Hbar.cols == b)) + 1
    return FeedbackSolveState(k, T)


def _check_pair(H, Hbar, k):
    if H.rows != k or Hbar.rows != k or H.n_cols != Hbar.n_cols:
        raise DimensionError(f"H and H̄ must both be {k}×c, got {H.shape} and {Hbar.shape}")


def solve_feedback(H: LogicMatrix, Hbar: LogicMatrix, k: int, operator: LogicMatrix | None = None):
    """Solve ``H̄ = M (K ∗ H)`` for ``(K, M)``.

    By default the ``κ``-th nonempty group ``T[σ, β]`` (ascending ``β``) gets
    ``w = κ`` and unused entries of ``M`` are 1. With ``operator`` given,
    ``M`` is fixed and each column takes the smallest ``w`` that works.
    """
    _check_pair(H, Hbar, k)
    h, hb = H.cols, Hbar.cols
    if operator is not None:
        if operator.shape != (k, k * k):
            raise DimensionError(f"operator must be {k}×{k * k}")
        table = operator.cols.reshape(k, k)  # table[w-1, h-1]
        ok = table[:, h - 1] == hb  # (k, c)
        if not ok.any(axis=0).all():
            bad = int(np.flatnonzero(~ok.any(axis=0))[0]) + 1
            raise SynthesisError(f"operator cannot produce column {bad}: h={h[bad - 1]}, h̄={hb[bad - 1]}")
        w = ok.argmax(axis=0) + 1
        return LogicMatrix(k, w), operator
    state = t_sets(H, Hbar, k)
    w = np.zeros(h.size, dtype=np.int64)
    for sigma in range(1, k + 1):
        for kappa, beta in enumerate(state.family(sigma), start=1):
            w[state.T[(sigma, beta)] - 1] = kappa
    m = np.ones(k * k, dtype=np.int64)
    m[(w - 1) * k + h - 1] = hb
    return LogicMatrix(k, w), LogicMatrix(k, m)


@dataclass(frozen=True)
class AssignmentCheck:
    ok: bool
    violations: list  # (σ, l_μ, l_ν), 1-based columns

    def __bool__(self):
        return self.ok


def validate_assignment(K: LogicMatrix, H: LogicMatrix, Hbar: LogicMatrix, k: int) -> AssignmentCheck:
    """Does ``K`` admit some ``M`` with ``H̄ = M (K ∗ H)``?

    Columns with equal ``h`` but different ``h̄`` must carry distinct ``w``.
    One offending pair is reported per clash.
    """
    _check_pair(H, Hbar, k)
    if K.rows != k or K.n_cols != H.n_cols:
        raise DimensionError("K must match H in shape")
    first = {}
    violations = []
    for l, (w, a, b) in enumerate(zip(K.cols.tolist(), H.cols.tolist(), Hbar.cols.tolist()), start=1):
        seen = first.setdefault((w, a), {})
        if b not in seen:
            for b2, l2 in seen.items():
                violations.append((a, l2, l))
            seen[b] = l
    return AssignmentCheck(not violations, violations)


def apply_feedback(K: LogicMatrix, M: LogicMatrix, H: LogicMatrix, k: int) -> LogicMatrix:
    """Column-wise ``M ⋉ Col_l(K) ⋉ Col_l(H)``."""
    return LogicMatrix(k, M.cols[(K.cols - 1) * k + H.cols - 1])


def solve_plan(plan: PinningPlan, operators: dict | None = None) -> PinningPlan:
    """Fill ``K``/``M`` for every pinned node (in place, returned for chaining)."""
    operators = operators or {}
    for i in plan.pinned:
        plan.K[i], plan.M[i] = solve_feedback(plan.H[i], plan.Hbar[i], plan.k, operators.get(i))
    return plan


@dataclass(frozen=True)
class PlanCheck:
    global_sync: bool
    gamma: int | None
    tau_bar: int


def reconstruct(plan: PinningPlan) -> LogicMatrix:
    """Khatri-Rao fold of the closed-loop node matrices."""
    mats = []
    for i in range(1, 2 * plan.n + 1):
        H = node_structure_from_L(plan.L, i, plan.k)
        if i in plan.pinned:
            mats.append(apply_feedback(plan.K[i], plan.M[i], H, plan.k))
        else:
            mats.append(H)
    return khatri_rao_fold(mats)


def verify_plan(plan: PinningPlan, lam) -> PlanCheck:
    """Rebuild ``L̄`` from the feedback matrices and test the closed loop."""
    if not plan.solved:
        raise SynthesisError("plan has pinned nodes without K/M")
    if reconstruct(plan) != plan.L_bar:
        raise SynthesisError("closed-loop matrix does not match the perturbed transition matrix")
    sys_bar = AugmentedSystem(plan.k, plan.n, plan.L_bar)
    rep = attractors(sys_bar)
    ok = check_global_sync(sys_bar, lam, rep)
    gamma = global_sast(sys_bar, lam, rep) if ok else None
    return PlanCheck(ok, gamma, rep.tau)


def plan_from_matrix(sys: AugmentedSystem, L_bar: LogicMatrix) -> PinningPlan:
    """Plan for a given perturbed matrix (pinned nodes read off the difference)."""
    if L_bar.shape != sys.L.shape:
        raise DimensionError("perturbed matrix has the wrong shape")
    redirects = [(int(j) + 1, int(L_bar.cols[j])) for j in np.flatnonzero(L_bar.cols != sys.L.cols)]
    pinned = _pinned_nodes(sys.L, L_bar, sys.k, sys.n)
    plan = PinningPlan(sys.k, sys.n, sys.L, L_bar, pinned, redirects)
    for i in pinned:
        plan.H[i] = node_structure_from_L(sys.L, i, sys.k)
        plan.Hbar[i] = node_structure_from_L(L_bar, i, sys.k)
    return plan


def synthesize_pinning(sys: AugmentedSystem, gamma: int = 1, policy: str = "lowest-index",
                       seed=None, operators: dict | None = None) -> PinningPlan:
    """Run target search, perturbation and feedback solving end to end."""
    spec = SyncSpec(sys.k, sys.n, gamma)
    lam = sync_state_set(spec)
    rep = attractors(sys)
    inv = max_invariant_subset(sys, lam)
    basin = masb(sys, lam, rep)
    omega0 = attractors_to_perturb(rep, lam)
    plan = perturb_transition(sys, lam, inv, basin, omega0, policy, seed)
    return solve_plan(plan, operators)


__all__ = [
    "POLICIES", "PerturbTargets", "attractors_to_perturb", "PinningPlan", "perturb_transition",
    "FeedbackSolveState", "t_sets", "solve_feedback", "AssignmentCheck", "validate_assignment",
    "apply_feedback", "solve_plan", "PlanCheck", "reconstruct", "verify_plan", "plan_from_matrix",
    "synthesize_pinning",
]
