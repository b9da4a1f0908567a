"""Approximate and complete synchronization of the augmented system.

Tolerance ``gamma`` bounds the level gap of every node pair: a composite
state ``x ⋉ z`` is synchronous when ``|i_l - j_l| <= gamma`` for all ``l``.
``gamma = 0`` is complete synchronization.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import comb

import numpy as np

from . import kernels
from .dynamics import (AttractorReport, StateSet, _as_mask, attractor_set_of, attractors,
                       image, max_invariant_subset)
from .errors import DimensionError, NotSynchronousError
from .network import AugmentedSystem


@dataclass(frozen=True)
class SyncSpec:
    k: int
    n: int
    gamma: int = 1

    def __post_init__(self):
        if self.k < 2 or self.n < 1:
            raise DimensionError(f"need k >= 2 and n >= 1, got k={self.k}, n={self.n}")
        if not 0 <= self.gamma <= self.k - 1:
            raise DimensionError(f"gamma must lie in [0, {self.k - 1}], got {self.gamma}")
        if self.k == 2 and self.gamma >= 1:
            warnings.warn("gamma >= 1 with k = 2 makes every state synchronous", stacklevel=3)

    @property
    def size(self) -> int:
        return self.k ** (2 * self.n)

    @classmethod
    def for_system(cls, sys: AugmentedSystem, gamma: int = 1) -> "SyncSpec":
        return cls(sys.k, sys.n, gamma)


class SyncStateSet(StateSet):
    """The synchronous state set ``Λ`` (``Λ'`` when ``gamma = 0``)."""

    __slots__ = ("spec",)

    def __init__(self, mask, spec: SyncSpec):
        super().__init__(mask)
        self.spec = spec


class Basin(StateSet):
    """A set of initial states ``Φ``; ``is_max`` marks the MASB."""

    __slots__ = ("is_max",)

    def __init__(self, mask, is_max: bool = False):
        super().__init__(mask)
        self.is_max = is_max


def state_levels(k: int, n: int) -> np.ndarray:
    """``(N, 2n)`` array of node levels for every δ-index, row ``ξ - 1``."""
    width = 2 * n
    idx = np.arange(k ** width, dtype=np.int64)
    powers = k ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers) % k + 1


def sync_state_set(spec: SyncSpec) -> SyncStateSet:
    lv = state_levels(spec.k, spec.n)
    gap = np.abs(lv[:, :spec.n] - lv[:, spec.n:])
    return SyncStateSet(gap.max(axis=1) <= spec.gamma, spec)


def sync_cardinality(k: int, n: int) -> int:
    """Closed-form ``|Λ|`` at ``gamma = 1``."""
    if k < 2 or n < 1:
        raise DimensionError("need k >= 2 and n >= 1")
    return sum(comb(n, l) * 3 ** l * (k - 2) ** l * 2 ** (2 * (n - l)) for l in range(n + 1))


def _lam_mask(sys, lam) -> np.ndarray:
    if isinstance(lam, SyncSpec):
        lam = sync_state_set(lam)
    return _as_mask(lam, sys.size)


def check_local_sync(sys: AugmentedSystem, phi, lam, report: AttractorReport | None = None) -> bool:
    """Every attractor reached from ``Φ`` lies inside ``Λ``."""
    omega = attractor_set_of(sys, phi, report)
    return omega.issubset(_lam_mask(sys, lam))


def check_local_sync_sgn(sys: AugmentedSystem, phi, lam, report: AttractorReport | None = None) -> bool:
    """Same test via index vectors: ``sgn(Σ_{t=τ}^{τ+λ-1} L^t Ξ₁) <= Ξ₂``."""
    if report is None:
        report = attractors(sys)
    vec = _as_mask(phi, sys.size).astype(np.int64)
    for _ in range(report.tau):
        vec = kernels.push_forward(sys.succ, vec)
    acc = np.zeros_like(vec)
    for _ in range(report.lam):
        acc += vec
        vec = kernels.push_forward(sys.succ, vec)
    return bool(np.all(np.sign(acc) <= _lam_mask(sys, lam)))


def check_global_sync(sys: AugmentedSystem, lam, report: AttractorReport | None = None) -> bool:
    if report is None:
        report = attractors(sys)
    on_cycle = report.per_state_transient == 0
    return not (on_cycle & ~_lam_mask(sys, lam)).any()


def check_global_sync_sgn(sys: AugmentedSystem, lam, report: AttractorReport | None = None) -> bool:
    """``sgn(L^τ 1) <= Ξ₂``."""
    if report is None:
        report = attractors(sys)
    vec = np.ones(sys.size, dtype=np.int64)
    for _ in range(report.tau):
        vec = kernels.push_forward(sys.succ, vec)
    return bool(np.all(np.sign(vec) <= _lam_mask(sys, lam)))


def masb(sys: AugmentedSystem, lam, report: AttractorReport | None = None) -> Basin:
    """Maximum approximate synchronization basin ``Φ_max``."""
    if report is None:
        report = attractors(sys)
    m = _lam_mask(sys, lam)
    bad = np.unique(report.root[(report.per_state_transient == 0) & ~m])
    return Basin(~np.isin(report.root, bad), is_max=True)


@dataclass(frozen=True)
class SastResult:
    """Shortest synchronization time of a basin.

    ``gamma`` is the smallest ``t >= 1`` after which every trajectory from
    the basin stays inside ``Λ``; ``tau_phi`` bounds the search;
    ``synced_at_start`` tells whether the basin already lay in the maximum
    invariant subset at ``t = 0``.
    """

    gamma: int
    tau_phi: int
    synced_at_start: bool


def sast_report(sys: AugmentedSystem, phi, lam, report: AttractorReport | None = None,
                method: str = "hitting") -> SastResult:
    if report is None:
        report = attractors(sys)
    lam_m = _lam_mask(sys, lam)
    phi_m = _as_mask(phi, sys.size)
    if not check_local_sync(sys, phi_m, lam_m, report):
        raise NotSynchronousError("the basin does not synchronize: some attractor leaves the synchronous set")
    inv = max_invariant_subset(sys, lam_m).mask
    tau_phi = int(report.per_state_transient[phi_m].max()) if phi_m.any() else 0
    at_start = not (phi_m & ~inv).any()
    if method == "hitting":
        dist = kernels.hitting_time(sys.succ, inv)
        worst = int(dist[phi_m].max()) if phi_m.any() else 0
        if worst < 0:
            raise AssertionError("synchronous basin never enters the invariant subset")
        gamma = max(1, worst)
    elif method == "image":
        cur = StateSet(phi_m)
        gamma = None
        for t in range(1, max(1, tau_phi) + 1):
            cur = image(sys, cur)
            if not (cur.mask & ~inv).any():
                gamma = t
                break
        if gamma is None:
            raise AssertionError("no entry time found within the transient bound")
    else:
        raise ValueError(f"unknown method {method!r}")
    return SastResult(gamma, tau_phi, at_start)


def sast(sys: AugmentedSystem, phi, lam, report: AttractorReport | None = None) -> int:
    """Shortest approximate synchronization time ``Γ_Φ``."""
    return sast_report(sys, phi, lam, report).gamma


def global_sast(sys: AugmentedSystem, lam, report: AttractorReport | None = None) -> int:
    if report is None:
        report = attractors(sys)
    if not check_global_sync(sys, lam, report):
        raise NotSynchronousError("the system is not globally synchronous")
    return sast(sys, np.ones(sys.size, dtype=bool), lam, report)
