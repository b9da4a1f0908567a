"""Attractors, transient periods and invariant subsets of a transition map.

All routines work on the functional graph ``j -> Col_j(L)`` and never form
matrix powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

from . import kernels
from .errors import DimensionError
from .network import AugmentedSystem


class StateSet:
    """A set of 1-based δ-indices over ``Δ_N`` backed by a boolean mask."""

    __slots__ = ("mask",)

    def __init__(self, mask):
        m = np.asarray(mask, dtype=bool).copy()
        if m.ndim != 1:
            raise DimensionError("state mask must be one-dimensional")
        m.setflags(write=False)
        self.mask = m

    @classmethod
    def from_indices(cls, indices: Iterable[int], size: int):
        return cls(_as_mask(indices, size))

    @property
    def size(self) -> int:
        """Size of the ambient state space."""
        return self.mask.size

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask) + 1

    def tolist(self) -> list[int]:
        return self.members().tolist()

    def __len__(self):
        return int(self.mask.sum())

    def __iter__(self):
        return iter(self.tolist())

    def __contains__(self, idx):
        idx = int(idx)
        return 1 <= idx <= self.mask.size and bool(self.mask[idx - 1])

    def __eq__(self, other):
        if isinstance(other, StateSet):
            return np.array_equal(self.mask, other.mask)
        if isinstance(other, (set, frozenset)):
            return set(self.tolist()) == other
        return NotImplemented

    __hash__ = None

    def issubset(self, other) -> bool:
        o = _as_mask(other, self.size)
        return not (self.mask & ~o).any()

    def __repr__(self):
        items = self.tolist()
        shown = ", ".join(map(str, items[:8])) + (", ..." if len(items) > 8 else "")
        return f"{type(self).__name__}({{{shown}}}, size={self.size})"


def _as_mask(states, size: int) -> np.ndarray:
    """Boolean mask from a StateSet, a mask or an iterable of 1-based indices."""
    if isinstance(states, StateSet):
        if states.size != size:
            raise DimensionError(f"state set lives in Δ_{states.size}, expected Δ_{size}")
        return states.mask
    if isinstance(states, np.ndarray) and states.dtype == bool:
        if states.size != size:
            raise DimensionError(f"mask has length {states.size}, expected {size}")
        return states
    idx = np.fromiter((int(i) for i in states), dtype=np.int64)
    if idx.size and (idx.min() < 1 or idx.max() > size):
        raise DimensionError(f"state index outside [1, {size}]")
    mask = np.zeros(size, dtype=bool)
    mask[idx - 1] = True
    return mask


@dataclass(frozen=True)
class AttractorReport:
    """Fixed points, limit cycles and transient periods.

    Attributes
    ----------
    cycles : list of cycles, each a list of δ-indices starting at the cycle's
        minimal index and following ``L``; sorted by that minimal index.
    per_state_transient : ``τ_ξ`` for every state (position ``ξ - 1``).
    root : minimal δ-index of the cycle each state falls into.
    tau : global transient period.
    lam : lcm of the cycle lengths.
    """

    cycles: list
    per_state_transient: np.ndarray
    root: np.ndarray
    tau: int
    lam: int

    @property
    def fixed_points(self) -> list[int]:
        return [c[0] for c in self.cycles if len(c) == 1]

    @property
    def limit_cycles(self) -> list[list[int]]:
        return [c for c in self.cycles if len(c) > 1]

    def transient(self, idx: int) -> int:
        return int(self.per_state_transient[idx - 1])

    def cycle_of(self, idx: int) -> list[int]:
        r = int(self.root[idx - 1])
        for c in self.cycles:
            if c[0] == r:
                return c
        raise AssertionError("root without a cycle")

    def attractor_states(self) -> StateSet:
        return StateSet(self.per_state_transient == 0)


def attractors(sys: AugmentedSystem) -> AttractorReport:
    succ = sys.succ
    tail, root0 = kernels.analyze_graph(succ)
    cycles = []
    for r in np.unique(root0):
        cyc, v = [int(r) + 1], int(succ[r])
        while v != r:
            cyc.append(v + 1)
            v = int(succ[v])
        cycles.append(cyc)
    lam = reduce(math.lcm, (len(c) for c in cycles), 1)
    tail = np.asarray(tail)
    tail.setflags(write=False)
    root = np.asarray(root0) + 1
    root.setflags(write=False)
    return AttractorReport(cycles, tail, root, int(tail.max()), lam)


def attractor_set_of(sys: AugmentedSystem, phi, report: AttractorReport | None = None) -> StateSet:
    """``Ω_Φ``: every attractor state reached from some state of ``Φ``."""
    mask = _as_mask(phi, sys.size)
    if report is None:
        report = attractors(sys)
    roots = np.unique(report.root[mask])
    return StateSet(np.isin(report.root, roots) & (report.per_state_transient == 0))


def max_invariant_subset(sys: AugmentedSystem, S) -> StateSet:
    """Largest ``I ⊆ S`` with ``L(I) ⊆ I``.

    The pruning pass (drop states whose successor left the set) is repeated
    until nothing changes, so the result is invariant.
    """
    return StateSet(kernels.prune_invariant(sys.succ, _as_mask(S, sys.size)))


def single_prune(sys: AugmentedSystem, S) -> StateSet:
    """One pruning pass only: ``{i ∈ S : Col_i(L) ∈ S}``. Not invariant in general."""
    m = _as_mask(S, sys.size)
    return StateSet(m & m[sys.succ])


def image(sys: AugmentedSystem, S, steps: int = 1) -> StateSet:
    """Set of states reached from ``S`` after exactly ``steps`` steps."""
    m = _as_mask(S, sys.size)
    for _ in range(steps):
        nxt = np.zeros_like(m)
        nxt[sys.succ[m]] = True
        m = nxt
    return StateSet(m)
