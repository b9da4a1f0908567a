"""Coupled k-valued networks and their augmented transition matrix."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DimensionError, ExpressionError
from .logic import Expr, structure_matrix
from .stp import LogicMatrix, khatri_rao_fold


@dataclass(frozen=True)
class Network:
    """Two coupled k-valued networks ``x' = f(x, z)``, ``z' = g(x, z)``.

    Every rule may depend on all ``2n`` variables ``x1..xn, z1..zn``.
    """

    k: int
    n: int
    x_rules: tuple[Expr, ...]
    z_rules: tuple[Expr, ...]

    def __post_init__(self):
        object.__setattr__(self, "x_rules", tuple(self.x_rules))
        object.__setattr__(self, "z_rules", tuple(self.z_rules))
        if self.k < 2:
            raise ExpressionError(f"k must be >= 2, got {self.k}")
        if self.n < 1:
            raise ExpressionError("a network needs at least one node per system")
        if len(self.x_rules) != self.n or len(self.z_rules) != self.n:
            raise ExpressionError(
                f"expected {self.n} rules per system, got {len(self.x_rules)} and {len(self.z_rules)}")
        names = set(self.variables)
        for e in self.rules:
            extra = e.free_vars() - names
            if extra:
                raise ExpressionError(f"unknown variable(s): {', '.join(sorted(extra))}")

    @property
    def variables(self) -> list[str]:
        return [f"x{i}" for i in range(1, self.n + 1)] + [f"z{i}" for i in range(1, self.n + 1)]

    @property
    def rules(self) -> tuple[Expr, ...]:
        return self.x_rules + self.z_rules

    @classmethod
    def from_source(cls, text: str) -> "Network":
        from .dsl import parse_network
        return parse_network(text)


@dataclass(frozen=True)
class CoupledAlgebraic:
    """Algebraic form ``x(t+1) = F x z``, ``z(t+1) = G x z``."""

    k: int
    n: int
    F: LogicMatrix
    G: LogicMatrix
    node_matrices: tuple[LogicMatrix, ...] = field(default=(), repr=False)

    def __post_init__(self):
        size = self.k ** self.n
        for name, M in (("F", self.F), ("G", self.G)):
            if M.shape != (size, size * size):
                raise DimensionError(f"{name} must be {size}×{size * size}, got {M.shape}")


@dataclass(frozen=True, eq=False)
class AugmentedSystem:
    """The map ``ξ(t+1) = L ξ(t)`` on ``Δ_{k^{2n}}``, ``ξ = x ⋉ z``."""

    k: int
    n: int
    L: LogicMatrix

    def __post_init__(self):
        N = self.k ** (2 * self.n)
        if self.L.shape != (N, N):
            raise DimensionError(f"transition matrix must be {N}×{N}, got {self.L.shape}")

    @property
    def size(self) -> int:
        return self.k ** (2 * self.n)

    @cached_property
    def succ(self) -> np.ndarray:
        """Zero-based successor array of the functional graph."""
        s = self.L.zero_based
        s.setflags(write=False)
        return s

    def with_matrix(self, L: LogicMatrix) -> "AugmentedSystem":
        return AugmentedSystem(self.k, self.n, L)

    def __eq__(self, other):
        if not isinstance(other, AugmentedSystem):
            return NotImplemented
        return (self.k, self.n) == (other.k, other.n) and self.L == other.L

    __hash__ = None


def assemble(network: Network) -> CoupledAlgebraic:
    """Per-node structure matrices and the Khatri-Rao folds ``F``, ``G``."""
    order = network.variables
    mats = tuple(structure_matrix(e, order, network.k) for e in network.rules)
    n = network.n
    return CoupledAlgebraic(network.k, n, khatri_rao_fold(mats[:n]), khatri_rao_fold(mats[n:]),
                            node_matrices=mats)


def build_augmented(alg: CoupledAlgebraic) -> AugmentedSystem:
    """``L = F (I ⊗ G) M_r``, computed column-wise as ``(f_j - 1) k^n + g_j``."""
    if alg.F.n_cols != alg.G.n_cols:
        raise DimensionError("F and G must have the same number of columns")
    kn = alg.k ** alg.n
    L = LogicMatrix(kn * kn, (alg.F.cols - 1) * kn + alg.G.cols)
    return AugmentedSystem(alg.k, alg.n, L)


def augmented_from_network(network: Network) -> AugmentedSystem:
    return build_augmented(assemble(network))


# ----------------------------------------------------------------- states


@dataclass(frozen=True)
class CompositeState:
    """A joint state ``ξ = x ⋉ z`` in all three representations."""

    delta_index: int
    levels: tuple[int, ...]
    k: int

    @property
    def n(self) -> int:
        return len(self.levels) // 2

    @property
    def x_levels(self) -> tuple[int, ...]:
        return self.levels[:self.n]

    @property
    def z_levels(self) -> tuple[int, ...]:
        return self.levels[self.n:]

    @property
    def scalars(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(self.k - lv, self.k - 1) for lv in self.levels)

    @property
    def x_scalars(self) -> tuple[Fraction, ...]:
        return self.scalars[:self.n]

    @property
    def z_scalars(self) -> tuple[Fraction, ...]:
        return self.scalars[self.n:]

    @property
    def errors(self) -> tuple[Fraction, ...]:
        """Per-node synchronization errors ``|x_i - z_i|``."""
        s = self.scalars
        return tuple(abs(s[i] - s[i + self.n]) for i in range(self.n))


def encode_state(levels: Sequence[int], k: int) -> CompositeState:
    """Levels ``(i_1..i_n, j_1..j_n)`` to the δ-index ``(i - 1) k^n + j``."""
    levels = tuple(int(v) for v in levels)
    if not levels or len(levels) % 2:
        raise DimensionError("expected 2n levels")
    idx = 0
    for v in levels:
        if not 1 <= v <= k:
            raise DimensionError(f"level {v} outside [1, {k}]")
        idx = idx * k + (v - 1)
    return CompositeState(idx + 1, levels, k)


def encode_scalars(x: Sequence, z: Sequence, k: int) -> CompositeState:
    """Scalar tuples ``(X, Z)`` (values in ``D_k``) to a composite state."""
    if len(x) != len(z):
        raise DimensionError("X and Z must have the same length")
    levels = []
    for v in list(x) + list(z):
        f = Fraction(v)
        lv = k - f * (k - 1)
        if lv.denominator != 1 or not 1 <= lv <= k:
            raise DimensionError(f"{v} is not an element of D_{k}")
        levels.append(int(lv))
    return encode_state(levels, k)


def decode_state(delta_index: int, k: int, n: int) -> CompositeState:
    N = k ** (2 * n)
    if not 1 <= delta_index <= N:
        raise DimensionError(f"state index {delta_index} outside [1, {N}]")
    rem, levels = delta_index - 1, []
    for _ in range(2 * n):
        rem, d = divmod(rem, k)
        levels.append(d + 1)
    return CompositeState(int(delta_index), tuple(reversed(levels)), k)


def simulate(sys: AugmentedSystem, x0: CompositeState | int, steps: int) -> list[CompositeState]:
    """Trajectory ``ξ(0..steps)``; ``x0`` is a state or a 1-based δ-index."""
    if steps < 0:
        raise DimensionError("steps must be nonnegative")
    start = x0.delta_index if isinstance(x0, CompositeState) else int(x0)
    cur = decode_state(start, sys.k, sys.n).delta_index
    path = [cur]
    cols = sys.L.cols
    for _ in range(steps):
        cur = int(cols[cur - 1])
        path.append(cur)
    return [decode_state(i, sys.k, sys.n) for i in path]


def node_structure_from_L(L: LogicMatrix | AugmentedSystem, i: int, k: int | None = None) -> LogicMatrix:
    """Structure matrix of node ``i`` (1..2n) read off a transition matrix.

    Equivalent to ``(1ᵀ_{k^{i-1}} ⊗ I_k ⊗ 1ᵀ_{k^{2n-i}}) L``: column ``j`` is
    the ``i``-th base-``k`` digit of ``Col_j(L)``.
    """
    if isinstance(L, AugmentedSystem):
        k = L.k if k is None else k
        L = L.L
    if k is None:
        raise DimensionError("k is required when passing a bare LogicMatrix")
    width = _digit_count(L.rows, k)
    if not 1 <= i <= width:
        raise DimensionError(f"node {i} outside [1, {width}]")
    return LogicMatrix(k, (L.zero_based // k ** (width - i)) % k + 1)


def node_matrices(L: LogicMatrix | AugmentedSystem, k: int | None = None) -> list[LogicMatrix]:
    if isinstance(L, AugmentedSystem):
        k = L.k
        L = L.L
    width = _digit_count(L.rows, k)
    return [node_structure_from_L(L, i, k) for i in range(1, width + 1)]


def _digit_count(N: int, k: int) -> int:
    width, size = 0, 1
    while size < N:
        size *= k
        width += 1
    if size != N:
        raise DimensionError(f"{N} is not a power of {k}")
    return width

