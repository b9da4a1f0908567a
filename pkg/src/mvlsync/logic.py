"""k-valued logic: values, expression trees, structure matrices.

A value with *level* ``i`` is the vector ``δ_k^i`` and the scalar
``(k - i) / (k - 1)``; level 1 is "true" (1) and level ``k`` is "false" (0).
Level arithmetic used for vectorized evaluation:

=========  ==========================
operator   level form
=========  ==========================
``¬a``     ``k + 1 - a``
``a ∧ b``  ``max(a, b)``
``a ∨ b``  ``min(a, b)``
``a ⊕ b``  ``k - ((k - a) + (k - b)) mod k``
``∇_i a``  ``1 if a == i else k``
``⊘ a``    ``a mod k + 1``
=========  ==========================
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Mapping, Sequence

import numpy as np

from .errors import ExpressionError
from .stp import LogicMatrix


@dataclass(frozen=True, order=True)
class KValue:
    """A k-valued logical constant."""

    level: int
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ExpressionError(f"k must be >= 2, got {self.k}")
        if not 1 <= self.level <= self.k:
            raise ExpressionError(f"level {self.level} outside [1, {self.k}]")

    @property
    def scalar(self) -> Fraction:
        return Fraction(self.k - self.level, self.k - 1)

    @classmethod
    def from_scalar(cls, value, k: int) -> "KValue":
        v = Fraction(value)
        level = k - v * (k - 1)
        if level.denominator != 1 or not 1 <= level <= k:
            raise ExpressionError(f"{value} is not an element of D_{k}")
        return cls(int(level), k)

    def __str__(self):
        return str(self.scalar)


# --------------------------------------------------------------------- AST


class Expr:
    """Base of the expression tree. Subclasses are frozen dataclasses."""

    def free_vars(self) -> frozenset[str]:
        raise NotImplementedError

    def __str__(self):
        return to_source(self)


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def free_vars(self):
        return frozenset((self.name,))


@dataclass(frozen=True)
class Const(Expr):
    level: int

    def free_vars(self):
        return frozenset()


@dataclass(frozen=True)
class Not(Expr):
    arg: Expr

    def free_vars(self):
        return self.arg.free_vars()


@dataclass(frozen=True)
class And(Expr):
    left: Expr
    right: Expr

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()


@dataclass(frozen=True)
class Or(Expr):
    left: Expr
    right: Expr

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()


@dataclass(frozen=True)
class ModAdd(Expr):
    left: Expr
    right: Expr

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()


@dataclass(frozen=True)
class Confirm(Expr):
    """``∇_{i,k}(arg)``: true exactly when ``arg`` has level ``i``."""

    index: int
    arg: Expr

    def free_vars(self):
        return self.arg.free_vars()


@dataclass(frozen=True)
class Rotate(Expr):
    arg: Expr

    def free_vars(self):
        return self.arg.free_vars()


def and_all(terms: Sequence[Expr]) -> Expr:
    return reduce(And, terms)


def or_all(terms: Sequence[Expr]) -> Expr:
    return reduce(Or, terms)


_PREC = {Or: 1, And: 2}


def to_source(e: Expr, parent: int = 0) -> str:
    """Render ``e`` in network-file syntax."""
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return f"#{e.level}"
    if isinstance(e, Not):
        return "!" + to_source(e.arg, 3)
    if isinstance(e, (And, Or)):
        p = _PREC[type(e)]
        sym = " & " if isinstance(e, And) else " | "
        # right operand gets p + 1 so that non-left-folded trees keep their shape
        s = to_source(e.left, p) + sym + to_source(e.right, p + 1)
        return f"({s})" if p < parent else s
    if isinstance(e, ModAdd):
        return f"add({to_source(e.left)}, {to_source(e.right)})"
    if isinstance(e, Confirm):
        return f"conf({e.index}, {to_source(e.arg)})"
    if isinstance(e, Rotate):
        return f"rot({to_source(e.arg)})"
    raise ExpressionError(f"unknown expression node {e!r}")


# --------------------------------------------------------------- operators

OPERATORS = ("negation", "conjunction", "disjunction", "mod_add", "confirmor", "rotator")
_ALIASES = {
    "not": "negation", "neg": "negation", "¬": "negation",
    "and": "conjunction", "∧": "conjunction",
    "or": "disjunction", "∨": "disjunction",
    "add": "mod_add", "⊕": "mod_add",
    "conf": "confirmor", "∇": "confirmor",
    "rot": "rotator", "⊘": "rotator",
}


def _lv_not(a, k):
    return k + 1 - a


def _lv_add(a, b, k):
    return k - ((k - a) + (k - b)) % k


def _lv_confirm(i, a, k):
    return np.where(a == i, 1, k)


def _lv_rotate(a, k):
    return a % k + 1


def operator_matrix(op: str, k: int, i: int | None = None) -> LogicMatrix:
    """Structure matrix of a basic k-valued operator.

    ``op`` is one of :data:`OPERATORS` (or a short alias such as ``"and"``);
    ``i`` is required for the confirmor.
    """
    if k < 2:
        raise ExpressionError(f"k must be >= 2, got {k}")
    op = _ALIASES.get(op, op)
    if op not in OPERATORS:
        raise ExpressionError(f"unknown operator {op!r}")
    a = np.arange(1, k + 1)
    if op == "negation":
        return LogicMatrix(k, _lv_not(a, k))
    if op == "rotator":
        return LogicMatrix(k, _lv_rotate(a, k))
    if op == "confirmor":
        if i is None:
            raise ExpressionError("confirmor needs an index")
        if not 1 <= i <= k:
            raise ExpressionError(f"confirmor index {i} outside [1, {k}]")
        return LogicMatrix(k, _lv_confirm(i, a, k))
    # binary: first operand is the block index, second the position in the block
    left, right = np.divmod(np.arange(k * k), k)
    left, right = left + 1, right + 1
    if op == "conjunction":
        return LogicMatrix(k, np.maximum(left, right))
    if op == "disjunction":
        return LogicMatrix(k, np.minimum(left, right))
    return LogicMatrix(k, _lv_add(left, right, k))


# -------------------------------------------------------------- evaluation


def eval_expr(e: Expr, assignment: Mapping[str, KValue], k: int) -> KValue:
    """Evaluate ``e`` with scalar semantics (min/max/``1 - a``/...)."""
    return KValue.from_scalar(_eval_scalar(e, assignment, k), k)


def _eval_scalar(e: Expr, env: Mapping[str, KValue], k: int) -> Fraction:
    step = Fraction(1, k - 1)
    if isinstance(e, Var):
        try:
            v = env[e.name]
        except KeyError:
            raise ExpressionError(f"unbound variable {e.name!r}") from None
        if v.k != k:
            raise ExpressionError(f"variable {e.name!r} is {v.k}-valued, expected {k}")
        return v.scalar
    if isinstance(e, Const):
        return KValue(e.level, k).scalar
    if isinstance(e, Not):
        return 1 - _eval_scalar(e.arg, env, k)
    if isinstance(e, And):
        return min(_eval_scalar(e.left, env, k), _eval_scalar(e.right, env, k))
    if isinstance(e, Or):
        return max(_eval_scalar(e.left, env, k), _eval_scalar(e.right, env, k))
    if isinstance(e, ModAdd):
        s = (k - 1) * (_eval_scalar(e.left, env, k) + _eval_scalar(e.right, env, k))
        return Fraction(int(s) % k, k - 1)
    if isinstance(e, Confirm):
        if not 1 <= e.index <= k:
            raise ExpressionError(f"confirmor index {e.index} outside [1, {k}]")
        a = _eval_scalar(e.arg, env, k)
        return Fraction(1) if a == Fraction(k - e.index, k - 1) else Fraction(0)
    if isinstance(e, Rotate):
        a = _eval_scalar(e.arg, env, k)
        return a - step if a != 0 else Fraction(1)
    raise ExpressionError(f"unknown expression node {e!r}")


def eval_levels(e: Expr, env: Mapping[str, np.ndarray], k: int) -> np.ndarray:
    """Vectorized evaluation on integer level arrays."""
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise ExpressionError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Const):
        if not 1 <= e.level <= k:
            raise ExpressionError(f"constant level {e.level} outside [1, {k}]")
        return np.int64(e.level)
    if isinstance(e, Not):
        return _lv_not(eval_levels(e.arg, env, k), k)
    if isinstance(e, And):
        return np.maximum(eval_levels(e.left, env, k), eval_levels(e.right, env, k))
    if isinstance(e, Or):
        return np.minimum(eval_levels(e.left, env, k), eval_levels(e.right, env, k))
    if isinstance(e, ModAdd):
        return _lv_add(eval_levels(e.left, env, k), eval_levels(e.right, env, k), k)
    if isinstance(e, Confirm):
        if not 1 <= e.index <= k:
            raise ExpressionError(f"confirmor index {e.index} outside [1, {k}]")
        return _lv_confirm(e.index, eval_levels(e.arg, env, k), k)
    if isinstance(e, Rotate):
        return _lv_rotate(eval_levels(e.arg, env, k), k)
    raise ExpressionError(f"unknown expression node {e!r}")


def input_levels(k: int, m: int) -> np.ndarray:
    """``(m, k^m)`` array: row ``p`` holds the level of input ``p`` per column.

    Column ``j`` (0-based) decodes ``j`` in base ``k``, first input most
    significant, so column ``j`` of a structure matrix is the input tuple
    whose vector form is ``δ_{k^m}^{j+1}``.
    """
    idx = np.arange(k**m, dtype=np.int64)
    powers = k ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return (idx[None, :] // powers[:, None]) % k + 1


def structure_matrix(e: Expr, var_order: Sequence[str], k: int) -> LogicMatrix:
    """The logic matrix ``M_f`` with ``f(x_1..x_m) = M_f ⋉ x_1 ⋉ ... ⋉ x_m``."""
    var_order = list(var_order)
    if len(set(var_order)) != len(var_order):
        raise ExpressionError("duplicate names in variable order")
    missing = e.free_vars() - set(var_order)
    if missing:
        raise ExpressionError(f"unbound variable(s): {', '.join(sorted(missing))}")
    m = len(var_order)
    grid = input_levels(k, m)
    out = eval_levels(e, dict(zip(var_order, grid)), k)
    return LogicMatrix(k, np.broadcast_to(out, (k**m,)))


def logical_form(M: LogicMatrix, k: int, arity: int,
                 var_order: Sequence[str] | None = None) -> Expr:
    """Canonical nested form ``⋁_i [∇_{i,k}(x_1) ∧ f_i(x_2, ...)]`` of ``M``.

    Built recursively from the ``k`` column blocks of ``M``; the base case
    (arity 0) is a constant.
    """
    if M.rows != k or M.n_cols != k**arity:
        raise ExpressionError(f"expected a {k}×{k**arity} logic matrix, got {M.shape}")
    if var_order is None:
        var_order = [f"x{p + 1}" for p in range(arity)]
    if len(var_order) != arity:
        raise ExpressionError("var_order length must equal arity")
    return _logical_form(M, k, list(var_order))


def _logical_form(M: LogicMatrix, k: int, names: list[str]) -> Expr:
    if not names:
        return Const(int(M.cols[0]))
    head = Var(names[0])
    terms = [And(Confirm(i + 1, head), _logical_form(blk, k, names[1:]))
             for i, blk in enumerate(M.blocks(k))]
    return or_all(terms)
