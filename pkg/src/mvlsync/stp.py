"""Exact semi-tensor (Cheng) product algebra.

Dense matrices are plain numpy arrays with an integer or ``object`` dtype
(``object`` holds :class:`fractions.Fraction` entries); floating point dtypes
are rejected. Logic matrices are stored compactly as 1-based column indices,
``delta_m[i_1, ..., i_c]``.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError

#: Maximum number of entries allowed in any dense intermediate.
DIMENSION_CAP = 10**8


def _as_exact(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"expected a nonempty 2-D matrix, got shape {arr.shape}")
    if arr.dtype.kind not in ("i", "u", "b", "O"):
        raise TypeError(f"dense matrices must be exact (integer or object dtype), got {arr.dtype}")
    if arr.dtype.kind == "b":
        arr = arr.astype(np.int64)
    return arr


def _check_cap(n_entries: int, cap: int | None, what: str) -> None:
    cap = DIMENSION_CAP if cap is None else cap
    if n_entries > cap:
        raise DimensionError(f"{what} would need {n_entries} entries (cap {cap})")


def _eye(n: int, dtype) -> np.ndarray:
    if dtype == object:
        out = np.zeros((n, n), dtype=object)
        out[...] = 0
        for i in range(n):
            out[i, i] = 1
        return out
    return np.eye(n, dtype=dtype)


def kronecker(A, B, cap: int | None = None) -> np.ndarray:
    """Kronecker product of two exact dense matrices."""
    A = _as_exact(A)
    B = _as_exact(B)
    _check_cap(A.size * B.size, cap, "kronecker product")
    return np.kron(A, B)


def cheng_product(A, B, cap: int | None = None) -> np.ndarray:
    """Left semi-tensor product ``(A ⊗ I_{t/n})(B ⊗ I_{t/p})``, ``t = lcm(n, p)``.

    Parameters
    ----------
    A, B : array_like
        Exact dense matrices of shapes ``(m, n)`` and ``(p, q)``. 1-D input is
        read as a column vector.
    cap : int, optional
        Entry cap for the blown-up factors; defaults to :data:`DIMENSION_CAP`.

    Returns
    -------
    numpy.ndarray
        The ``(m t/n) × (q t/p)`` product.
    """
    A = _as_exact(A)
    B = _as_exact(B)
    m, n = A.shape
    p, q = B.shape
    t = math.lcm(n, p)
    _check_cap(m * (t // n) * t, cap, "left Cheng factor")
    _check_cap(t * q * (t // p), cap, "right Cheng factor")
    _check_cap(m * (t // n) * q * (t // p), cap, "Cheng product")
    dtype = object if object in (A.dtype, B.dtype) else np.result_type(A, B)
    left = A if t == n else np.kron(A, _eye(t // n, dtype))
    right = B if t == p else np.kron(B, _eye(t // p, dtype))
    return left @ right


def stp_chain(*factors, cap: int | None = None) -> np.ndarray:
    """Left-folded Cheng product of several dense factors."""
    if not factors:
        raise DimensionError("stp_chain needs at least one factor")
    out = _as_exact(factors[0])
    for f in factors[1:]:
        out = cheng_product(out, f, cap=cap)
    return out


def delta(m: int, i: int) -> np.ndarray:
    """Column ``i`` (1-based) of ``I_m`` as an ``m × 1`` integer array."""
    if not 1 <= i <= m:
        raise DimensionError(f"delta index {i} outside [1, {m}]")
    v = np.zeros((m, 1), dtype=np.int64)
    v[i - 1, 0] = 1
    return v


class LogicMatrix:
    """An ``m × c`` logic matrix ``delta_m[i_1, ..., i_c]``.

    The column indices are 1-based and stored in a read-only ``int64`` array.
    """

    __slots__ = ("rows", "cols")

    def __init__(self, rows: int, cols: Sequence[int] | np.ndarray):
        rows = int(rows)
        arr = np.array(cols, dtype=np.int64).reshape(-1)
        if rows < 1:
            raise DimensionError(f"row count must be positive, got {rows}")
        if arr.size == 0:
            raise DimensionError("a logic matrix needs at least one column")
        if arr.min() < 1 or arr.max() > rows:
            raise DimensionError(f"column indices must lie in [1, {rows}]")
        arr.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", arr)

    def __setattr__(self, name, value):
        raise AttributeError("LogicMatrix is immutable")

    @classmethod
    def from_dense(cls, D) -> "LogicMatrix":
        D = _as_exact(D)
        if not np.all((D == 0) | (D == 1)) or not np.all(D.sum(axis=0) == 1):
            raise DimensionError("dense matrix is not a logic matrix")
        return cls(D.shape[0], np.argmax(D, axis=0) + 1)

    @classmethod
    def identity(cls, n: int) -> "LogicMatrix":
        return cls(n, np.arange(1, n + 1))

    @property
    def n_cols(self) -> int:
        return int(self.cols.size)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.n_cols

    @property
    def zero_based(self) -> np.ndarray:
        return self.cols - 1

    def dense(self, dtype=np.int64) -> np.ndarray:
        _check_cap(self.rows * self.n_cols, None, "dense logic matrix")
        D = np.zeros((self.rows, self.n_cols), dtype=dtype)
        D[self.cols - 1, np.arange(self.n_cols)] = 1
        return D

    def column(self, j: int) -> int:
        """Row index (1-based) of the single 1 in column ``j`` (1-based)."""
        if not 1 <= j <= self.n_cols:
            raise DimensionError(f"column {j} outside [1, {self.n_cols}]")
        return int(self.cols[j - 1])

    def blocks(self, k: int) -> list["LogicMatrix"]:
        """Split into ``k`` equal column blocks."""
        if self.n_cols % k:
            raise DimensionError(f"{self.n_cols} columns do not split into {k} blocks")
        w = self.n_cols // k
        return [LogicMatrix(self.rows, self.cols[b * w:(b + 1) * w]) for b in range(k)]

    def tolist(self) -> list[int]:
        return self.cols.tolist()

    def __matmul__(self, other: "LogicMatrix") -> "LogicMatrix":
        return logic_compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, LogicMatrix):
            return NotImplemented
        return self.rows == other.rows and np.array_equal(self.cols, other.cols)

    def __hash__(self):
        return hash((self.rows, self.cols.tobytes()))

    def __repr__(self):
        body = " ".join(map(str, self.cols[:12].tolist()))
        if self.n_cols > 12:
            body += f" ... ({self.n_cols} cols)"
        return f"LogicMatrix(δ_{self.rows}[{body}])"

    def compact(self) -> str:
        return f"δ_{self.rows}[{' '.join(map(str, self.cols.tolist()))}]"


def logic_compose(A: LogicMatrix, B: LogicMatrix) -> LogicMatrix:
    """Ordinary product ``A B`` of conformable logic matrices."""
    if A.n_cols != B.rows:
        raise DimensionError(f"cannot compose {A.shape} with {B.shape}")
    return LogicMatrix(A.rows, A.cols[B.cols - 1])


def logic_power(A: LogicMatrix, t: int) -> LogicMatrix:
    """``A^t`` for a square logic matrix (``A^0 = I``)."""
    if A.rows != A.n_cols:
        raise DimensionError("matrix power needs a square logic matrix")
    if t < 0:
        raise DimensionError("negative matrix power")
    result = np.arange(1, A.rows + 1, dtype=np.int64)
    base = A.cols.copy()
    while t:
        if t & 1:
            result = base[result - 1]
        base = base[base - 1]
        t >>= 1
    return LogicMatrix(A.rows, result)


def swap_matrix(m: int, n: int) -> LogicMatrix:
    """Swap matrix ``W_[m,n]`` with ``W X Y = Y X`` for ``X ∈ Δ_m``, ``Y ∈ Δ_n``."""
    if m < 1 or n < 1:
        raise DimensionError("swap matrix dimensions must be positive")
    _check_cap(m * n, None, "swap matrix")
    a, b = np.divmod(np.arange(m * n), n)
    return LogicMatrix(m * n, b * m + a + 1)


def power_reducing_matrix(k: int) -> LogicMatrix:
    """Power-reducing matrix ``M_{r,k}`` with ``x x = M_{r,k} x`` on ``Δ_k``."""
    if k < 1:
        raise DimensionError("power-reducing matrix needs k >= 1")
    i = np.arange(k)
    return LogicMatrix(k * k, i * k + i + 1)


def khatri_rao(A: LogicMatrix, B: LogicMatrix) -> LogicMatrix:
    """Column-wise Kronecker product of two logic matrices."""
    if A.n_cols != B.n_cols:
        raise DimensionError(f"Khatri-Rao needs equal column counts, got {A.n_cols} and {B.n_cols}")
    return LogicMatrix(A.rows * B.rows, (A.cols - 1) * B.rows + B.cols)


def khatri_rao_fold(mats: Iterable[LogicMatrix]) -> LogicMatrix:
    """``M_1 ∗ M_2 ∗ ... ∗ M_r``."""
    it = iter(mats)
    try:
        out = next(it)
    except StopIteration:
        raise DimensionError("khatri_rao_fold needs at least one matrix") from None
    for m in it:
        out = khatri_rao(out, m)
    return out


def index_vector(support: Iterable[int], length: int) -> np.ndarray:
    """0/1 column (as 1-D int array) with ones at the 1-based ``support``."""
    v = np.zeros(length, dtype=np.int64)
    idx = np.fromiter(support, dtype=np.int64)
    if idx.size:
        if idx.min() < 1 or idx.max() > length:
            raise DimensionError(f"support index outside [1, {length}]")
        v[idx - 1] = 1
    return v
