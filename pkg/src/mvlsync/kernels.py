"""Backend dispatch for the functional-graph kernels.

The compiled numba kernels are used when numba imports cleanly, unless the
environment variable ``MVLSYNC_BACKEND=numpy`` selects the pure-numpy path.
Both backends return identical arrays.
"""

from __future__ import annotations

import contextlib
import importlib
import logging
import os

import numpy as np

log = logging.getLogger(__name__)

BACKENDS = ("numba", "numpy")


def _load(name):
    return importlib.import_module(f"mvlsync._kernels_{name}")


def _initial_backend() -> str:
    wanted = os.environ.get("MVLSYNC_BACKEND", "numba").strip().lower() or "numba"
    if wanted not in BACKENDS:
        raise ValueError(f"MVLSYNC_BACKEND must be one of {BACKENDS}, got {wanted!r}")
    if wanted == "numba":
        try:
            _load("numba")
        except ImportError:
            log.warning("numba unavailable; falling back to the numpy kernels")
            return "numpy"
    return wanted


_backend = _initial_backend()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    _load(name)
    _backend = name


@contextlib.contextmanager
def using_backend(name: str):
    prev = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def _impl():
    return _load(_backend)


def _succ(succ) -> np.ndarray:
    return np.ascontiguousarray(succ, dtype=np.int64)


def _mask(mask) -> np.ndarray:
    return np.ascontiguousarray(mask, dtype=np.bool_)


def analyze_graph(succ):
    """``(tail, root)``: steps to reach a cycle, and min state of that cycle."""
    return _impl().analyze_graph(_succ(succ))


def prune_invariant(succ, mask):
    """Maximum subset of ``mask`` mapped into itself by ``succ``."""
    return _impl().prune_invariant(_succ(succ), _mask(mask))


def hitting_time(succ, mask):
    """First entry time into ``mask`` per state, ``-1`` if never."""
    return _impl().hitting_time(_succ(succ), _mask(mask))


def push_forward(succ, vec):
    """Integer vector image ``L v``."""
    return _impl().push_forward(_succ(succ), np.ascontiguousarray(vec, dtype=np.int64))
