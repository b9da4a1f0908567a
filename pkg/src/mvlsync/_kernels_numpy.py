"""Pure-numpy functional-graph kernels.

Each function has the same signature and results as its counterpart in
``_kernels_numba``. Inputs: ``succ`` is a zero-based int64 successor array,
``mask`` a boolean array of the same length.
"""

import numpy as np


def analyze_graph(succ):
    """Per-state tail length and the minimal state of the cycle reached."""
    n = succ.size
    far = succ.copy()
    span = 1
    while span < n:
        far = far[far]
        span *= 2
    # every walk is on its cycle after n - 1 <= span steps
    on_cycle = np.zeros(n, dtype=bool)
    on_cycle[far] = True

    lo = np.where(on_cycle, np.arange(n, dtype=np.int64), n)
    jump = succ.copy()
    covered = 1
    while covered < n:
        lo = np.minimum(lo, lo[jump])
        jump = jump[jump]
        covered *= 2
    lo = np.minimum(lo, lo[jump])
    root = lo[far]

    tail = np.where(on_cycle, 0, -1).astype(np.int64)
    d = 0
    while (tail < 0).any():
        step = (tail < 0) & (tail[succ] == d)
        d += 1
        tail[step] = d
    return tail, root


def prune_invariant(succ, mask):
    """Largest subset of ``mask`` closed under ``succ``."""
    keep = mask.copy()
    while True:
        nxt = keep & keep[succ]
        if np.array_equal(nxt, keep):
            return keep
        keep = nxt


def hitting_time(succ, mask):
    """Steps until first entry into ``mask`` (``-1`` when never)."""
    dist = np.where(mask, 0, -1).astype(np.int64)
    d = 0
    while True:
        step = (dist < 0) & (dist[succ] == d)
        if not step.any():
            return dist
        d += 1
        dist[step] = d


def push_forward(succ, vec):
    """``L v`` for an integer vector ``v`` (``L`` given by ``succ``)."""
    out = np.zeros(vec.size, dtype=np.int64)
    np.add.at(out, succ, vec)
    return out
