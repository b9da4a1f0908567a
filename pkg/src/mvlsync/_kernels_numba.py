"""Compiled functional-graph kernels (numba). Mirrors ``_kernels_numpy``."""

import numpy as np
from numba import njit


@njit(cache=True)
def analyze_graph(succ):
    n = succ.size
    color = np.zeros(n, np.int8)  # 0 unseen, 1 on current path, 2 finished
    tail = np.zeros(n, np.int64)
    root = np.full(n, -1, np.int64)
    path = np.empty(n, np.int64)
    for s in range(n):
        if color[s] != 0:
            continue
        plen = 0
        v = s
        while color[v] == 0:
            color[v] = 1
            path[plen] = v
            plen += 1
            v = succ[v]
        if color[v] == 1:
            pos = plen - 1
            lo = v
            while path[pos] != v:
                if path[pos] < lo:
                    lo = path[pos]
                pos -= 1
            for q in range(pos, plen):
                u = path[q]
                tail[u] = 0
                root[u] = lo
                color[u] = 2
            plen = pos
        for q in range(plen - 1, -1, -1):
            u = path[q]
            w = succ[u]
            tail[u] = tail[w] + 1
            root[u] = root[w]
            color[u] = 2
    return tail, root


@njit(cache=True)
def _predecessors(succ):
    n = succ.size
    start = np.zeros(n + 1, np.int64)
    for v in range(n):
        start[succ[v] + 1] += 1
    for v in range(n):
        start[v + 1] += start[v]
    fill = start[:-1].copy()
    pred = np.empty(n, np.int64)
    for v in range(n):
        w = succ[v]
        pred[fill[w]] = v
        fill[w] += 1
    return start, pred


@njit(cache=True)
def prune_invariant(succ, mask):
    n = succ.size
    keep = mask.copy()
    start, pred = _predecessors(succ)
    queue = np.empty(n, np.int64)
    head = 0
    tail = 0
    for v in range(n):
        if keep[v] and not mask[succ[v]]:
            keep[v] = False
            queue[tail] = v
            tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for q in range(start[u], start[u + 1]):
            p = pred[q]
            if keep[p]:
                keep[p] = False
                queue[tail] = p
                tail += 1
    return keep


@njit(cache=True)
def hitting_time(succ, mask):
    n = succ.size
    dist = np.full(n, -1, np.int64)
    start, pred = _predecessors(succ)
    queue = np.empty(n, np.int64)
    head = 0
    tail = 0
    for v in range(n):
        if mask[v]:
            dist[v] = 0
            queue[tail] = v
            tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for q in range(start[u], start[u + 1]):
            p = pred[q]
            if dist[p] < 0:
                dist[p] = dist[u] + 1
                queue[tail] = p
                tail += 1
    return dist


@njit(cache=True)
def push_forward(succ, vec):
    out = np.zeros(vec.size, np.int64)
    for v in range(succ.size):
        out[succ[v]] += vec[v]
    return out
