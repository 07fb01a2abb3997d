"""Pure-Python kernels.

Reference implementations of the two hot loops (single-source relaxation per
vertex, and component labelling of a distance-threshold graph). They produce
bit-identical output to the compiled versions in ``_native.pyx`` and are used
when the extension is unavailable or explicitly disabled.
"""

from __future__ import annotations

import heapq

import numpy as np

I64_INF = 1 << 62

IMPL = "pure"


def all_pairs_scaled(n, indptr, nbrs, wgts):
    """All-pairs shortest paths over a CSR adjacency with int64 weights.

    Returns an (n, n) int64 matrix with I64_INF marking unreachable pairs.
    Weights must be positive and small enough that no distance reaches I64_INF.
    """
    out = np.full((n, n), I64_INF, dtype=np.int64)
    ptr = list(indptr)
    nb = list(nbrs)
    wt = list(wgts)
    for s in range(n):
        dist = [I64_INF] * n
        dist[s] = 0
        heap = [(0, s)]
        pop = heapq.heappop
        push = heapq.heappush
        while heap:
            du, u = pop(heap)
            if du > dist[u]:
                continue
            for i in range(ptr[u], ptr[u + 1]):
                v = nb[i]
                dv = du + wt[i]
                if dv < dist[v]:
                    dist[v] = dv
                    push(heap, (dv, v))
        out[s, :] = dist
    return out


def label_components(dist, idxs, threshold):
    """Label components of the graph on ``idxs`` where i~j iff dist <= threshold.

    Labels are assigned in discovery order scanning positions ascending, so the
    output is deterministic and matches the native kernel exactly.
    """
    rows = [dist[i].tolist() for i in idxs]
    cols = list(idxs)
    s = len(cols)
    labels = [-1] * s
    current = 0
    for start in range(s):
        if labels[start] >= 0:
            continue
        labels[start] = current
        stack = [start]
        while stack:
            a = stack.pop()
            row = rows[a]
            for b in range(s):
                if labels[b] < 0 and row[cols[b]] <= threshold:
                    labels[b] = current
                    stack.append(b)
        current += 1
    return np.asarray(labels, dtype=np.int64)
