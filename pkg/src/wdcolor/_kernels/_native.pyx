# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the distance and component hot loops.

Same contracts and bit-identical output as ``_pure.py``.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef long long C_INF = (<long long>1) << 62

I64_INF = C_INF

IMPL = "native"


cdef inline void _heap_push(long long* hd, long long* hv, Py_ssize_t* size,
                            long long d, long long v) noexcept nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t parent
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if hd[parent] <= d:
            break
        hd[i] = hd[parent]
        hv[i] = hv[parent]
        i = parent
    hd[i] = d
    hv[i] = v


cdef inline void _heap_pop(long long* hd, long long* hv, Py_ssize_t* size,
                           long long* d_out, long long* v_out) noexcept nogil:
    cdef long long d = hd[0], v = hv[0]
    cdef Py_ssize_t i = 0, child, n
    size[0] -= 1
    n = size[0]
    cdef long long ld = hd[n], lv = hv[n]
    while True:
        child = 2 * i + 1
        if child >= n:
            break
        if child + 1 < n and hd[child + 1] < hd[child]:
            child += 1
        if hd[child] >= ld:
            break
        hd[i] = hd[child]
        hv[i] = hv[child]
        i = child
    if n > 0:
        hd[i] = ld
        hv[i] = lv
    d_out[0] = d
    v_out[0] = v


def all_pairs_scaled(Py_ssize_t n, long long[::1] indptr, long long[::1] nbrs,
                     long long[::1] wgts):
    """All-pairs shortest paths over a CSR adjacency with int64 weights."""
    out_arr = np.full((n, n), I64_INF, dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    cdef Py_ssize_t m = nbrs.shape[0]
    heap_d_arr = np.empty(m + n + 1, dtype=np.int64)
    heap_v_arr = np.empty(m + n + 1, dtype=np.int64)
    cdef long long[::1] heap_d = heap_d_arr
    cdef long long[::1] heap_v = heap_v_arr
    cdef Py_ssize_t s, i, size
    cdef long long du, dv, u, v
    with nogil:
        for s in range(n):
            size = 0
            out[s, s] = 0
            _heap_push(&heap_d[0], &heap_v[0], &size, 0, s)
            while size > 0:
                _heap_pop(&heap_d[0], &heap_v[0], &size, &du, &u)
                if du > out[s, u]:
                    continue
                for i in range(indptr[u], indptr[u + 1]):
                    v = nbrs[i]
                    dv = du + wgts[i]
                    if dv < out[s, v]:
                        out[s, v] = dv
                        _heap_push(&heap_d[0], &heap_v[0], &size, dv, v)
    return out_arr


def label_components(long long[:, ::1] dist, long long[::1] idxs, long long threshold):
    """Label components of the threshold graph on ``idxs``, discovery order."""
    cdef Py_ssize_t s = idxs.shape[0]
    labels_arr = np.full(s, -1, dtype=np.int64)
    cdef long long[::1] labels = labels_arr
    stack_arr = np.empty(s, dtype=np.int64)
    cdef long long[::1] stack = stack_arr
    cdef Py_ssize_t start, top, a, b
    cdef long long current = 0
    cdef long long ga
    with nogil:
        for start in range(s):
            if labels[start] >= 0:
                continue
            labels[start] = current
            top = 0
            stack[top] = start
            top += 1
            while top > 0:
                top -= 1
                a = stack[top]
                ga = idxs[a]
                for b in range(s):
                    if labels[b] < 0 and dist[ga, idxs[b]] <= threshold:
                        labels[b] = current
                        stack[top] = b
                        top += 1
            current += 1
    return labels_arr
