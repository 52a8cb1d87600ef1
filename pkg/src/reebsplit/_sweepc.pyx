# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled union-find sweep. Mirrors kernels.merge_forest_py exactly."""

import numpy as np


def merge_forest(const long long[::1] order,
                 const long long[::1] indptr,
                 const long long[::1] indices):
    cdef Py_ssize_t n = order.shape[0]
    parent_arr = np.full(n, -1, dtype=np.int64)
    uf_arr = np.arange(n, dtype=np.int64)
    top_arr = np.arange(n, dtype=np.int64)
    seen_arr = np.zeros(n, dtype=np.uint8)
    cdef long long[::1] parent = parent_arr
    cdef long long[::1] uf = uf_arr
    cdef long long[::1] top = top_arr
    cdef unsigned char[::1] seen = seen_arr

    cdef Py_ssize_t i
    cdef long long v, u, r, k
    for i in range(n):
        v = order[i]
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if not seen[u]:
                continue
            r = u
            while uf[r] != r:
                uf[r] = uf[uf[r]]
                r = uf[r]
            if r != v:
                parent[top[r]] = v
                uf[r] = v
        top[v] = v
        seen[v] = 1
    return parent_arr
