# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reflection-word ball enumeration (open-addressing hash on int64 rows)."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.string cimport memcmp, memcpy

cnp.import_array()


cdef inline uint64_t _hash_row(const int64_t* row, Py_ssize_t k) nogil:
    cdef uint64_t h = 1469598103934665603ULL
    cdef Py_ssize_t i
    cdef uint64_t x
    for i in range(k):
        x = <uint64_t>row[i]
        x ^= x >> 33
        x *= 0xff51afd7ed558ccdULL
        x ^= x >> 33
        h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)
    return h


def bfs_ball(gens, int max_len):
    """Same contract as ``_fallback.bfs_ball``."""
    cdef cnp.ndarray[int64_t, ndim=3] g = np.ascontiguousarray(gens, dtype=np.int64)
    cdef Py_ssize_t n_gens = g.shape[0], n = g.shape[1], k = n * n
    cdef Py_ssize_t cap = 1024, table_size = 4096, count = 1
    cdef cnp.ndarray[int64_t, ndim=2] elems = np.zeros((cap, k), dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] parent = np.full(cap, -1, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] gen_idx = np.full(cap, -1, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] length = np.zeros(cap, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] table = np.full(table_size, -1, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] prod = np.zeros(k, dtype=np.int64)
    cdef Py_ssize_t i, j, l, r, c, s, start, stop, depth, slot, idx
    cdef int64_t acc
    cdef uint64_t h

    for i in range(n):
        elems[0, i * n + i] = 1
    h = _hash_row(&elems[0, 0], k)
    table[h & (table_size - 1)] = 0

    start, stop = 0, 1
    for depth in range(1, max_len + 1):
        if start == stop:
            break
        for i in range(start, stop):
            for s in range(n_gens):
                for r in range(n):
                    for c in range(n):
                        acc = 0
                        for l in range(n):
                            acc += elems[i, r * n + l] * g[s, l, c]
                        prod[r * n + c] = acc
                h = _hash_row(&prod[0], k)
                slot = h & (table_size - 1)
                while True:
                    idx = table[slot]
                    if idx < 0:
                        break
                    if memcmp(&elems[idx, 0], &prod[0], k * sizeof(int64_t)) == 0:
                        break
                    slot = (slot + 1) & (table_size - 1)
                if idx >= 0:
                    continue
                if count == cap:
                    cap *= 2
                    elems = np.resize(elems, (cap, k))
                    parent = np.resize(parent, cap)
                    gen_idx = np.resize(gen_idx, cap)
                    length = np.resize(length, cap)
                memcpy(&elems[count, 0], &prod[0], k * sizeof(int64_t))
                parent[count] = i
                gen_idx[count] = s
                length[count] = depth
                table[slot] = count
                count += 1
                if 2 * count > table_size:
                    table_size *= 4
                    table = np.full(table_size, -1, dtype=np.int64)
                    for j in range(count):
                        h = _hash_row(&elems[j, 0], k)
                        slot = h & (table_size - 1)
                        while table[slot] >= 0:
                            slot = (slot + 1) & (table_size - 1)
                        table[slot] = j
        start, stop = stop, count
    return (elems[:count].reshape(count, n, n).copy(), parent[:count].copy(),
            gen_idx[:count].copy(), length[:count].copy())
