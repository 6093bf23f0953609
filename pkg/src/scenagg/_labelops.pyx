# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled label kernels: Pareto filtering and the exact pairing DP.

These are the inner loops that dominate solver runtime; semantics match
``_labelops_py`` exactly (same ordering, same tie-breaking, same float
arithmetic).
"""

import numpy as np

PAIRING_MAX = 20


def pareto_keep(double[:, ::1] values):
    """Boolean mask of labels not componentwise dominated by another label.

    See ``_labelops_py.pareto_keep`` for the full contract.
    """
    cdef Py_ssize_t m = values.shape[0]
    cdef Py_ssize_t k = values.shape[1]
    keep_arr = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[::1] keep = keep_arr
    if m == 0:
        return keep_arr.view(np.bool_)

    sums = np.asarray(values).sum(axis=1)
    order_arr = np.lexsort((np.arange(m), sums)).astype(np.int64)
    cdef long long[::1] order = order_arr

    kept_arr = np.empty((m, k), dtype=np.float64)
    cdef double[:, ::1] kept = kept_arr
    cdef Py_ssize_t n_kept = 0
    cdef Py_ssize_t t, i, j, row
    cdef bint dominated

    for t in range(m):
        row = order[t]
        dominated = False
        for i in range(n_kept):
            dominated = True
            for j in range(k):
                if kept[i, j] > values[row, j]:
                    dominated = False
                    break
            if dominated:
                break
        if not dominated:
            for j in range(k):
                kept[n_kept, j] = values[row, j]
            n_kept += 1
            keep[row] = 1
    return keep_arr.view(np.bool_)


def min_pairing(double[:, ::1] dist):
    """Minimum-total-distance pairing by subset DP; see ``_labelops_py``."""
    cdef Py_ssize_t m = dist.shape[0]
    if dist.shape[1] != m:
        raise ValueError("distance matrix must be square")
    if m > PAIRING_MAX:
        raise ValueError(f"exact pairing limited to {PAIRING_MAX} points")
    partner_arr = np.arange(m, dtype=np.int64)
    cdef long long[::1] partner = partner_arr
    if m <= 1:
        return partner_arr

    cdef Py_ssize_t size = 1 << m
    parity_arr = np.zeros(size, dtype=np.uint8)
    cdef unsigned char[::1] parity = parity_arr
    f_arr = np.full(size, np.inf)
    cdef double[::1] f = f_arr
    f[0] = 0.0

    cdef Py_ssize_t s, s0, rest, i0, j
    cdef double best, cand
    for s in range(1, size):
        parity[s] = parity[s & (s - 1)] ^ 1
        i0 = 0
        while not (s >> i0) & 1:
            i0 += 1
        s0 = s ^ (1 << i0)
        best = f[s0] if parity[s] else np.inf
        rest = s0
        while rest:
            j = 0
            while not (rest >> j) & 1:
                j += 1
            cand = dist[i0, j] + f[s0 ^ (1 << j)]
            if cand < best:
                best = cand
            rest &= rest - 1
        f[s] = best

    s = size - 1
    cdef bint found
    while s:
        i0 = 0
        while not (s >> i0) & 1:
            i0 += 1
        s0 = s ^ (1 << i0)
        if parity[s] and f[s] == f[s0]:
            s = s0
            continue
        found = False
        rest = s0
        while rest:
            j = 0
            while not (rest >> j) & 1:
                j += 1
            if dist[i0, j] + f[s0 ^ (1 << j)] == f[s]:
                partner[i0] = j
                partner[j] = i0
                s = s0 ^ (1 << j)
                found = True
                break
            rest &= rest - 1
        if not found:
            raise AssertionError("pairing reconstruction failed")
    return partner_arr
