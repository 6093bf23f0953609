"""Pure-numpy implementations of the label kernels.

Used when the compiled extension is unavailable (or explicitly disabled via
``SCENAGG_PURE_PYTHON=1``). Semantics are identical to ``_labelops.pyx``;
both backends are exercised by the test suite and compared by
``benchmarks/bench_kernels.py``.
"""

from __future__ import annotations

import numpy as np

PAIRING_MAX = 20


def pareto_keep(values: np.ndarray) -> np.ndarray:
    """Boolean mask of labels not componentwise dominated by another label.

    A label is dropped when some other kept label is <= in every component;
    of two exactly equal labels the one with the lower row index survives.
    Labels are examined in ascending (component sum, row index) order, which
    makes the kept set exactly the set of nondominated rows.
    """
    values = np.asarray(values, dtype=np.float64)
    m, _ = values.shape
    keep = np.zeros(m, dtype=bool)
    if m == 0:
        return keep
    order = np.lexsort((np.arange(m), values.sum(axis=1)))
    kept_vals = np.empty_like(values)
    n_kept = 0
    for row in order:
        v = values[row]
        if n_kept and bool(np.any(np.all(kept_vals[:n_kept] <= v, axis=1))):
            continue
        kept_vals[n_kept] = v
        keep[row] = True
        n_kept += 1
    return keep


def min_pairing(dist: np.ndarray) -> np.ndarray:
    """Minimum-total-distance pairing of m points, by subset dynamic program.

    Returns ``partner`` with ``partner[i] == j`` for matched pairs; when m is
    odd exactly one point is left single, marked ``partner[i] == i``. Ties are
    broken toward the lexicographically smallest set of groups (a singleton
    sorts before any pair starting at the same index, and lower partner
    indices win).
    """
    dist = np.asarray(dist, dtype=np.float64)
    m = dist.shape[0]
    if dist.shape != (m, m):
        raise ValueError("distance matrix must be square")
    if m > PAIRING_MAX:
        raise ValueError(f"exact pairing limited to {PAIRING_MAX} points")
    partner = np.arange(m, dtype=np.int64)
    if m <= 1:
        return partner

    size = 1 << m
    parity = np.zeros(size, dtype=np.uint8)
    for s in range(1, size):
        parity[s] = parity[s & (s - 1)] ^ 1
    f = np.full(size, np.inf)
    f[0] = 0.0
    for s in range(1, size):
        i0 = (s & -s).bit_length() - 1
        s0 = s ^ (1 << i0)
        best = f[s0] if parity[s] else np.inf
        rest = s0
        while rest:
            j = (rest & -rest).bit_length() - 1
            cand = dist[i0, j] + f[s0 ^ (1 << j)]
            if cand < best:
                best = cand
            rest &= rest - 1
        f[s] = best

    s = size - 1
    while s:
        i0 = (s & -s).bit_length() - 1
        s0 = s ^ (1 << i0)
        if parity[s] and f[s] == f[s0]:
            s = s0
            continue
        rest = s0
        while rest:
            j = (rest & -rest).bit_length() - 1
            if dist[i0, j] + f[s0 ^ (1 << j)] == f[s]:
                partner[i0] = j
                partner[j] = i0
                s = s0 ^ (1 << j)
                break
            rest &= rest - 1
        else:  # pragma: no cover - DP table always contains a witness
            raise AssertionError("pairing reconstruction failed")
    return partner
