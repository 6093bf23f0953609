"""Solvers for min-max and generalized min-max regret on the supported
ground structures.

Every criterion is handled as "minimize the maximum over scenarios of
(scenario cost minus scenario offset)"; min-max is the all-zero-offset
special case. The exact solvers run a label-setting dynamic program that
keeps, per state, the set of componentwise nondominated accumulated-cost
vectors (some optimal solution always survives dominance pruning because
the objective is monotone in each component). Two admissible prunes are
layered on top:

* lower-bound pruning against an incumbent: a label dies only when even its
  per-scenario cheapest completion exceeds the best known solution, which
  never removes an optimal prefix;
* for the FPTAS, geometric trimming: labels whose completion-shifted value
  vectors agree within a factor (1 + delta) per component merge, with
  delta chosen so the error compounded over a solution's at most H
  extensions stays below the requested (1 + eps) factor. Trimming the
  *shifted* values (accumulated cost plus cheapest completion minus offset)
  keeps the relative guarantee valid for the regret criterion as well,
  where raw cost trimming would not, provided offsets do not exceed the
  per-scenario optima.

The brute-force solver enumerates the feasible set (vectorized, chunked)
and is the oracle used throughout the tests; it refuses instances above its
cap rather than truncating.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    CapExceededError,
    CostVector,
    GroundStructure,
    LayeredPath,
    ParallelChains,
    Selection,
    Solution,
    ValidationError,
)
from .labelops import PAIRING_MAX, min_pairing, pareto_keep

DEFAULT_LABEL_CAP = 2_000_000
DEFAULT_BRUTE_CAP = 2_000_000

# Safety slack for incumbent-bound pruning; protects optimal prefixes whose
# float bound lands a rounding error above the incumbent.
_PRUNE_SLACK = 1e-9

_ZERO_BUCKET = np.iinfo(np.int64).min // 2


@dataclass(frozen=True)
class SolveResult:
    """Solution plus its objective value under the solved criterion.

    ``exact`` distinguishes certified optima from approximate results;
    ``labels_explored`` counts generated labels (or enumerated solutions)
    as a work diagnostic.
    """

    solution: Solution
    value: float
    exact: bool
    labels_explored: int = 0


def _problem_parts(problem) -> tuple[GroundStructure, np.ndarray]:
    return problem.structure, problem.scenarios.matrix


def _offset_array(matrix: np.ndarray, offsets) -> np.ndarray:
    d = np.zeros(matrix.shape[0]) if offsets is None else np.asarray(
        offsets, dtype=np.float64)
    if d.shape != (matrix.shape[0],):
        raise ValidationError(
            f"expected {matrix.shape[0]} offsets, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValidationError("offsets must be finite")
    return d


def _objective(matrix: np.ndarray, d: np.ndarray, incidence: np.ndarray) -> float:
    return float(np.max(matrix @ incidence - d))


# ---------------------------------------------------------------------------
# nominal solver


def nominal_solve(structure: GroundStructure, costs) -> SolveResult:
    """Exact single-scenario optimum; ties resolve to the solution whose
    selected-index sequence is lexicographically smallest."""
    c = costs.entries if isinstance(costs, CostVector) else np.asarray(
        costs, dtype=np.float64)
    if c.shape != (structure.ground_size,):
        raise ValidationError(
            f"cost vector length {c.shape[0] if c.ndim else 0} does not "
            f"match ground size {structure.ground_size}")
    if not np.all(np.isfinite(c)):
        raise ValidationError("costs must be finite")

    if isinstance(structure, Selection):
        order = np.argsort(c, kind="stable")
        x = np.zeros(structure.n, dtype=np.int8)
        x[order[: structure.p]] = 1
    elif isinstance(structure, ParallelChains):
        sums = [float(c[structure.chain_slice(i)].sum())
                for i in range(len(structure.chain_lengths))]
        x = structure.chain_incidence(int(np.argmin(sums)))
    elif isinstance(structure, LayeredPath):
        x = structure.path_incidence(_shortest_path_nodes(structure, c))
    else:
        raise ValidationError(f"unsupported structure {type(structure).__name__}")
    return SolveResult(Solution(x), float(c @ x), exact=True)


def _shortest_path_nodes(struct: LayeredPath, c: np.ndarray) -> list[int]:
    """Layer-order DP; the greedy forward walk over first-minimum argmins
    yields the lexicographically smallest optimal path."""
    L = struct.layer_count
    src, trans, snk = _layered_views(struct, c[None, :])
    dist = [None] * (L + 1)
    dist[L] = snk[:, 0]
    for layer in range(L - 1, 0, -1):
        dist[layer] = (trans[layer - 1][:, :, 0] + dist[layer + 1]).min(axis=1)
    nodes = [int(np.argmin(src[:, 0] + dist[1]))]
    for layer in range(1, L):
        a = nodes[-1]
        nodes.append(int(np.argmin(trans[layer - 1][a, :, 0] + dist[layer + 1])))
    return nodes


def per_scenario_optima(problem) -> np.ndarray:
    """Optimal nominal value of every scenario (the regret normalizers)."""
    structure, matrix = _problem_parts(problem)
    return np.array([nominal_solve(structure, row).value for row in matrix])


# ---------------------------------------------------------------------------
# label-setting engine


def _layered_views(struct: LayeredPath, C: np.ndarray):
    """Source, transition, and sink cost views; transition layer ``l`` has
    shape (from, to, K)."""
    w, L = struct.width, struct.layer_count
    K = C.shape[0]
    src = np.ascontiguousarray(C[:, :w].T)
    snk = np.ascontiguousarray(C[:, w + (L - 1) * w * w:].T)
    trans = []
    for layer in range(1, L):
        base = w + (layer - 1) * w * w
        trans.append(np.ascontiguousarray(
            C[:, base:base + w * w].T.reshape(w, w, K)))
    return src, trans, snk


def _distance_to_sink(struct: LayeredPath, trans, snk):
    """Per-scenario shortest completion cost from every node; index 1..L."""
    L = struct.layer_count
    dist = [None] * (L + 1)
    dist[L] = snk
    for layer in range(L - 1, 0, -1):
        dist[layer] = (trans[layer - 1] + dist[layer + 1][None, :, :]).min(axis=1)
    return dist


def _trim_delta(eps: float, max_size: int) -> float:
    # (1 + delta)^H <= 1 + eps; the first term is the operative one for
    # eps <= 1, the second keeps the contract for very coarse requests.
    return min(eps / (2.0 * max_size), (1.0 + eps) ** (1.0 / max_size) - 1.0)


def _bucket_keys(shifted: np.ndarray, delta: float) -> np.ndarray:
    """Geometric bucket index per component; exact zeros (and any
    out-of-contract negatives) share one bucket."""
    y = np.maximum(shifted, 0.0)
    with np.errstate(divide="ignore"):
        keys = np.floor(np.log(y) / np.log1p(delta))
    return np.where(y > 0.0, keys, float(_ZERO_BUCKET)).astype(np.int64)


def _trim_select(shifted: np.ndarray, delta: float) -> np.ndarray:
    """Row indices surviving a bucket merge: one representative per bucket
    vector, the one with the smallest worst shifted component (ties to the
    lowest row), returned in ascending row order."""
    m = shifted.shape[0]
    if m <= 1:
        return np.arange(m)
    keys = _bucket_keys(shifted, delta)
    _, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    rank = np.empty(m, dtype=np.int64)
    rank[np.lexsort((np.arange(m), shifted.max(axis=1)))] = np.arange(m)
    best = np.full(int(inverse.max()) + 1, m, dtype=np.int64)
    np.minimum.at(best, inverse, rank)
    order = np.empty(m, dtype=np.int64)
    order[rank] = np.arange(m)
    return np.sort(order[best])


class _LabelPruner:
    """Shared pruning pipeline: incumbent bound, dominance, optional trim."""

    def __init__(self, d, *, use_bounds, trim_delta, threshold_factor,
                 prune_dominated, label_cap):
        self.d = d
        self.use_bounds = use_bounds
        self.ub = np.inf
        self.trim_delta = trim_delta
        self.threshold_factor = threshold_factor
        self.prune_dominated = prune_dominated
        self.label_cap = label_cap
        self.labels = 0

    def offer_incumbent(self, value: float) -> None:
        if self.use_bounds and value < self.ub:
            self.ub = float(value)

    def observe(self, count: int) -> None:
        self.labels += count
        if count > self.label_cap:
            raise CapExceededError(
                f"label set of size {count} exceeds cap {self.label_cap}; "
                "raise the cap or use the FPTAS solver")

    def prune(self, vals: np.ndarray, completion: np.ndarray,
              trim: bool = True) -> np.ndarray:
        """Surviving row indices, given per-scenario completion bounds for
        the labels' DP state."""
        m = vals.shape[0]
        self.observe(m)
        idx = np.arange(m)
        shifted = None
        if self.use_bounds and np.isfinite(self.ub):
            shifted = vals + completion[None, :] - self.d[None, :]
            keep = shifted.max(axis=1) <= (
                self.ub * self.threshold_factor + _PRUNE_SLACK)
            idx = idx[keep]
            shifted = shifted[keep]
        if self.prune_dominated and idx.size > 1:
            keep = pareto_keep(np.ascontiguousarray(vals[idx]))
            idx = idx[keep]
            shifted = None if shifted is None else shifted[keep]
        if trim and self.trim_delta is not None and idx.size > 1:
            if shifted is None:
                shifted = vals[idx] + completion[None, :] - self.d[None, :]
            idx = idx[_trim_select(shifted, self.trim_delta)]
        return idx


def _greedy_minmax_nodes(struct: LayeredPath, d, src, trans, dist) -> list[int]:
    """Greedy walk picking, at every layer, the successor minimizing the
    optimistic objective of the accumulated label; a cheap but usually
    strong incumbent."""
    L = struct.layer_count
    bound = ((src + dist[1]) - d[None, :]).max(axis=1)
    j = int(np.argmin(bound))
    nodes = [j]
    acc = src[j].copy()
    for layer in range(1, L):
        step = acc[None, :] + trans[layer - 1][nodes[-1]] + dist[layer + 1]
        j = int(np.argmin((step - d[None, :]).max(axis=1)))
        acc += trans[layer - 1][nodes[-1], j]
        nodes.append(j)
    return nodes


def _nodes_from_incidence(struct: LayeredPath, incidence: np.ndarray) -> list[int]:
    w, L = struct.width, struct.layer_count
    selected = np.flatnonzero(incidence)
    nodes = [int(selected[0])]
    for layer in range(1, L):
        e = int(selected[layer]) - (w + (layer - 1) * w * w)
        nodes.append(e % w)
    return nodes


def _local_improve_path(struct: LayeredPath, C, d, src, trans, snk,
                        nodes: list[int], max_sweeps: int = 24) -> list[int]:
    """First-improvement 1-opt on node choices: re-pick one layer's node at
    a time while its neighbors stay fixed, until a sweep finds nothing."""
    L = struct.layer_count
    nodes = list(nodes)

    def acc_of(path):
        total = src[path[0]].copy()
        for layer in range(1, L):
            total += trans[layer - 1][path[layer - 1], path[layer]]
        return total + snk[path[-1]]

    acc = acc_of(nodes)
    best = float((acc - d).max())
    for _ in range(max_sweeps):
        improved = False
        for pos in range(L):
            into = src if pos == 0 else trans[pos - 1][nodes[pos - 1]]
            out = snk if pos == L - 1 else trans[pos][:, nodes[pos + 1]]
            base = acc - into[nodes[pos]] - out[nodes[pos]]
            cand = base[None, :] + into + out
            obj = (cand - d[None, :]).max(axis=1)
            j = int(np.argmin(obj))
            if obj[j] < best - 1e-15 and j != nodes[pos]:
                nodes[pos] = j
                acc = base + into[j] + out[j]
                best = float(obj[j])
                improved = True
        if not improved:
            break
    return nodes


def _solve_layered(struct: LayeredPath, C, d, pruner: _LabelPruner,
                   seed_incidence: np.ndarray | None = None):
    w, L = struct.width, struct.layer_count
    src, trans, snk = _layered_views(struct, C)
    dist = _distance_to_sink(struct, trans, snk)

    if pruner.use_bounds:
        # Seed the incumbent: midpoint path, each scenario's own optimal
        # path, a greedy walk on the objective's own bound, and (passed in
        # by the caller) the recursive aggregation bootstrap; polish the
        # best of them by local search.
        candidates = [_shortest_path_nodes(struct, C.mean(axis=0)),
                      _greedy_minmax_nodes(struct, d, src, trans, dist)]
        for i in range(C.shape[0]):
            nodes = [int(np.argmin(src[:, i] + dist[1][:, i]))]
            for layer in range(1, L):
                nodes.append(int(np.argmin(
                    trans[layer - 1][nodes[-1], :, i] + dist[layer + 1][:, i])))
            candidates.append(nodes)
        if seed_incidence is not None:
            candidates.append(_nodes_from_incidence(struct, seed_incidence))
        scored = [(_objective(C, d, struct.path_incidence(nodes)), t, nodes)
                  for t, nodes in enumerate(candidates)]
        for value, _, _ in scored:
            pruner.offer_incumbent(value)
        best_nodes = min(scored)[2]
        improved = _local_improve_path(struct, C, d, src, trans, snk,
                                       best_nodes)
        pruner.offer_incumbent(
            _objective(C, d, struct.path_incidence(improved)))

    vals: list[np.ndarray] = []
    parents: list[list[np.ndarray]] = [[]]
    for j in range(w):
        lab = src[j][None, :]
        idx = pruner.prune(lab, dist[1][j])
        vals.append(lab[idx])
        parents[0].append(np.empty((0, 2), dtype=np.int64))

    for layer in range(2, L + 1):
        new_vals = []
        layer_parents = []
        for b in range(w):
            parts = []
            par = []
            for a in range(w):
                if vals[a].shape[0] == 0:
                    continue
                parts.append(vals[a] + trans[layer - 2][a, b][None, :])
                rows = np.arange(vals[a].shape[0], dtype=np.int64)
                par.append(np.stack([np.full_like(rows, a), rows], axis=1))
            if parts:
                cand = np.ascontiguousarray(np.vstack(parts))
                cand_par = np.vstack(par)
                idx = pruner.prune(cand, dist[layer][b])
                new_vals.append(np.ascontiguousarray(cand[idx]))
                layer_parents.append(cand_par[idx])
            else:
                new_vals.append(np.empty((0, C.shape[0])))
                layer_parents.append(np.empty((0, 2), dtype=np.int64))
        vals = new_vals
        parents.append(layer_parents)

    best_val = np.inf
    best_node = -1
    best_row = -1
    for j in range(w):
        if vals[j].shape[0] == 0:
            continue
        obj = (vals[j] + snk[j][None, :] - d[None, :]).max(axis=1)
        r = int(np.argmin(obj))
        if obj[r] < best_val:
            best_val = float(obj[r])
            best_node, best_row = j, r
    if best_node < 0:
        raise AssertionError("label DP lost all candidates")

    nodes = [best_node]
    row = best_row
    for layer in range(L, 1, -1):
        a, row = (int(v) for v in parents[layer - 1][nodes[-1]][row])
        nodes.append(a)
    nodes.reverse()
    return struct.path_incidence(nodes)


def _selection_completions(C: np.ndarray, p: int) -> list[np.ndarray]:
    """completions[t][:, q] = per-scenario sum of the q cheapest costs among
    items t..n-1 (q <= p)."""
    n = C.shape[1]
    out = []
    for t in range(n + 1):
        srt = np.sort(C[:, t:], axis=1)
        take = min(p, n - t)
        cum = np.concatenate(
            [np.zeros((C.shape[0], 1)), np.cumsum(srt[:, :take], axis=1)],
            axis=1)
        out.append(cum)
    return out


def _solve_selection(struct: Selection, C, d, pruner: _LabelPruner):
    n, p = struct.n, struct.p
    K = C.shape[0]
    comp = _selection_completions(C, p)

    if pruner.use_bounds:
        for heur in [C.mean(axis=0)] + [C[i] for i in range(K)]:
            x = nominal_solve(struct, heur).solution.incidence
            pruner.offer_incumbent(_objective(C, d, x))

    # states[q]: accumulated cost vectors plus selected-item tuples
    states: dict[int, tuple[np.ndarray, list[tuple[int, ...]]]] = {
        0: (np.zeros((1, K)), [()])}
    for t in range(n):
        remaining = n - t - 1
        new_states: dict[int, tuple[np.ndarray, list[tuple[int, ...]]]] = {}
        for q in range(max(0, p - remaining), min(p, t + 1) + 1):
            kept_vals = []
            kept_sel: list[tuple[int, ...]] = []
            if q in states:  # item t skipped
                kept_vals.append(states[q][0])
                kept_sel.extend(states[q][1])
            if q - 1 in states:  # item t taken
                prev_vals, prev_sel = states[q - 1]
                take_vals = np.ascontiguousarray(prev_vals + C[:, t][None, :])
                take_sel = [s + (t,) for s in prev_sel]
                # Trim only freshly extended labels: merge error then
                # accumulates at most once per selected item, never on the
                # pass-through copies.
                if pruner.trim_delta is not None and take_vals.shape[0] > 1:
                    shifted = (take_vals + comp[t + 1][:, p - q][None, :]
                               - d[None, :])
                    keep = _trim_select(shifted, pruner.trim_delta)
                    take_vals = take_vals[keep]
                    take_sel = [take_sel[i] for i in keep]
                kept_vals.append(take_vals)
                kept_sel.extend(take_sel)
            if not kept_vals:
                continue
            cand = np.ascontiguousarray(np.vstack(kept_vals))
            idx = pruner.prune(cand, comp[t + 1][:, p - q], trim=False)
            new_states[q] = (np.ascontiguousarray(cand[idx]),
                             [kept_sel[i] for i in idx])
        states = new_states

    vals, sels = states[p]
    obj = (vals - d[None, :]).max(axis=1)
    r = int(np.argmin(obj))
    x = np.zeros(n, dtype=np.int8)
    x[list(sels[r])] = 1
    return x


def _solve_chains(struct: ParallelChains, C, d, pruner: _LabelPruner):
    m = len(struct.chain_lengths)
    pruner.observe(m)
    vals = np.stack([C[:, struct.chain_slice(i)].sum(axis=1)
                     for i in range(m)])
    obj = (vals - d[None, :]).max(axis=1)
    return struct.chain_incidence(int(np.argmin(obj)))


def _similar_pairs(C: np.ndarray) -> list[tuple[int, int]]:
    """Scenario pairing by minimum total Euclidean distance (adjacent
    pairing beyond the exact-DP size); pairing similar scenarios loses the
    least structure when averaging."""
    K = C.shape[0]
    if K <= PAIRING_MAX:
        diff = C[:, None, :] - C[None, :, :]
        dist = np.ascontiguousarray(np.sqrt((diff * diff).sum(axis=-1)))
        partner = min_pairing(dist)
        return [(i, int(partner[i])) for i in range(K) if partner[i] >= i]
    pairs = [(i, i + 1) for i in range(0, K - 1, 2)]
    if K % 2:
        pairs.append((K - 1, K - 1))
    return pairs


def _pairwise_bootstrap(structure, C, d, label_cap) -> np.ndarray | None:
    """Solution of the recursively pairwise-averaged scenario set: the
    reduced problem is cheap to solve, and its solution is a strong
    incumbent for the full problem."""
    K = C.shape[0]
    if K < 4:
        return None
    pairs = _similar_pairs(C)
    C_half = np.array([0.5 * (C[a] + C[b]) if a != b else C[a]
                       for a, b in pairs])
    d_half = np.array([0.5 * (d[a] + d[b]) if a != b else d[a]
                       for a, b in pairs])
    res = _solve_raw(structure, C_half, d_half, trim_eps=None,
                     label_cap=label_cap, upper_bound_hint=None,
                     prune_dominated=True, use_bounds=True)
    return res.solution.incidence


def _solve_raw(structure, C, d, *, trim_eps, label_cap, upper_bound_hint,
               prune_dominated, use_bounds) -> SolveResult:
    exact = trim_eps is None

    if C.shape[0] == 1 and prune_dominated:
        res = nominal_solve(structure, C[0])
        value = _objective(C, d, res.solution.incidence)
        return SolveResult(res.solution, value, exact=exact)

    trim_delta = None
    threshold_factor = 1.0
    if trim_eps is not None:
        trim_delta = _trim_delta(trim_eps, structure.max_solution_size)
        threshold_factor = 1.0 + trim_eps
    pruner = _LabelPruner(
        d, use_bounds=use_bounds, trim_delta=trim_delta,
        threshold_factor=threshold_factor, prune_dominated=prune_dominated,
        label_cap=label_cap)
    if upper_bound_hint is not None:
        pruner.offer_incumbent(float(upper_bound_hint))

    if isinstance(structure, LayeredPath):
        seed = None
        if exact and use_bounds:
            seed = _pairwise_bootstrap(structure, C, d, label_cap)
        x = _solve_layered(structure, C, d, pruner, seed_incidence=seed)
    elif isinstance(structure, Selection):
        if exact and use_bounds:
            seed = _pairwise_bootstrap(structure, C, d, label_cap)
            if seed is not None:
                pruner.offer_incumbent(_objective(C, d, seed))
        try:
            x = _solve_selection(structure, C, d, pruner)
        except CapExceededError:
            # Exact mode falls back to exhaustive enumeration (still exact,
            # bounded by the brute-force cap); approximate mode fails hard.
            if not exact or structure.feasible_count() > DEFAULT_BRUTE_CAP:
                raise
            x, _ = _enumerate_best(structure, C, d)
    elif isinstance(structure, ParallelChains):
        x = _solve_chains(structure, C, d, pruner)
    else:
        raise ValidationError(f"unsupported structure {type(structure).__name__}")
    value = _objective(C, d, x)
    return SolveResult(Solution(x), value, exact=exact,
                       labels_explored=pruner.labels)


def _solve_robust(problem, offsets, *, trim_eps=None,
                  label_cap=DEFAULT_LABEL_CAP, upper_bound_hint=None,
                  prune_dominated=True, use_bounds=True) -> SolveResult:
    structure, C = _problem_parts(problem)
    d = _offset_array(C, offsets)
    return _solve_raw(structure, C, d, trim_eps=trim_eps,
                      label_cap=label_cap, upper_bound_hint=upper_bound_hint,
                      prune_dominated=prune_dominated, use_bounds=use_bounds)


# ---------------------------------------------------------------------------
# public solvers


def exact_minmax(problem, *, label_cap: int = DEFAULT_LABEL_CAP,
                 upper_bound_hint: float | None = None,
                 prune_dominated: bool = True,
                 use_bounds: bool = True) -> SolveResult:
    """Exact minimum worst-case cost over all scenarios.

    ``upper_bound_hint`` may pass the objective of any known feasible
    solution to sharpen pruning; correctness does not depend on it.
    ``prune_dominated`` / ``use_bounds`` exist so tests can compare pruned
    and unpruned runs.
    """
    return _solve_robust(problem, None, label_cap=label_cap,
                         upper_bound_hint=upper_bound_hint,
                         prune_dominated=prune_dominated,
                         use_bounds=use_bounds)


def exact_generalized_regret(problem, offsets, *,
                             label_cap: int = DEFAULT_LABEL_CAP,
                             upper_bound_hint: float | None = None,
                             prune_dominated: bool = True,
                             use_bounds: bool = True) -> SolveResult:
    """Exact minimum of max_i (cost_i - offsets_i).

    Classic min-max regret is obtained by passing the per-scenario optima
    as offsets. Dominance pruning stays valid because the objective is a
    maximum of affine, componentwise-monotone functions of the label.
    """
    if offsets is None:
        raise ValidationError("generalized regret requires offsets")
    return _solve_robust(problem, offsets, label_cap=label_cap,
                         upper_bound_hint=upper_bound_hint,
                         prune_dominated=prune_dominated,
                         use_bounds=use_bounds)


def fptas_solve(problem, epsilon_tilde: float, criterion: str = "minmax",
                offsets=None, *,
                label_cap: int = DEFAULT_LABEL_CAP) -> SolveResult:
    """Label DP with trimmed domination: returns a solution whose value is
    at most (1 + epsilon_tilde) times the exact optimum.

    For the ``generalized_regret`` criterion the guarantee requires offsets
    no larger than the per-scenario optima (true for regret offsets built
    from nominal solves, and for their group means).
    """
    if not epsilon_tilde > 0:
        raise ValidationError("epsilon_tilde must be positive")
    if criterion == "minmax":
        d = None
    elif criterion == "generalized_regret":
        if offsets is None:
            raise ValidationError("generalized regret requires offsets")
        d = offsets
    else:
        raise ValidationError(f"unknown criterion {criterion!r}")
    res = _solve_robust(problem, d, trim_eps=float(epsilon_tilde),
                        label_cap=label_cap)
    return SolveResult(res.solution, res.value, exact=False,
                       labels_explored=res.labels_explored)


def brute_force(problem, criterion: str = "minmax", offsets=None, *,
                cap: int = DEFAULT_BRUTE_CAP) -> SolveResult:
    """Exhaustive oracle: enumerates the feasible set and returns the true
    optimum (lexicographically smallest solution on ties).

    Refuses instances whose feasible set exceeds ``cap`` -- never truncates.
    """
    structure, C = _problem_parts(problem)
    if criterion == "minmax":
        d = _offset_array(C, None)
    elif criterion == "generalized_regret":
        if offsets is None:
            raise ValidationError("generalized regret requires offsets")
        d = _offset_array(C, offsets)
    else:
        raise ValidationError(f"unknown criterion {criterion!r}")
    count = structure.feasible_count()
    if count > cap:
        raise CapExceededError(
            f"feasible set has {count} solutions, above the cap of {cap}; "
            "raising the cap is explicit opt-in")

    if isinstance(structure, LayeredPath):
        x, value = _brute_layered(structure, C, d)
    else:
        x, value = _enumerate_best(structure, C, d)
    return SolveResult(Solution(x), float(value), exact=True,
                       labels_explored=count)


def _enumerate_best(structure, C, d):
    best_val = np.inf
    best_x = None
    for x_cand in structure.iter_solutions():
        v = _objective(C, d, x_cand)
        if v < best_val:
            best_val, best_x = v, x_cand
    return best_x, best_val


def _brute_layered(struct: LayeredPath, C, d, chunk: int = 1 << 17):
    w, L = struct.width, struct.layer_count
    total = w**L
    best_val = np.inf
    best_id = -1
    weights = [w**(L - 1 - i) for i in range(L)]
    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total))
        nodes = [(ids // wt) % w for wt in weights]
        S = C[:, nodes[0]].copy()
        for layer in range(1, L):
            base = w + (layer - 1) * w * w
            S += C[:, base + nodes[layer - 1] * w + nodes[layer]]
        S += C[:, w + (L - 1) * w * w + nodes[-1]]
        obj = (S - d[:, None]).max(axis=0)
        r = int(np.argmin(obj))
        if obj[r] < best_val:
            best_val = float(obj[r])
            best_id = int(ids[r])
    nodes = [(best_id // wt) % w for wt in weights]
    return struct.path_incidence(nodes), best_val
