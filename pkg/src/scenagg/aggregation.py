"""Scenario aggregation: partitions, midpoint merging, and regret offsets.

Aggregating a scenario set replaces each group of scenarios by its
componentwise mean. Solving the smaller problem yields a solution whose true
worst case is within a factor of ``max group size`` of the optimum; for the
regret criterion the same bound holds only when each aggregated scenario
carries an offset equal to the mean of the *original* per-scenario optimal
values (never the optimum of the aggregated scenario itself).

Two partition schemes are provided: consecutive index runs, and similarity
pairing by minimum-total Euclidean distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import labelops
from .core import Instance, ScenarioSet, Solution, ValidationError


@dataclass(frozen=True)
class Partition:
    """Disjoint, covering, non-empty groups of scenario indices (0-based).

    ``heuristic`` marks partitions produced by the greedy fallback of
    ``similarity_matching``, whose total distance is not certified minimal.
    """

    groups: tuple[tuple[int, ...], ...]
    total: int
    heuristic: bool = False

    def __post_init__(self):
        groups = tuple(tuple(int(i) for i in g) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        seen: set[int] = set()
        for g in groups:
            if not g:
                raise ValidationError("partition groups must be non-empty")
            if seen.intersection(g):
                raise ValidationError("partition groups must be disjoint")
            seen.update(g)
        if seen != set(range(self.total)):
            raise ValidationError(
                f"partition must cover exactly 0..{self.total - 1}")

    @property
    def group_count(self) -> int:
        return len(self.groups)

    @property
    def max_group_size(self) -> int:
        return max(len(g) for g in self.groups)


def consecutive_partition(total: int, group_count: int) -> Partition:
    """Split ``0..total-1`` into contiguous runs, sizes differing by at most
    one, with the larger groups first."""
    if not 1 <= group_count <= total:
        raise ValidationError(
            f"group count must be in 1..{total}, got {group_count}")
    base, extra = divmod(total, group_count)
    groups = []
    start = 0
    for j in range(group_count):
        size = base + (1 if j < extra else 0)
        groups.append(tuple(range(start, start + size)))
        start += size
    return Partition(tuple(groups), total)


def _distance_matrix(matrix: np.ndarray) -> np.ndarray:
    diff = matrix[:, None, :] - matrix[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def _greedy_pairing(dist: np.ndarray) -> np.ndarray:
    """Closest-pair-first heuristic for large point sets."""
    m = dist.shape[0]
    partner = np.arange(m, dtype=np.int64)
    d = dist.copy()
    idx = np.arange(m)
    d[idx, idx] = np.inf
    unmatched = np.ones(m, dtype=bool)
    for _ in range(m // 2):
        flat = int(np.argmin(d))
        i, j = divmod(flat, m)
        partner[i], partner[j] = j, i
        unmatched[i] = unmatched[j] = False
        d[i, :] = d[:, i] = np.inf
        d[j, :] = d[:, j] = np.inf
    return partner


def _pairs_from_partner(partner: np.ndarray) -> tuple[tuple[int, ...], ...]:
    groups = []
    for i in range(partner.shape[0]):
        j = int(partner[i])
        if j == i:
            groups.append((i,))
        elif j > i:
            groups.append((i, j))
    return tuple(groups)


def similarity_matching(scenarios: ScenarioSet | np.ndarray) -> Partition:
    """Pair scenarios so the total Euclidean distance between pair members
    is minimal; with an odd count one scenario stays single.

    Exact (subset dynamic program) up to ``labelops.PAIRING_MAX`` scenarios;
    beyond that a greedy closest-pair heuristic is used and the returned
    partition is flagged ``heuristic``. Ties resolve to the
    lexicographically smallest set of groups.
    """
    matrix = scenarios.matrix if isinstance(scenarios, ScenarioSet) else np.asarray(scenarios, dtype=np.float64)
    m = matrix.shape[0]
    if m < 2:
        raise ValidationError("similarity matching needs at least 2 scenarios")
    dist = np.ascontiguousarray(_distance_matrix(matrix))
    if m <= labelops.PAIRING_MAX:
        partner = labelops.min_pairing(dist)
        heuristic = False
    else:
        partner = _greedy_pairing(dist)
        heuristic = True
    return Partition(_pairs_from_partner(partner), m, heuristic=heuristic)


@dataclass(frozen=True)
class AggregatedProblem:
    """A reduced scenario set plus the bookkeeping needed for guarantees.

    ``scenarios`` holds the group means; ``offsets`` (regret mode only) the
    group means of the original per-scenario optima; ``group_map`` ties every
    aggregated scenario back to the original indices; ``factor`` is the
    largest group size, i.e. the certified approximation factor of an exact
    solve on this problem.
    """

    structure: object
    scenarios: ScenarioSet
    group_map: Partition
    level: int
    factor: int
    offsets: np.ndarray | None = None

    def __post_init__(self):
        if self.offsets is not None:
            arr = np.asarray(self.offsets, dtype=np.float64)
            if arr.shape != (self.scenarios.size,):
                raise ValidationError("one offset per aggregated scenario required")
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            object.__setattr__(self, "offsets", arr)

    @property
    def scenario_count(self) -> int:
        return self.scenarios.size

    def check_feasible(self, x: Solution) -> None:
        if x.incidence.shape != (self.structure.ground_size,):
            raise ValidationError("solution length does not match ground set")
        if not self.structure.is_feasible(x.incidence):
            raise ValidationError("solution is infeasible for the structure")


def _group_means(matrix: np.ndarray, groups) -> np.ndarray:
    return np.array([matrix[list(g)].mean(axis=0) for g in groups])


def _build(instance: Instance, partition: Partition, mode: str,
           opt_values) -> AggregatedProblem:
    matrix = instance.scenarios.matrix
    means = _group_means(matrix, partition.groups)
    offsets = None
    if mode == "regret":
        if opt_values is None:
            raise ValidationError("regret aggregation requires opt_values")
        opt_arr = np.asarray(opt_values, dtype=np.float64)
        if opt_arr.shape != (instance.scenario_count,):
            raise ValidationError(
                f"expected {instance.scenario_count} opt values")
        offsets = np.array([opt_arr[list(g)].mean() for g in partition.groups])
    elif mode != "minmax":
        raise ValidationError(f"unknown aggregation mode {mode!r}")
    level = (partition.group_count - 1).bit_length()
    return AggregatedProblem(
        structure=instance.structure,
        scenarios=ScenarioSet(means),
        group_map=partition,
        level=level,
        factor=partition.max_group_size,
        offsets=offsets,
    )


def aggregate(instance: Instance, partition: Partition, mode: str = "minmax",
              opt_values=None) -> AggregatedProblem:
    """Merge scenario groups into their componentwise means.

    In ``regret`` mode each group additionally receives the mean of the
    original per-scenario optimal values ``opt_values`` as its offset.
    """
    if partition.total != instance.scenario_count:
        raise ValidationError("partition does not match the scenario count")
    return _build(instance, partition, mode, opt_values)


def _within_group_scatter(matrix: np.ndarray, groups) -> float:
    total = 0.0
    for g in groups:
        pts = matrix[list(g)]
        total += float(((pts - pts.mean(axis=0)) ** 2).sum())
    return total


def _refine_groups(matrix: np.ndarray, groups, max_sweeps: int = 50):
    """Size-preserving swap descent on within-group scatter.

    Greedy pair-of-pairs matching is myopic once groups grow past two
    members; exchanging single members between groups (first improvement,
    fixed scan order) recovers most of the gap to a balanced clustering
    while keeping every group size, and with it the certified factor.
    """
    groups = [list(g) for g in groups]
    if len(groups) < 2:
        return tuple(tuple(g) for g in groups)
    best = _within_group_scatter(matrix, groups)
    for _ in range(max_sweeps):
        improved = False
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                for ia in range(len(groups[a])):
                    for ib in range(len(groups[b])):
                        groups[a][ia], groups[b][ib] = \
                            groups[b][ib], groups[a][ia]
                        s = _within_group_scatter(matrix, groups)
                        if s < best - 1e-12:
                            best = s
                            improved = True
                        else:
                            groups[a][ia], groups[b][ib] = \
                                groups[b][ib], groups[a][ia]
        if not improved:
            break
    return tuple(tuple(sorted(g)) for g in groups)


def _compose_similarity(matrix: np.ndarray, target: int) -> tuple[tuple[int, ...], ...]:
    """Repeatedly pair the current group means by similarity until at most
    ``target`` groups remain (unmatched groups pass through unchanged),
    refining each stage's composed partition by balanced swaps."""
    groups: list[tuple[int, ...]] = [(i,) for i in range(matrix.shape[0])]
    means = matrix
    while len(groups) > target:
        pairing = similarity_matching(means)
        groups = [
            tuple(sorted(sum((groups[i] for i in pair), ())))
            for pair in pairing.groups
        ]
        groups = list(_refine_groups(matrix, groups))
        means = _group_means(matrix, groups)
    return tuple(groups)


def aggregate_to_level(instance: Instance, level: int,
                       scheme: str = "consecutive", mode: str = "minmax",
                       opt_values=None) -> AggregatedProblem:
    """Aggregate down to at most ``2**level`` scenarios.

    ``consecutive`` groups contiguous index runs (balanced sizes, equal when
    the scenario count is a power of two); ``similarity`` halves the set by
    re-matching the current group means at every stage and refining the
    composed groups with size-preserving swaps. Regret offsets are always
    recomputed from the original per-scenario optima; when ``opt_values``
    is omitted in regret mode they are obtained by solving each original
    scenario nominally.
    """
    K = instance.scenario_count
    max_level = instance.scenarios.max_level
    if not 0 <= level <= max_level:
        raise ValidationError(
            f"level must be in 0..{max_level} for {K} scenarios, got {level}")
    if mode == "regret" and opt_values is None:
        from .solvers import per_scenario_optima
        opt_values = per_scenario_optima(instance)
    target = min(2**level, K)
    if scheme == "consecutive":
        partition = consecutive_partition(K, target)
    elif scheme == "similarity":
        groups = _compose_similarity(instance.scenarios.matrix, target)
        partition = Partition(groups, K)
    else:
        raise ValidationError(f"unknown aggregation scheme {scheme!r}")
    return _build(instance, partition, mode, opt_values)


def aggregate_sweep(instance: Instance, scheme: str = "consecutive",
                    mode: str = "minmax", opt_values=None,
                    ) -> dict[int, AggregatedProblem]:
    """All halving stages of ``aggregate_to_level`` in one pass.

    Returns a mapping from scenario count (K, ceil(K/2), ..., 1) to the
    aggregated problem at that count; the similarity chain is computed once
    instead of once per level.
    """
    K = instance.scenario_count
    if mode == "regret" and opt_values is None:
        from .solvers import per_scenario_optima
        opt_values = per_scenario_optima(instance)
    counts = [K]
    while counts[-1] > 1:
        counts.append(math.ceil(counts[-1] / 2))
    out: dict[int, AggregatedProblem] = {}
    if scheme == "consecutive":
        for c in counts:
            out[c] = _build(instance, consecutive_partition(K, c), mode, opt_values)
    elif scheme == "similarity":
        matrix = instance.scenarios.matrix
        groups: list[tuple[int, ...]] = [(i,) for i in range(K)]
        means = matrix
        out[K] = _build(instance, Partition(tuple(groups), K), mode, opt_values)
        for c in counts[1:]:
            pairing = similarity_matching(means)
            groups = [
                tuple(sorted(sum((groups[i] for i in pair), ())))
                for pair in pairing.groups
            ]
            groups = list(_refine_groups(matrix, groups))
            means = _group_means(matrix, groups)
            out[c] = _build(instance, Partition(tuple(groups), K), mode, opt_values)
    else:
        raise ValidationError(f"unknown aggregation scheme {scheme!r}")
    return out
