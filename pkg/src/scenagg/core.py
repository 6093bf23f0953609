"""Domain types for robust optimization under discrete scenario uncertainty.

An instance couples a combinatorial ground structure (layered shortest path,
item selection, or a fixed set of parallel chains) with a finite set of cost
scenarios. Solutions are binary incidence vectors over the ground set; the
evaluation helpers compute per-scenario cost, worst-case cost, and
generalized regret (worst case of cost minus a per-scenario offset).

All types are immutable after construction and all evaluations are pure, so
instances and solutions can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np

# Absolute tolerance for all value comparisons on float costs.
TOLERANCE = 1e-9


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition or invariant."""


class CapExceededError(RuntimeError):
    """Raised when an exact computation would exceed its configured cap.

    Solvers never silently truncate or approximate in exact mode; they fail
    with this error instead.
    """


def _as_cost_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} must be finite")
    if arr.size and arr.min() < 0.0:
        raise ValidationError(f"{name} must be nonnegative")
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CostVector:
    """One cost per ground-set element; entries are nonnegative and finite."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _as_cost_array(self.entries, "cost entries")
        if arr.ndim != 1:
            raise ValidationError("cost vector must be one-dimensional")
        object.__setattr__(self, "entries", arr)

    def __len__(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, CostVector) and np.array_equal(
            self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())


@dataclass(frozen=True)
class ScenarioSet:
    """An ordered collection of K cost vectors over the same ground set.

    The scenario matrix has one row per scenario. ``max_level`` is the
    number of pairwise halvings needed to reach a single scenario,
    ``ceil(log2 K)``.
    """

    matrix: np.ndarray

    def __post_init__(self):
        arr = _as_cost_array(self.matrix, "scenario costs")
        if arr.ndim != 2:
            raise ValidationError("scenario matrix must be K x n")
        if arr.shape[0] < 1:
            raise ValidationError("scenario set needs at least one scenario")
        object.__setattr__(self, "matrix", arr)

    @classmethod
    def from_vectors(cls, vectors: Sequence[CostVector | Sequence[float]]) -> "ScenarioSet":
        rows = [v.entries if isinstance(v, CostVector) else v for v in vectors]
        return cls(np.array(rows, dtype=np.float64))

    @property
    def size(self) -> int:
        """Number of scenarios K."""
        return self.matrix.shape[0]

    @property
    def ground_size(self) -> int:
        return self.matrix.shape[1]

    @property
    def max_level(self) -> int:
        return (self.size - 1).bit_length()

    def scenario(self, i: int) -> CostVector:
        if not 0 <= i < self.size:
            raise ValidationError(f"scenario index {i} out of range")
        return CostVector(self.matrix[i])

    def midpoint(self) -> np.ndarray:
        """Componentwise average of all scenarios."""
        return self.matrix.mean(axis=0)

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return isinstance(other, ScenarioSet) and np.array_equal(
            self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())


class GroundStructure:
    """Base class for the supported combinatorial ground structures."""

    @property
    def ground_size(self) -> int:
        raise NotImplementedError

    @property
    def max_solution_size(self) -> int:
        """Largest number of selected elements in any feasible solution."""
        raise NotImplementedError

    def feasible_count(self) -> int:
        """Number of feasible solutions (exact)."""
        raise NotImplementedError

    def is_feasible(self, incidence: np.ndarray) -> bool:
        raise NotImplementedError

    def iter_solutions(self) -> Iterator[np.ndarray]:
        """Yield all feasible incidence vectors in lexicographic order of
        their selected-index sequences."""
        raise NotImplementedError


@dataclass(frozen=True)
class LayeredPath(GroundStructure):
    """Complete layered DAG from a single source to a single sink.

    Every node of layer i is connected to every node of layer i+1. The
    ground set is the edge set, indexed deterministically: the source
    edges first (by target node), then each transition layer in
    (from-node, to-node) lexicographic order, then the sink edges.
    """

    layer_count: int
    width: int

    def __post_init__(self):
        if self.layer_count < 1 or self.width < 1:
            raise ValidationError("layer_count and width must be positive")

    @property
    def ground_size(self) -> int:
        return 2 * self.width + (self.layer_count - 1) * self.width**2

    @property
    def max_solution_size(self) -> int:
        return self.layer_count + 1

    def feasible_count(self) -> int:
        return self.width**self.layer_count

    def source_edge(self, node: int) -> int:
        return node

    def transition_edge(self, layer: int, a: int, b: int) -> int:
        """Edge from node ``a`` of ``layer`` to node ``b`` of ``layer + 1``
        (layers are 1-based)."""
        return self.width + (layer - 1) * self.width**2 + a * self.width + b

    def sink_edge(self, node: int) -> int:
        return self.width + (self.layer_count - 1) * self.width**2 + node

    def path_edges(self, nodes: Sequence[int]) -> list[int]:
        """Edge indices of the path visiting one node per layer."""
        if len(nodes) != self.layer_count:
            raise ValidationError("path must visit one node per layer")
        edges = [self.source_edge(nodes[0])]
        for i in range(self.layer_count - 1):
            edges.append(self.transition_edge(i + 1, nodes[i], nodes[i + 1]))
        edges.append(self.sink_edge(nodes[-1]))
        return edges

    def path_incidence(self, nodes: Sequence[int]) -> np.ndarray:
        x = np.zeros(self.ground_size, dtype=np.int8)
        x[self.path_edges(nodes)] = 1
        return x

    def is_feasible(self, incidence: np.ndarray) -> bool:
        if incidence.shape != (self.ground_size,):
            return False
        selected = np.flatnonzero(incidence)
        if selected.size != self.layer_count + 1:
            return False
        w = self.width
        if selected[0] >= w:
            return False
        node = int(selected[0])
        for layer in range(1, self.layer_count):
            e = int(selected[layer])
            base = w + (layer - 1) * w * w
            if not base <= e < base + w * w:
                return False
            a, b = divmod(e - base, w)
            if a != node:
                return False
            node = b
        return int(selected[-1]) == self.sink_edge(node)

    def iter_solutions(self) -> Iterator[np.ndarray]:
        # Lexicographic order over node tuples coincides with lexicographic
        # order over selected edge-index sequences.
        import itertools
        for nodes in itertools.product(range(self.width), repeat=self.layer_count):
            yield self.path_incidence(nodes)


@dataclass(frozen=True)
class Selection(GroundStructure):
    """Choose exactly p of n items; the ground set is the item set."""

    n: int
    p: int

    def __post_init__(self):
        if not 1 <= self.p <= self.n:
            raise ValidationError("selection requires 1 <= p <= n")

    @property
    def ground_size(self) -> int:
        return self.n

    @property
    def max_solution_size(self) -> int:
        return self.p

    def feasible_count(self) -> int:
        import math
        return math.comb(self.n, self.p)

    def is_feasible(self, incidence: np.ndarray) -> bool:
        return incidence.shape == (self.n,) and int(np.sum(incidence != 0)) == self.p

    def iter_solutions(self) -> Iterator[np.ndarray]:
        import itertools
        for combo in itertools.combinations(range(self.n), self.p):
            x = np.zeros(self.n, dtype=np.int8)
            x[list(combo)] = 1
            yield x


@dataclass(frozen=True)
class ParallelChains(GroundStructure):
    """Fixed source-to-sink chains in parallel; a solution selects one chain.

    Chain i occupies a contiguous block of ground-set indices, in chain
    order. This is the structure behind the worst-case two-path family and
    the three-edge regret example.
    """

    chain_lengths: tuple[int, ...]

    def __post_init__(self):
        lengths = tuple(int(c) for c in self.chain_lengths)
        if not lengths or any(c < 1 for c in lengths):
            raise ValidationError("chain lengths must be positive")
        object.__setattr__(self, "chain_lengths", lengths)

    @property
    def ground_size(self) -> int:
        return sum(self.chain_lengths)

    @property
    def max_solution_size(self) -> int:
        return max(self.chain_lengths)

    def feasible_count(self) -> int:
        return len(self.chain_lengths)

    def chain_slice(self, i: int) -> slice:
        start = sum(self.chain_lengths[:i])
        return slice(start, start + self.chain_lengths[i])

    def chain_incidence(self, i: int) -> np.ndarray:
        if not 0 <= i < len(self.chain_lengths):
            raise ValidationError(f"chain index {i} out of range")
        x = np.zeros(self.ground_size, dtype=np.int8)
        x[self.chain_slice(i)] = 1
        return x

    def is_feasible(self, incidence: np.ndarray) -> bool:
        if incidence.shape != (self.ground_size,):
            return False
        for i in range(len(self.chain_lengths)):
            if np.array_equal(incidence != 0, self.chain_incidence(i) != 0):
                return True
        return False

    def iter_solutions(self) -> Iterator[np.ndarray]:
        for i in range(len(self.chain_lengths)):
            yield self.chain_incidence(i)


@dataclass(frozen=True)
class Solution:
    """Binary incidence vector over the ground set."""

    incidence: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.incidence, dtype=np.int8))
        if arr.ndim != 1 or not np.isin(arr, (0, 1)).all():
            raise ValidationError("incidence must be a binary vector")
        arr.setflags(write=False)
        object.__setattr__(self, "incidence", arr)

    @property
    def selected(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.incidence))

    def __eq__(self, other) -> bool:
        return isinstance(other, Solution) and np.array_equal(
            self.incidence, other.incidence)

    def __hash__(self):
        return hash(self.incidence.tobytes())


@dataclass(frozen=True)
class Instance:
    """A ground structure paired with a scenario set over its ground set."""

    structure: GroundStructure
    scenarios: ScenarioSet
    name: str | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scenarios.ground_size != self.structure.ground_size:
            raise ValidationError(
                f"scenario vectors have length {self.scenarios.ground_size}, "
                f"ground set has size {self.structure.ground_size}")

    @property
    def scenario_count(self) -> int:
        return self.scenarios.size

    def check_feasible(self, x: Solution) -> None:
        if x.incidence.shape != (self.structure.ground_size,):
            raise ValidationError("solution length does not match ground set")
        if not self.structure.is_feasible(x.incidence):
            raise ValidationError("solution is infeasible for the structure")


class MaxEvaluation(NamedTuple):
    value: float
    scenario: int


def _scenario_matrix(problem) -> np.ndarray:
    # Accepts an Instance or anything else carrying a ScenarioSet.
    return problem.scenarios.matrix


def evaluate_scenario(problem, x: Solution, i: int) -> float:
    """Cost of solution ``x`` under scenario ``i`` (0-based)."""
    matrix = _scenario_matrix(problem)
    problem.check_feasible(x)
    if not 0 <= i < matrix.shape[0]:
        raise ValidationError(f"scenario index {i} out of range")
    return float(matrix[i] @ x.incidence)


def evaluate_max(problem, x: Solution) -> MaxEvaluation:
    """Worst-case cost of ``x`` over all scenarios.

    Returns the value together with the index of the attaining scenario
    (lowest index on ties).
    """
    matrix = _scenario_matrix(problem)
    problem.check_feasible(x)
    values = matrix @ x.incidence
    i = int(np.argmax(values))
    return MaxEvaluation(float(values[i]), i)


def evaluate_generalized_regret(problem, x: Solution, offsets) -> float:
    """Worst case of scenario cost minus a per-scenario offset.

    Classic regret is the special case where ``offsets[i]`` is the optimal
    cost under scenario ``i``; with such offsets the value is nonnegative
    for every feasible solution. Arbitrary offsets may yield negative
    values.
    """
    matrix = _scenario_matrix(problem)
    problem.check_feasible(x)
    d = np.asarray(offsets, dtype=np.float64)
    if d.shape != (matrix.shape[0],):
        raise ValidationError(
            f"expected {matrix.shape[0]} offsets, got {d.shape}")
    return float(np.max(matrix @ x.incidence - d))
