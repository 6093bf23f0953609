import numpy as np
import pytest

import scenagg as sa


def all_solutions(structure) -> np.ndarray:
    """All feasible incidence vectors, stacked (lexicographic order)."""
    return np.stack(list(structure.iter_solutions()))


def solution_values(instance) -> tuple[np.ndarray, np.ndarray]:
    """(solutions, per-scenario values); values has one row per solution."""
    X = all_solutions(instance.structure)
    return X, X @ instance.scenarios.matrix.T


@pytest.fixture
def example1():
    return sa.gen_example1()


@pytest.fixture
def tight_4_2():
    return sa.gen_tight(4, 2)
