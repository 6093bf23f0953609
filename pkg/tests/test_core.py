import numpy as np
import pytest

import scenagg as sa
from scenagg import (
    CostVector,
    Instance,
    LayeredPath,
    ParallelChains,
    ScenarioSet,
    Selection,
    Solution,
    ValidationError,
    evaluate_generalized_regret,
    evaluate_max,
    evaluate_scenario,
)

from conftest import all_solutions


def middle(inst):
    return Solution(inst.structure.chain_incidence(1))


def top(inst):
    return Solution(inst.structure.chain_incidence(0))


class TestConstruction:
    def test_negative_cost_rejected(self):
        with pytest.raises(ValidationError):
            CostVector(np.array([1.0, -0.5]))
        with pytest.raises(ValidationError):
            ScenarioSet(np.array([[1.0, 2.0], [0.0, -1.0]]))

    def test_nonfinite_rejected(self):
        with pytest.raises(ValidationError):
            CostVector(np.array([np.inf, 1.0]))
        with pytest.raises(ValidationError):
            ScenarioSet(np.array([[np.nan, 1.0]]))

    def test_empty_scenario_set_rejected(self):
        with pytest.raises(ValidationError):
            ScenarioSet(np.empty((0, 3)))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            Instance(Selection(4, 2), ScenarioSet(np.ones((2, 3))))

    def test_selection_bounds(self):
        with pytest.raises(ValidationError):
            Selection(3, 0)
        with pytest.raises(ValidationError):
            Selection(3, 4)

    def test_layered_positive(self):
        with pytest.raises(ValidationError):
            LayeredPath(0, 2)
        with pytest.raises(ValidationError):
            LayeredPath(2, 0)

    @pytest.mark.parametrize("layers,width", [(1, 1), (2, 3), (10, 4), (5, 2)])
    def test_layered_edge_count(self, layers, width):
        struct = LayeredPath(layers, width)
        assert struct.ground_size == width + (layers - 1) * width**2 + width
        assert struct.feasible_count() == width**layers

    def test_solution_binary_only(self):
        with pytest.raises(ValidationError):
            Solution(np.array([0, 2, 1]))

    def test_solution_equality_and_hash(self):
        a = Solution(np.array([0, 1, 0]))
        b = Solution(np.array([0, 1, 0]))
        c = Solution(np.array([1, 0, 0]))
        assert a == b and hash(a) == hash(b) and a != c
        assert a.selected == (1,)

    def test_scenario_set_accessors(self):
        s = ScenarioSet(np.array([[1.0, 2.0], [3.0, 4.0]]))
        assert s.size == 2 and s.ground_size == 2 and s.max_level == 1
        assert s.scenario(1) == CostVector(np.array([3.0, 4.0]))
        with pytest.raises(ValidationError):
            s.scenario(2)


class TestEvaluate:
    def test_middle_path_costs_one_in_every_scenario(self, example1):
        for i in range(4):
            assert evaluate_scenario(example1, middle(example1), i) == 1.0

    def test_zero_scenario_costs_zero(self):
        inst = Instance(Selection(3, 2), ScenarioSet(np.zeros((1, 3))))
        x = Solution(np.array([1, 1, 0]))
        assert evaluate_scenario(inst, x, 0) == 0.0

    def test_top_path_scenario_one(self, example1):
        assert evaluate_scenario(example1, top(example1), 0) == 4.0

    def test_scenario_index_range(self, example1):
        with pytest.raises(ValidationError):
            evaluate_scenario(example1, middle(example1), 4)

    def test_infeasible_solution_rejected(self, example1):
        with pytest.raises(ValidationError):
            evaluate_max(example1, Solution(np.array([1, 1, 0])))

    def test_max_middle(self, example1):
        assert evaluate_max(example1, middle(example1)).value == 1.0

    @pytest.mark.parametrize("k,ell", [(0, 0), (2, 1), (3, 0), (4, 2), (4, 4)])
    def test_max_tight_bottom_is_one(self, k, ell):
        inst = sa.gen_tight(k, ell)
        bottom = Solution(inst.structure.chain_incidence(1))
        assert evaluate_max(inst, bottom).value == 1.0

    def test_max_tight_top_is_r(self, tight_4_2):
        assert evaluate_max(tight_4_2, top(tight_4_2)).value == 4.0

    def test_argmax_lowest_index_on_ties(self, example1):
        res = evaluate_max(example1, middle(example1))
        assert res.scenario == 0  # all four scenarios tie at 1

    def test_generalized_regret_middle(self, example1):
        x = middle(example1)
        assert evaluate_generalized_regret(example1, x, [0, 0, 0, 0]) == 1.0

    def test_generalized_regret_self_offsets_zero(self, example1):
        x = top(example1)
        offs = example1.scenarios.matrix @ x.incidence
        assert evaluate_generalized_regret(example1, x, offs) == 0.0

    def test_generalized_regret_top(self, example1):
        x = top(example1)
        assert evaluate_generalized_regret(example1, x, [0, 0, 0, 0]) == 4.0

    def test_offsets_length_checked(self, example1):
        with pytest.raises(ValidationError):
            evaluate_generalized_regret(example1, middle(example1), [0, 0])


class TestFeasibility:
    @pytest.mark.parametrize("layers,width", [(1, 1), (2, 2), (3, 2), (2, 3)])
    def test_path_checker_matches_enumeration(self, layers, width):
        struct = LayeredPath(layers, width)
        paths = all_solutions(struct)
        assert len(paths) == width**layers
        for x in paths:
            assert struct.is_feasible(x)
            # any single-bit flip breaks the path structure
            for e in range(struct.ground_size):
                y = x.copy()
                y[e] ^= 1
                assert not struct.is_feasible(y)

    def test_selection_checker(self):
        struct = Selection(4, 2)
        assert struct.is_feasible(np.array([1, 0, 1, 0], dtype=np.int8))
        assert not struct.is_feasible(np.array([1, 1, 1, 0], dtype=np.int8))
        assert struct.feasible_count() == 6

    def test_chains_checker(self):
        struct = ParallelChains((2, 3))
        assert struct.is_feasible(np.array([1, 1, 0, 0, 0], dtype=np.int8))
        assert not struct.is_feasible(np.array([1, 0, 1, 0, 0], dtype=np.int8))
        assert not struct.is_feasible(np.ones(5, dtype=np.int8))


class TestProperties:
    @pytest.mark.parametrize("seed", range(8))
    def test_max_dominates_each_scenario_and_midpoint(self, seed):
        inst = sa.gen_layered(3, 3, 5, seed=seed)
        mid = inst.scenarios.midpoint()
        for x_arr in all_solutions(inst.structure)[::7]:
            x = Solution(x_arr)
            worst = evaluate_max(inst, x).value
            for i in range(5):
                assert worst >= evaluate_scenario(inst, x, i) - 1e-12
            assert worst >= float(mid @ x.incidence) - 1e-12

    @pytest.mark.parametrize("seed", range(5))
    def test_regret_nonnegative_with_nominal_offsets(self, seed):
        inst = sa.gen_layered(3, 2, 4, seed=seed)
        optima = sa.per_scenario_optima(inst)
        for x_arr in all_solutions(inst.structure):
            x = Solution(x_arr)
            assert evaluate_generalized_regret(inst, x, optima) >= -1e-12
