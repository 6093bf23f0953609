import numpy as np
import pytest

import scenagg as sa
from scenagg import (
    Solution,
    ValidationError,
    approx_minmax,
    approx_regret,
    brute_force,
    choose_level,
    evaluate_generalized_regret,
    evaluate_max,
)


class TestChooseLevel:
    def test_half(self):
        assert choose_level(0.5, 16) == 2

    def test_one(self):
        assert choose_level(1.0, 16) == 1

    def test_clamped(self):
        assert choose_level(1 / 16, 16) == 4

    def test_exact_powers(self):
        assert choose_level(0.25, 64) == 3
        assert choose_level(0.3, 64) == 3

    def test_single_scenario_clamps_to_zero(self):
        assert choose_level(0.5, 1) == 0

    @pytest.mark.parametrize("eps", [0.0, -0.5, 1.5, float("nan")])
    def test_epsilon_domain(self, eps):
        with pytest.raises(ValidationError):
            choose_level(eps, 16)


class TestApproxMinmax:
    def test_example1_exact_subsolver(self, example1):
        x, cert = approx_minmax(example1, 1.0, sub_solver="exact")
        assert cert.level_used == 1
        assert cert.guarantee_factor == 2.0
        assert cert.sub_solver_alpha == 1.0
        assert cert.achieved_value <= 2.0 * 1.0 + 1e-12
        assert cert.lower_bound <= cert.achieved_value + 1e-12

    def test_single_scenario_guarantee_one(self):
        inst = sa.gen_layered(3, 2, 1, seed=4)
        x, cert = approx_minmax(inst, 0.5)
        assert cert.guarantee_factor == 1.0
        assert cert.achieved_value == pytest.approx(
            sa.exact_minmax(inst).value, abs=1e-12)

    def test_tight_gap_attained_with_adversarial_tie_break(self, tight_4_2):
        x, cert = approx_minmax(tight_4_2, 0.5, sub_solver="exact",
                                tie_break="adversarial")
        opt = brute_force(tight_4_2).value
        assert cert.achieved_value / opt == 4.0  # K / 2**level exactly
        assert x == Solution(tight_4_2.structure.chain_incidence(0))
        assert cert.guarantee_factor == 4.0
        assert cert.achieved_value <= cert.guarantee_factor * opt + 1e-12

    def test_tight_gap_also_hit_by_default_tie_break(self, tight_4_2):
        # both paths tie on the aggregated problem; the deterministic pick
        # is the top chain, whose true worst case shows the full gap
        x, cert = approx_minmax(tight_4_2, 0.5, sub_solver="exact")
        assert cert.achieved_value == 4.0

    def test_level_override(self, tight_4_2):
        x, cert = approx_minmax(tight_4_2, 1.0, sub_solver="exact", level=4)
        assert cert.level_used == 4
        assert cert.guarantee_factor == 1.0
        assert cert.achieved_value == 1.0

    def test_epsilon_validated_even_with_level(self, example1):
        with pytest.raises(ValidationError):
            approx_minmax(example1, 0.0)
        with pytest.raises(ValidationError):
            approx_minmax(example1, 2.0, level=1)

    def test_unknown_knobs_rejected(self, example1):
        with pytest.raises(ValidationError):
            approx_minmax(example1, 1.0, scheme="kmeans")
        with pytest.raises(ValidationError):
            approx_minmax(example1, 1.0, sub_solver="cplex")
        with pytest.raises(ValidationError):
            approx_minmax(example1, 1.0, tie_break="random")

    @pytest.mark.parametrize("scheme", ["consecutive", "similarity"])
    @pytest.mark.parametrize("seed", range(6))
    def test_certificate_honest_against_oracle(self, scheme, seed):
        inst = sa.gen_layered(4, 2, 8, seed=100 + seed)
        opt = brute_force(inst).value
        for sub, eps_t in (("exact", 1.0), ("fptas", 1.0), ("fptas", 0.5),
                           ("fptas", 0.1)):
            x, cert = approx_minmax(inst, 0.5, scheme=scheme, sub_solver=sub,
                                    epsilon_tilde=eps_t)
            assert cert.achieved_value == pytest.approx(
                evaluate_max(inst, x).value, abs=1e-12)
            assert cert.achieved_value <= cert.guarantee_factor * opt + 1e-9
            assert cert.lower_bound <= opt + 1e-9
            assert cert.lower_bound <= cert.achieved_value + 1e-9

    def test_guarantee_below_epsilon_k_for_power_of_two(self):
        inst = sa.gen_layered(3, 2, 16, seed=3)
        for eps in (1.0, 0.5, 0.25, 0.1):
            x, cert = approx_minmax(inst, eps)  # default fptas(1), alpha=2
            assert cert.guarantee_factor <= eps * 16 + 1e-12

    def test_factor_halves_per_level(self):
        inst = sa.gen_layered(3, 2, 16, seed=6)
        factors = []
        for level in range(5):
            x, cert = approx_minmax(inst, 1.0, sub_solver="exact",
                                    level=level)
            factors.append(cert.guarantee_factor)
        assert factors == [16.0, 8.0, 4.0, 2.0, 1.0]


class TestApproxRegret:
    def test_example1_pipeline(self, example1):
        x, cert = approx_regret(example1, 1.0, sub_solver="exact")
        assert x.selected == (1,)  # middle path
        assert cert.achieved_value == 1.0
        assert cert.guarantee_factor == 2.0
        regret_opt = brute_force(
            example1, "generalized_regret",
            sa.per_scenario_optima(example1)).value
        assert cert.achieved_value <= 2.0 * regret_opt + 1e-12

    def test_example1_naive_aggregation_breaks_factor_two(self, example1):
        # plain regret on the aggregated scenarios admits an optimal
        # solution with true regret 4 = 4x the optimum of 1
        agg = sa.aggregate(example1, sa.consecutive_partition(4, 2))
        naive = sa.per_scenario_optima(agg)
        optima = sa.per_scenario_optima(example1)
        perceived = np.array([
            float(np.max(agg.scenarios.matrix @ x - naive))
            for x in example1.structure.iter_solutions()])
        best = perceived.min()
        worst_true = max(
            evaluate_generalized_regret(example1, Solution(x), optima)
            for x, p in zip(example1.structure.iter_solutions(), perceived)
            if p <= best + 1e-12)
        assert worst_true == 4.0

    def test_single_scenario_regret_zero(self):
        inst = sa.gen_layered(3, 2, 1, seed=8)
        x, cert = approx_regret(inst, 1.0)
        assert cert.achieved_value == pytest.approx(0.0, abs=1e-12)
        assert cert.guarantee_factor == 1.0

    @pytest.mark.parametrize("scheme", ["consecutive", "similarity"])
    @pytest.mark.parametrize("seed", range(6))
    def test_certificate_honest_against_oracle(self, scheme, seed):
        inst = sa.gen_layered(4, 2, 8, seed=500 + seed)
        optima = sa.per_scenario_optima(inst)
        opt = brute_force(inst, "generalized_regret", optima).value
        for sub, eps_t in (("exact", 1.0), ("fptas", 1.0), ("fptas", 0.5),
                           ("fptas", 0.1)):
            x, cert = approx_regret(inst, 0.5, scheme=scheme, sub_solver=sub,
                                    epsilon_tilde=eps_t)
            assert cert.achieved_value == pytest.approx(
                evaluate_generalized_regret(inst, x, optima), abs=1e-12)
            assert cert.achieved_value <= cert.guarantee_factor * opt + 1e-9
            assert cert.lower_bound <= opt + 1e-9
