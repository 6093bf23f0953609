"""Aggregation-based approximation pipelines with guarantee certificates.

The pipeline picks an aggregation level from the requested quality epsilon,
shrinks the scenario set to at most ``2**level`` midpoint scenarios, solves
the small problem with a sub-solver of known factor alpha (exact, or the
FPTAS at 1 + epsilon_tilde), and certifies the product
``alpha * max_group_size`` as the approximation factor for the original
problem. For a power-of-two scenario count the certified factor is at most
``epsilon * K``. The regret pipeline aggregates offsets together with the
scenarios; solving plain regret on aggregated scenarios would forfeit the
guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aggregation import AggregatedProblem, aggregate_to_level
from .core import (
    CapExceededError,
    Instance,
    Solution,
    ValidationError,
    evaluate_generalized_regret,
    evaluate_max,
)
from .solvers import (
    exact_generalized_regret,
    exact_minmax,
    fptas_solve,
    per_scenario_optima,
)

DEFAULT_ADVERSARIAL_CAP = 100_000


@dataclass(frozen=True)
class Certificate:
    """Verifiable guarantee attached to an approximate solution.

    ``achieved_value`` is the solution's objective on the *original*
    scenario set; ``lower_bound`` is (sub-solver value) / alpha, which never
    exceeds the true optimum, so achieved / lower_bound bounds the actual
    ratio without consulting an oracle.
    """

    guarantee_factor: float
    achieved_value: float
    lower_bound: float
    level_used: int
    scheme: str
    sub_solver_alpha: float


def choose_level(epsilon: float, scenario_count: int) -> int:
    """Aggregation level for a requested (epsilon * K) guarantee: the
    smallest level whose halved factor, doubled by the factor-2 sub-solver,
    stays within epsilon * K; clamped so the aggregated set never exceeds
    the original."""
    if not 0.0 < epsilon <= 1.0:
        raise ValidationError(f"epsilon must be in (0, 1], got {epsilon}")
    level = 1
    # smallest level with 2**(level - 1) >= 1 / epsilon; scaling by powers
    # of two is exact in binary floating point
    while epsilon * 2.0 ** (level - 1) < 1.0:
        level += 1
    return min(level, (int(scenario_count) - 1).bit_length())


def _sub_solve(agg: AggregatedProblem, mode: str, sub_solver: str,
               epsilon_tilde: float, label_cap):
    kwargs = {} if label_cap is None else {"label_cap": label_cap}
    if agg.scenario_count == 1 or sub_solver == "exact":
        alpha = 1.0
        if mode == "minmax":
            res = exact_minmax(agg, **kwargs)
        else:
            res = exact_generalized_regret(agg, agg.offsets, **kwargs)
    elif sub_solver == "fptas":
        if not epsilon_tilde > 0:
            raise ValidationError("epsilon_tilde must be positive")
        alpha = 1.0 + float(epsilon_tilde)
        criterion = "minmax" if mode == "minmax" else "generalized_regret"
        res = fptas_solve(agg, epsilon_tilde, criterion,
                          offsets=agg.offsets, **kwargs)
    else:
        raise ValidationError(f"unknown sub-solver {sub_solver!r}")
    return res, alpha


def _adversarial_pick(instance: Instance, agg: AggregatedProblem,
                      sub_value: float, mode: str, optima,
                      cap: int) -> Solution:
    """Worst solution (by true objective) among those whose aggregated
    objective is at least as good as the sub-solver's value.

    Requires an enumerable feasible set; used to expose the worst case the
    certificate still has to cover.
    """
    structure = instance.structure
    count = structure.feasible_count()
    if count > cap:
        raise CapExceededError(
            f"adversarial tie-break needs to enumerate {count} solutions, "
            f"above the cap of {cap}")
    agg_matrix = agg.scenarios.matrix
    d = np.zeros(agg.scenario_count) if agg.offsets is None else agg.offsets
    orig = instance.scenarios.matrix
    best_x = None
    best_true = -np.inf
    for x in structure.iter_solutions():
        perceived = float(np.max(agg_matrix @ x - d))
        if perceived > sub_value + 1e-9:
            continue
        if mode == "minmax":
            true_val = float(np.max(orig @ x))
        else:
            true_val = float(np.max(orig @ x - optima))
        if true_val > best_true:
            best_true = true_val
            best_x = x
    return Solution(best_x)


def _pipeline(instance: Instance, epsilon: float, scheme: str, mode: str,
              sub_solver: str, epsilon_tilde: float, level,
              tie_break: str, adversarial_cap: int, label_cap):
    if tie_break not in ("lexicographic", "adversarial"):
        raise ValidationError(f"unknown tie break {tie_break!r}")
    if level is None:
        level = choose_level(epsilon, instance.scenario_count)
    elif not 0.0 < epsilon <= 1.0:
        raise ValidationError(f"epsilon must be in (0, 1], got {epsilon}")

    optima = per_scenario_optima(instance) if mode == "regret" else None
    agg = aggregate_to_level(instance, level, scheme, mode,
                             opt_values=optima)
    if sub_solver == "fptas":
        # When the level clamps (small epsilon against small K), the group
        # factor alone cannot reach the epsilon*K target; spend the
        # remaining budget on a finer sub-solve so the certificate still
        # meets it whenever that is possible at all.
        budget = epsilon * instance.scenario_count / agg.factor - 1.0
        if 0.0 <= budget < epsilon_tilde:
            if budget <= 0.0:
                sub_solver = "exact"
            else:
                epsilon_tilde = budget
    res, alpha = _sub_solve(agg, mode, sub_solver, epsilon_tilde, label_cap)
    solution = res.solution
    if tie_break == "adversarial":
        solution = _adversarial_pick(instance, agg, res.value, mode, optima,
                                     adversarial_cap)
    if mode == "minmax":
        achieved = evaluate_max(instance, solution).value
    else:
        achieved = evaluate_generalized_regret(instance, solution, optima)
    certificate = Certificate(
        guarantee_factor=alpha * agg.factor,
        achieved_value=achieved,
        lower_bound=res.value / alpha,
        level_used=agg.level,
        scheme=scheme,
        sub_solver_alpha=alpha,
    )
    return solution, certificate


def approx_minmax(instance: Instance, epsilon: float,
                  scheme: str = "consecutive", sub_solver: str = "fptas",
                  epsilon_tilde: float = 1.0, level: int | None = None,
                  tie_break: str = "lexicographic",
                  adversarial_cap: int = DEFAULT_ADVERSARIAL_CAP,
                  label_cap: int | None = None,
                  ) -> tuple[Solution, Certificate]:
    """Approximate the min-max problem within a certified factor.

    With the default factor-2 FPTAS sub-solver and a power-of-two scenario
    count the certified factor is at most ``epsilon * K``. ``level``
    overrides the automatic level choice; ``tie_break="adversarial"``
    returns the worst optimal-looking solution instead of the solver's
    deterministic pick (see :func:`_adversarial_pick`).
    """
    return _pipeline(instance, epsilon, scheme, "minmax", sub_solver,
                     epsilon_tilde, level, tie_break, adversarial_cap,
                     label_cap)


def approx_regret(instance: Instance, epsilon: float,
                  scheme: str = "consecutive", sub_solver: str = "fptas",
                  epsilon_tilde: float = 1.0, level: int | None = None,
                  tie_break: str = "lexicographic",
                  adversarial_cap: int = DEFAULT_ADVERSARIAL_CAP,
                  label_cap: int | None = None,
                  ) -> tuple[Solution, Certificate]:
    """Approximate min-max regret within a certified factor.

    Per-scenario optima are computed nominally, aggregated into offsets
    alongside the scenarios, and the generalized regret problem is solved
    on the reduced set; the certificate covers the *true* regret objective.
    """
    return _pipeline(instance, epsilon, scheme, "regret", sub_solver,
                     epsilon_tilde, level, tie_break, adversarial_cap,
                     label_cap)
