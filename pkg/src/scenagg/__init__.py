"""Scenario aggregation for robust combinatorial optimization.

Min-max and min-max regret problems over discrete scenario sets, solved
exactly (Pareto label-setting), approximately (trimmed-label FPTAS), or via
midpoint-style scenario aggregation with certified approximation factors.
"""

from .aggregation import (
    AggregatedProblem,
    Partition,
    aggregate,
    aggregate_sweep,
    aggregate_to_level,
    consecutive_partition,
    similarity_matching,
)
from .approx import Certificate, approx_minmax, approx_regret, choose_level
from .core import (
    CapExceededError,
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
from .experiment import ExperimentConfig, ExperimentRow, run_experiment
from .instances import (
    InstanceFormatError,
    gen_example1,
    gen_layered,
    gen_tight,
    read_instance,
    write_instance,
)
from .labelops import BACKEND as KERNEL_BACKEND
from .solvers import (
    SolveResult,
    brute_force,
    exact_generalized_regret,
    exact_minmax,
    fptas_solve,
    nominal_solve,
    per_scenario_optima,
)

__version__ = "0.1.0"

__all__ = [
    "AggregatedProblem",
    "CapExceededError",
    "Certificate",
    "CostVector",
    "ExperimentConfig",
    "ExperimentRow",
    "Instance",
    "InstanceFormatError",
    "KERNEL_BACKEND",
    "LayeredPath",
    "ParallelChains",
    "Partition",
    "ScenarioSet",
    "Selection",
    "Solution",
    "SolveResult",
    "ValidationError",
    "aggregate",
    "aggregate_sweep",
    "aggregate_to_level",
    "approx_minmax",
    "approx_regret",
    "brute_force",
    "choose_level",
    "consecutive_partition",
    "evaluate_generalized_regret",
    "evaluate_max",
    "evaluate_scenario",
    "exact_generalized_regret",
    "exact_minmax",
    "fptas_solve",
    "gen_example1",
    "gen_layered",
    "gen_tight",
    "nominal_solve",
    "per_scenario_optima",
    "read_instance",
    "run_experiment",
    "similarity_matching",
    "write_instance",
]
