"""Simulator, bound calculator, and verification harness for evolutionary
algorithms that adapt their population size by doubling and halving."""

from .bounds import (
    BoundReport,
    LevelProfile,
    Lemma1Bounds,
    base_b_adjust,
    compute_bound_report,
    lemma1_bounds,
    level_profile_preset,
    lower_bound_tight,
    migration_adjusted_profile,
    upper_bound_mumax,
    upper_bound_non_oblivious,
    upper_bound_scheme_a,
    upper_bound_scheme_b,
)
from .engine import (
    GenerationView,
    IslandState,
    RunConfig,
    RunRecord,
    run,
    run_batch,
    run_one_plus_lambda,
)
from .fitness import FitnessFunction, attainable_fitness_values, standard_mutation
from .harness import (
    CellSummary,
    ExperimentSpec,
    TailCheckSpec,
    compare_schemes,
    run_experiment,
    scaling_fit,
    verify_peak_bound,
    verify_tail_bounds,
)
from .schemes import ConfigurationError, GenerationOutcome, UpdatePolicy

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CellSummary",
    "ConfigurationError",
    "ExperimentSpec",
    "FitnessFunction",
    "GenerationOutcome",
    "GenerationView",
    "IslandState",
    "Lemma1Bounds",
    "LevelProfile",
    "RunConfig",
    "RunRecord",
    "TailCheckSpec",
    "UpdatePolicy",
    "attainable_fitness_values",
    "base_b_adjust",
    "compare_schemes",
    "compute_bound_report",
    "lemma1_bounds",
    "level_profile_preset",
    "lower_bound_tight",
    "migration_adjusted_profile",
    "run",
    "run_batch",
    "run_experiment",
    "run_one_plus_lambda",
    "scaling_fit",
    "standard_mutation",
    "upper_bound_mumax",
    "upper_bound_non_oblivious",
    "upper_bound_scheme_a",
    "upper_bound_scheme_b",
    "verify_peak_bound",
    "verify_tail_bounds",
    "__version__",
]
