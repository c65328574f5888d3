"""Sparse actuation scheduling for finite-horizon LQR.

Pick at most d time instants at which a linear plant may be actuated,
greedily, and bound how far the result can be from the best possible
schedule — before ever running the optimizer.  The package provides the
closed-form schedule cost, the greedy scheduler, spectral performance
certificates, exact small-horizon oracles, baseline policies, and a CLI
with reproducible benchmark experiments.
"""

from .baselines import PolicyResult, first_d, random_best
from .errors import (DefinitenessError, DimensionMismatchError,
                     EnumerationLimitError, InstanceParseError, NumericError,
                     UnsupportedInitError)
from .generate import benchmark_instance, random_instance, random_schedule
from .greedy import GreedyTrace, greedy_lqr_schedule, greedy_schedule
from .guarantees import (Certificate, brute_force_optimum, certificate,
                         exact_metrics, guarantee_factor)
from .lifted import (LiftedSystem, build_lifted, k_atom, pd_inv_sqrt,
                     psd_sqrt, selection_matrix, time_selector)
from .lqr_cost import (CostModel, ScheduleReport, build_cost_model, cost,
                       evaluate_schedule, marginal_gain, normalized_objective,
                       optimal_inputs, simulate)
from .model import (Instance, Schedule, as_schedule, instance_from_dict,
                    instance_to_dict, load_instance, save_instance, validate)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CostModel",
    "DefinitenessError",
    "DimensionMismatchError",
    "EnumerationLimitError",
    "GreedyTrace",
    "Instance",
    "InstanceParseError",
    "LiftedSystem",
    "NumericError",
    "PolicyResult",
    "Schedule",
    "ScheduleReport",
    "UnsupportedInitError",
    "as_schedule",
    "benchmark_instance",
    "brute_force_optimum",
    "build_cost_model",
    "build_lifted",
    "certificate",
    "cost",
    "evaluate_schedule",
    "exact_metrics",
    "first_d",
    "greedy_lqr_schedule",
    "greedy_schedule",
    "guarantee_factor",
    "instance_from_dict",
    "instance_to_dict",
    "k_atom",
    "load_instance",
    "marginal_gain",
    "normalized_objective",
    "optimal_inputs",
    "pd_inv_sqrt",
    "psd_sqrt",
    "random_best",
    "random_instance",
    "random_schedule",
    "save_instance",
    "selection_matrix",
    "simulate",
    "time_selector",
    "validate",
]
