"""Secrecy-energy-efficient jamming-UAV trajectory / antenna / beam design."""

from .baselines import METHODS, run_method
from .driver import AOConfig, AOResult, initial_state, run
from .metrics import SeeEvaluator, SolutionState, see_objective
from .scenario import Scenario, load_scenario, scenario_from_dict

__version__ = "0.1.0"

__all__ = [
    "AOConfig",
    "AOResult",
    "METHODS",
    "Scenario",
    "SeeEvaluator",
    "SolutionState",
    "initial_state",
    "load_scenario",
    "run",
    "run_method",
    "scenario_from_dict",
    "see_objective",
    "__version__",
]
