"""Hedge dynamics on symmetric bimatrix games and numerical checks of its error bounds."""

__version__ = "0.1.0"

from .game_core import (
    ApproximationReport,
    Decomposition,
    GameError,
    MixedStrategy,
    SymmetricGame,
    approximation_error,
    best_response,
    decompose,
    normalize,
    payoff_vector,
)
from .generators import GeneratorSpec, generate
from .hedge import HedgeState, Trajectory, TrajectoryRecord, advance, hedge_step, run_trajectory
from .oracle import EquilibriumSet, support_enumeration, verify
from .schedule import FptasSchedule, build_schedule, iterations_for_theta, mylove_bound

__all__ = [
    "ApproximationReport", "Decomposition", "GameError", "MixedStrategy", "SymmetricGame",
    "approximation_error", "best_response", "decompose", "normalize", "payoff_vector",
    "GeneratorSpec", "generate", "HedgeState", "Trajectory", "TrajectoryRecord", "advance",
    "hedge_step", "run_trajectory", "EquilibriumSet", "support_enumeration", "verify",
    "FptasSchedule", "build_schedule", "iterations_for_theta", "mylove_bound",
]
