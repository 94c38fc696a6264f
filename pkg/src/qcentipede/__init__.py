"""Quantized multi-round centipede game: simulation, payoffs, equilibria."""

__version__ = "0.1.0"

from .game import (  # noqa: E402
    DefectAt,
    FullCooperation,
    PayoffPair,
    PayoffSchedule,
    backward_induction,
    classify,
    expected_payoffs_exact,
    expected_payoffs_mc,
    payoff,
)
from .protocol import StrategyProfile, run_protocol  # noqa: E402

__all__ = [
    "DefectAt",
    "FullCooperation",
    "PayoffPair",
    "PayoffSchedule",
    "StrategyProfile",
    "backward_induction",
    "classify",
    "expected_payoffs_exact",
    "expected_payoffs_mc",
    "payoff",
    "run_protocol",
]
