"""Strategy-space exploration for the 3-round quantum centipede game.

Covers the 18-point payoff sweep, Nash certification by exhaustive
best-response search on a deviation grid, and the analytic payoff gradient
with a finite-difference cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .game import (
    PayoffPair,
    PayoffSchedule,
    expected_payoffs_exact,
    expected_payoffs_mc,
    payoffs_at,
)
from .protocol import StrategyProfile

PI = np.pi

# Row order of the published sweep: theta3 slowest, theta1 fastest,
# each cycling through 0, pi, pi/2 (theta3 only 0, pi).
_GRID_12 = (0.0, PI, PI / 2)
_GRID_3 = (0.0, PI)
TABLE1_GRID: tuple[tuple[float, float, float], ...] = tuple(
    (t1, t2, t3) for t3 in _GRID_3 for t2 in _GRID_12 for t1 in _GRID_12
)


@dataclass(frozen=True)
class SweepRow:
    thetas: tuple[float, float, float]
    exact_payoffs: PayoffPair
    mc_payoffs: PayoffPair
    shots: int
    seed: int


@dataclass(frozen=True)
class EquilibriumReport:
    profile: StrategyProfile
    is_nash: bool
    best_deviation_gain: tuple[float, float]
    deviation_grid_size: int
    best_deviation: tuple[tuple[float, ...], tuple[float, ...]] | None = None


@dataclass(frozen=True)
class GradientVector:
    d1_dtheta1: float
    d1_dtheta2: float
    d1_dtheta3: float
    d2_dtheta1: float
    d2_dtheta2: float
    d2_dtheta3: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                self.d1_dtheta1,
                self.d1_dtheta2,
                self.d1_dtheta3,
                self.d2_dtheta1,
                self.d2_dtheta2,
                self.d2_dtheta3,
            ]
        )


def sweep_table1(
    shots: int = 1000, seed: int = 42, schedule: PayoffSchedule | None = None
) -> list[SweepRow]:
    """Exact and sampled payoffs at every point of the 18-profile grid.

    Row ``k`` samples with seed ``seed + k`` so rows draw independent streams
    while the whole table stays reproducible from one seed.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    schedule = schedule or PayoffSchedule.default()
    rows = []
    for k, thetas in enumerate(TABLE1_GRID):
        profile = StrategyProfile(thetas)
        rows.append(
            SweepRow(
                thetas=thetas,
                exact_payoffs=expected_payoffs_exact(profile, schedule),
                mc_payoffs=expected_payoffs_mc(profile, schedule, shots, seed + k),
                shots=shots,
                seed=seed + k,
            )
        )
    return rows


def _best_gain(
    profile: StrategyProfile,
    player: int,
    values_per_round: Sequence[Sequence[float]],
    schedule: PayoffSchedule,
    baseline: float,
) -> tuple[float, tuple[float, ...]]:
    owned = profile.rounds_of(player)
    best, arg = -np.inf, profile.thetas
    thetas = list(profile.thetas)
    for combo in itertools.product(*(values_per_round[r - 1] for r in owned)):
        for r, v in zip(owned, combo):
            thetas[r - 1] = v
        value = payoffs_at(thetas, schedule)[player]
        if value - baseline > best:
            best, arg = value - baseline, tuple(thetas)
    return float(best), arg


def certify_nash(
    profile: StrategyProfile,
    deviation_grid: int = 25,
    tol: float = 1e-9,
    schedule: PayoffSchedule | None = None,
    deviation_values: Sequence[Sequence[float]] | None = None,
) -> EquilibriumReport:
    """Check that neither player gains by unilaterally changing their rounds.

    Each player deviates jointly over all of their own rounds (player 1: odd
    rounds, player 2: even rounds) while the opponent's angles stay fixed.
    By default every round's angle ranges over ``deviation_grid`` evenly
    spaced points in [0, pi]; ``deviation_values`` overrides this with an
    explicit value list per round.
    """
    schedule = schedule or PayoffSchedule.default()
    if profile.n_rounds != schedule.n_rounds:
        raise ValueError(f"{profile.n_rounds}-round profile vs {schedule.n_rounds}-round schedule")
    if deviation_values is None:
        if deviation_grid < 2:
            raise ValueError("deviation_grid must be >= 2")
        grid = tuple(np.linspace(0.0, PI, deviation_grid))
        deviation_values = [grid] * profile.n_rounds
        size = deviation_grid
    else:
        if len(deviation_values) != profile.n_rounds:
            raise ValueError("need one deviation value list per round")
        size = max(len(v) for v in deviation_values)

    current = expected_payoffs_exact(profile, schedule)
    gain1, dev1 = _best_gain(profile, 1, deviation_values, schedule, current.player1)
    gain2, dev2 = _best_gain(profile, 2, deviation_values, schedule, current.player2)
    return EquilibriumReport(
        profile=profile,
        is_nash=gain1 <= tol and gain2 <= tol,
        best_deviation_gain=(gain1, gain2),
        deviation_grid_size=size,
        best_deviation=(dev1, dev2),
    )


def payoff_gradient_analytic(profile: StrategyProfile | Sequence[float]) -> GradientVector:
    """Closed-form partials of both payoffs for the default 3-round schedule (phi = 0)."""
    t1, t2, t3 = profile.thetas if isinstance(profile, StrategyProfile) else profile
    c1, s1 = np.cos(t1 / 2), np.sin(t1 / 2)
    c2, s2 = np.cos(t2 / 2), np.sin(t2 / 2)
    c3, s3 = np.cos(t3 / 2), np.sin(t3 / 2)
    return GradientVector(
        d1_dtheta1=2 * c1 * s1 * (-(c2**2) * c3**2 + s2**2 * s3**2),
        d1_dtheta2=-c2 * s2 * np.cos(t1),
        d1_dtheta3=c3 * s3 * (c2**2 - s2**2 - 2 * c1**2 * c2**2 + 2 * s1**2 * s2**2),
        # payoff 2 has no theta1 dependence
        d2_dtheta1=0.0,
        d2_dtheta2=-2 * c2 * s2 * np.cos(t3),
        d2_dtheta3=-2 * c3 * s3 * np.cos(t2),
    )


def payoff_gradient_fd(
    profile: StrategyProfile | Sequence[float],
    h: float = 1e-5,
    schedule: PayoffSchedule | None = None,
) -> GradientVector:
    """Central differences of the simulated exact payoffs."""
    if not 0 < h <= 1e-3:
        raise ValueError(f"step h must be in (0, 1e-3], got {h}")
    thetas = np.array(profile.thetas if isinstance(profile, StrategyProfile) else profile, dtype=float)
    if thetas.size != 3:
        raise ValueError("gradient is defined for 3-round profiles")
    d = np.zeros((2, 3))
    for k in range(3):
        step = np.zeros(3)
        step[k] = h
        hi = np.array(tuple(payoffs_at(thetas + step, schedule)))
        lo = np.array(tuple(payoffs_at(thetas - step, schedule)))
        d[:, k] = (hi - lo) / (2 * h)
    return GradientVector(*d[0], *d[1])
