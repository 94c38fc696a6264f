"""Centipede-game semantics on top of the quantum protocol.

A measured bitstring is read left to right as rounds 1..n; the game stops at
the first defection (first ``1`` bit). Payoffs are attached to those outcomes
through a :class:`PayoffSchedule`.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .protocol import OutcomeProbabilities, StrategyProfile, final_state, run_protocol
from .sim import MeasurementCounts, StateVector, sample_measurements


@dataclass(frozen=True)
class PayoffPair:
    player1: float
    player2: float

    def __iter__(self):
        yield self.player1
        yield self.player2

    def __getitem__(self, player: int) -> float:
        """Index by player number (1 or 2)."""
        if player == 1:
            return self.player1
        if player == 2:
            return self.player2
        raise IndexError(f"no player {player}")


@dataclass(frozen=True)
class DefectAt:
    round: int


@dataclass(frozen=True)
class FullCooperation:
    pass


Outcome = Union[DefectAt, FullCooperation]


@dataclass(frozen=True)
class PayoffSchedule:
    defect_payoff: tuple[PayoffPair, ...]
    cooperate_payoff: PayoffPair

    def __post_init__(self):
        if len(self.defect_payoff) < 2:
            raise ValueError("a centipede schedule needs at least 2 rounds")
        pairs = tuple(PayoffPair(float(p[0]), float(p[1])) for p in self.defect_payoff)
        coop = PayoffPair(float(self.cooperate_payoff[0]), float(self.cooperate_payoff[1]))
        if not all(np.isfinite(v) for pair in (*pairs, coop) for v in pair):
            raise ValueError("payoffs must be finite")
        object.__setattr__(self, "defect_payoff", pairs)
        object.__setattr__(self, "cooperate_payoff", coop)

    @property
    def n_rounds(self) -> int:
        return len(self.defect_payoff)

    @classmethod
    def default(cls) -> PayoffSchedule:
        return cls(((1, 0), (0, 2), (3, 1)), (2, 2))

    def to_dict(self) -> dict:
        return {
            "rounds": self.n_rounds,
            "defect": [[p.player1, p.player2] for p in self.defect_payoff],
            "cooperate": [self.cooperate_payoff.player1, self.cooperate_payoff.player2],
        }

    @classmethod
    def from_dict(cls, data: dict) -> PayoffSchedule:
        try:
            rounds = int(data["rounds"])
            defect = [tuple(p) for p in data["defect"]]
            coop = tuple(data["cooperate"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed payoff schedule: {exc}") from exc
        if len(defect) != rounds:
            raise ValueError(f"'rounds' is {rounds} but {len(defect)} defect payoffs given")
        if any(len(p) != 2 for p in defect) or len(coop) != 2:
            raise ValueError("every payoff must be a [player1, player2] pair")
        return cls(tuple(defect), coop)

    @classmethod
    def load(cls, path: str | Path) -> PayoffSchedule:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def digest(self) -> str:
        """Short sha256 of the canonical JSON form."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def classify(bitstring: str, n_rounds: int | None = None) -> Outcome:
    if n_rounds is not None and len(bitstring) != n_rounds:
        raise ValueError(f"bitstring {bitstring!r} does not have {n_rounds} bits")
    if set(bitstring) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {bitstring!r}")
    first = bitstring.find("1")
    return FullCooperation() if first < 0 else DefectAt(first + 1)


def payoff(outcome: Outcome, schedule: PayoffSchedule) -> PayoffPair:
    if isinstance(outcome, FullCooperation):
        return schedule.cooperate_payoff
    if not 1 <= outcome.round <= schedule.n_rounds:
        raise ValueError(f"round {outcome.round} outside 1..{schedule.n_rounds}")
    return schedule.defect_payoff[outcome.round - 1]


def _outcome_slots(n: int) -> np.ndarray:
    """For each basis index, the defection round (1..n) or 0 for full cooperation."""
    idx = np.arange(2**n)
    _, bit_length = np.frexp(idx)
    return np.where(idx > 0, n - bit_length + 1, 0)


def outcome_distribution(state: StateVector) -> OutcomeProbabilities:
    n = state.n_qubits
    slots = _outcome_slots(n)
    mass = np.bincount(slots, weights=state.probabilities, minlength=n + 1)
    return OutcomeProbabilities(tuple(float(m) for m in mass[1:]), float(mass[0]))


def _payoff_table(schedule: PayoffSchedule) -> np.ndarray:
    """(n+1, 2) array: row 0 is full cooperation, row r is defection at round r."""
    rows = [tuple(schedule.cooperate_payoff)] + [tuple(p) for p in schedule.defect_payoff]
    return np.array(rows, dtype=float)


def payoffs_from_state(state: StateVector, schedule: PayoffSchedule) -> PayoffPair:
    if state.n_qubits != schedule.n_rounds:
        raise ValueError(f"{state.n_qubits}-round state vs {schedule.n_rounds}-round schedule")
    dist = outcome_distribution(state)
    weights = np.array([dist.p_full_cooperation, *dist.p_defect_round])
    p1, p2 = weights @ _payoff_table(schedule)
    return PayoffPair(float(p1), float(p2))


def expected_payoffs_exact(
    profile: StrategyProfile, schedule: PayoffSchedule | None = None
) -> PayoffPair:
    schedule = schedule or PayoffSchedule.default()
    if profile.n_rounds != schedule.n_rounds:
        raise ValueError(f"{profile.n_rounds}-round profile vs {schedule.n_rounds}-round schedule")
    return payoffs_from_state(run_protocol(profile), schedule)


def payoffs_at(thetas, schedule: PayoffSchedule | None = None) -> PayoffPair:
    """Exact payoffs at raw angles (phi = 0), skipping profile validation."""
    schedule = schedule or PayoffSchedule.default()
    return payoffs_from_state(final_state(thetas), schedule)


def payoffs_from_counts(counts: MeasurementCounts, schedule: PayoffSchedule) -> PayoffPair:
    total = np.zeros(2)
    for bits, c in counts.counts.items():
        total += c * np.array(tuple(payoff(classify(bits, schedule.n_rounds), schedule)))
    p1, p2 = total / counts.shots
    return PayoffPair(float(p1), float(p2))


def expected_payoffs_mc(
    profile: StrategyProfile,
    schedule: PayoffSchedule | None = None,
    shots: int = 1000,
    seed: int = 42,
) -> PayoffPair:
    schedule = schedule or PayoffSchedule.default()
    if profile.n_rounds != schedule.n_rounds:
        raise ValueError(f"{profile.n_rounds}-round profile vs {schedule.n_rounds}-round schedule")
    counts = sample_measurements(run_protocol(profile), shots, seed)
    return payoffs_from_counts(counts, schedule)


def payoff_variance(profile: StrategyProfile, schedule: PayoffSchedule | None = None) -> PayoffPair:
    """Exact single-shot variance of each player's payoff."""
    schedule = schedule or PayoffSchedule.default()
    dist = outcome_distribution(run_protocol(profile))
    w = np.array([dist.p_full_cooperation, *dist.p_defect_round])
    table = _payoff_table(schedule)
    mean = w @ table
    var = w @ (table - mean) ** 2
    return PayoffPair(float(var[0]), float(var[1]))


def mover(round_: int) -> int:
    return 1 if round_ % 2 == 1 else 2


def backward_induction(schedule: PayoffSchedule | None = None) -> tuple[int | None, PayoffPair]:
    """Classical subgame-perfect solution; ties resolve to cooperation.

    Returns the first round at which someone defects along the equilibrium
    path (``None`` if nobody does) and the resulting payoffs.
    """
    schedule = schedule or PayoffSchedule.default()
    value = schedule.cooperate_payoff
    defection_round = None
    for r in range(schedule.n_rounds, 0, -1):
        take = schedule.defect_payoff[r - 1]
        who = mover(r)
        if take[who] > value[who]:
            value = take
            defection_round = r
    return defection_round, value
