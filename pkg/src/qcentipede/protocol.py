"""Entangle / rotate / disentangle pipeline for the quantized centipede game.

One qubit per round: ``|0>`` is cooperate, ``|1>`` is defect. The entangler
is the maximally entangling operator ``J = (I + i X^{⊗n}) / sqrt(2)``, each
round's qubit receives its strategy unitary, and ``J†`` undoes the
entanglement before measurement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, NamedTuple, Sequence

import numpy as np

from .sim import (
    HADAMARD,
    StateVector,
    apply_cnot,
    apply_pauli_x_string_exponential,
    apply_single_qubit,
    make_zero_state,
    rz,
)

Backend = Literal["matrix", "circuit"]

MAX_ENTANGLEMENT = np.pi / 2

# strategy angles outside [0, pi] by more than this are rejected
_ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class StrategyProfile:
    """Per-round rotation angles. Player 1 owns odd rounds, player 2 even rounds."""

    thetas: tuple[float, ...]
    phis: tuple[float, ...] = field(default=())

    def __post_init__(self):
        thetas = tuple(float(t) for t in self.thetas)
        phis = tuple(float(p) for p in self.phis) if self.phis else (0.0,) * len(thetas)
        if len(thetas) < 1:
            raise ValueError("a profile needs at least one round")
        if len(phis) != len(thetas):
            raise ValueError(f"{len(thetas)} thetas but {len(phis)} phis")
        for t in thetas:
            if not -_ANGLE_SLACK <= t <= np.pi + _ANGLE_SLACK:
                raise ValueError(f"theta {t!r} outside [0, pi]")
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "phis", phis)

    @property
    def n_rounds(self) -> int:
        return len(self.thetas)

    def rounds_of(self, player: int) -> list[int]:
        """1-based rounds controlled by ``player`` (1 or 2)."""
        return [r for r in range(1, self.n_rounds + 1) if (r % 2 == 1) == (player == 1)]


@dataclass(frozen=True)
class AlphaBeta:
    alpha: float
    beta: float

    @classmethod
    def from_theta(cls, theta: float) -> AlphaBeta:
        return cls(float(np.cos(theta / 2)), float(np.sin(theta / 2)))


@dataclass(frozen=True)
class OutcomeProbabilities:
    """Probability the game ends by defection at each round, plus full cooperation."""

    p_defect_round: tuple[float, ...]
    p_full_cooperation: float

    def total(self) -> float:
        return float(sum(self.p_defect_round) + self.p_full_cooperation)


def strategy_unitary(theta: float, phi: float = 0.0) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [[np.exp(1j * phi) * c, s], [-s, np.exp(-1j * phi) * c]],
        dtype=complex,
    )


def entangler_matrix_apply(state: StateVector) -> StateVector:
    if state.n_qubits < 2:
        raise ValueError("the entangler needs at least two qubits")
    return apply_pauli_x_string_exponential(state, MAX_ENTANGLEMENT)


def disentangler_matrix_apply(state: StateVector) -> StateVector:
    if state.n_qubits < 2:
        raise ValueError("the entangler needs at least two qubits")
    return apply_pauli_x_string_exponential(state, -MAX_ENTANGLEMENT)


class Gate(NamedTuple):
    name: Literal["h", "cx", "rz"]
    qubits: tuple[int, ...]
    angle: float = 0.0


def entangler_gate_circuit(n: int) -> list[Gate]:
    """Gate list equal to ``(I + i X^{⊗n}) / sqrt(2)``.

    Hadamards turn the X-string into a Z-string, the CNOT ladder folds the
    Z-string parity onto the last qubit, where ``Rz(-pi/2) = exp(i pi/4 Z)``
    applies the phase; the ladder and Hadamards are then undone.
    """
    if n < 2:
        raise ValueError("the entangler needs at least two qubits")
    hadamards = [Gate("h", (q,)) for q in range(1, n + 1)]
    ladder = [Gate("cx", (q, q + 1)) for q in range(1, n)]
    return [
        *hadamards,
        *ladder,
        Gate("rz", (n,), -MAX_ENTANGLEMENT),
        *reversed(ladder),
        *hadamards,
    ]


def inverse_circuit(gates: Sequence[Gate]) -> list[Gate]:
    out = []
    for g in reversed(gates):
        out.append(g._replace(angle=-g.angle) if g.name == "rz" else g)
    return out


def apply_circuit(state: StateVector, gates: Sequence[Gate]) -> StateVector:
    for g in gates:
        if g.name == "h":
            state = apply_single_qubit(state, g.qubits[0], HADAMARD)
        elif g.name == "cx":
            state = apply_cnot(state, *g.qubits)
        elif g.name == "rz":
            state = apply_single_qubit(state, g.qubits[0], rz(g.angle))
        else:
            raise ValueError(f"unknown gate {g.name!r}")
    return state


def final_state(
    thetas: Sequence[float],
    phis: Sequence[float] | None = None,
    backend: Backend = "matrix",
) -> StateVector:
    """Run the protocol on raw angles (no range validation)."""
    n = len(thetas)
    if phis is None:
        phis = [0.0] * n
    state = make_zero_state(n)
    if backend == "matrix":
        state = entangler_matrix_apply(state)
    elif backend == "circuit":
        circuit = entangler_gate_circuit(n)
        state = apply_circuit(state, circuit)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    for k, (theta, phi) in enumerate(zip(thetas, phis), start=1):
        state = apply_single_qubit(state, k, strategy_unitary(theta, phi))
    if backend == "matrix":
        return disentangler_matrix_apply(state)
    return apply_circuit(state, inverse_circuit(circuit))


def run_protocol(profile: StrategyProfile, backend: Backend = "matrix") -> StateVector:
    return final_state(profile.thetas, profile.phis, backend)


def closed_form_amplitudes(theta1: float, theta2: float, theta3: float) -> np.ndarray:
    """Final 3-round amplitudes at phi = 0, indexed by the basis bitstring."""
    a1, b1 = np.cos(theta1 / 2), np.sin(theta1 / 2)
    a2, b2 = np.cos(theta2 / 2), np.sin(theta2 / 2)
    a3, b3 = np.cos(theta3 / 2), np.sin(theta3 / 2)
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = a1 * a2 * a3 + 1j * b1 * b2 * b3
    amps[0b011] = a1 * b2 * b3 + 1j * b1 * a2 * a3
    amps[0b101] = b1 * a2 * b3 + 1j * a1 * b2 * a3
    amps[0b110] = b1 * b2 * a3 + 1j * a1 * a2 * b3
    return amps


def outcome_probabilities_closed_form(theta1: float, theta2: float, theta3: float) -> OutcomeProbabilities:
    a1, b1 = np.cos(theta1 / 2), np.sin(theta1 / 2)
    a2, b2 = np.cos(theta2 / 2), np.sin(theta2 / 2)
    a3, b3 = np.cos(theta3 / 2), np.sin(theta3 / 2)
    p1 = (b1 * a2 * b3) ** 2 + (a1 * b2 * a3) ** 2 + (b1 * b2 * a3) ** 2 + (a1 * a2 * b3) ** 2
    p2 = (a1 * b2 * b3) ** 2 + (b1 * a2 * a3) ** 2
    p3c = (a1 * a2 * a3) ** 2 + (b1 * b2 * b3) ** 2
    return OutcomeProbabilities((float(p1), float(p2), 0.0), float(p3c))
