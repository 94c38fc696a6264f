"""Dense statevector simulator.

Qubits are numbered from 1. Qubit 1 is the most significant bit of the basis
index, so the amplitude of ``|b1 b2 ... bn>`` lives at
``b1*2**(n-1) + ... + bn``. Gate functions return new states and never mutate
their input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 24

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
IDENTITY = np.eye(2, dtype=complex)


class SizeError(ValueError):
    """Raised when a register size is outside the supported range."""


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.n_qubits,):
            raise SizeError(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} qubits, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> StateVector:
        amps = np.asarray(amplitudes, dtype=complex)
        n = int(round(np.log2(amps.size))) if amps.size else 0
        return cls(n, amps)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, bits: str) -> complex:
        """Amplitude of the basis state written as a bitstring, e.g. ``"011"``."""
        if len(bits) != self.n_qubits:
            raise ValueError(f"bitstring {bits!r} does not have {self.n_qubits} bits")
        return complex(self.amplitudes[int(bits, 2)])

    def __repr__(self) -> str:
        return f"StateVector({format_ket(self)})"


@dataclass
class MeasurementCounts:
    counts: dict[str, int]
    shots: int = field(default=0)

    def __post_init__(self):
        total = sum(self.counts.values())
        if self.shots == 0:
            self.shots = total
        if total != self.shots:
            raise ValueError(f"counts sum to {total}, expected {self.shots}")

    def frequency(self, bits: str) -> float:
        return self.counts.get(bits, 0) / self.shots


def _check_qubit(n_qubits: int, qubit: int) -> None:
    if not 1 <= qubit <= n_qubits:
        raise IndexError(f"qubit index {qubit} out of range 1..{n_qubits}")


def make_zero_state(n: int) -> StateVector:
    if not 1 <= n <= MAX_QUBITS:
        raise SizeError(f"number of qubits must be in 1..{MAX_QUBITS}, got {n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1.0
    return StateVector(n, amps)


def basis_state(bits: str) -> StateVector:
    n = len(bits)
    if not 1 <= n <= MAX_QUBITS:
        raise SizeError(f"number of qubits must be in 1..{MAX_QUBITS}, got {n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector(n, amps)


def _as_tensor(state: StateVector) -> np.ndarray:
    return state.amplitudes.reshape((2,) * state.n_qubits)


def apply_single_qubit(state: StateVector, qubit_index: int, u) -> StateVector:
    """Apply the 2x2 matrix ``u`` to one qubit (identity on the rest)."""
    _check_qubit(state.n_qubits, qubit_index)
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"single-qubit gate must be 2x2, got {u.shape}")
    axis = qubit_index - 1
    psi = np.tensordot(u, _as_tensor(state), axes=([1], [axis]))
    psi = np.moveaxis(psi, 0, axis)
    return StateVector(state.n_qubits, psi.reshape(-1))


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    _check_qubit(state.n_qubits, control)
    _check_qubit(state.n_qubits, target)
    if control == target:
        raise ValueError("control and target must differ")
    psi = _as_tensor(state).copy()
    sel = [slice(None)] * state.n_qubits
    sel[control - 1] = 1
    sub = psi[tuple(sel)]
    # target axis shifts down by one once the control axis is removed
    t_axis = target - 1 if target < control else target - 2
    psi[tuple(sel)] = np.flip(sub, axis=t_axis)
    return StateVector(state.n_qubits, psi.reshape(-1))


def apply_phase_s(state: StateVector, qubit_index: int, dagger: bool = False) -> StateVector:
    phase = -1j if dagger else 1j
    return apply_single_qubit(state, qubit_index, np.diag([1.0, phase]))


def rz(angle: float) -> np.ndarray:
    """``exp(-i*angle*Z/2)``."""
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def apply_pauli_x_string_exponential(state: StateVector, angle: float) -> StateVector:
    """Apply ``exp(i*(angle/2)*X⊗...⊗X)`` to every qubit of ``state``.

    X on all qubits maps index ``k`` to its bit complement ``2**n - 1 - k``,
    which is the reversed amplitude array, so the operator is a pairwise mix
    of each amplitude with its complement partner.
    """
    a = state.amplitudes
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return StateVector(state.n_qubits, c * a + 1j * s * a[::-1])


def sample_measurements(state: StateVector, shots: int, seed: int) -> MeasurementCounts:
    """Draw ``shots`` computational-basis measurements.

    Uses numpy's PCG64 generator seeded with ``seed``; each shot is an i.i.d.
    draw from the Born distribution, so equal (state, shots, seed) always give
    equal counts.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p = state.probabilities
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    outcomes = rng.choice(p.size, size=shots, p=p)
    hist = np.bincount(outcomes, minlength=p.size)
    n = state.n_qubits
    counts = {format(k, f"0{n}b"): int(c) for k, c in enumerate(hist) if c}
    return MeasurementCounts(counts, shots)


def fit_global_phase(a: StateVector, b: StateVector) -> complex:
    """Unit-modulus ``c`` best aligning ``a ≈ c*b``, fitted on b's largest amplitude.

    Returns 0 when no such phase can be read off (a vanishes where b peaks).
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError("states have different sizes")
    k = int(np.argmax(np.abs(b.amplitudes)))
    ratio = a.amplitudes[k] / b.amplitudes[k] if b.amplitudes[k] != 0 else 0
    if abs(ratio) == 0:
        return 0j
    return complex(ratio / abs(ratio))


def equal_up_to_global_phase(a: StateVector, b: StateVector, tol: float = 1e-12) -> bool:
    c = fit_global_phase(a, b)
    if c == 0:
        return bool(np.linalg.norm(a.amplitudes) <= tol and np.linalg.norm(b.amplitudes) <= tol)
    return bool(np.linalg.norm(a.amplitudes - c * b.amplitudes) <= tol)


def _format_coefficient(z: complex, digits: int = 6) -> str:
    re = round(z.real, digits) + 0.0
    im = round(z.imag, digits) + 0.0
    if im == 0:
        return "" if re == 1 else "-" if re == -1 else f"{re:g}"
    if re == 0:
        return "i" if im == 1 else "-i" if im == -1 else f"{im:g}i"
    return f"({re:g}{im:+g}i)"


def format_ket(state: StateVector, tol: float = 1e-9) -> str:
    """Human-readable ket expansion, e.g. ``i|000>`` or ``0.707107|000> + 0.707107i|011>``."""
    n = state.n_qubits
    terms = []
    for k, amp in enumerate(state.amplitudes):
        if abs(amp) > tol:
            terms.append(f"{_format_coefficient(complex(amp))}|{k:0{n}b}>")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out
