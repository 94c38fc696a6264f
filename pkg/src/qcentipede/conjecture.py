"""Round-count experiments on the quantized centipede game.

Two properties are measured for each number of rounds n, with no payoff
schedule involved:

* collapse: the probability that the game ends by defection in the last
  round stays at zero for every strategy profile;
* corner degeneracy: the all-cooperate profile (all 0) and the all-defect
  profile (all pi) produce the same state up to a global phase.

Both are recorded as evidence, not assumed. For this quantization they hold
at odd n and fail at even n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .game import outcome_distribution
from .protocol import Backend, StrategyProfile, final_state, run_protocol
from .sim import equal_up_to_global_phase, fit_global_phase

MIN_ROUNDS = 2
MAX_ROUNDS = 8


@dataclass(frozen=True)
class ConjectureReport:
    n_rounds: int
    samples: int
    max_last_round_defect_prob: float
    collapse_holds: bool
    corner_degenerate: bool
    corner_phase: complex
    witness_profile: StrategyProfile | None

    def to_dict(self) -> dict:
        return {
            "rounds": self.n_rounds,
            "samples": self.samples,
            "max_last_round_defect_prob": self.max_last_round_defect_prob,
            "collapse_holds": self.collapse_holds,
            "corner_degenerate": self.corner_degenerate,
            "witness": list(self.witness_profile.thetas) if self.witness_profile else None,
        }


def last_round_defect_probability(profile: StrategyProfile, backend: Backend = "matrix") -> float:
    state = run_protocol(profile, backend)
    return outcome_distribution(state).p_defect_round[-1]


def corner_degeneracy_check(n: int, tol: float = 1e-12) -> tuple[bool, complex]:
    """Compare the all-0 and all-pi final states.

    Returns whether they agree up to a global phase, and the phase ``c`` with
    ``state(all pi) = c * state(all 0)`` (0 when no phase fits).
    """
    if n < MIN_ROUNDS:
        raise ValueError(f"need at least {MIN_ROUNDS} rounds, got {n}")
    zeros = final_state([0.0] * n)
    pis = final_state([np.pi] * n)
    same = equal_up_to_global_phase(pis, zeros, tol)
    return same, fit_global_phase(pis, zeros) if same else 0j


def _report_for(n: int, samples: int, seed: int, tol: float) -> ConjectureReport:
    rng = np.random.default_rng([seed, n])
    random_profiles = rng.uniform(0.0, np.pi, size=(samples, n))
    corners = np.array(list(itertools.product((0.0, np.pi), repeat=n)))

    best, witness = -1.0, None
    for thetas in itertools.chain(random_profiles, corners):
        p = outcome_distribution(final_state(thetas)).p_defect_round[-1]
        if p > best:
            best, witness = p, thetas
    best = min(max(best, 0.0), 1.0)
    collapse = best < tol
    degenerate, phase = corner_degeneracy_check(n, tol)
    return ConjectureReport(
        n_rounds=n,
        samples=samples,
        max_last_round_defect_prob=float(best),
        collapse_holds=collapse,
        corner_degenerate=degenerate,
        corner_phase=phase,
        witness_profile=None if collapse else StrategyProfile(tuple(witness)),
    )


def conjecture_sweep(
    n_min: int, n_max: int, samples: int = 1000, seed: int = 42, tol: float = 1e-12
) -> list[ConjectureReport]:
    """One report per round count in ``n_min..n_max``.

    Each n draws its random profiles from a generator seeded with
    ``(seed, n)``, so a report does not depend on which range it was run in.
    All 2**n corner profiles are evaluated in addition to the random ones.
    """
    if not MIN_ROUNDS <= n_min <= n_max <= MAX_ROUNDS:
        raise ValueError(f"need {MIN_ROUNDS} <= n_min <= n_max <= {MAX_ROUNDS}, got {n_min}..{n_max}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    return [_report_for(n, samples, seed, tol) for n in range(n_min, n_max + 1)]
