import itertools

import numpy as np
import pytest

from oracles import brute_force_final_state, brute_force_last_round_defect
from qcentipede.conjecture import (
    conjecture_sweep,
    corner_degeneracy_check,
    last_round_defect_probability,
)
from qcentipede.protocol import StrategyProfile

PI = np.pi


class TestLastRoundDefect:
    def test_three_rounds_vanishes(self):
        rng = np.random.default_rng(8)
        for t in rng.uniform(0, PI, size=(1000, 3)):
            assert last_round_defect_probability(StrategyProfile(tuple(t))) < 1e-12

    def test_two_rounds_half_half(self):
        p = last_round_defect_probability(StrategyProfile((PI / 2, PI / 2)))
        assert p == pytest.approx(0.25, abs=1e-12)
        assert brute_force_last_round_defect((PI / 2, PI / 2)) == pytest.approx(0.25, abs=1e-12)

    def test_five_rounds_vanishes(self):
        rng = np.random.default_rng(9)
        for t in rng.uniform(0, PI, size=(1000, 5)):
            assert last_round_defect_probability(StrategyProfile(tuple(t))) < 1e-12

    def test_circuit_backend(self):
        assert last_round_defect_probability(StrategyProfile((PI / 2, PI / 2)), "circuit") == pytest.approx(0.25)

    def test_four_round_amplitude(self):
        # amp(0001) = i * b1 b2 b3 a4, nonzero at (pi, pi, pi, 0)
        t = (PI, PI, PI, 0.0)
        assert abs(brute_force_final_state(t)[1]) == pytest.approx(1.0)
        assert last_round_defect_probability(StrategyProfile(t)) == pytest.approx(1.0)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_matches_oracle(self, n):
        for t in np.random.default_rng(n).uniform(0, PI, size=(50, n)):
            assert abs(last_round_defect_probability(StrategyProfile(tuple(t))) - brute_force_last_round_defect(t)) < 1e-12


class TestCorners:
    def test_three(self):
        same, phase = corner_degeneracy_check(3)
        assert same and abs(phase - 1j) < 1e-12

    def test_five(self):
        same, phase = corner_degeneracy_check(5)
        assert same and abs(phase - 1j) < 1e-12
        assert np.allclose(brute_force_final_state([PI] * 5), 1j * np.eye(32)[0], atol=1e-12)

    def test_two(self):
        same, _ = corner_degeneracy_check(2)
        assert not same
        assert abs(brute_force_final_state([PI, PI])[0]) < 1e-12

    def test_needs_two_rounds(self):
        with pytest.raises(ValueError):
            corner_degeneracy_check(1)


@pytest.fixture(scope="module")
def reports():
    return {r.n_rounds: r for r in conjecture_sweep(2, 8, samples=1000, seed=42)}


class TestSweep:
    def test_three(self, reports):
        r = reports[3]
        assert r.collapse_holds and r.corner_degenerate
        assert r.witness_profile is None

    def test_two(self, reports):
        r = reports[2]
        assert not r.collapse_holds
        assert r.max_last_round_defect_prob == pytest.approx(1.0)
        assert last_round_defect_probability(r.witness_profile) > 1e-12

    def test_four(self, reports):
        assert not reports[4].collapse_holds

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_odd_collapse(self, reports, n):
        assert reports[n].max_last_round_defect_prob < 1e-12

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_even_corner_witness(self, n):
        corners = list(itertools.product((0.0, PI), repeat=n))
        best = max(corners, key=brute_force_last_round_defect)
        assert brute_force_last_round_defect(best) >= 0.2

    def test_degeneracy_tracks_collapse(self, reports):
        # recorded observation for this quantization, n = 2..8
        for n, r in reports.items():
            assert r.corner_degenerate == r.collapse_holds == (n % 2 == 1)

    def test_reproducible(self, reports):
        again = {r.n_rounds: r for r in conjecture_sweep(2, 8, samples=1000, seed=42)}
        assert [again[n].to_dict() for n in range(2, 9)] == [reports[n].to_dict() for n in range(2, 9)]

    def test_independent_of_range(self, reports):
        (only_five,) = conjecture_sweep(5, 5, samples=1000, seed=42)
        assert only_five.to_dict() == reports[5].to_dict()

    def test_json_shape(self, reports):
        doc = reports[2].to_dict()
        assert list(doc) == [
            "rounds",
            "samples",
            "max_last_round_defect_prob",
            "collapse_holds",
            "corner_degenerate",
            "witness",
        ]
        assert reports[3].to_dict()["witness"] is None

    @pytest.mark.parametrize("lo,hi", [(1, 3), (4, 3), (2, 9)])
    def test_bad_range(self, lo, hi):
        with pytest.raises(ValueError):
            conjecture_sweep(lo, hi, 10, 1)

    def test_bad_samples(self):
        with pytest.raises(ValueError):
            conjecture_sweep(2, 3, 0, 1)
