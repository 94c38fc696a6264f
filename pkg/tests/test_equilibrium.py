import numpy as np
import pytest

from oracles import simplified_payoffs
from qcentipede.equilibrium import (
    TABLE1_GRID,
    GradientVector,
    certify_nash,
    payoff_gradient_analytic,
    payoff_gradient_fd,
    sweep_table1,
)
from qcentipede.protocol import StrategyProfile
from qcentipede.reports import sweep_from_csv, sweep_to_csv
from qcentipede.game import PayoffSchedule
from reference import EXACT_TABLE, PUBLISHED_TABLE

PI = np.pi
GRID_VALUES = [(0.0, PI, PI / 2), (0.0, PI, PI / 2), (0.0, PI)]


@pytest.fixture(scope="module")
def rows():
    return sweep_table1(shots=1000, seed=42)


@pytest.fixture(scope="module")
def random_thetas():
    return np.random.default_rng(77).uniform(0, PI, size=(100, 3))


class TestSweep:
    def test_row_order_matches_published(self, rows):
        assert len(rows) == 18
        for row, (thetas, _) in zip(rows, PUBLISHED_TABLE):
            assert np.allclose(row.thetas, thetas)

    def test_examples(self, rows):
        assert tuple(rows[0].exact_payoffs) == pytest.approx((2.0, 2.0), abs=1e-12)
        assert tuple(rows[6].exact_payoffs) == pytest.approx((1.5, 1.0), abs=1e-12)
        assert tuple(rows[14].exact_payoffs) == pytest.approx((1.0, 2.0), abs=1e-12)

    def test_exact_against_oracle(self, rows):
        for row, exact in zip(rows, EXACT_TABLE):
            assert np.max(np.abs(np.array(tuple(row.exact_payoffs)) - exact)) < 1e-9
            assert np.max(np.abs(simplified_payoffs(*row.thetas) - exact)) < 1e-12

    def test_reproducible(self, rows):
        assert sweep_table1(1000, 42) == rows

    def test_row_seeds(self, rows):
        assert [r.seed for r in rows] == list(range(42, 60))

    def test_bad_shots(self):
        with pytest.raises(ValueError):
            sweep_table1(0, 1)

    def test_csv_round_trip(self, rows):
        text = sweep_to_csv(rows, PayoffSchedule.default(), 1000, 42)
        back = sweep_from_csv(text)
        assert len(back) == 18
        for a, b in zip(rows, back):
            assert np.allclose(a.thetas, b.thetas, rtol=1e-11, atol=0)
            assert np.allclose(tuple(a.mc_payoffs), tuple(b.mc_payoffs), rtol=1e-11)
            assert (a.shots, a.seed) == (b.shots, b.seed)

    def test_csv_accepts_symbolic_angles(self):
        text = (
            "# hand-written\n"
            "theta1,theta2,theta3,exact_p1,exact_p2,mc_p1,mc_p2,shots,seed\n"
            "pi/2,pi,0,1,0,1,0,1000,7\n"
        )
        (row,) = sweep_from_csv(text)
        assert row.thetas == (PI / 2, PI, 0.0)


class TestCertifyNash:
    def test_all_cooperate(self):
        rep = certify_nash(StrategyProfile((0, 0, 0)), 25, 1e-9)
        assert rep.is_nash
        assert max(rep.best_deviation_gain) <= 1e-9
        assert rep.deviation_grid_size == 25

    def test_all_defect(self):
        assert certify_nash(StrategyProfile((PI, PI, PI)), 25, 1e-9).is_nash

    def test_rejects_half_middle(self):
        rep = certify_nash(StrategyProfile((0, PI / 2, 0)), 25, 1e-9)
        assert not rep.is_nash
        assert rep.best_deviation_gain[1] == pytest.approx(1.0, abs=1e-12)
        assert rep.best_deviation[1][1] == pytest.approx(0.0)

    def test_grid_nash_set(self):
        certified = [t for t in TABLE1_GRID if certify_nash(StrategyProfile(t), deviation_values=GRID_VALUES).is_nash]
        assert certified == [(0.0, 0.0, 0.0), (PI, PI, PI)]

    def test_player_one_deviates_jointly(self):
        # From (pi, pi, 0) player 1 only reaches 2.0 by moving theta1 and theta3 together
        rep = certify_nash(StrategyProfile((PI, PI, 0)), deviation_values=GRID_VALUES)
        assert rep.best_deviation_gain[0] == pytest.approx(1.0, abs=1e-12)
        assert rep.best_deviation[0] == pytest.approx((PI, PI, PI))

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            certify_nash(StrategyProfile((0, 0, 0)), deviation_grid=1)

    def test_wrong_number_of_value_lists(self):
        with pytest.raises(ValueError):
            certify_nash(StrategyProfile((0, 0, 0)), deviation_values=GRID_VALUES[:2])

    def test_longer_game(self):
        sched = PayoffSchedule(((1, 0), (0, 2), (3, 1), (2, 4), (5, 3)), (4, 6))
        rep = certify_nash(StrategyProfile((0,) * 5), deviation_grid=5, schedule=sched)
        assert rep.best_deviation_gain[0] >= -1e-12


class TestGradient:
    def test_zero_profile(self):
        assert np.all(payoff_gradient_analytic(StrategyProfile((0, 0, 0))).as_array() == 0)

    def test_all_pi(self):
        assert np.max(np.abs(payoff_gradient_analytic(StrategyProfile((PI, PI, PI))).as_array())) < 1e-12

    def test_all_half(self):
        g = payoff_gradient_analytic((PI / 2, PI / 2, PI / 2))
        assert abs(g.d1_dtheta2) < 1e-15 and abs(g.d2_dtheta2) < 1e-15 and abs(g.d1_dtheta1) < 1e-15

    def test_fd_at_stationary_point(self):
        assert np.max(np.abs(payoff_gradient_fd((0, 0, 0), 1e-5).as_array())) < 1e-6

    def test_fd_matches_analytic(self, random_thetas):
        worst = max(
            np.max(np.abs(payoff_gradient_analytic(t).as_array() - payoff_gradient_fd(t, 1e-5).as_array()))
            for t in random_thetas
        )
        assert worst < 1e-6

    def test_payoff2_ignores_theta1(self, random_thetas):
        for t in random_thetas:
            assert abs(payoff_gradient_fd(t, 1e-5).d2_dtheta1) < 1e-10
            assert payoff_gradient_analytic(t).d2_dtheta1 == 0

    def test_fd_against_oracle_formula(self, random_thetas):
        # central differences of the expanded closed form, independent of the simulator
        h = 1e-6
        for t in random_thetas[:20]:
            fd = np.zeros((2, 3))
            for k in range(3):
                e = np.zeros(3)
                e[k] = h
                fd[:, k] = (simplified_payoffs(*(t + e)) - simplified_payoffs(*(t - e))) / (2 * h)
            assert np.allclose(payoff_gradient_analytic(t).as_array(), fd.ravel(), atol=1e-8)

    def test_stationary_at_equilibria(self):
        for t in [(0, 0, 0), (PI, PI, PI)]:
            assert np.max(np.abs(payoff_gradient_analytic(t).as_array())) < 1e-12

    def test_bad_step(self):
        with pytest.raises(ValueError):
            payoff_gradient_fd((0, 0, 0), 0.01)

    def test_vector_layout(self):
        g = GradientVector(1, 2, 3, 4, 5, 6)
        assert list(g.as_array()) == [1, 2, 3, 4, 5, 6]
