"""
Tests for the penalized process, its time change, the constrained/penalized
coupling and the Skorokhod distance bounds.
"""

import unittest

import numpy as np

from pdmp_engine.algebra import DiracKernel, SwitchingGenerator, UniformKernel
from pdmp_engine.errors import ConfigInvalidError, HorizonMismatchError
from pdmp_engine.penalty import (
    PiecewiseLinearMap,
    TimeChange,
    jump_matching_warp,
    overshoot_slope,
    simulate_coupled,
    simulate_penalized,
    skorokhod_upper_bound,
    sup_distance,
    time_change,
    time_changed_values,
    wasserstein_estimate,
)
from pdmp_engine.processes import ProcessConfig, path_value, simulate_constrained
from pdmp_engine.switching import RngStream


def two_speed_config(epsilon=0.1, horizon=3.0):
    """Speeds {1, 4}, Q = [[-1, 1], [2, -2]], c = 1, uniform restarts."""
    g = SwitchingGenerator([1.0, 4.0], [[-1.0, 1.0], [2.0, -2.0]])
    return ProcessConfig(
        generator=g, boundary=1.0, initial=UniformKernel(0.0, 0.5),
        kernels={1.0: UniformKernel(0.0, 0.3), 4.0: UniformKernel(0.2, 0.5)},
        epsilon=epsilon, horizon=horizon, rho=0.5,
    )


def sawtooth_config(start=0.0, epsilon=0.1, horizon=1.6):
    """One speed 2, c = 1, restarts at 0, xi_0 = start."""
    g = SwitchingGenerator([2.0], [[0.0]])
    return ProcessConfig(
        generator=g, boundary=1.0, initial=DiracKernel(start), kernels={2.0: DiracKernel(0.0)},
        epsilon=epsilon, horizon=horizon, rho=0.5,
    )


class TestPenalizedProcess(unittest.TestCase):
    """X^P_eps overshoots the boundary for an Exp(eps^k) time."""

    def setUp(self):
        """eps = 0.1 so overshoots are visible."""
        self.cfg = two_speed_config(horizon=20.0)
        self.root = RngStream(5)

    def test_first_hit_matches_constrained(self):
        """Same stream: the first overshoot starts at the constrained first hit."""
        x = simulate_constrained(self.cfg, self.root)
        xp = simulate_penalized(self.cfg, 1, self.root)
        self.assertEqual(xp.overshoots[0].hit_time, x.jumps[0].time)
        self.assertEqual(xp.initial_value, x.initial_value)

    def test_overshoot_duration_mean(self):
        """Overshoot durations average eps^k."""
        for k in (1, 2):
            durations = [
                o.duration
                for r in range(20)
                for o in simulate_penalized(self.cfg, k, self.root.replica(r)).overshoots
            ]
            expected = self.cfg.epsilon ** k
            se = expected / np.sqrt(len(durations))
            self.assertLess(abs(np.mean(durations) - expected), 4 * se)

    def test_jumps_from_above_boundary(self):
        """Each jump leaves from a left limit at or above c, after its overshoot."""
        xp = simulate_penalized(self.cfg, 1, self.root.replica(2))
        completed = [o for o in xp.overshoots if o.completed]
        self.assertEqual(len(completed), xp.n_jumps)
        for record, overshoot in zip(xp.jumps, completed):
            self.assertEqual(record.time, overshoot.jump_time)
            self.assertGreaterEqual(overshoot.jump_time, overshoot.hit_time)
            self.assertGreaterEqual(path_value(xp, record.time, left=True), 1.0 - 1e-12)
            self.assertLessEqual(record.postjump_value, 0.5)

    def test_bad_exponent(self):
        """k must be an integer >= 1."""
        for k in (0, 1.5, True):
            with self.assertRaises(ConfigInvalidError):
                simulate_penalized(self.cfg, k, self.root)


class TestTimeChange(unittest.TestCase):
    """lambda_eps and mu_eps = Id - lambda_eps."""

    def setUp(self):
        """A penalized path with several overshoots."""
        self.cfg = two_speed_config(horizon=5.0)
        self.xp = simulate_penalized(self.cfg, 1, RngStream(9))
        self.tc = time_change(self.xp, self.cfg.epsilon, 1)

    def test_invariants(self):
        """lambda(0) = 0, strictly increasing, 1-Lipschitz, mu nondecreasing."""
        self.tc.check_invariants()
        ts = np.linspace(0.0, self.cfg.horizon, 200)
        self.assertTrue(np.all(np.diff(self.tc.mu(ts)) >= -1e-12))
        self.assertLessEqual(float(self.tc(self.cfg.horizon)), self.cfg.horizon)

    def test_paused_time(self):
        """mu(T) is the overshoot time scaled by 1 - eps^k / (1 + eps^k)."""
        intervals = self.xp.overshoot_intervals()
        paused = np.sum(intervals[:, 1] - intervals[:, 0]) * (1.0 - overshoot_slope(self.cfg.epsilon, 1))
        self.assertAlmostEqual(float(self.tc.mu(self.cfg.horizon)), paused, places=10)
        self.assertAlmostEqual(self.tc.sup_deviation(), paused, places=10)

    def test_overshoot_slope(self):
        """1 / (1 + eps^-k) for eps = 0.1, k = 1."""
        self.assertAlmostEqual(overshoot_slope(0.1, 1), 0.1 / 1.1, places=15)

    def test_time_changed_pair(self):
        """V = Y o lambda takes values in the speed set."""
        ts = np.linspace(0.0, self.cfg.horizon, 50)
        u, v = time_changed_values(self.xp, self.tc, ts)
        self.assertEqual(u.shape, ts.shape)
        self.assertTrue(set(v.tolist()) <= {1.0, 4.0})

    def test_map_needs_increasing_knots(self):
        """Knot times must increase."""
        with self.assertRaises(ConfigInvalidError):
            PiecewiseLinearMap([0.0, 0.0], [0.0, 1.0])

    def test_large_exponent_keeps_invariants(self):
        """eps = 0.5, k = 40: overshoots below knot resolution still give a valid lambda."""
        cfg = two_speed_config(epsilon=0.5, horizon=20.0)
        slope = overshoot_slope(0.5, 40)
        self.assertGreater(slope, 0.0)
        root = RngStream(40)
        for r in range(20):
            xp = simulate_penalized(cfg, 40, root.replica(r))
            self.assertGreater(len(xp.overshoots), 0)
            tc = time_change(xp, 0.5, 40)
            tc.check_invariants()
            self.assertTrue(np.all((tc.slopes == 1.0) | (tc.slopes == slope)))
            self.assertIn(slope, tc.slopes.tolist())
            self.assertLess(float(tc.mu(cfg.horizon)), 1e-9)

    def test_slopes_must_match_knots(self):
        """One slope per knot interval, each in (0, 1] and integrated by the knot values."""
        with self.assertRaises(ConfigInvalidError):
            TimeChange([0.0, 1.0, 2.0], [0.0, 1.0, 1.5], [1.0])
        with self.assertRaises(ConfigInvalidError):
            TimeChange([0.0, 1.0], [0.0, 2.0]).check_invariants()
        with self.assertRaises(ConfigInvalidError):
            TimeChange([0.0, 1.0], [0.0, 1.0], [0.5]).check_invariants()

    def test_deviation_shrinks_with_k(self):
        """eps = 0.5, k = 1..4, 200 replicas: mean ||lambda - Id|| decreases and stays below 10 eps^k mean jump count."""
        cfg = two_speed_config(epsilon=0.5, horizon=20.0)
        root = RngStream(40)
        means = []
        for k in (1, 2, 3, 4):
            paths = [simulate_penalized(cfg, k, root.replica(r)) for r in range(200)]
            means.append(np.mean([time_change(p, 0.5, k).sup_deviation() for p in paths]))
            self.assertLess(means[-1], 10.0 * 0.5 ** k * np.mean([p.n_jumps for p in paths]))
        self.assertTrue(np.all(np.diff(means) < 0), means)


class TestDistances(unittest.TestCase):
    """Exact sup norms and certified Skorokhod bounds."""

    def setUp(self):
        """Two sawtooth paths, the second one 0.05 ahead."""
        self.delta = 0.05
        self.a = simulate_constrained(sawtooth_config(), RngStream(0))
        self.b = simulate_constrained(sawtooth_config(start=2 * self.delta), RngStream(0))

    def test_identical_paths(self):
        """Distance of a path to itself is 0."""
        self.assertEqual(sup_distance(self.a, self.a), 0.0)
        self.assertEqual(skorokhod_upper_bound(self.a, self.a), 0.0)

    def test_symmetry(self):
        """The Skorokhod bound does not depend on argument order."""
        self.assertEqual(skorokhod_upper_bound(self.a, self.b), skorokhod_upper_bound(self.b, self.a))

    def test_time_shift(self):
        """Shifted sawtooths: warp matches jumps and the bound is at most 2 delta."""
        warp = jump_matching_warp(self.a, self.b)
        np.testing.assert_allclose(warp(self.a.jump_times), self.b.jump_times[:3], atol=1e-15)
        self.assertAlmostEqual(warp.sup_deviation(), self.delta, places=12)
        self.assertLessEqual(skorokhod_upper_bound(self.a, self.b), 2 * self.delta + 1e-12)
        # Without warping the jumps sit apart and the gap is close to c
        self.assertGreater(sup_distance(self.a, self.b), 0.5)

    def test_horizon_mismatch(self):
        """Paths on different horizons cannot be compared."""
        other = simulate_constrained(sawtooth_config(horizon=2.0), RngStream(0))
        with self.assertRaises(HorizonMismatchError):
            skorokhod_upper_bound(self.a, other)


class TestCoupling(unittest.TestCase):
    """X_eps and X^P_eps on one source of randomness."""

    def test_constrained_component_is_unchanged(self):
        """The x side equals simulate_constrained with the same stream."""
        cfg = two_speed_config()
        pair = simulate_coupled(cfg, 2, RngStream(3, 7))
        self.assertEqual(pair.x.jumps, simulate_constrained(cfg, RngStream(3, 7)).jumps)
        self.assertEqual(pair.k, 2)

    def test_unbroken_jumps_share_targets(self):
        """Until the first broken jump, targets agree and X^P lags X_eps."""
        cfg = two_speed_config(epsilon=0.05)
        root = RngStream(12)
        for r in range(20):
            pair = simulate_coupled(cfg, 2, root.replica(r))
            for i, broken in enumerate(pair.coupling_broken):
                if broken:
                    break
                self.assertEqual(pair.xp.jumps[i].postjump_value, pair.x.jumps[i].postjump_value)
                self.assertGreaterEqual(pair.xp.jumps[i].time, pair.x.jumps[i].time)

    def test_single_speed_bound(self):
        """One speed v: never broken, and the warped distance is at most v times the total delay."""
        cfg = sawtooth_config()
        root = RngStream(21)
        checked = 0
        for r in range(50):
            pair = simulate_coupled(cfg, 2, root.replica(r))
            self.assertFalse(pair.any_broken)
            if pair.x.n_jumps != pair.xp.n_jumps:
                continue
            delay = sum(o.duration for o in pair.xp.overshoots if o.completed)
            self.assertLessEqual(pair.sup_distance_after_warp(), 2.0 * delay + 1e-12)
            checked += 1
        self.assertGreater(checked, 5)

    def test_report_row(self):
        """Coupling rows carry the reported columns."""
        row = simulate_coupled(two_speed_config(), 1, RngStream(1)).report_row(4)
        self.assertEqual(row["replica"], 4)
        self.assertEqual(
            sorted(row),
            sorted(["replica", "k", "epsilon", "n_jumps_x", "n_jumps_xp",
                    "coupling_broken", "sup_dist_after_warp", "lambda_sup_dev"]),
        )
        self.assertGreaterEqual(row["lambda_sup_dev"], 0.0)

    def test_wasserstein_shrinks_with_k(self):
        """Shorter overshoots bring the penalized process closer."""
        cfg = sawtooth_config(horizon=1.8)
        loose = wasserstein_estimate(cfg, 1, 20, RngStream(30))
        tight = wasserstein_estimate(cfg, 3, 20, RngStream(30))
        self.assertLess(tight.mean, loose.mean)
        self.assertGreaterEqual(tight.mean, 0.0)

    def test_two_speed_sweep_over_k(self):
        """eps in {0.3, 0.5}, k = 1..4: warped distance and first-jump breakage both decrease with k."""
        for eps in (0.3, 0.5):
            cfg = two_speed_config(epsilon=eps, horizon=3.0)
            root = RngStream(50)
            pairs = {k: [simulate_coupled(cfg, k, root.replica(r)) for r in range(200)] for k in (1, 2, 3, 4)}
            distances = [np.mean([p.sup_distance_after_warp() for p in pairs[k]]) for k in (1, 2, 3, 4)]
            self.assertTrue(np.all(np.diff(distances) < 0), (eps, distances))

            # The first overshoot is Exp * eps^k on a shared draw, so its window shrinks pathwise
            common = [r for r in range(200) if all(pairs[k][r].coupling_broken for k in (1, 2, 3, 4))]
            self.assertGreater(len(common), 100)
            first = np.array([[pairs[k][r].coupling_broken[0] for k in (1, 2, 3, 4)] for r in common])
            self.assertTrue(np.all(first[:, 1:] <= first[:, :-1]))
            frequencies = first.mean(axis=0)
            self.assertTrue(np.all(np.diff(frequencies) < 0), (eps, frequencies))

    def test_wasserstein_needs_two_replicas(self):
        """A standard error needs two samples."""
        with self.assertRaises(ConfigInvalidError):
            wasserstein_estimate(sawtooth_config(), 1, 1, RngStream(0))


if __name__ == "__main__":
    unittest.main()
