"""
Tests for the constrained, averaged and mirror processes.
"""

import unittest

import numpy as np

from pdmp_engine.algebra import (
    DiracKernel,
    ProbabilityVector,
    SwitchingGenerator,
    UniformKernel,
    averaged_drift,
    averaged_hitting_times,
    boundary_speed_measure,
    pistar_first_moment,
)
from pdmp_engine.errors import ConfigInvalidError, KernelSupportViolationError, OutOfHorizonError
from pdmp_engine.processes import (
    PathKind,
    ProcessConfig,
    count_jumps,
    hits_to_dataframe,
    jump_count_bound,
    mirror_readout,
    path_to_dataframe,
    path_value,
    path_values,
    simulate_averaged,
    simulate_constrained,
    simulate_mirror,
)
from pdmp_engine.switching import RngStream
from pdmp_engine.validation import EmpiricalLaw, estimate_from_samples, tv_distance, tv_standard_error


def z_config(epsilon=0.01, horizon=2.0, kernels=None, initial=None, rho=0.5, initial_speed=None):
    """Quadratic Z-configuration: speeds {1, 4}, Q = [[-1, 1], [2, -2]], boundary 1."""
    g = SwitchingGenerator([1.0, 4.0], [[-1.0, 1.0], [2.0, -2.0]])
    kernels = kernels or {1.0: DiracKernel(0.0), 4.0: DiracKernel(0.0)}
    return ProcessConfig(
        generator=g,
        boundary=1.0,
        initial=initial or DiracKernel(0.0),
        kernels=kernels,
        epsilon=epsilon,
        horizon=horizon,
        rho=rho,
        initial_speed=initial_speed,
    )


class TestProcessConfig(unittest.TestCase):
    """Invariants checked when a config is built."""

    def test_kernel_above_gap(self):
        """A kernel reaching above c - rho is rejected."""
        with self.assertRaises(KernelSupportViolationError):
            z_config(kernels={1.0: DiracKernel(0.0), 4.0: DiracKernel(0.6)}, rho=0.5)

    def test_missing_kernel(self):
        """Every speed needs a kernel."""
        with self.assertRaises(ConfigInvalidError):
            z_config(kernels={1.0: DiracKernel(0.0)})

    def test_epsilon_range(self):
        """eps must lie in (0, 1]."""
        with self.assertRaises(ConfigInvalidError):
            z_config(epsilon=1.5)

    def test_initial_law_below_boundary(self):
        """The initial law must stay strictly below c."""
        with self.assertRaises(ConfigInvalidError):
            z_config(initial=DiracKernel(1.0))

    def test_replace_revalidates(self):
        """replace() builds a new validated config."""
        cfg = z_config()
        self.assertEqual(cfg.replace(epsilon=0.5).epsilon, 0.5)
        with self.assertRaises(ConfigInvalidError):
            cfg.replace(horizon=-1.0)


class TestSingleSpeedSawtooth(unittest.TestCase):
    """With one speed the constrained path is a deterministic sawtooth."""

    def setUp(self):
        """Speed 2, c = 1, restarts at 0, T = 1.6."""
        g = SwitchingGenerator([2.0], [[0.0]])
        self.cfg = ProcessConfig(
            generator=g, boundary=1.0, initial=DiracKernel(0.0), kernels={2.0: DiracKernel(0.0)},
            epsilon=0.1, horizon=1.6, rho=0.5,
        )
        self.path = simulate_constrained(self.cfg, RngStream(0))

    def test_hit_times(self):
        """Hits at 0.5, 1.0 and 1.5, all at speed 2 and restarting at 0."""
        self.assertEqual(self.path.jump_times.tolist(), [0.5, 1.0, 1.5])
        self.assertTrue(all(r.prejump_speed == 2.0 for r in self.path.jumps))
        self.assertTrue(all(r.postjump_value == 0.0 for r in self.path.jumps))
        self.assertEqual(self.path.kind, PathKind.CONSTRAINED)

    def test_cadlag_values(self):
        """X(0.25) = 0.5, X(0.5) = 0, X(0.5-) = c, X(T) = 0.2."""
        self.assertAlmostEqual(path_value(self.path, 0.25), 0.5, places=15)
        self.assertEqual(path_value(self.path, 0.5), 0.0)
        self.assertEqual(path_value(self.path, 0.5, left=True), 1.0)
        self.assertAlmostEqual(path_value(self.path, 1.6), 0.2, places=12)

    def test_jump_counts(self):
        """p*(t) counts hits at times <= t."""
        self.assertEqual(count_jumps(self.path, 0.49), 0)
        self.assertEqual(count_jumps(self.path, 0.5), 1)
        self.assertEqual(count_jumps(self.path, 1.6), 3)
        self.assertLessEqual(self.path.n_jumps, jump_count_bound(self.cfg))

    def test_out_of_horizon(self):
        """Evaluation beyond T fails."""
        with self.assertRaises(OutOfHorizonError):
            path_value(self.path, 1.7)

    def test_path_frame(self):
        """Each hit appears as a hit row at c then a jump_target row."""
        frame = path_to_dataframe(self.path)
        hits = frame[frame["kind"] == "hit"]
        self.assertEqual(len(hits), 3)
        self.assertTrue((hits["x"] == 1.0).all())
        self.assertEqual(frame.iloc[-1]["kind"], "horizon")


class TestConstrainedProcess(unittest.TestCase):
    """Two-speed constrained paths."""

    def setUp(self):
        """Uniform kernels so restarts are random."""
        self.cfg = z_config(
            epsilon=0.05, horizon=3.0,
            kernels={1.0: UniformKernel(0.0, 0.3), 4.0: UniformKernel(0.2, 0.5)},
            initial=UniformKernel(0.0, 0.9),
        )
        self.root = RngStream(17)

    def test_confined_below_boundary(self):
        """Post-jump values and segment starts stay below c; left limits reach it exactly."""
        for r in range(30):
            path = simulate_constrained(self.cfg, self.root.replica(r))
            self.assertTrue(np.all(path.x_start < 1.0))
            self.assertTrue(np.all(path.x_end <= 1.0))
            for record in path.jumps:
                self.assertEqual(path_value(path, record.time, left=True), 1.0)
                self.assertLessEqual(record.postjump_value, 1.0 - self.cfg.rho)

    def test_count_bound(self):
        """No path exceeds T max(Y) / rho (+1 for an initial law above c - rho)."""
        bound = jump_count_bound(self.cfg)
        for r in range(30):
            self.assertLessEqual(simulate_constrained(self.cfg, self.root.replica(r)).n_jumps, bound)

    def test_deterministic(self):
        """The same stream reproduces the same hits."""
        a = simulate_constrained(self.cfg, self.root.replica(3))
        b = simulate_constrained(self.cfg, self.root.replica(3))
        self.assertEqual(a.jumps, b.jumps)

    def test_prejump_speed_matches_switching(self):
        """The recorded speed is Y(T*-) of the attached switching path."""
        path = simulate_constrained(self.cfg, self.root.replica(5))
        for record in path.jumps:
            stretch = np.searchsorted(path.switching.event_times, record.time, side="left")
            state = path.switching.initial_state if stretch == 0 else path.switching.event_states[stretch - 1]
            self.assertEqual(record.prejump_speed, path.switching.speeds[state])

    def test_hits_frame(self):
        """One row per hit, in replica order."""
        paths = [simulate_constrained(self.cfg, self.root.replica(r)) for r in range(3)]
        frame = hits_to_dataframe(enumerate(paths))
        self.assertEqual(len(frame), sum(p.n_jumps for p in paths))
        self.assertEqual(list(frame.columns), ["replica", "i", "t_star", "prejump_speed", "postjump_value"])


class TestAveragedProcess(unittest.TestCase):
    """The averaged limit X-bar."""

    def test_dirac_kernels_follow_the_recursion(self):
        """With Dirac kernels at 0 the hits follow the deterministic recursion."""
        cfg = z_config(horizon=2.2)
        path = simulate_averaged(cfg, RngStream(1))
        drift = averaged_drift(cfg.generator)
        self.assertAlmostEqual(drift, 2.0, places=12)
        self.assertEqual(path.jump_times.tolist(), averaged_hitting_times(drift, 1.0, [0.0] * 4))
        self.assertEqual(path.kind, PathKind.AVERAGED)
        self.assertTrue(np.all(path.slopes == drift))

    def test_labels_follow_pistar(self):
        """Recorded speeds are pi*-distributed: speed 4 with probability 2/3."""
        cfg = z_config(horizon=50.0)
        root = RngStream(8)
        labels = [r.prejump_speed for i in range(20) for r in simulate_averaged(cfg, root.replica(i)).jumps]
        share = np.mean(np.array(labels) == 4.0)
        se = np.sqrt((2 / 9) / len(labels))
        self.assertLess(abs(share - 2.0 / 3.0), 3 * se)

    def test_single_speed_matches_constrained(self):
        """One speed: the averaged path hits at the constrained times with the same targets."""
        g = SwitchingGenerator([2.0], [[0.0]])
        cfg = ProcessConfig(
            generator=g, boundary=1.0, initial=UniformKernel(0.0, 0.5),
            kernels={2.0: UniformKernel(0.0, 0.4)}, epsilon=0.1, horizon=10.0, rho=0.5,
        )
        root = RngStream(19)
        for r in range(10):
            constrained = simulate_constrained(cfg, root.replica(r))
            averaged = simulate_averaged(cfg, root.replica(r))
            self.assertGreater(constrained.n_jumps, 10)
            self.assertEqual(averaged.n_jumps, constrained.n_jumps)
            np.testing.assert_allclose(averaged.jump_times, constrained.jump_times, rtol=1e-12)
            for a, c in zip(averaged.jumps, constrained.jumps):
                self.assertEqual(a.prejump_speed, c.prejump_speed)
                self.assertEqual(a.postjump_value, c.postjump_value)

    def test_targets_follow_mixture_kernel(self):
        """Dirac restarts at 0 after speed 1 and 0.2 after speed 4: over 10^5 jumps the targets are pi*-weighted."""
        cfg = z_config(horizon=5000.0, kernels={1.0: DiracKernel(0.0), 4.0: DiracKernel(0.2)})
        root = RngStream(23)
        targets = [r.postjump_value for i in range(10) for r in simulate_averaged(cfg, root.replica(i)).jumps]
        self.assertGreaterEqual(len(targets), 100000)
        law = EmpiricalLaw.from_values(targets)
        reference = ProbabilityVector([0.0, 0.2], boundary_speed_measure(cfg.generator).weights)
        tv = tv_distance(law, reference)
        self.assertLess(tv, 3 * tv_standard_error(law))
        self.assertLess(tv, 0.01)


class TestMirrorProcess(unittest.TestCase):
    """Mirror process and its pathwise identity with the first hitting time."""

    def test_readout_gives_first_hit(self):
        """Mirror value at c - xi_0 equals T*_1 to 1e-12 relative, path by path."""
        cfg = z_config(epsilon=0.1, horizon=1.0, initial=UniformKernel(0.0, 0.9))
        root = RngStream(41)
        checked = 0
        for r in range(10000):
            path = simulate_constrained(cfg, root.replica(r))
            if not path.n_jumps:
                continue
            mirror = mirror_readout(path)
            t_hit = path.jumps[0].time
            value = path_value(mirror, cfg.boundary - path.initial_value)
            self.assertLessEqual(abs(value - t_hit), 1e-12 * t_hit)
            checked += 1
        self.assertGreater(checked, 9000)

    def test_mirror_slope(self):
        """E[M(x)] / x = E_pi* = 1/2 when W starts from pi*."""
        cfg = z_config(epsilon=0.05)
        root = RngStream(42)
        slopes = [simulate_mirror(cfg, root.replica(r), 1.0).x_end[-1] for r in range(400)]
        estimate = estimate_from_samples(slopes)
        self.assertTrue(estimate.within(pistar_first_moment(cfg.generator), 3.0))

    def test_mirror_path_kind(self):
        """The mirror path lives on [0, x_horizon] with reciprocal-speed slopes."""
        cfg = z_config(epsilon=0.05)
        path = simulate_mirror(cfg, RngStream(3), 2.0)
        self.assertEqual(path.kind, PathKind.MIRROR)
        self.assertEqual(path.horizon, 2.0)
        self.assertTrue(set(path.slopes.tolist()) <= {1.0, 0.25})
        values = path_values(path, np.linspace(0.0, 2.0, 11))
        self.assertTrue(np.all(np.diff(values) > 0))

    def test_bad_space_horizon(self):
        """x_horizon must be positive."""
        with self.assertRaises(ConfigInvalidError):
            simulate_mirror(z_config(), RngStream(0), 0.0)


if __name__ == "__main__":
    unittest.main()
