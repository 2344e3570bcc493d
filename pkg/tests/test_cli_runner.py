"""
Tests for the experiment runner, the replica pool and the command-line driver.
Covers exit codes, artifact files, worker-count independence, sweeps and plot data.
"""

import json
import shutil
import tempfile
import unittest
from pathlib import Path

import pandas as pd

from pdmp_engine.cli import EXIT_CONFIG, EXIT_OK, EXIT_VALIDATION, main
from pdmp_engine.config.experiment_loader import resolve_experiment
from pdmp_engine.errors import EmptyInputError, InconsistentSummariesError
from pdmp_engine.experiments import (
    PoolStats,
    emit_plot_data,
    run_experiment,
    run_replicas,
    sweep_directory_name,
)
from pdmp_engine.validation import EstimatorSummary, ExperimentSummary


def experiment_document(**changes):
    """Small constrained experiment on the Z-configuration."""
    document = {
        "schema": 1,
        "process": "constrained",
        "generator": {"speeds": [1, 4], "q": [[-1, 1], [2, -2]]},
        "boundary": 1.0,
        "initial": {"kind": "dirac", "a": 0.0},
        "kernels": {"1": {"kind": "uniform", "a": 0.0, "b": 0.3}, "4": {"kind": "dirac", "a": 0.2}},
        "epsilon": 0.05,
        "horizon": 2.0,
        "rho": 0.5,
        "replicas": 12,
        "seed": 11,
    }
    document.update(changes)
    return document


class CliTestCase(unittest.TestCase):
    """Temporary workspace shared by the CLI tests."""

    def setUp(self):
        """Fresh directory per test."""
        self.tmp = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def config_file(self, name="exp.json", **changes):
        path = self.tmp / name
        path.write_text(json.dumps(experiment_document(**changes)), encoding="utf-8")
        return str(path)

    def run_cli(self, *args):
        return main(["--log-level", "ERROR", *args])


class TestSimulateCommand(CliTestCase):
    """pdmp simulate."""

    def test_writes_artifacts(self):
        """Exit 0 with hits, path, switching and summary files."""
        out = self.tmp / "run"
        self.assertEqual(self.run_cli("simulate", "--config", self.config_file(), "--out", str(out)), EXIT_OK)
        hits = pd.read_csv(out / "hits.csv")
        self.assertEqual(list(hits.columns), ["replica", "i", "t_star", "prejump_speed", "postjump_value"])
        self.assertTrue((out / "path_replica0.csv").exists())
        switching = pd.read_csv(out / "switching_replica0.csv")
        self.assertEqual(list(switching.columns), ["t", "new_state"])
        self.assertTrue((switching["t"].diff().dropna() > 0).all())
        summary = ExperimentSummary.load(out / "summary.json")
        self.assertEqual(summary.n_replicas, 12)
        self.assertEqual(
            sorted(e.name for e in summary.estimators),
            ["mean_jump_count", "mean_slope", "prejump_speed_tv"],
        )
        self.assertEqual(summary.resolved_config["seed"], 11)

    def test_json_format(self):
        """--format json writes records instead of CSV."""
        out = self.tmp / "run"
        code = self.run_cli("simulate", "--config", self.config_file(), "--out", str(out), "--format", "json")
        self.assertEqual(code, EXIT_OK)
        records = json.loads((out / "hits.json").read_text(encoding="utf-8"))
        self.assertIn("t_star", records[0])

    def test_missing_config_file(self):
        """A missing config exits 1."""
        self.assertEqual(self.run_cli("simulate", "--config", str(self.tmp / "none.json")), EXIT_CONFIG)

    def test_invalid_config(self):
        """A schema violation exits 1."""
        self.assertEqual(self.run_cli("simulate", "--config", self.config_file(schema=9)), EXIT_CONFIG)

    def test_failed_check_with_require_pass(self):
        """Slow switching fails the pi* check: exit 2 with --require-pass, 0 without."""
        config = self.config_file(
            epsilon=1.0, horizon=20.0, rho=0.04, replicas=10,
            kernels={"1": {"kind": "dirac", "a": 0.0}, "4": {"kind": "dirac", "a": 0.95}},
        )
        strict = self.tmp / "strict"
        self.assertEqual(self.run_cli("simulate", "--config", config, "--out", str(strict), "--require-pass"), EXIT_VALIDATION)
        summary = ExperimentSummary.load(strict / "summary.json")
        self.assertFalse(summary.estimator("prejump_speed_tv").passed)
        self.assertEqual(self.run_cli("simulate", "--config", config, "--out", str(self.tmp / "lax")), EXIT_OK)

    def test_output_independent_of_workers(self):
        """hits.csv is byte-identical for 1, 4 and 16 workers."""
        config = self.config_file(replicas=32)
        contents = []
        for workers in (1, 4, 16):
            out = self.tmp / f"w{workers}"
            code = self.run_cli("simulate", "--config", config, "--out", str(out), "--workers", str(workers))
            self.assertEqual(code, EXIT_OK)
            contents.append((out / "hits.csv").read_bytes())
        self.assertEqual(contents[0], contents[1])
        self.assertEqual(contents[0], contents[2])

    def test_preset_round_trip(self):
        """pdmp preset prints a config that simulates the flow in x-coordinates."""
        preset_file = self.tmp / "qif.json"
        self.assertEqual(self.run_cli("preset", "quadratic-if", "--out", str(preset_file)), EXIT_OK)
        document = json.loads(preset_file.read_text(encoding="utf-8"))
        self.assertEqual(document["process"], "flow")
        out = self.tmp / "qif"
        code = self.run_cli(
            "simulate", "--config", str(preset_file), "--epsilon", "0.05", "--replicas", "3", "--out", str(out),
        )
        self.assertEqual(code, EXIT_OK)
        hits = pd.read_csv(out / "hits.csv")
        self.assertTrue(((hits["postjump_value"] >= 1.0) & (hits["postjump_value"] <= 1.75 + 1e-12)).all())
        self.assertTrue(set(hits["prejump_speed"]) <= {1.0, 2.0})


class TestSweepCommands(CliTestCase):
    """pdmp sweep-epsilon, sweep-k and plot-data."""

    def test_epsilon_sweep(self):
        """One directory per value and one plot row per (value, estimator)."""
        out = self.tmp / "sweep"
        code = self.run_cli("sweep-epsilon", "--config", self.config_file(), "--values", "0.1,0.01", "--out", str(out))
        self.assertEqual(code, EXIT_OK)
        self.assertTrue((out / "epsilon_0.1" / "summary.json").exists())
        self.assertTrue((out / "epsilon_0.01" / "summary.json").exists())
        plot = pd.read_csv(out / "plot_data.csv")
        self.assertEqual(list(plot.columns), ["sweep_value", "estimator", "value", "std_error"])
        self.assertEqual(len(plot), 6)
        self.assertEqual(sorted(set(plot["sweep_value"])), [0.01, 0.1])

    def test_k_sweep(self):
        """Penalized runs at k = 1 and 2 land in k_1 and k_2."""
        out = self.tmp / "ksweep"
        code = self.run_cli(
            "sweep-k", "--config", self.config_file(process="penalized"), "--values", "1,2", "--out", str(out),
        )
        self.assertEqual(code, EXIT_OK)
        summary = ExperimentSummary.load(out / "k_2" / "summary.json")
        self.assertEqual(summary.resolved_config["k"], 2)
        self.assertIn("lambda_sup_dev", [e.name for e in summary.estimators])

    def test_plot_data_and_plot(self):
        """Four sweep points with three estimators each give 12 rows; plot renders HTML."""
        out = self.tmp / "sweep"
        values = "0.2,0.1,0.05,0.02"
        self.assertEqual(self.run_cli("sweep-epsilon", "--config", self.config_file(), "--values", values, "--out", str(out)), EXIT_OK)
        summaries = [str(p) for p in sorted(out.glob("epsilon_*/summary.json"))]
        plot_csv = self.tmp / "merged.csv"
        self.assertEqual(self.run_cli("plot-data", *summaries, "--out", str(plot_csv)), EXIT_OK)
        self.assertEqual(len(pd.read_csv(plot_csv)), 12)
        html = self.tmp / "plot.html"
        self.assertEqual(self.run_cli("plot", str(plot_csv), "--out", str(html)), EXIT_OK)
        self.assertTrue(html.exists())

    def test_plot_data_without_input(self):
        """No summaries is an input error."""
        self.assertEqual(self.run_cli("plot-data", "--out", str(self.tmp / "x.csv")), EXIT_CONFIG)

    def test_bad_sweep_values(self):
        """Unparseable --values exits 1."""
        self.assertEqual(self.run_cli("sweep-epsilon", "--config", self.config_file(), "--values", "a,b"), EXIT_CONFIG)


class TestRunner(unittest.TestCase):
    """Runner and pool called directly."""

    def setUp(self):
        """Temporary output directory."""
        self.tmp = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def test_coupled_report(self):
        """Coupled runs write a coupling table with one row per replica."""
        experiment = resolve_experiment(experiment_document(process="coupled", replicas=5), environ={})
        summary = run_experiment(experiment, out_dir=self.tmp)
        coupling = pd.read_csv(self.tmp / "coupling.csv")
        self.assertEqual(len(coupling), 5)
        self.assertEqual(coupling["replica"].tolist(), [0, 1, 2, 3, 4])
        self.assertEqual(
            sorted(e.name for e in summary.estimators), ["coupling_broken_rate", "sup_dist_after_warp"],
        )

    def test_mirror_has_no_hits(self):
        """Mirror runs report the slope against E_pi* and write no hits table."""
        experiment = resolve_experiment(experiment_document(process="mirror", replicas=20), environ={})
        summary = run_experiment(experiment, out_dir=self.tmp)
        self.assertFalse((self.tmp / "hits.csv").exists())
        self.assertAlmostEqual(summary.estimator("mirror_slope").reference, 0.5, places=12)

    def test_limit_law_estimator(self):
        """A limit-law query adds an estimator with the closed-form reference."""
        document = experiment_document(
            process="averaged", horizon=0.7, replicas=50,
            kernels={"1": {"kind": "dirac", "a": 0.0}, "4": {"kind": "dirac", "a": 0.0}},
            limit_law={"times": [0.6], "speeds": [4]},
        )
        summary = run_experiment(resolve_experiment(document, environ={}), out_dir=self.tmp)
        self.assertAlmostEqual(summary.estimator("limit_law").reference, 2.0 / 3.0, places=12)
        self.assertFalse((self.tmp / "switching_replica0.csv").exists())

    def test_pool_order_and_stats(self):
        """Two workers return the serial results in replica order."""
        cfg = resolve_experiment(experiment_document(), environ={}).process_config
        stats = PoolStats()
        serial = run_replicas("constrained", cfg, 6, seed=3)
        parallel = run_replicas("constrained", cfg, 6, seed=3, workers=2, stats=stats)
        self.assertEqual([p.jumps for p in serial], [p.jumps for p in parallel])
        self.assertEqual(stats.workers, 2)
        self.assertGreaterEqual(stats.processing_time, 0.0)

    def test_sweep_directory_names(self):
        """epsilon keeps its %g form; k is an integer."""
        self.assertEqual(sweep_directory_name("epsilon", 0.001), "epsilon_0.001")
        self.assertEqual(sweep_directory_name("k", 3), "k_3")

    def test_inconsistent_summaries(self):
        """Different estimator sets cannot be merged."""
        first = ExperimentSummary("a", 1, [EstimatorSummary("x", 1.0, 0.1)], {"epsilon": 0.1})
        second = ExperimentSummary("b", 1, [EstimatorSummary("y", 1.0, 0.1)], {"epsilon": 0.01})
        paths = [first.write(self.tmp / "1.json"), second.write(self.tmp / "2.json")]
        with self.assertRaises(InconsistentSummariesError):
            emit_plot_data(paths)
        with self.assertRaises(EmptyInputError):
            emit_plot_data([])


if __name__ == "__main__":
    unittest.main()
