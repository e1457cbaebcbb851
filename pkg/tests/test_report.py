"""
Tests for the statistical report over a results CSV.
"""

import json
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd

from fcpobench.analysis import stats_report
from fcpobench.analysis.report import pareto_table, win_tie_loss
from fcpobench.core import RunRecord
from fcpobench.errors import ContractViolation
from fcpobench.utils import write_results, write_traces

OFFSETS = {"fcpo": 0.0, "pso": 10.0, "shade": 0.0}


def make_records(algorithms=("fcpo", "pso", "shade"), functions=("F1", "F2"), runs=5):
    bias = {"F1": 300.0, "F2": 400.0}
    records = []
    for fid in functions:
        for algorithm in algorithms:
            for seed in range(runs):
                value = bias[fid] + OFFSETS[algorithm] + 0.1 * seed
                records.append(RunRecord(
                    function_id=fid, dimension=10, algorithm_id=algorithm, seed=seed,
                    final_value=value, nfe=100, runtime_ms=5.0 + seed,
                    trace=[(1, value + 1.0), (100, value)],
                ))
    return records


class TestStatsReport(unittest.TestCase):
    """Test stats_report end to end on a synthetic results file."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        records = make_records()
        self.csv = write_results(records, self.dir / "results.csv")
        write_traces(records, self.dir / "traces.jsonl")

    def tearDown(self):
        self.tmp.cleanup()

    def test_report_structure(self):
        """Test the structure of a report."""
        report = stats_report(self.csv)
        self.assertEqual(report.control, "fcpo")
        self.assertEqual(report.algorithms, ["fcpo", "pso", "shade"])
        self.assertEqual([c.case_id for c in report.cases], ["F1-10", "F2-10"])
        for case in report.cases:
            self.assertEqual([p.algorithm for p in case.pairwise], ["pso", "shade"])
        self.assertEqual(set(report.files), {"report", "summary", "pareto", "convergence"})
        for path in report.files.values():
            self.assertTrue(path.exists())

    def test_ranks_and_friedman(self):
        """Test average ranks and the Friedman test."""
        report = stats_report(self.csv)
        self.assertEqual(report.average_ranks, {"fcpo": 1.5, "pso": 3.0, "shade": 1.5})
        self.assertAlmostEqual(report.friedman.statistic, 3.0, places=12)
        self.assertIn("Friedman", report.text)

    def test_win_tie_loss(self):
        """Test the win/tie/loss record."""
        report = stats_report(self.csv)
        self.assertEqual(report.record["pso"], {"wins": 2, "ties": 0, "losses": 0})
        self.assertEqual(report.record["shade"], {"wins": 0, "ties": 2, "losses": 0})
        pso = report.cases[0].pairwise[0]
        self.assertEqual(pso.cliffs_delta, -1.0)
        self.assertEqual(pso.magnitude, "large")
        self.assertLess(pso.p_adjusted, 0.05)
        self.assertTrue(report.cases[0].omnibus_rejected)

        summary = json.loads(report.files["summary"].read_text())
        self.assertEqual(summary["win_tie_loss"]["pso"]["wins"], 2)
        self.assertEqual(len(summary["cases"][0]["dunn"]), 2)

    def test_convergence_and_pareto_files(self):
        """Test the convergence and Pareto files."""
        report = stats_report(self.csv, self.dir / "report")
        convergence = pd.read_csv(report.files["convergence"])
        self.assertEqual(list(convergence.columns), ["function", "dim", "algorithm", "nfe", "median_best"])
        last = convergence[(convergence["function"] == "F1") & (convergence["algorithm"] == "fcpo")].iloc[-1]
        self.assertEqual(last["nfe"], 100)
        self.assertAlmostEqual(last["median_best"], 300.2, places=9)
        first = convergence[(convergence["function"] == "F1") & (convergence["algorithm"] == "fcpo")].iloc[0]
        self.assertAlmostEqual(first["median_best"], 301.2, places=9)

        pareto = pd.read_csv(report.files["pareto"])
        fcpo = pareto[(pareto["function"] == "F1") & (pareto["algorithm"] == "fcpo")].iloc[0]
        pso = pareto[(pareto["function"] == "F1") & (pareto["algorithm"] == "pso")].iloc[0]
        self.assertEqual(fcpo["relative_median_error"], 1.0)
        self.assertGreater(pso["relative_median_error"], 40.0)
        self.assertEqual(fcpo["mean_runtime_ms"], 7.0)

    def test_missing_traces_skip_convergence(self):
        """Test that missing traces skip convergence."""
        (self.dir / "traces.jsonl").unlink()
        report = stats_report(self.csv)
        self.assertNotIn("convergence", report.files)

    def test_control_fallback(self):
        """Test the fallback when the control algorithm is missing."""
        report = stats_report(self.csv, control="cmaes")
        self.assertEqual(report.control, "fcpo")

    def test_unequal_run_counts(self):
        """Test unequal run counts."""
        records = make_records()[:-1]
        csv = write_results(records, self.dir / "short.csv")
        with self.assertRaises(ContractViolation):
            stats_report(csv)

    def test_single_algorithm(self):
        """Test rejection of a single algorithm."""
        csv = write_results(make_records(algorithms=("fcpo",)), self.dir / "one.csv")
        with self.assertRaises(ContractViolation):
            stats_report(csv)

    def test_single_case_has_no_friedman(self):
        """Test that a single case has no Friedman test."""
        csv = write_results(make_records(functions=("F1",)), self.dir / "single.csv")
        self.assertIsNone(stats_report(csv).friedman)


class TestReportHelpers(unittest.TestCase):
    """Test the table helpers."""

    def test_pareto_zero_error(self):
        """Test the Pareto table when the best error is zero."""
        frame = pd.DataFrame({
            "function": ["F1"] * 4, "dim": [10] * 4, "algorithm": ["a", "a", "b", "b"],
            "seed": [0, 1, 0, 1], "final_value": [300.0, 300.0, 301.0, 301.0],
            "nfe": [10] * 4, "runtime_ms": [1.0, 3.0, 2.0, 2.0],
        })
        table = pareto_table(frame).set_index("algorithm")
        self.assertEqual(table.loc["a", "relative_median_error"], 1.0)
        self.assertEqual(table.loc["b", "relative_median_error"], 1.0 / 1e-12)
        self.assertTrue(np.isfinite(table["relative_median_error"]).all())
        self.assertEqual(table.loc["a", "mean_runtime_ms"], 2.0)

    def test_pareto_error_below_optimum(self):
        """Test the Pareto table when the best error is negative."""
        frame = pd.DataFrame({
            "function": ["F1"] * 4, "dim": [10] * 4, "algorithm": ["a", "a", "b", "b"],
            "seed": [0, 1, 0, 1], "final_value": [299.5, 299.5, 300.5, 300.5],
            "nfe": [10] * 4, "runtime_ms": [1.0] * 4,
        })
        table = pareto_table(frame).set_index("algorithm")
        self.assertEqual(table.loc["a", "median_error"], -0.5)
        self.assertEqual(table.loc["a", "relative_median_error"], 1.0)
        self.assertEqual(table.loc["b", "relative_median_error"], 0.5 / 1e-12)

    def test_win_tie_loss_empty(self):
        """Test the win/tie/loss record without comparisons."""
        self.assertEqual(win_tie_loss([]), {})


if __name__ == "__main__":
    unittest.main()
