"""
Unit tests for the nonparametric statistics, with brute-force and
permutation oracles.
"""

import unittest

import numpy as np
from scipy import stats

from fcpobench.analysis import (
    SampleGroup,
    cliffs_delta,
    cliffs_delta_magnitude,
    describe,
    dunn_holm,
    friedman,
    holm_adjust,
    kruskal_wallis,
    rank_table,
)
from fcpobench.core import RngStream
from fcpobench.errors import ContractViolation, InsufficientSamplesError

PERMUTATIONS = 40000
# asymptotic p-values against permutation references for groups of 8
ORACLE_TOLERANCE = 0.015


def groups_of(*samples):
    return [SampleGroup(label=f"g{i}", values=v) for i, v in enumerate(samples)]


def permuted_mean_ranks(sizes, n_perm, seed):
    """Mean rank per group for n_perm random relabelings of ranks 1..N."""
    n = sum(sizes)
    rng = np.random.default_rng(seed)
    ranks = np.argsort(rng.random((n_perm, n)), axis=1) + 1.0
    bounds = np.cumsum([0] + list(sizes))
    return np.column_stack([ranks[:, a:b].mean(axis=1) for a, b in zip(bounds[:-1], bounds[1:])])


class TestKruskalWallis(unittest.TestCase):
    """Test the Kruskal-Wallis omnibus test."""

    def test_hand_example(self):
        """Test Kruskal-Wallis on a hand-computed example."""
        report = kruskal_wallis(groups_of([1, 2, 3], [10, 20, 30], [100, 200, 300]))
        self.assertAlmostEqual(report.statistic, 7.2, places=12)
        self.assertEqual(report.df, 2)
        self.assertAlmostEqual(report.p_value, np.exp(-3.6), places=10)

    def test_identical_groups(self):
        """Test Kruskal-Wallis on identical groups."""
        report = kruskal_wallis(groups_of([1, 2, 3], [1, 2, 3], [1, 2, 3]))
        self.assertEqual(report.statistic, 0.0)
        self.assertEqual(report.p_value, 1.0)

    def test_all_values_equal(self):
        """Test all values equal."""
        report = kruskal_wallis(groups_of([5.0, 5.0], [5.0, 5.0]))
        self.assertEqual(report.statistic, 0.0)
        self.assertEqual(report.p_value, 1.0)

    def test_matches_scipy_with_ties(self):
        """Test Kruskal-Wallis against scipy with ties."""
        rng = RngStream(1)
        samples = [np.round(rng.normal(loc, 1.0, size=12), 1) for loc in (0.0, 0.3, 0.9)]
        ours = kruskal_wallis(groups_of(*samples))
        ref = stats.kruskal(*samples)
        self.assertAlmostEqual(ours.statistic, ref.statistic, places=10)
        self.assertAlmostEqual(ours.p_value, ref.pvalue, places=10)

    def test_monotone_transform_invariance(self):
        """Test monotone transform invariance."""
        rng = RngStream(2)
        samples = [rng.normal(loc, 1.0, size=10) for loc in (0.0, 0.5, 1.0, 1.5)]
        a = kruskal_wallis(groups_of(*samples))
        b = kruskal_wallis(groups_of(*[np.exp(3 * s) for s in samples]))
        self.assertAlmostEqual(a.statistic, b.statistic, places=10)
        self.assertAlmostEqual(a.p_value, b.p_value, places=12)

    def test_permutation_oracle(self):
        """Test Kruskal-Wallis against a permutation oracle."""
        rng = RngStream(3)
        samples = [rng.normal(loc, 1.0, size=8) for loc in (0.0, 0.6, 1.0)]
        report = kruskal_wallis(groups_of(*samples))
        n = 24
        means = permuted_mean_ranks([8, 8, 8], PERMUTATIONS, 11)
        h_perm = 12.0 / (n * (n + 1)) * np.sum(8 * (means - (n + 1) / 2.0) ** 2, axis=1)
        p_perm = float(np.mean(h_perm >= report.statistic - 1e-9))
        self.assertLessEqual(abs(report.p_value - p_perm), ORACLE_TOLERANCE)

    def test_preconditions(self):
        """Test Kruskal-Wallis input checks."""
        with self.assertRaises(InsufficientSamplesError):
            kruskal_wallis(groups_of([1.0, 2.0]))
        with self.assertRaises(InsufficientSamplesError):
            kruskal_wallis(groups_of([1.0, 2.0], [3.0]))
        with self.assertRaises(InsufficientSamplesError):
            SampleGroup("empty", [])
        with self.assertRaises(ContractViolation):
            SampleGroup("nan", [1.0, np.nan])


class TestDunnHolm(unittest.TestCase):
    """Test Dunn's post-hoc test and the Holm adjustment."""

    def test_holm_example(self):
        """Test the Holm step-down on an example."""
        np.testing.assert_allclose(holm_adjust([0.01, 0.04, 0.03]), [0.03, 0.06, 0.06], atol=1e-15)

    def test_holm_properties(self):
        """Test monotonicity and bounds of Holm-adjusted p-values."""
        rng = RngStream(4)
        for _ in range(50):
            raw = rng.uniform(6)
            adjusted = holm_adjust(raw)
            self.assertTrue(np.all(adjusted >= raw))
            self.assertTrue(np.all(adjusted <= 1.0))
            order = np.argsort(raw)
            self.assertTrue(np.all(np.diff(adjusted[order]) >= 0))

    def test_identical_groups(self):
        """Test Dunn-Holm on identical groups."""
        rows = dunn_holm(groups_of([1, 2, 3], [1, 2, 3]), "g0")
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0].label, "g1")
        self.assertEqual(rows[0].z, 0.0)
        self.assertEqual(rows[0].p_adjusted, 1.0)

    def test_hand_example(self):
        """Test Dunn-Holm on a hand-computed example."""
        rows = dunn_holm(groups_of([1, 2, 3], [10, 20, 30], [100, 200, 300]), "g0")
        se = np.sqrt(9 * 10 / 12.0 * (2.0 / 3.0))
        self.assertAlmostEqual(rows[0].z, 3.0 / se, places=12)
        self.assertAlmostEqual(rows[1].z, 6.0 / se, places=12)
        p = [2 * stats.norm.sf(3.0 / se), 2 * stats.norm.sf(6.0 / se)]
        self.assertAlmostEqual(rows[0].p_raw, p[0], places=12)
        self.assertAlmostEqual(rows[1].p_adjusted, 2 * p[1], places=12)
        self.assertAlmostEqual(rows[0].p_adjusted, max(p[0], 2 * p[1]), places=12)

    def test_sign_shows_direction(self):
        """Test that sign shows direction."""
        rows = dunn_holm(groups_of([5, 6, 7], [1, 2, 3]), "g0")
        self.assertLess(rows[0].z, 0.0)

    def test_permutation_oracle(self):
        """Test Dunn against a permutation oracle."""
        rng = RngStream(5)
        control, other = rng.normal(0.0, 1.0, size=8), rng.normal(0.9, 1.0, size=8)
        row = dunn_holm(groups_of(control, other), "g0")[0]
        means = permuted_mean_ranks([8, 8], PERMUTATIONS, 12)
        se = np.sqrt(16 * 17 / 12.0 * (1 / 8 + 1 / 8))
        z_perm = (means[:, 1] - means[:, 0]) / se
        p_perm = float(np.mean(np.abs(z_perm) >= abs(row.z) - 1e-9))
        self.assertLessEqual(abs(row.p_raw - p_perm), ORACLE_TOLERANCE)

    def test_missing_control(self):
        """Test rejection of a missing control group."""
        with self.assertRaises(ContractViolation):
            dunn_holm(groups_of([1, 2], [3, 4]), "fcpo")


class TestEffectSizes(unittest.TestCase):
    """Test Cliff's delta and its magnitude labels."""

    def test_examples(self):
        """Test Cliff's delta on worked examples."""
        self.assertEqual(cliffs_delta([1, 2, 3], [4, 5, 6]), -1.0)
        self.assertEqual(cliffs_delta([1, 2, 3], [1, 2, 3]), 0.0)

    def test_brute_force_oracle(self):
        """Test Cliff's delta against a brute-force count."""
        rng = RngStream(6)
        for _ in range(100):
            a = rng.integers(0, 20, size=30)
            b = rng.integers(0, 20, size=30)
            greater = sum(1 for x in a for y in b if x > y)
            less = sum(1 for x in a for y in b if x < y)
            delta = cliffs_delta(a, b)
            self.assertEqual(delta, (greater - less) / 900)
            self.assertEqual(cliffs_delta(b, a), -delta)
            self.assertLessEqual(abs(delta), 1.0)

    def test_empty_sample(self):
        """Test Cliff's delta on an empty sample."""
        with self.assertRaises(InsufficientSamplesError):
            cliffs_delta([], [1.0])

    def test_magnitude(self):
        """Test Cliff's delta magnitude labels."""
        self.assertEqual(cliffs_delta_magnitude(0.1), "negligible")
        self.assertEqual(cliffs_delta_magnitude(-0.2), "small")
        self.assertEqual(cliffs_delta_magnitude(0.4), "medium")
        self.assertEqual(cliffs_delta_magnitude(-0.9), "large")


class TestRanks(unittest.TestCase):
    """Test rank tables, the Friedman test and descriptives."""

    def test_rank_table(self):
        """Test the rank table."""
        ranks, average = rank_table(np.array([[5.0, 1.0, 3.0]]))
        np.testing.assert_array_equal(ranks, [[3.0, 1.0, 2.0]])
        ranks, _ = rank_table(np.array([[1.0, 1.0, 3.0]]))
        np.testing.assert_array_equal(ranks, [[1.5, 1.5, 3.0]])
        _, average = rank_table(np.array([[5.0, 1.0, 3.0], [5.0, 1.0, 3.0]]))
        np.testing.assert_array_equal(average, [3.0, 1.0, 2.0])

    def test_rank_table_rejects_missing(self):
        """Test rank table rejection of missing cells."""
        with self.assertRaises(ContractViolation):
            rank_table(np.array([[1.0, np.nan]]))

    def test_friedman_example(self):
        """Test the Friedman test on an example."""
        report = friedman(np.array([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]]))
        self.assertAlmostEqual(report.statistic, 4.0, places=12)
        self.assertEqual(report.df, 2)
        self.assertAlmostEqual(report.p_value, np.exp(-2.0), delta=1e-6)

    def test_friedman_all_ties(self):
        """Test the Friedman test when every rank ties."""
        report = friedman(np.full((4, 3), 2.0))
        self.assertAlmostEqual(report.statistic, 0.0, places=12)
        self.assertEqual(report.p_value, 1.0)

    def test_friedman_preconditions(self):
        """Test Friedman input checks."""
        with self.assertRaises(InsufficientSamplesError):
            friedman(np.array([[1.0, 2.0]]))

    def test_describe(self):
        """Test descriptive statistics."""
        d = describe([1.0, 2.0, 3.0, 10.0])
        self.assertEqual(d["mean"], 4.0)
        self.assertEqual(d["median"], 2.5)
        self.assertEqual((d["min"], d["max"]), (1.0, 10.0))
        self.assertAlmostEqual(d["std"], np.std([1.0, 2.0, 3.0, 10.0], ddof=1))
        self.assertEqual(describe([7.0])["std"], 0.0)


if __name__ == "__main__":
    unittest.main()
