"""
Unit tests for the basic functions, benchmark instances and transform files.
"""

import tempfile
import unittest
from pathlib import Path

import numpy as np

from fcpobench.benchmarks import (
    BASIC_FUNCTIONS,
    TransformData,
    eval_basic,
    export_case,
    import_case,
    make_case,
    parse_case_id,
    suite,
)
from fcpobench.benchmarks.cases import composition_weights, hybrid_partition
from fcpobench.benchmarks.functions import schwefel_mod
from fcpobench.core import Bounds, RngStream, derive_run_seed
from fcpobench.errors import ConfigurationError, ResultsParseError


class TestBasicFunctions(unittest.TestCase):
    """Test the basic function catalog at known minima."""

    def test_zero_at_minimizers(self):
        """Test zero at minimizers."""
        for d in (2, 10, 20):
            self.assertEqual(eval_basic("zakharov", np.zeros(d)), 0.0)
            self.assertEqual(eval_basic("rosenbrock", np.ones(d)), 0.0)
            self.assertEqual(eval_basic("rastrigin", np.zeros(d)), 0.0)
            self.assertEqual(eval_basic("schaffer_f7_expanded", np.zeros(d)), 0.0)
            self.assertEqual(eval_basic("bent_cigar", np.zeros(d)), 0.0)
            self.assertEqual(eval_basic("hgbat", -np.ones(d)), 0.0)

    def test_hgbat_at_origin(self):
        """Test HGBat at the origin."""
        self.assertEqual(eval_basic("hgbat", np.zeros(10)), 0.5)

    def test_schwefel_wells(self):
        """Test the modified Schwefel branches."""
        self.assertLess(abs(schwefel_mod(np.zeros(10))), 1e-4)
        self.assertGreater(schwefel_mod(np.full(10, 50.0)), 1.0)

    def test_known_values(self):
        """Test hand-computed function values."""
        self.assertEqual(eval_basic("zakharov", np.array([1.0, 0.0])), 1.0 + 0.25 + 0.0625)
        self.assertEqual(eval_basic("bent_cigar", np.array([2.0, 1.0])), 4.0 + 1e6)
        self.assertAlmostEqual(eval_basic("rastrigin", np.array([0.5])), 20.25)
        self.assertEqual(eval_basic("rosenbrock", np.array([0.0, 0.0])), 1.0)

    def test_nonnegative_on_random_points(self):
        """Test nonnegative on random points."""
        rng = RngStream(1)
        for _ in range(200):
            z = rng.normal(size=8) * 10
            for name in BASIC_FUNCTIONS:
                self.assertGreaterEqual(eval_basic(name, z), -1e-9, name)

    def test_unknown_function(self):
        """Test unknown function."""
        with self.assertRaises(ConfigurationError):
            eval_basic("ackley", np.zeros(3))


class TestTransformData(unittest.TestCase):
    """Test synthetic shift and rotation data."""

    def test_rotation_and_shift(self):
        """Test rotation and shift."""
        bounds = Bounds.uniform(20, -100.0, 100.0)
        t = TransformData.generate(20, 17, 300.0, bounds, with_perm=True)
        np.testing.assert_allclose(t.M.T @ t.M, np.eye(20), atol=1e-10)
        self.assertTrue(np.all(np.abs(t.o) < 80.0))
        np.testing.assert_array_equal(np.sort(t.perm), np.arange(20))

    def test_same_seed_same_data(self):
        """Test that the same seed gives the same transform."""
        bounds = Bounds.uniform(10, -100.0, 100.0)
        a = TransformData.generate(10, 5, 0.0, bounds)
        b = TransformData.generate(10, 5, 0.0, bounds)
        np.testing.assert_array_equal(a.o, b.o)
        np.testing.assert_array_equal(a.M, b.M)
        self.assertIsNone(a.perm)
        c = TransformData.generate(10, 6, 0.0, bounds)
        self.assertFalse(np.array_equal(a.o, c.o))


class TestCases(unittest.TestCase):
    """Test benchmark instances and their optima."""

    def test_optimum_at_shift(self):
        """Test optimum at shift."""
        for fid, expected in (("F1", 300.0), ("F2", 400.0), ("F3", 600.0), ("F6", 1800.5)):
            for d in (10, 20):
                case = make_case(fid, d, 123)
                self.assertAlmostEqual(case(case.transforms[0].o), expected, delta=1e-9, msg=f"{fid}-{d}")

    def test_biases(self):
        """Test the known optimum of every function."""
        expected = {"F1": 300.0, "F2": 400.0, "F3": 600.0, "F6": 1800.0, "F10": 2500.0}
        for fid, bias in expected.items():
            case = make_case(fid, 10, 1)
            self.assertEqual(case.known_optimum, bias)
            self.assertEqual(case.bounds.dimension, 10)
            np.testing.assert_array_equal(case.bounds.ub, np.full(10, 100.0))

    def test_deterministic_instances(self):
        """Test deterministic instances."""
        x = RngStream(2).uniform(10) * 200 - 100
        for fid in ("F1", "F6", "F10"):
            self.assertEqual(make_case(fid, 10, 77)(x), make_case(fid, 10, 77)(x))
        self.assertNotEqual(make_case("F1", 10, 77)(x), make_case("F1", 10, 78)(x))

    def test_hybrid_partition(self):
        """Test hybrid partition."""
        self.assertEqual(hybrid_partition(20), (8, 8, 4))
        self.assertEqual(hybrid_partition(10), (4, 4, 2))

    def test_composition_exact_hit(self):
        """Test composition exact hit."""
        case = make_case("F10", 10, 9)
        o1 = case.transforms[0].o
        weights = composition_weights(o1, [t.o for t in case.transforms])
        np.testing.assert_array_equal(weights, [1.0, 0.0, 0.0])
        self.assertAlmostEqual(case(o1), 2500.0 + schwefel_mod(np.zeros(10)), places=9)

    def test_composition_weights_normalized(self):
        """Test composition weights normalized."""
        case = make_case("F10", 20, 10)
        shifts = [t.o for t in case.transforms]
        rng = RngStream(3)
        for _ in range(500):
            w = composition_weights(rng.uniform(20) * 200 - 100, shifts)
            self.assertAlmostEqual(float(w.sum()), 1.0, delta=1e-12)
            self.assertTrue(np.all(w >= 0))

    def test_composition_far_point_uses_equal_weights(self):
        """Test that composition far point uses equal weights."""
        shifts = [np.zeros(5), np.ones(5), -np.ones(5)]
        np.testing.assert_allclose(composition_weights(np.full(5, 1e4), shifts), np.full(3, 1.0 / 3))

    def test_composition_lower_bound(self):
        """Test composition lower bound."""
        case = make_case("F10", 10, 11)
        rng = RngStream(4)
        values = [case(x) for x in rng.uniform((10000, 10)) * 200 - 100]
        self.assertGreaterEqual(min(values), 2500.0 - 1e-9)

    def test_unsupported_cases(self):
        """Test unsupported cases."""
        with self.assertRaises(ConfigurationError):
            make_case("F4", 10, 1)
        with self.assertRaises(ConfigurationError):
            make_case("F1", 30, 1)

    def test_parse_case_id(self):
        """Test case id parsing."""
        self.assertEqual(parse_case_id("f6-20"), ("F6", 20))
        self.assertEqual(parse_case_id(" F10-10 "), ("F10", 10))
        for bad in ("F6", "F6-x", "F6-10-2"):
            with self.assertRaises(ConfigurationError):
                parse_case_id(bad)

    def test_suite(self):
        """Test the full benchmark suite."""
        cases = suite(2024)
        self.assertEqual([c.case_id for c in cases], [
            "F1-10", "F1-20", "F2-10", "F2-20", "F3-10", "F3-20", "F6-10", "F6-20", "F10-10", "F10-20",
        ])
        self.assertEqual([c.instance_seed for c in cases], [derive_run_seed(2024, i) for i in range(10)])
        self.assertEqual(len(cases[-1].transforms), 3)


class TestTransformFiles(unittest.TestCase):
    """Test instance export and import."""

    def test_export_import_preserves_values(self):
        """Test that export then import preserves values."""
        rng = RngStream(5)
        with tempfile.TemporaryDirectory() as tmp:
            for fid in ("F2", "F6", "F10"):
                case = make_case(fid, 10, 31)
                path = export_case(case, Path(tmp) / f"{fid}.txt")
                loaded = import_case(path)
                self.assertEqual(loaded.case_id, case.case_id)
                for x in rng.uniform((5, 10)) * 200 - 100:
                    self.assertEqual(loaded(x), case(x))

    def test_block_layout(self):
        """Test block layout."""
        with tempfile.TemporaryDirectory() as tmp:
            path = export_case(make_case("F10", 10, 3), Path(tmp) / "f10.txt")
            lines = path.read_text().splitlines()
            self.assertEqual(lines[:3], ["F10", "10", "3"])
            self.assertEqual(len(lines), 3 + 3 * 13)

    def test_malformed_files(self):
        """Test malformed files."""
        with tempfile.TemporaryDirectory() as tmp:
            bad_id = Path(tmp) / "bad_id.txt"
            bad_id.write_text("F9\n10\n1\n" + "0 " * 10 + "\n")
            with self.assertRaises(ResultsParseError) as ctx:
                import_case(bad_id)
            self.assertEqual(ctx.exception.line_number, 1)

            short = Path(tmp) / "short.txt"
            short.write_text("F1\n10\n1\n" + ("0 " * 10 + "\n") * 5)
            with self.assertRaises(ResultsParseError) as ctx:
                import_case(short)
            self.assertEqual(ctx.exception.line_number, 4)

            bad_size = Path(tmp) / "bad_size.txt"
            bad_size.write_text("F1\nten\n1\n")
            with self.assertRaises(ResultsParseError) as ctx:
                import_case(bad_size)
            self.assertEqual(ctx.exception.line_number, 2)


if __name__ == "__main__":
    unittest.main()
