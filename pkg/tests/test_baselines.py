"""
Unit tests for the PSO, SHADE, L-SHADE and CMA-ES baselines and the
optimizer registry.
"""

import unittest

import numpy as np

from fcpobench.core import Bounds, Budget, CountingObjective, FunctionObjective, RngStream
from fcpobench.errors import ConfigurationError
from fcpobench.optimizers import (
    ALGORITHM_IDS,
    BaselineConfig,
    CmaesOptimizer,
    FcpoConfig,
    FcpoOptimizer,
    PsoOptimizer,
    ShadeOptimizer,
    cmaes_run,
    create_optimizer,
    lshade_run,
    pso_run,
    shade_run,
)
from fcpobench.optimizers.cmaes import CmaesParameters


def sphere(dimension, low=-5.0, high=5.0):
    return FunctionObjective(lambda x: float(np.sum(x * x)), Bounds.uniform(dimension, low, high), name="sphere")


def median_final(run, cfg, dimension, budget, seeds, half_width=5.0):
    return float(np.median([
        run(sphere(dimension, -half_width, half_width), cfg, Budget(budget), RngStream(seed)).final_value
        for seed in seeds
    ]))


class TestBaselineConfig(unittest.TestCase):
    """Test baseline configuration validation."""

    def test_defaults_are_valid(self):
        """Test that defaults are valid."""
        for algorithm_id in ("pso", "shade", "lshade", "cmaes"):
            self.assertEqual(BaselineConfig(algorithm_id=algorithm_id).algorithm_id, algorithm_id)

    def test_invalid_values(self):
        """Test invalid values."""
        for kwargs in (
            {"algorithm_id": "cso"},
            {"population": 3},
            {"min_population": 2},
            {"w_start": 1.5},
            {"pbest_rate": -0.1},
            {"memory_size": 0},
            {"resample_limit": -1},
        ):
            with self.assertRaises(ConfigurationError, msg=str(kwargs)):
                BaselineConfig(**kwargs)


class TestPso(unittest.TestCase):
    """Test the particle swarm baseline."""

    def test_budget_is_used_exactly(self):
        """Test that PSO uses the budget exactly."""
        f = CountingObjective(sphere(4))
        record = pso_run(f, BaselineConfig("pso"), Budget(1000), RngStream(1))
        self.assertEqual(record.nfe, 1000)
        self.assertEqual(f.calls, 1000)

    def test_budget_below_swarm_size(self):
        """Test budget below swarm size."""
        with self.assertRaises(ConfigurationError):
            pso_run(sphere(2), BaselineConfig("pso"), Budget(29), RngStream(1))

    def test_same_seed_same_record(self):
        """Test PSO determinism."""
        a = pso_run(sphere(3), BaselineConfig("pso"), Budget(600), RngStream(4))
        b = pso_run(sphere(3), BaselineConfig("pso"), Budget(600), RngStream(4))
        self.assertEqual(a.trace, b.trace)
        self.assertEqual(a.final_value, b.final_value)
        np.testing.assert_array_equal(a.best_position, b.best_position)

    def test_trace_is_decreasing(self):
        """Test that trace is decreasing."""
        record = pso_run(sphere(5), BaselineConfig("pso"), Budget(3000), RngStream(2))
        values = [v for _, v in record.trace]
        self.assertTrue(all(b < a for a, b in zip(values, values[1:])))
        self.assertTrue(all(b <= a for a, b in zip(record.iteration_best, record.iteration_best[1:])))
        self.assertEqual(record.algorithm_id, "pso")

    def test_sphere_convergence(self):
        """Test PSO convergence on a small sphere."""
        self.assertLessEqual(median_final(pso_run, BaselineConfig("pso"), 5, 10000, range(5)), 1e-2)


class TestShade(unittest.TestCase):
    """Test SHADE and L-SHADE."""

    def test_budget_is_used_exactly(self):
        """Test that SHADE and L-SHADE use the budget exactly."""
        for run in (shade_run, lshade_run):
            f = CountingObjective(sphere(3))
            record = run(f, BaselineConfig("shade"), Budget(700), RngStream(3))
            self.assertEqual(record.nfe, 700)
            self.assertEqual(f.calls, 700)

    def test_budget_below_population(self):
        """Test budget below population."""
        with self.assertRaises(ConfigurationError):
            shade_run(sphere(3), BaselineConfig("shade"), Budget(29), RngStream(1))

    def test_memory_stays_in_unit_interval(self):
        """Test that memory stays in unit interval."""
        optimizer = ShadeOptimizer(BaselineConfig("shade"))
        optimizer.minimize(sphere(4), Budget(4000), RngStream(5))
        self.assertGreater(len(optimizer.memory_history), 1)
        for memory in optimizer.memory_history:
            self.assertEqual(memory.shape, (2, 6))
            self.assertTrue(np.all((memory >= 0.0) & (memory <= 1.0)))

    def test_shade_keeps_population(self):
        """Test that SHADE keeps its population size."""
        optimizer = ShadeOptimizer(BaselineConfig("shade"))
        optimizer.minimize(sphere(3), Budget(1000), RngStream(6))
        self.assertEqual(optimizer.population_history, [30])

    def test_lshade_population_shrinks_to_minimum(self):
        """Test that the L-SHADE population shrinks to the minimum."""
        optimizer = ShadeOptimizer(BaselineConfig("lshade"), linear_reduction=True)
        record = optimizer.minimize(sphere(4), Budget(5000), RngStream(7))
        history = optimizer.population_history
        self.assertEqual(history[0], 72)
        self.assertEqual(history[-1], 4)
        self.assertTrue(all(b <= a for a, b in zip(history, history[1:])))
        self.assertEqual(record.algorithm_id, "lshade")

    def test_same_seed_same_record(self):
        """Test L-SHADE determinism."""
        a = lshade_run(sphere(3), BaselineConfig("lshade"), Budget(800), RngStream(8))
        b = lshade_run(sphere(3), BaselineConfig("lshade"), Budget(800), RngStream(8))
        self.assertEqual(a.trace, b.trace)

    def test_sphere_convergence(self):
        """Test SHADE convergence on a small sphere."""
        self.assertLessEqual(median_final(shade_run, BaselineConfig("shade"), 5, 10000, range(3)), 1e-3)

    def test_sphere_accuracy_on_wide_box(self):
        """Test SHADE accuracy on the wide-box D=5 sphere."""
        value = median_final(shade_run, BaselineConfig("shade"), 5, 10000, range(5), half_width=100.0)
        self.assertLessEqual(value, 1e-6)


class TestCmaes(unittest.TestCase):
    """Test the CMA-ES baseline."""

    def test_default_parameters(self):
        """Test default parameters."""
        par = CmaesParameters(10)
        self.assertEqual(par.lam, 10)
        self.assertEqual(par.mu, 5)
        self.assertAlmostEqual(float(par.weights.sum()), 1.0, places=12)
        self.assertTrue(np.all(np.diff(par.weights) < 0))
        self.assertEqual(CmaesParameters(20).lam, 12)
        self.assertEqual(CmaesParameters(5, lam=16).lam, 16)

    def test_budget_never_exceeded(self):
        """Test that CMA-ES never exceeds the budget."""
        f = CountingObjective(sphere(5))
        record = cmaes_run(f, BaselineConfig("cmaes"), Budget(1005), RngStream(1))
        self.assertLessEqual(record.nfe, 1005)
        self.assertGreater(record.nfe, 1005 - CmaesParameters(5).lam)
        self.assertEqual(f.calls, record.nfe)

    def test_budget_below_offspring_count(self):
        """Test budget below offspring count."""
        with self.assertRaises(ConfigurationError):
            cmaes_run(sphere(5), BaselineConfig("cmaes"), Budget(5), RngStream(1))

    def test_covariance_stays_symmetric(self):
        """Test that covariance stays symmetric."""
        optimizer = CmaesOptimizer(BaselineConfig("cmaes"))
        optimizer.minimize(sphere(6), Budget(3000), RngStream(2))
        self.assertLessEqual(optimizer.max_asymmetry, 1e-10)

    def test_candidates_stay_in_bounds(self):
        """Test that candidates stay in bounds."""
        record = cmaes_run(sphere(4, 1.0, 3.0), BaselineConfig("cmaes"), Budget(2000), RngStream(3))
        self.assertTrue(np.all(record.best_position >= 1.0))
        self.assertTrue(np.all(record.best_position <= 3.0))
        self.assertLess(record.final_value, 4.05)

    def test_same_seed_same_record(self):
        """Test CMA-ES determinism."""
        a = cmaes_run(sphere(4), BaselineConfig("cmaes"), Budget(900), RngStream(9))
        b = cmaes_run(sphere(4), BaselineConfig("cmaes"), Budget(900), RngStream(9))
        self.assertEqual(a.trace, b.trace)

    def test_sphere_convergence(self):
        """Test CMA-ES convergence on a small sphere."""
        self.assertLessEqual(median_final(cmaes_run, BaselineConfig("cmaes"), 5, 10000, range(3)), 1e-8)


class TestRegistry(unittest.TestCase):
    """Test the algorithm factory."""

    def test_every_id_builds(self):
        """Test that every registered id builds an optimizer."""
        for algorithm_id in ALGORITHM_IDS:
            self.assertEqual(create_optimizer(algorithm_id).algorithm_id, algorithm_id)

    def test_unknown_id(self):
        """Test rejection of unknown algorithm ids."""
        with self.assertRaises(ConfigurationError):
            create_optimizer("clpso")

    def test_ablation_flags(self):
        """Test the flags set by the ablation ids."""
        base = FcpoConfig(p_init=30)
        nozoom = create_optimizer("fcpo_nozoom", base)
        self.assertIsInstance(nozoom, FcpoOptimizer)
        self.assertTrue(nozoom.config.no_zoom)
        self.assertFalse(nozoom.config.no_eigen)
        self.assertEqual(nozoom.config.p_init, 30)
        self.assertTrue(create_optimizer("fcpo_noeigen", base).config.no_eigen)
        self.assertTrue(create_optimizer("fcpo_nolpsr", base).config.no_lpsr)
        self.assertFalse(base.no_zoom)

    def test_baseline_config_is_retargeted(self):
        """Test that baseline config is retargeted."""
        optimizer = create_optimizer("lshade", baseline_config=BaselineConfig("pso", population=20))
        self.assertIsInstance(optimizer, ShadeOptimizer)
        self.assertTrue(optimizer.linear_reduction)
        self.assertEqual(optimizer.config.algorithm_id, "lshade")
        self.assertEqual(optimizer.config.population, 20)
        self.assertIsInstance(create_optimizer("pso"), PsoOptimizer)


if __name__ == "__main__":
    unittest.main()
