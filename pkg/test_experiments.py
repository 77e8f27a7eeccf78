"""Tests for the simulation scenarios and the experiment drivers.
"""
import os
import unittest

import numpy as np
import pandas as pd
from pydantic import ValidationError

from hblasso.core.config import Config, FitConfig, build
from hblasso.core.errors import ConfigError, DomainError, TimingError
from hblasso.distributions import RngStream
from hblasso.experiments import (ScenarioSpec, count_local_maxima, default_truth, gen_scenario,
                                 logistic_features, multimodal_data, profile_log_posterior,
                                 run_multimodality_demo, run_sensitivity, run_simulation_study,
                                 run_timing, specs_from_config)
from hblasso.experiments.scenarios import scenario_noise
from hblasso.experiments.timing import check_ratio_band, timing_ratios, timing_truth


class TestScenarios(unittest.TestCase):
    def test_defaults_follow_model(self):
        spec = ScenarioSpec(model_id=3, p=12)
        self.assertEqual((spec.sigma, spec.r), (9.67, 0.5))
        self.assertEqual(len(spec.beta_truth), 13)
        self.assertEqual(default_truth(12)[:5], [1.0, 3.0, 0.5, 0.0, 1.0])
        self.assertEqual(default_truth(12)[11], 1.0)

    def test_rejects_inconsistent_settings(self):
        with self.assertRaises(ValidationError):
            ScenarioSpec(model_id=1, sigma=3.0)
        with self.assertRaises(ValidationError):
            ScenarioSpec(model_id=5)
        with self.assertRaises(ValidationError):
            ScenarioSpec(model_id=1, p=3, beta_truth=(1.0, 2.0))
        with self.assertRaises(ConfigError):
            build(ScenarioSpec, {"model_id": 2, "r": 0.1})

    def test_reproducible_and_independent(self):
        spec = ScenarioSpec(model_id=1, n=30, p=5)
        first, truth = gen_scenario(spec, 0)
        second, _ = gen_scenario(spec, 0)
        other, _ = gen_scenario(spec, 1)
        np.testing.assert_array_equal(first.y, second.y)
        self.assertFalse(np.array_equal(first.y, other.y))
        np.testing.assert_array_equal(truth, spec.truth)

    def test_design_correlation(self):
        data, _ = gen_scenario(ScenarioSpec(model_id=1, n=20_000, p=4), 0)
        corr = np.corrcoef(data.x, rowvar=False)
        self.assertAlmostEqual(corr[0, 1], 0.5, delta=0.03)
        self.assertAlmostEqual(corr[0, 2], 0.25, delta=0.03)

    def test_noise_is_unit_scale(self):
        for kind in ("gaussian", "contaminated", "laplace"):
            with self.subTest(kind=kind):
                noise = scenario_noise(kind, 100_000, RngStream(1))
                self.assertAlmostEqual(noise.var(), 1.0, delta=0.08)
        contaminated = scenario_noise("contaminated", 100_000, RngStream(2))
        self.assertAlmostEqual(np.mean(np.abs(contaminated) > 3.0), 0.0334, delta=0.003)
        with self.assertRaises(DomainError):
            scenario_noise("cauchy", 10, RngStream(0))

    def test_specs_from_config(self):
        config = Config({"simulation": {"models": [1, 4], "n_values": [50, 100], "p": 6, "replications": 3}})
        specs = specs_from_config(config)
        self.assertEqual(len(specs), 4)
        self.assertEqual({(s.model_id, s.n) for s in specs}, {(1, 50), (1, 100), (4, 50), (4, 100)})
        self.assertTrue(all(s.p == 6 and s.replications == 3 for s in specs))


class TestSimulationStudy(unittest.TestCase):
    def test_small_study(self):
        spec = ScenarioSpec(model_id=1, n=50, p=5, replications=2)
        result = run_simulation_study([spec], ("BL", "HBL"), FitConfig(iterations=300, burn_in=100))
        self.assertEqual(list(result.metrics.columns),
                         ["method", "n", "RMSE", "AL", "CP", "model", "replications", "failed"])
        self.assertEqual(sorted(result.metrics["method"]), ["BL", "HBL"])
        self.assertTrue((result.metrics["replications"] == 2).all())
        self.assertTrue((result.metrics["failed"] == 0).all())
        self.assertTrue(result.metrics["CP"].between(0.0, 1.0).all())
        self.assertEqual(len(result.replications), 4)
        self.assertEqual(len(result.eta_medians), 2)
        self.assertTrue(result.failures.empty)

    def test_reproducible(self):
        spec = ScenarioSpec(model_id=4, n=40, p=3, replications=1, seed=9)
        config = FitConfig(iterations=200, burn_in=50)
        first = run_simulation_study([spec], ("HBL",), config).replications
        second = run_simulation_study([spec], ("HBL",), config).replications
        self.assertEqual(first["RMSE"].tolist(), second["RMSE"].tolist())


class TestSensitivity(unittest.TestCase):
    def test_features(self):
        features = logistic_features(np.array([0.3, 0.2]))
        self.assertEqual(features.shape, (2, 4))
        self.assertAlmostEqual(features[0, 0], 0.5)
        self.assertAlmostEqual(features[1, 1], 0.5)

    def test_small_run(self):
        result = run_sensitivity(parameters=("c",), values=(0.1, 10.0), n_points=20,
                                 iterations=300, burn_in=100)
        self.assertEqual(len(result.curves), 2 * 20)
        self.assertEqual(list(result.curves.columns), ["parameter", "value", "i", "x", "y_hat"])
        self.assertEqual(len(result.truth), 20)
        self.assertTrue(np.all(np.isfinite(result.curves["y_hat"])))

    def test_unknown_parameter(self):
        with self.assertRaises(DomainError):
            run_sensitivity(parameters=("e",))


class TestMultimodality(unittest.TestCase):
    """Mode counts of the (beta_1, beta_2) profile posterior."""
    def setUp(self):
        self.data = multimodal_data(n=5, sigma=0.03, seed=0)
        axis = np.linspace(-1.0, 6.0, 141)
        b1, b2 = np.meshgrid(axis, axis, indexing="ij")
        self.shape = b1.shape
        self.grid = np.column_stack([b1.ravel(), b2.ravel()])

    def test_design(self):
        self.assertAlmostEqual(np.sum(self.data.x ** 2), 1.0)
        np.testing.assert_allclose(self.data.x.mean(axis=0), 0.0, atol=1e-12)

    def test_conditional_prior_is_unimodal(self):
        values = profile_log_posterior(self.data, self.grid, 3.0, 1.0, "conditional").reshape(self.shape)
        self.assertEqual(count_local_maxima(values), 1)

    def test_unconditional_prior_is_multimodal(self):
        values = profile_log_posterior(self.data, self.grid, 3.0, 1.0, "unconditional").reshape(self.shape)
        self.assertGreaterEqual(count_local_maxima(values), 2)

    def test_unknown_prior(self):
        with self.assertRaises(ValueError):
            profile_log_posterior(self.data, self.grid[:3], 3.0, 1.0, "flat")

    def test_count_local_maxima(self):
        axis = np.linspace(-3.0, 3.0, 61)
        u, v = np.meshgrid(axis, axis, indexing="ij")
        two = np.exp(-((u - 1.5) ** 2 + v ** 2)) + np.exp(-((u + 1.5) ** 2 + v ** 2))
        self.assertEqual(count_local_maxima(two), 2)
        self.assertEqual(count_local_maxima(np.zeros((10, 10))), 0)

    def test_demo(self):
        result = run_multimodality_demo(iterations=1500, burn_in=300, grid_points=141, bins=30)
        self.assertEqual(result.profile_modes["conditional"], 1)
        self.assertGreaterEqual(result.profile_modes["unconditional"], 2)
        frame = result.modes_frame()
        self.assertEqual(list(frame["prior"]), ["conditional", "unconditional"])
        self.assertEqual(len(result.profile), 2 * 141 * 141)
        self.assertEqual(len(result.histograms), 2 * 30 * 30)


class TestTiming(unittest.TestCase):
    def test_truth(self):
        self.assertEqual(timing_truth(3), [0.0, 3.0, 0.5, 1.0])
        self.assertEqual(len(timing_truth(10)), 11)

    def test_small_run(self):
        table = run_timing(n=30, p_grid=(3,), methods=("BL", "HBL"), iterations=40, burn_in=10, runs=2)
        self.assertEqual(list(table.columns), ["method", "p", "seconds", "sd", "runs"])
        self.assertEqual(len(table), 2)
        self.assertTrue((table["seconds"] > 0).all())

    def test_ratio_table(self):
        table = pd.DataFrame({"method": ["mBL", "tBL", "HBL", "mBL", "tBL", "HBL"],
                              "p": [5, 5, 5, 20, 20, 20],
                              "seconds": [1.0, 1.2, 1.5, 2.0, 2.0, 5.0]})
        ratios = timing_ratios(table).set_index(["p", "reference"])
        self.assertAlmostEqual(ratios.loc[(5, "mBL"), "ratio"], 1.5)
        self.assertAlmostEqual(ratios.loc[(5, "tBL"), "ratio"], 1.25)
        self.assertTrue(ratios.loc[(5, "mBL"), "within_band"])
        self.assertFalse(ratios.loc[(20, "mBL"), "within_band"])
        with self.assertRaises(TimingError) as ctx:
            check_ratio_band(ratios.reset_index())
        self.assertIn("p=20", str(ctx.exception))
        check_ratio_band(ratios.reset_index().query("p == 5"))

    def test_ratio_table_without_hbl(self):
        table = pd.DataFrame({"method": ["BL", "mBL"], "p": [3, 3], "seconds": [1.0, 1.0]})
        self.assertEqual(len(timing_ratios(table)), 0)


@unittest.skipUnless(os.environ.get("HBLASSO_SLOW"), "set HBLASSO_SLOW=1 to run timing comparisons")
class TestTimingBand(unittest.TestCase):
    def test_hbl_close_to_robust_baselines(self):
        table = run_timing(n=200, p_grid=(20,), methods=("mBL", "tBL", "HBL"), iterations=1500,
                           burn_in=500, runs=2)
        ratios = timing_ratios(table)
        self.assertEqual(len(ratios), 2)
        self.assertTrue(ratios["within_band"].all(), ratios.to_string())


@unittest.skipUnless(os.environ.get("HBLASSO_SLOW"), "set HBLASSO_SLOW=1 to run the desk-scale study")
class TestDeskScaleStudy(unittest.TestCase):
    def test_model_one(self):
        spec = ScenarioSpec(model_id=1, n=100, p=20, replications=50)
        result = run_simulation_study([spec], ("BL", "HBL"), FitConfig(iterations=2500, burn_in=500))
        metrics = result.metrics.set_index("method")
        self.assertTrue(0.17 <= metrics.loc["HBL", "RMSE"] <= 0.27)
        self.assertLessEqual(metrics.loc["BL", "RMSE"], metrics.loc["HBL", "RMSE"] + 0.02)
        self.assertTrue(0.90 <= metrics.loc["HBL", "CP"] <= 0.99)


if __name__ == "__main__":
    unittest.main()
