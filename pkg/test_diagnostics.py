"""Tests for posterior summaries, effective sample sizes and evaluation metrics.
"""
import unittest

import numpy as np
from scipy.signal import lfilter

from hblasso.core.errors import DomainError, InsufficientSamplesError
from hblasso.diagnostics import (acf, average_ess, ess, inefficiency_factor, loocv_metrics,
                                 prediction_errors, sim_metrics, summarize)
from hblasso.distributions import RngStream
from hblasso.experiments.scenarios import scenario_noise
from hblasso.model import HUBER_C, Dataset, PosteriorSamples


class TestSummarize(unittest.TestCase):
    def test_quantiles_of_sequence(self):
        samples = PosteriorSamples(np.arange(1.0, 1001.0)[:, None], ["beta_1"])
        row = summarize(samples).row("beta_1")
        self.assertAlmostEqual(row["median"], 500.5)
        self.assertAlmostEqual(row["mean"], 500.5)
        self.assertAlmostEqual(row["lower"], 25.975)
        self.assertAlmostEqual(row["upper"], 975.025)

    def test_constant_column(self):
        samples = PosteriorSamples(np.full((100, 1), 2.5), ["rho2"])
        row = summarize(samples, include_sd=True).row("rho2")
        self.assertEqual((row["lower"], row["median"], row["upper"]), (2.5, 2.5, 2.5))
        self.assertEqual(row["sd"], 0.0)
        self.assertTrue(np.isfinite(row["ess"]))

    def test_frame_columns(self):
        draws = np.random.default_rng(0).normal(size=(200, 2))
        frame = summarize(PosteriorSamples(draws, ["a", "b"]), include_sd=True).to_frame()
        self.assertEqual(list(frame.columns), ["parameter", "median", "mean", "lower", "upper", "ess", "sd"])
        self.assertTrue((frame["lower"] <= frame["median"]).all())
        self.assertTrue((frame["median"] <= frame["upper"]).all())

    def test_short_chain(self):
        with self.assertRaises(InsufficientSamplesError):
            summarize(PosteriorSamples(np.zeros((5, 1)), ["a"]))
        with self.assertLogs("hblasso.diagnostics.summary", level="WARNING"):
            summary = summarize(PosteriorSamples(np.arange(20.0)[:, None], ["a"]))
        self.assertTrue(0.0 < summary.ess[0] <= 20.0)


class TestEffectiveSampleSize(unittest.TestCase):
    def test_acf_lag_zero(self):
        rho = acf(np.random.default_rng(1).normal(size=500), max_lag=10)
        self.assertEqual(rho.shape, (11,))
        self.assertAlmostEqual(rho[0], 1.0)

    def test_independent_draws(self):
        x = np.random.default_rng(2).normal(size=10_000)
        self.assertTrue(8_000 <= ess(x) <= 12_000)
        self.assertLess(abs(inefficiency_factor(x) - 1.0), 0.2)

    def test_autoregressive_chain(self):
        phi, size = 0.9, 100_000
        x = lfilter([1.0], [1.0, -phi], np.random.default_rng(3).normal(size=size))
        expected = size * (1.0 - phi) / (1.0 + phi)
        self.assertAlmostEqual(ess(x) / expected, 1.0, delta=0.2)

    def test_average_over_block(self):
        draws = np.random.default_rng(4).normal(size=(1000, 3))
        samples = PosteriorSamples(draws, ["beta_1", "beta_2", "rho2"])
        self.assertGreater(average_ess(samples), 500.0)
        with self.assertRaises(KeyError):
            average_ess(samples, "tau2")

    def test_antithetic_chain_is_capped(self):
        size = 10_000
        x = lfilter([1.0], [1.0, 0.9], np.random.default_rng(5).normal(size=size))
        self.assertLessEqual(ess(x), 1.5 * size)
        self.assertEqual(ess(x), size)

    def test_too_few_draws(self):
        with self.assertRaises(InsufficientSamplesError):
            ess(np.zeros(49))


class TestMetrics(unittest.TestCase):
    def test_sim_metrics(self):
        intervals = np.column_stack([np.full(4, -0.5), np.full(4, 0.5)])
        self.assertEqual(sim_metrics(np.ones(4), np.zeros(4), intervals), (1.0, 1.0, 1.0))
        perfect = sim_metrics(np.ones(4), np.ones(4), np.ones((4, 2)))
        self.assertEqual((perfect.rmse, perfect.al, perfect.cp), (0.0, 0.0, 1.0))

    def test_sim_metrics_shape(self):
        with self.assertRaises(DomainError):
            sim_metrics(np.ones(3), np.ones(4), np.ones((4, 2)))

    def test_prediction_errors(self):
        errors = prediction_errors([1.0, -1.0, 3.0], [0.0, 0.0, 0.0])
        self.assertAlmostEqual(errors["MSPE"], 11.0 / 3.0)
        self.assertAlmostEqual(errors["MAPE"], 5.0 / 3.0)
        self.assertAlmostEqual(errors["MedSPE"], 1.0)
        self.assertAlmostEqual(errors["MHPE"], (0.5 + 0.5 + HUBER_C * (3.0 - HUBER_C / 2.0)) / 3.0)

    def test_median_below_mean_for_heavy_tails(self):
        for seed in range(5):
            with self.subTest(seed=seed):
                resid = 9.67 * scenario_noise("contaminated", 100, RngStream(seed))
                errors = prediction_errors(resid, np.zeros(100))
                self.assertLessEqual(errors["MedSPE"], errors["MSPE"])

    def test_loocv(self):
        data = Dataset(y=[1.0, 2.0, 3.0], x=[[0.0], [1.0], [2.0]])
        coef = np.tile([1.0, 1.0], (3, 1))
        errors = loocv_metrics(data, coef)
        self.assertEqual(errors["MSPE"], 0.0)
        coef[1, 0] = np.nan
        with self.assertRaises(DomainError):
            loocv_metrics(data, coef)
        with self.assertRaises(DomainError):
            loocv_metrics(data, np.ones((2, 2)))


if __name__ == "__main__":
    unittest.main()
