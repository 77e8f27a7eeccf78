"""Tests for the gamma approximation of the eta conditional.
"""
import os
import unittest

import numpy as np
from scipy.integrate import trapezoid

from hblasso.core.errors import DomainError
from hblasso.distributions import RngStream
from hblasso.eta import (GammaApprox, approximation_study, compute_p, discrepancy, divergences,
                         eta_density_table, fixed_point_residual, sample_eta, solve_ab,
                         true_eta_logpdf_unnorm)
from hblasso.eta.discrepancy import MIN_ESS_FRACTION, _clamp
from hblasso.model import Hyperparams


def random_instances(count=200, seed=0):
    gen = np.random.default_rng(seed)
    for _ in range(count):
        n = int(gen.integers(10, 501))
        P = n * gen.uniform(1.0, 100.0)
        c, d = 10.0 ** gen.uniform(-2.0, 1.0, size=2)
        yield n, P, c, d


class TestComputeP(unittest.TestCase):
    def test_value(self):
        self.assertAlmostEqual(compute_p([1.0, 4.0], 2.0), 2.5)

    def test_lower_bound(self):
        self.assertAlmostEqual(compute_p(np.full(7, 3.0), 3.0), 7.0)
        sigma2 = RngStream(0).uniform(20) + 0.1
        self.assertGreaterEqual(compute_p(sigma2, 0.7), 20.0)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            compute_p([1.0, 0.0], 1.0)


class TestSolveAB(unittest.TestCase):
    """Fixed-point iteration for (A, B)."""
    def test_converges_on_random_instances(self):
        converged = 0
        for n, P, c, d in random_instances():
            approx = solve_ab(n, P, c, d)
            self.assertIsInstance(approx, GammaApprox)
            self.assertLessEqual(approx.iterations_used, 10)
            if not approx.converged:
                continue
            converged += 1
            eta = approx.eta_star
            scale = P + d + (n + c) / eta
            self.assertLess(abs(fixed_point_residual(eta, n, P, c, d)), 1e-6 * scale)
            self.assertGreater(approx.A, 1.0)
        self.assertGreaterEqual(converged, 198)

    def test_heavy_outlier_state_selects_small_eta(self):
        self.assertLess(solve_ab(100, 100.0 * 100, 1.0, 1.0).eta_star, 1.0)

    def test_clean_state_selects_large_eta(self):
        self.assertGreater(solve_ab(100, 100.0 * (1.0 + 1e-9), 1.0, 1.0).eta_star, 10.0)

    def test_alternative_start_agrees(self):
        for n, P, c, d in random_instances(count=20, seed=1):
            default = solve_ab(n, P, c, d, max_iter=50)
            alt = solve_ab(n, P, c, d, max_iter=50, init="alt")
            if default.converged and alt.converged:
                self.assertAlmostEqual(alt.eta_star / default.eta_star, 1.0, places=6)

    def test_matches_grid_mode(self):
        # eta* maximizes f(eta) * eta
        n, P, c, d = 50, 80.0, 1.0, 1.0
        eta_star = solve_ab(n, P, c, d).eta_star
        grid = np.linspace(0.5 * eta_star, 1.5 * eta_star, 20001)
        objective = true_eta_logpdf_unnorm(grid, n, P, c, d) + np.log(grid)
        self.assertLess(abs(grid[np.argmax(objective)] - eta_star), grid[1] - grid[0])

    def test_non_convergence_returns_last_iterate(self):
        approx = solve_ab(100, 5000.0, 1.0, 1.0, max_iter=1, tol=1e-300)
        self.assertFalse(approx.converged)
        self.assertEqual(approx.iterations_used, 1)
        self.assertEqual(len(approx.trace), 2)
        self.assertGreater(approx.B, 0.0)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            solve_ab(10, 5.0)
        with self.assertRaises(DomainError):
            solve_ab(10, 20.0, c=0.0)

    def test_sample_eta(self):
        sigma2 = np.linspace(0.5, 2.0, 30)
        eta, approx = sample_eta(sigma2, 1.0, Hyperparams(), RngStream(0))
        self.assertGreater(eta, 0.0)
        self.assertAlmostEqual(approx.P, compute_p(sigma2, 1.0))


class TestDiscrepancy(unittest.TestCase):
    """Importance-sampling divergences between the exact and approximate conditional."""
    def test_ranges(self):
        for n, P in ((10, 15.0), (100, 180.0), (200, 2000.0)):
            with self.subTest(n=n, P=P):
                result = divergences(solve_ab(n, P), 1.0, 1.0, 5000, RngStream(1))
                self.assertTrue(0.0 <= result["TV"] <= 1.0)
                self.assertGreaterEqual(result["KL"], 0.0)
                self.assertGreaterEqual(result["revKL"], 0.0)
                self.assertGreater(result["ess"], 0.0)

    def test_proposal_keeps_weights_balanced(self):
        for n, P in ((10, 15.0), (200, 260.0)):
            with self.subTest(n=n):
                result = divergences(solve_ab(n, P), 1.0, 1.0, 5000, RngStream(3))
                self.assertGreater(result["ess"], 5.0 * MIN_ESS_FRACTION * 5000)

    def test_clamped_estimates_are_logged(self):
        with self.assertLogs("hblasso.eta.discrepancy", level="DEBUG") as logs:
            self.assertEqual(_clamp("KL", -0.003, np.inf), 0.0)
            self.assertEqual(_clamp("TV", 1.2, 1.0), 1.0)
        self.assertEqual(len(logs.records), 2)
        self.assertIn("KL", logs.output[0])
        self.assertEqual(_clamp("revKL", 0.25, np.inf), 0.25)

    def test_discrepancy_measure(self):
        sample = np.linspace(0.5, 2.0, 40)
        tv = discrepancy(sample, 1.0, 1.0, "TV", mc_size=2000, rng=RngStream(2))
        self.assertTrue(0.0 <= tv <= 1.0)
        with self.assertRaises(ValueError):
            discrepancy(sample, 1.0, 1.0, "L2")

    def test_invalid_mc_size(self):
        with self.assertRaises(DomainError):
            divergences(solve_ab(10, 15.0), 1.0, 1.0, 1, RngStream(0))

    def test_density_table(self):
        n, P = 50, 80.0
        eta_star = solve_ab(n, P).eta_star
        table = eta_density_table(n, P, 1.0, 1.0, np.linspace(1e-3, 10.0 * eta_star, 4000))
        self.assertEqual(list(table.columns), ["eta", "true", "approx"])
        self.assertAlmostEqual(trapezoid(table["true"], table["eta"]), 1.0, places=8)
        self.assertAlmostEqual(trapezoid(table["approx"], table["eta"]), 1.0, places=3)

    def test_density_table_rejects_bad_grid(self):
        with self.assertRaises(DomainError):
            eta_density_table(10, 12.0, 1.0, 1.0, [2.0, 1.0])

    def test_small_study(self):
        table = approximation_study(n_grid=(10, 20), ab_grid=(1.0,), datasets=2, mc_size=500)
        self.assertEqual(list(table.columns), ["n", "ab", "measure", "max", "mean"])
        self.assertEqual(len(table), 2 * 1 * 3)
        self.assertTrue((table["max"] >= table["mean"]).all())


@unittest.skipUnless(os.environ.get("HBLASSO_SLOW"), "set HBLASSO_SLOW=1 to run the full study")
class TestApproximationTrend(unittest.TestCase):
    def test_accuracy_improves_with_n(self):
        table = approximation_study(n_grid=(10, 200), ab_grid=(1.0,), datasets=100, mc_size=10000)
        worst = table.set_index(["n", "measure"])["max"]
        for measure in ("TV", "KL", "revKL"):
            self.assertLess(worst[(200, measure)], worst[(10, measure)])
        self.assertLess(worst[(200, "TV")], 0.1)


if __name__ == "__main__":
    unittest.main()
