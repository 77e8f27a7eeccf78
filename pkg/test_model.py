"""Tests for the model types, the losses and the log posteriors.
"""
import unittest

import numpy as np
from pydantic import ValidationError
from scipy.integrate import quad

from hblasso.core.errors import DataError, DomainError
from hblasso.model import (HUBER_C, ChainState, Dataset, Hyperparams, PosteriorSamples, huber,
                           hyperbolic_logpdf, hyperbolic_loss, log_joint_posterior,
                           log_joint_posterior_transformed, log_joint_posterior_unconditional,
                           loss_table, pseudo_huber)


class TestDataset(unittest.TestCase):
    def test_shapes(self):
        data = Dataset(y=[1.0, 2.0, 3.0], x=[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        self.assertEqual((data.n, data.p), (3, 2))
        self.assertEqual(data.names, ["x1", "x2"])

    def test_vector_design_becomes_column(self):
        self.assertEqual(Dataset(y=[1.0, 2.0], x=[3.0, 4.0]).p, 1)

    def test_row_mismatch(self):
        with self.assertRaises(DataError):
            Dataset(y=[1.0, 2.0], x=[[1.0], [2.0], [3.0]])

    def test_non_finite_cell_names_location(self):
        with self.assertRaises(DataError) as ctx:
            Dataset(y=[1.0, 2.0], x=[[1.0, 2.0], [np.nan, 3.0]], feature_names=["a", "b"])
        self.assertEqual(ctx.exception.row, 2)
        self.assertEqual(ctx.exception.column, "a")

    def test_drop(self):
        data = Dataset(y=[1.0, 2.0, 3.0], x=[[1.0], [2.0], [3.0]])
        np.testing.assert_array_equal(data.drop(1).y, [1.0, 3.0])


class TestHyperparams(unittest.TestCase):
    def test_defaults(self):
        hyper = Hyperparams()
        self.assertEqual((hyper.a, hyper.b, hyper.c, hyper.d), (1.0, 1.0, 1.0, 1.0))
        self.assertEqual(hyper.fp_max_iter, 10)

    def test_rejects_non_positive(self):
        with self.assertRaises(ValidationError):
            Hyperparams(c=0.0)
        with self.assertRaises(ValidationError):
            Hyperparams(eta_mode="sometimes")


class TestChainState(unittest.TestCase):
    def test_rejects_non_positive_scale(self):
        with self.assertRaises(DomainError):
            ChainState(beta=np.zeros(2), tau2=np.array([1.0, 0.0]), sigma2=np.ones(3),
                       rho2=1.0, lambda2=1.0, eta=1.0)
        with self.assertRaises(DomainError):
            ChainState(beta=np.zeros(2), tau2=np.ones(2), sigma2=np.ones(3),
                       rho2=1.0, lambda2=1.0, eta=np.nan)

    def test_evolve(self):
        state = ChainState(beta=np.zeros(2), tau2=np.ones(2), sigma2=np.ones(3),
                           rho2=1.0, lambda2=1.0, eta=1.0)
        moved = state.evolve(rho2=2.0, beta=np.ones(2))
        self.assertEqual((moved.rho2, state.rho2), (2.0, 1.0))
        np.testing.assert_array_equal(moved.beta, np.ones(2))
        self.assertIs(moved.sigma2, state.sigma2)
        with self.assertRaises(DomainError):
            state.evolve(sigma2=np.array([1.0, -1.0, 1.0]))
        with self.assertRaises(DomainError):
            state.evolve(beta=np.array([0.0, np.inf]))
        with self.assertRaises(TypeError):
            state.evolve(gamma=1.0)


class TestPosteriorSamples(unittest.TestCase):
    def test_access(self):
        draws = np.arange(12, dtype=float).reshape(3, 4)
        samples = PosteriorSamples(draws, ["intercept", "beta_1", "beta_2", "rho2"])
        self.assertEqual(samples.size, 3)
        np.testing.assert_array_equal(samples.column("rho2"), [3.0, 7.0, 11.0])
        np.testing.assert_array_equal(samples.coefficients(), draws[:, :3])
        self.assertEqual(list(samples.to_frame().columns), samples.names)
        with self.assertRaises(KeyError):
            samples.column("sigma2")

    def test_rejects_bad_names(self):
        with self.assertRaises(DomainError):
            PosteriorSamples(np.zeros((2, 2)), ["a", "a"])
        with self.assertRaises(DomainError):
            PosteriorSamples(np.zeros((2, 2)), ["a"])


class TestLosses(unittest.TestCase):
    def test_hyperbolic_value(self):
        self.assertAlmostEqual(hyperbolic_loss(3.0, 4.0, 1.0), 2.0 * np.sqrt(13.0) - 4.0, places=12)
        self.assertEqual(hyperbolic_loss(0.0, 2.0, 1.0), 0.0)

    def test_hyperbolic_limits(self):
        # eta -> infinity gives x^2 / 2; eta -> 0 scaled by 1 / sqrt(eta) gives |x|
        self.assertAlmostEqual(hyperbolic_loss(1.0, 1e6, 1.0), 0.5, places=6)
        self.assertAlmostEqual(hyperbolic_loss(2.0, 1e-14, 1.0) / np.sqrt(1e-14), 2.0, places=6)

    def test_huber(self):
        self.assertAlmostEqual(huber(2.0), HUBER_C * (2.0 - HUBER_C / 2.0), places=12)
        self.assertAlmostEqual(huber(-1.0), 0.5, places=12)

    def test_pseudo_huber(self):
        c = 1.5
        self.assertAlmostEqual(pseudo_huber(2.0, c), c * np.sqrt(c * c + 4.0) - c * c, places=12)

    def test_vector_input(self):
        out = hyperbolic_loss(np.array([-1.0, 0.0, 1.0]), 1.0, 1.0)
        self.assertEqual(out.shape, (3,))
        self.assertEqual(out[0], out[2])

    def test_invalid(self):
        with self.assertRaises(DomainError):
            hyperbolic_loss(1.0, 0.0, 1.0)
        with self.assertRaises(DomainError):
            huber(1.0, -1.0)

    def test_logpdf_integrates_to_one(self):
        for eta, rho2 in ((0.5, 1.0), (1.0, 2.0), (20.0, 0.5)):
            with self.subTest(eta=eta, rho2=rho2):
                total, _ = quad(lambda t: np.exp(hyperbolic_logpdf(t, eta, rho2)), -np.inf, np.inf)
                self.assertAlmostEqual(total, 1.0, places=7)

    def test_loss_table(self):
        table = loss_table(np.linspace(-5.0, 5.0, 201))
        self.assertEqual(list(table.columns), ["x", "squared", "absolute", "huber", "pseudo_huber",
                                               "hyperbolic_eta=0.1", "hyperbolic_eta=1",
                                               "hyperbolic_eta=10"])
        self.assertEqual(len(table), 201)
        self.assertTrue((table.drop(columns="x") >= 0).all().all())


class TestLogPosterior(unittest.TestCase):
    """Conditional and unconditional joint log posteriors of (beta, rho2)."""
    def setUp(self):
        gen = np.random.default_rng(3)
        self.data = Dataset(y=gen.normal(size=8), x=gen.normal(size=(8, 2)))

    def test_zero_residuals(self):
        data = Dataset(y=np.zeros(4), x=np.ones((4, 1)))
        self.assertAlmostEqual(log_joint_posterior(np.zeros(1), 1.0, data, 2.0, 1.0), -4 * 2.0)

    def test_rho2_scaling(self):
        data = Dataset(y=np.zeros(4), x=np.ones((4, 1)))
        lower = log_joint_posterior(np.zeros(1), 2.0, data, 2.0, 1.0)
        base = log_joint_posterior(np.zeros(1), 1.0, data, 2.0, 1.0)
        self.assertAlmostEqual(base - lower, 2.5 * np.log(2.0), places=12)

    def test_transformed_matches(self):
        beta, rho2 = np.array([0.3, -1.2]), 1.7
        xi = 1.0 / np.sqrt(rho2)
        self.assertAlmostEqual(log_joint_posterior(beta, rho2, self.data, 1.5, 2.0),
                               log_joint_posterior_transformed(beta * xi, xi, self.data, 1.5, 2.0),
                               places=10)

    def test_transformed_is_concave(self):
        gen = np.random.default_rng(4)
        for _ in range(200):
            u = np.append(gen.normal(size=2), gen.uniform(0.1, 3.0))
            v = np.append(gen.normal(size=2), gen.uniform(0.1, 3.0))
            t = gen.uniform()
            w = t * u + (1 - t) * v
            f = lambda z: log_joint_posterior_transformed(z[:2], z[2], self.data, 1.0, 1.0)
            self.assertGreaterEqual(f(w), t * f(u) + (1 - t) * f(v) - 1e-9)

    def test_unconditional_penalty_free_of_rho2(self):
        beta = np.array([1.0, 0.0])
        data = Dataset(y=self.data.x @ beta, x=self.data.x)
        diff = (log_joint_posterior_unconditional(beta, 1.0, data, 1.0, 3.0)
                - log_joint_posterior_unconditional(beta, 4.0, data, 1.0, 3.0))
        self.assertAlmostEqual(diff, 0.5 * data.n * np.log(4.0), places=10)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            log_joint_posterior(np.zeros(2), 0.0, self.data, 1.0, 1.0)
        with self.assertRaises(DomainError):
            log_joint_posterior_transformed(np.zeros(2), -1.0, self.data, 1.0, 1.0)


if __name__ == "__main__":
    unittest.main()
