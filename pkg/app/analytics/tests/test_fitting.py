"""
Tests for fitting the delay and chain length laws.
"""
import numpy as np
from django.test import SimpleTestCase

from analytics.distributions import DiscreteExponential, TruncatedPowerLaw
from analytics.fitting import (
    fit_exponential,
    fit_model,
    fit_power_law,
    log_histogram,
)
from core.exceptions import FitError
from traces.forest import TraceStats


class LogHistogramTests(SimpleTestCase):

    def test_bins_per_decade(self):
        samples = np.array([1.0, 10.0, 100.0])

        centers, counts, density = log_histogram(samples, 5)

        self.assertEqual(len(centers), 10)
        self.assertEqual(counts.sum(), 3)
        self.assertTrue((density >= 0).all())


class FitPowerLawTests(SimpleTestCase):
    """Test recovering the delay slope."""

    def test_recovers_slope(self):
        law = TruncatedPowerLaw(-1.5, 1, 1e4)
        samples = law.sample(np.random.default_rng(3), 100_000)

        fit = fit_power_law(samples, bins=30)

        self.assertGreaterEqual(fit.a, -1.55)
        self.assertLessEqual(fit.a, -1.45)
        self.assertEqual(fit.i_min, samples.min())
        self.assertEqual(fit.i_max, samples.max())
        self.assertGreater(fit.Z_i, 0)

    def test_recovers_published_slope(self):
        law = TruncatedPowerLaw(-1.03, 1, 30265)
        samples = law.sample(np.random.default_rng(4), 100_000)

        fit = fit_power_law(samples)

        self.assertAlmostEqual(fit.a, -1.03, delta=0.05)

    def test_too_few_samples(self):
        with self.assertRaises(FitError):
            fit_power_law(np.linspace(1, 10, 99))

    def test_equal_samples(self):
        with self.assertRaises(FitError):
            fit_power_law([5.0] * 200)

    def test_non_positive_samples(self):
        with self.assertRaises(FitError):
            fit_power_law([0.0] + [1.0, 2.0] * 100)


class FitExponentialTests(SimpleTestCase):
    """Test recovering the chain length slope."""

    def test_recovers_slope(self):
        samples = DiscreteExponential(-0.7).sample(
            np.random.default_rng(5), 100_000
        )

        fit = fit_exponential(samples)

        self.assertGreaterEqual(fit.c, -0.75)
        self.assertLessEqual(fit.c, -0.65)
        self.assertGreater(fit.Z_l, 0)

    def test_single_length(self):
        with self.assertRaises(FitError):
            fit_exponential([1] * 500)

    def test_too_few_samples(self):
        with self.assertRaises(FitError):
            fit_exponential([1, 2] * 10)

    def test_growing_lengths(self):
        with self.assertRaises(FitError):
            fit_exponential([1] * 50 + [2] * 100)


class FitModelTests(SimpleTestCase):

    def test_mean_L_from_stats(self):
        rng = np.random.default_rng(6)
        delays = TruncatedPowerLaw(-1.2, 1, 5000).sample(rng, 5000)
        lengths = DiscreteExponential(-0.8).sample(rng, 2000)
        stats = TraceStats(
            intrinsic_delays=tuple(delays.tolist()) + (0.0,),
            chain_lengths=tuple(lengths.tolist()),
            mean_L=1.3,
        )

        model = fit_model(stats)

        self.assertEqual(model.mean_L, 1.3)
        self.assertLess(model.c, 0)
        self.assertAlmostEqual(model.a, -1.2, delta=0.1)
