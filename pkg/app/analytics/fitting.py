"""
Least-squares fits of the delay and chain-length laws.
"""
import logging
import math
from typing import NamedTuple

import numpy as np
from django.conf import settings

from analytics.distributions import FittedModel, normalize_Z_i, normalize_Z_l
from core.exceptions import FitError

logger = logging.getLogger(__name__)

MIN_SAMPLES = 100


class PowerLawFit(NamedTuple):
    a: float
    b: float
    Z_i: float
    i_min: float
    i_max: float


class ExponentialFit(NamedTuple):
    c: float
    d: float
    Z_l: float


def _weighted_line(x, y, counts):
    """Slope and intercept of y on x, bins weighted by sqrt(count)."""
    slope, intercept = np.polyfit(x, y, 1, w=np.sqrt(counts))
    return float(slope), float(intercept)


def log_histogram(samples, bins_per_decade):
    """Count density over logarithmic bins spanning the samples."""
    lo, hi = samples.min(), samples.max()
    decades = math.log10(hi / lo)
    n_bins = max(1, math.ceil(decades * bins_per_decade))
    edges = np.logspace(math.log10(lo), math.log10(hi), n_bins + 1)
    counts, edges = np.histogram(samples, edges)
    centers = np.sqrt(edges[:-1] * edges[1:])
    return centers, counts, counts / np.diff(edges)


def fit_power_law(samples, bins=None):
    """Fit log10(count density) = a log10(i) + b over log bins."""
    bins = bins or settings.DSNBENCH_BINS_PER_DECADE
    samples = np.asarray(samples, dtype=float)
    if samples.size < MIN_SAMPLES:
        raise FitError(
            f'need at least {MIN_SAMPLES} delays, got {samples.size}'
        )
    if (samples <= 0).any():
        raise FitError('delays must be positive')
    i_min, i_max = float(samples.min()), float(samples.max())
    if i_max <= i_min:
        raise FitError(f'zero-width support at {i_min}')
    centers, counts, density = log_histogram(samples, bins)
    used = counts > 0
    if used.sum() < 2:
        raise FitError('fewer than two non-empty bins')
    a, b = _weighted_line(
        np.log10(centers[used]), np.log10(density[used]), counts[used]
    )
    logger.debug('power law over %d bins: a=%.4f b=%.4f', used.sum(), a, b)
    return PowerLawFit(a, b, normalize_Z_i(a, b, i_min, i_max), i_min, i_max)


def fit_exponential(samples):
    """Fit log10(count) = c l + d over integer lengths."""
    samples = np.asarray(samples)
    if samples.size < MIN_SAMPLES:
        raise FitError(
            f'need at least {MIN_SAMPLES} lengths, got {samples.size}'
        )
    if (samples < 1).any():
        raise FitError('chain lengths must be positive')
    counts = np.bincount(samples.astype(int))
    lengths = np.flatnonzero(counts)
    if lengths.size < 2:
        raise FitError('all chains have one length; slope undefined')
    c, d = _weighted_line(lengths, np.log10(counts[lengths]), counts[lengths])
    try:
        Z_l = normalize_Z_l(c, d)
    except ValueError as exc:
        raise FitError(f'chain lengths do not decay: {exc}') from exc
    return ExponentialFit(c, d, Z_l)


def fit_model(stats, bins=None):
    """FittedModel for the delays and chains of a trace."""
    delays = fit_power_law(stats.positive_delays, bins)
    lengths = fit_exponential(stats.chain_lengths)
    return FittedModel(
        a=delays.a, b=delays.b, i_min=delays.i_min, i_max=delays.i_max,
        Z_i=delays.Z_i, c=lengths.c, d=lengths.d, Z_l=lengths.Z_l,
        mean_L=stats.mean_L,
    )
