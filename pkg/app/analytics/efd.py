"""
Expected extra forwarding delay under the fitted model.

One chain segment adds E[max(I, W) - I] where I is the intrinsic delay and
W ~ U[0, h] is the wait until the next poll. Since E[(W - i)+] is
(h - i)^2 / (2h) for i <= h and 0 otherwise, the expectation reduces to a
single integral over [i_min, min(h, i_max)].
"""
import enum
import logging
import math
from typing import NamedTuple

import numpy as np
from django.conf import settings
from scipy import integrate

from core.exceptions import InvalidModel

logger = logging.getLogger(__name__)

MONTE_CARLO_SAMPLES = 1_000_000


class EfdMethod(str, enum.Enum):
    QUADRATURE = 'quadrature'
    CLOSED_FORM = 'closed_form'
    MONTE_CARLO = 'monte_carlo'


def _check_h(h):
    if not h > 0 or not math.isfinite(h):
        raise ValueError(f'query gap must be positive, got {h!r}')


def _density(model):
    scale = 10 ** model.b / model.Z_i
    a = model.a
    return lambda i: scale * i ** a


def _quadrature(h, model):
    upper = min(h, model.i_max)
    if upper <= model.i_min:
        return 0.0
    p = _density(model)
    value, _ = integrate.quad(
        lambda i: p(i) * (h - i) ** 2 / (2 * h),
        model.i_min, upper,
        epsabs=1e-6 * h, limit=200,
    )
    return value


def _closed_form(h, model):
    """
    The published bracket for unit i_min, evaluated as printed.

    It differs from the exact antiderivative in its constant term and is
    only used to cross-check the quadrature.
    """
    a = model.a
    if h <= model.i_min:
        return 0.0
    if any(abs(a + k) < 1e-12 for k in (1, 2, 3)):
        return math.nan
    bracket = (
        h ** (a + 3) / ((a + 1) * (a + 2) * (a + 3))
        - h ** 2 / (2 * (a + 1))
        + h / (a + 2)
        - (2 - a * (a + 3)) / ((a + 1) * (a + 2) * (a + 3))
    )
    return (10 ** model.b / model.Z_i) * bracket / h


def _monte_carlo(h, model, seed, n):
    rng = np.random.default_rng(seed)
    delays = model.delay_law().sample(rng, n)
    waits = rng.uniform(0, h, n)
    return float(np.mean(np.maximum(delays, waits) - delays))


def efd_segment_expectation(h, model, method=EfdMethod.QUADRATURE, seed=0,
                            n=MONTE_CARLO_SAMPLES):
    """E[max(I, W) - I] for query gap h."""
    _check_h(h)
    method = EfdMethod(method)
    if method == EfdMethod.QUADRATURE:
        return _quadrature(h, model)
    if method == EfdMethod.CLOSED_FORM:
        return _closed_form(h, model)
    return _monte_carlo(h, model, seed, n)


def predict_efd(h, model):
    """Expected EFD of a forwarding chain: E[L] times one segment."""
    if model.mean_L < 1:
        raise InvalidModel(
            f'mean chain length {model.mean_L} is below one forward'
        )
    return model.mean_L * efd_segment_expectation(h, model)


def zero_efd_fraction(h, model):
    """Probability that a forward is posted with no extra delay."""
    _check_h(h)
    p = _density(model)
    upper = min(h, model.i_max)
    seen_early = 0.0
    if upper > model.i_min:
        seen_early, _ = integrate.quad(
            lambda i: p(i) * i / h, model.i_min, upper, limit=200,
        )
    beyond = 1.0 - float(model.delay_law().cdf(max(h, model.i_min)))
    return seen_early + beyond


class CrossCheck(NamedTuple):
    h: float
    quadrature: float
    closed_form: float
    monte_carlo: float
    closed_form_gap: float
    monte_carlo_gap: float
    flagged: bool


def _gap(value, reference):
    if reference == 0:
        return 0.0 if value == 0 else math.inf
    return (value - reference) / reference


def cross_check(h, model, tolerance=None, seed=0, n=MONTE_CARLO_SAMPLES):
    """Evaluate every method and flag disagreement with the quadrature."""
    tolerance = (
        settings.DSNBENCH_CROSS_CHECK_TOLERANCE
        if tolerance is None else tolerance
    )
    reference = efd_segment_expectation(h, model)
    closed = efd_segment_expectation(h, model, EfdMethod.CLOSED_FORM)
    sampled = efd_segment_expectation(
        h, model, EfdMethod.MONTE_CARLO, seed=seed, n=n
    )
    closed_gap = _gap(closed, reference)
    sampled_gap = _gap(sampled, reference)
    flagged = not (abs(closed_gap) <= tolerance
                   and abs(sampled_gap) <= tolerance)
    if flagged:
        logger.warning(
            'h=%s: quadrature %.6g disagrees with closed form %.6g '
            '(%+.2f%%) or Monte Carlo %.6g (%+.2f%%)',
            h, reference, closed, 100 * closed_gap, sampled,
            100 * sampled_gap,
        )
    return CrossCheck(h, reference, closed, sampled, closed_gap, sampled_gap,
                      flagged)
