"""
Intrinsic delay and chain length laws.

Delays follow p(i) = i^a 10^b / Z_i on [i_min, i_max]; chain lengths follow
p(l) = 10^(c l + d) / Z_l.
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from core.exceptions import InvalidModel

LN10 = math.log(10)


def _is_log_branch(a):
    return abs(a + 1) < 1e-12


def normalize_Z_i(a, b, i_min, i_max):
    """Integral of i^a 10^b over [i_min, i_max]."""
    if not 0 < i_min < i_max:
        raise InvalidModel(
            f'need 0 < i_min < i_max, got i_min={i_min}, i_max={i_max}'
        )
    if _is_log_branch(a):
        return 10 ** b * math.log(i_max / i_min)
    return 10 ** b * (i_max ** (a + 1) - i_min ** (a + 1)) / (a + 1)


def normalize_Z_l(c, d):
    """Integral of 10^(c l + d) over l in [1, inf)."""
    if c >= 0:
        raise InvalidModel(f'length slope c={c} must be negative')
    return -(10 ** (c + d)) / (c * LN10)


def discrete_length_mass(c, d, l_max):
    """Sum of 10^(c l + d) for l = 1..l_max."""
    if c >= 0:
        raise InvalidModel(f'length slope c={c} must be negative')
    if l_max < 1:
        return 0.0
    r = 10 ** c
    return 10 ** (c + d) * (1 - r ** l_max) / (1 - r)


class TruncatedPowerLaw:
    """Density proportional to x^a on [lo, hi]."""

    def __init__(self, a, lo, hi):
        if not 0 < lo < hi:
            raise InvalidModel(f'need 0 < lo < hi, got [{lo}, {hi}]')
        self.a = a
        self.lo = lo
        self.hi = hi
        self.log_branch = _is_log_branch(a)
        if self.log_branch:
            self.norm = math.log(hi / lo)
        else:
            self.k = a + 1
            self.lo_k = lo ** self.k
            self.hi_k = hi ** self.k
            self.norm = (self.hi_k - self.lo_k) / self.k

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        return np.where(inside, np.power(x, self.a) / self.norm, 0.0)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        if self.log_branch:
            return np.log(x / self.lo) / self.norm
        return (np.power(x, self.k) - self.lo_k) / (self.hi_k - self.lo_k)

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        if self.log_branch:
            return self.lo * np.power(self.hi / self.lo, u)
        x = np.power(self.lo_k + u * (self.hi_k - self.lo_k), 1 / self.k)
        return np.clip(x, self.lo, self.hi)

    def sample(self, rng, size):
        return self.ppf(rng.random(size))


class DiscreteExponential:
    """
    Lengths l = 1, 2, ... with mass proportional to 10^(c l).

    This is the geometric law with success probability 1 - 10^c.
    """

    def __init__(self, c):
        if c >= 0:
            raise InvalidModel(f'length slope c={c} must be negative')
        self.c = c
        self.ratio = 10 ** c

    def pmf(self, l):
        l = np.asarray(l)
        mass = (1 - self.ratio) * np.power(self.ratio, l - 1.0)
        return np.where(l >= 1, mass, 0.0)

    def mean(self):
        return 1 / (1 - self.ratio)

    def sample(self, rng, size):
        return rng.geometric(1 - self.ratio, size)


@dataclass(frozen=True)
class FittedModel:
    a: float
    b: float
    i_min: float
    i_max: float
    Z_i: float
    c: float
    d: float
    Z_l: float
    mean_L: float

    def __post_init__(self):
        values = asdict(self).values()
        if not all(math.isfinite(v) for v in values):
            raise InvalidModel('model parameters must be finite')
        if not 0 < self.i_min < self.i_max:
            raise InvalidModel(
                f'need 0 < i_min < i_max, got [{self.i_min}, {self.i_max}]'
            )
        if self.c >= 0:
            raise InvalidModel(f'length slope c={self.c} must be negative')
        if self.Z_i <= 0 or self.Z_l <= 0:
            raise InvalidModel('normalizers must be positive')
        if self.mean_L < 0:
            raise InvalidModel('mean chain length must be non-negative')

    @classmethod
    def from_parameters(cls, a, b, i_min, i_max, c, d, mean_L):
        return cls(
            a=a, b=b, i_min=i_min, i_max=i_max,
            Z_i=normalize_Z_i(a, b, i_min, i_max),
            c=c, d=d,
            Z_l=normalize_Z_l(c, d),
            mean_L=mean_L,
        )

    def p_i(self, i):
        """Intrinsic delay density."""
        i = np.asarray(i, dtype=float)
        inside = (i >= self.i_min) & (i <= self.i_max)
        return np.where(inside, np.power(i, self.a) * 10 ** self.b / self.Z_i,
                        0.0)

    def p_l(self, l):
        return np.power(10.0, self.c * np.asarray(l, dtype=float) + self.d) \
            / self.Z_l

    def delay_law(self):
        return TruncatedPowerLaw(self.a, self.i_min, self.i_max)

    def length_law(self):
        return DiscreteExponential(self.c)


# Constants fitted on a one-day microblog trace.
PUBLISHED_MODEL = FittedModel.from_parameters(
    a=-1.03, b=4.5, i_min=1.0, i_max=30265.0, c=-0.7, d=4.2, mean_L=1.14,
)
