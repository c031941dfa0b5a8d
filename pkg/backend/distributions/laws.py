"""Законы распределения координат узлов и их центральные моменты."""
from dataclasses import dataclass, field
from enum import Enum
from math import comb
from typing import Mapping, Optional

import numpy as np
from scipy import integrate, stats

from edm.matrices import NodeCloud
from edm_lab.exceptions import (DegenerateSupportError, InvalidMomentsError,
                                InvalidParameterError)

RNG_ALGORITHM = 'philox4x64-10'
QUADRATURE_TOL = 1e-12
CDF_KNOTS = 2 ** 16
SEED_LIMIT = 2 ** 64


class DistributionKind(str, Enum):
    UNIFORM = 'uniform'
    TRUNCATED_NORMAL = 'truncated-normal'
    BETA_SCALED = 'beta-scaled'


REQUIRED_PARAMS = {
    DistributionKind.UNIFORM: (),
    DistributionKind.TRUNCATED_NORMAL: ('mu', 'sigma'),
    DistributionKind.BETA_SCALED: ('alpha', 'beta'),
}


@dataclass(frozen=True)
class MomentSet:
    """Центральные моменты m2, m3, m4 и радиус носителя c."""
    m2: float
    m3: float
    m4: float
    c: float

    def __post_init__(self):
        if not self.m2 > 0:
            raise InvalidMomentsError('m2 must be > 0')
        if self.m4 < self.m2 ** 2 * (1 - 1e-12):
            raise InvalidMomentsError('invalid moments: m4 < m2^2')
        if not np.isfinite(self.m4):
            raise InvalidMomentsError('m4 must be finite')
        if not self.c > 0:
            raise InvalidMomentsError('c must be > 0')
        if self.m2 > self.c ** 2 * (1 + 1e-12):
            raise InvalidMomentsError('invalid moments: m2 > c^2')


@dataclass(frozen=True)
class DistributionSpec:
    kind: DistributionKind
    params: Mapping[str, float] = field(default_factory=dict)
    support: tuple = (-1.0, 1.0)

    def __post_init__(self):
        try:
            object.__setattr__(self, 'kind', DistributionKind(self.kind))
        except ValueError as exc:
            raise InvalidParameterError(
                f'unknown distribution kind: {self.kind!r}'
            ) from exc
        a, b = (float(bound) for bound in self.support)
        object.__setattr__(self, 'support', (a, b))
        if not a < b:
            raise DegenerateSupportError(
                f'degenerate support [{a}, {b}]: need a < b'
            )
        required = REQUIRED_PARAMS[self.kind]
        unknown = set(self.params) - set(required)
        missing = set(required) - set(self.params)
        if unknown or missing:
            raise InvalidParameterError(
                f'{self.kind.value} expects parameters {list(required)}, '
                f'got {sorted(self.params)}'
            )
        params = {key: float(value) for key, value in self.params.items()}
        object.__setattr__(self, 'params', params)
        self._check_params()

    def _check_params(self):
        if (self.kind is DistributionKind.TRUNCATED_NORMAL
                and not self.params['sigma'] > 0):
            raise InvalidParameterError('sigma must be > 0')
        if self.kind is DistributionKind.BETA_SCALED and not (
                self.params['alpha'] > 0 and self.params['beta'] > 0):
            raise InvalidParameterError('alpha and beta must be > 0')

    @classmethod
    def from_dict(cls, data):
        """Разбор формы {"kind", "params", "support"} из JSON-конфига."""
        unknown = set(data) - {'kind', 'params', 'support'}
        if unknown:
            raise InvalidParameterError(
                f'unknown distribution keys: {sorted(unknown)}'
            )
        try:
            return cls(kind=data['kind'],
                       params=dict(data.get('params') or {}),
                       support=tuple(data.get('support', (-1.0, 1.0))))
        except (KeyError, ValueError, TypeError) as exc:
            if isinstance(exc, InvalidParameterError):
                raise
            raise InvalidParameterError(
                f'invalid distribution spec: {exc}'
            ) from exc

    def to_dict(self):
        return {
            'kind': self.kind.value,
            'params': dict(self.params),
            'support': list(self.support),
        }

    @property
    def dist_id(self):
        a, b = self.support
        args = ','.join(f'{key}={value:g}'
                        for key, value in sorted(self.params.items()))
        suffix = f'({args})' if args else ''
        return f'{self.kind.value}{suffix}[{a:g},{b:g}]'

    def frozen(self):
        """Закон на исходном (нецентрированном) носителе в виде scipy.stats."""
        a, b = self.support
        if self.kind is DistributionKind.UNIFORM:
            return stats.uniform(loc=a, scale=b - a)
        if self.kind is DistributionKind.TRUNCATED_NORMAL:
            mu, sigma = self.params['mu'], self.params['sigma']
            return stats.truncnorm((a - mu) / sigma, (b - mu) / sigma,
                                   loc=mu, scale=sigma)
        return stats.beta(self.params['alpha'], self.params['beta'],
                          loc=a, scale=b - a)


@dataclass(frozen=True)
class Distribution:
    """Центрированный закон: носитель [a', b'] c a' < 0 < b'."""
    spec: DistributionSpec
    center: float
    support: tuple
    moments: MomentSet
    icdf_table: Optional[tuple] = field(default=None, repr=False,
                                        compare=False)

    @property
    def dist_id(self):
        return self.spec.dist_id


def _quad(func, a, b):
    value, error = integrate.quad(func, a, b, epsabs=QUADRATURE_TOL / 10,
                                  epsrel=1e-13, limit=200)
    if error > QUADRATURE_TOL:
        raise InvalidMomentsError(
            f'quadrature error {error:.3e} exceeds {QUADRATURE_TOL:g}'
        )
    return value


def _mean_by_quadrature(spec):
    rv = spec.frozen()
    a, b = spec.support
    return _quad(lambda x: x * rv.pdf(x), a, b)


def _central_by_quadrature(spec, mean):
    rv = spec.frozen()
    a, b = spec.support
    return [_quad(lambda x, k=k: (x - mean) ** k * rv.pdf(x), a, b)
            for k in (2, 3, 4)]


def moments_by_quadrature(spec):
    """Центральные моменты закона адаптивной квадратурой."""
    a, b = spec.support
    mean = _mean_by_quadrature(spec)
    central = _central_by_quadrature(spec, mean)
    return MomentSet(*central, c=max(abs(a - mean), abs(b - mean)))


def _beta_moments(spec):
    alpha, beta = spec.params['alpha'], spec.params['beta']
    a, b = spec.support
    width = b - a
    rv = stats.beta(alpha, beta)
    raw = [1.0] + [rv.moment(k) for k in range(1, 5)]
    mean = raw[1]
    central = [
        sum(comb(k, j) * raw[j] * (-mean) ** (k - j) for j in range(k + 1))
        * width ** k
        for k in (2, 3, 4)
    ]
    shift = a + width * mean
    return shift, central


def _icdf_table(spec, center):
    a, b = spec.support
    knots = np.linspace(a, b, CDF_KNOTS + 1)
    cdf = spec.frozen().cdf(knots)
    cdf[0], cdf[-1] = 0.0, 1.0
    return np.maximum.accumulate(cdf), knots - center


def make_distribution(spec):
    """Центрирует закон и вычисляет его моменты."""
    a, b = spec.support
    table = None
    if spec.kind is DistributionKind.UNIFORM:
        width = b - a
        center = (a + b) / 2
        central = [width ** 2 / 12, 0.0, width ** 4 / 80]
    elif spec.kind is DistributionKind.BETA_SCALED:
        center, central = _beta_moments(spec)
    else:
        center = _mean_by_quadrature(spec)
        central = _central_by_quadrature(spec, center)
        table = _icdf_table(spec, center)
    low, high = a - center, b - center
    if not low < 0 < high:
        raise DegenerateSupportError(
            f'centered support [{low}, {high}] does not straddle 0'
        )
    moments = MomentSet(*central, c=max(abs(low), abs(high)))
    return Distribution(spec=spec, center=center, support=(low, high),
                        moments=moments, icdf_table=table)


def make_generator(seed):
    if not 0 <= int(seed) < SEED_LIMIT:
        raise InvalidParameterError('seed must be a 64-bit unsigned integer')
    return np.random.Generator(np.random.Philox(int(seed)))


def sample_coordinates(dist, n_nodes, dim, seed):
    """N x d координат, i.i.d. из центрированного закона."""
    if n_nodes < 1 or dim < 1:
        raise InvalidParameterError('N and d must be >= 1')
    rng = make_generator(seed)
    low, high = dist.support
    shape = (n_nodes, dim)
    kind = dist.spec.kind
    if kind is DistributionKind.UNIFORM:
        coords = low + (high - low) * rng.random(shape)
    elif kind is DistributionKind.BETA_SCALED:
        params = dist.spec.params
        unit = rng.beta(params['alpha'], params['beta'], shape)
        coords = low + (high - low) * unit
    else:
        cdf, knots = dist.icdf_table
        coords = np.interp(rng.random(shape), cdf, knots)
    return NodeCloud(coords=np.clip(coords, low, high), seed=int(seed),
                     dist_id=dist.dist_id, algorithm=RNG_ALGORITHM)
