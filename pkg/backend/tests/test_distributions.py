import numpy as np
import pytest
from scipy import stats

from distributions.laws import (DistributionKind, DistributionSpec,
                                MomentSet, make_distribution, make_generator,
                                moments_by_quadrature, sample_coordinates)
from edm_lab.exceptions import (DegenerateSupportError,
                                InvalidMomentsError, InvalidParameterError)


def test_uniform_moments_closed_form(uniform):
    moments = uniform.moments
    assert moments.m2 == pytest.approx(1 / 3, abs=1e-15)
    assert moments.m3 == 0
    assert moments.m4 == pytest.approx(0.2, abs=1e-15)
    assert moments.c == 1.0


def test_shifted_uniform_is_centered():
    distribution = make_distribution(
        DistributionSpec(DistributionKind.UNIFORM, support=(0.0, 2.0))
    )
    assert distribution.center == pytest.approx(1.0)
    assert distribution.support == pytest.approx((-1.0, 1.0))
    assert distribution.moments.m2 == pytest.approx(1 / 3)


@pytest.mark.parametrize('support', [(1.0, 1.0), (2.0, -1.0)])
def test_degenerate_support(support):
    with pytest.raises(DegenerateSupportError):
        DistributionSpec(DistributionKind.UNIFORM, support=support)


def test_unknown_kind():
    with pytest.raises(InvalidParameterError):
        DistributionSpec('cauchy')


def test_missing_law_parameters():
    with pytest.raises(InvalidParameterError):
        DistributionSpec(DistributionKind.TRUNCATED_NORMAL, params={'mu': 0})


@pytest.mark.parametrize('moments', [
    dict(m2=1.0, m3=0.0, m4=0.5, c=1.0),
    dict(m2=0.0, m3=0.0, m4=0.0, c=1.0),
    dict(m2=2.0, m3=0.0, m4=4.0, c=1.0),
    dict(m2=0.3, m3=0.0, m4=0.2, c=0.0),
])
def test_invalid_moment_sets(moments):
    with pytest.raises(InvalidMomentsError):
        MomentSet(**moments)


def test_quadrature_matches_uniform_closed_form(uniform_spec, uniform):
    numeric = moments_by_quadrature(uniform_spec)
    assert numeric.m2 == pytest.approx(uniform.moments.m2, abs=1e-12)
    assert numeric.m3 == pytest.approx(0.0, abs=1e-12)
    assert numeric.m4 == pytest.approx(uniform.moments.m4, abs=1e-12)


def test_beta_closed_form_matches_quadrature():
    spec = DistributionSpec(DistributionKind.BETA_SCALED,
                            params={'alpha': 2.0, 'beta': 3.0},
                            support=(-1.0, 1.0))
    closed = make_distribution(spec).moments
    numeric = moments_by_quadrature(spec)
    for name in ('m2', 'm3', 'm4'):
        assert getattr(closed, name) == pytest.approx(
            getattr(numeric, name), abs=1e-9)


def test_truncated_normal_moments():
    spec = DistributionSpec(DistributionKind.TRUNCATED_NORMAL,
                            params={'mu': 0.0, 'sigma': 1.0},
                            support=(-1.0, 1.0))
    moments = make_distribution(spec).moments
    reference = stats.truncnorm(-1.0, 1.0)
    assert moments.m2 == pytest.approx(reference.var(), rel=1e-9)
    assert moments.m3 == pytest.approx(0.0, abs=1e-10)
    assert moments.c == pytest.approx(1.0)


def test_sampling_is_deterministic(uniform):
    first = sample_coordinates(uniform, 100, 3, seed=11)
    second = sample_coordinates(uniform, 100, 3, seed=11)
    other = sample_coordinates(uniform, 100, 3, seed=12)
    assert np.array_equal(first.coords, second.coords)
    assert not np.array_equal(first.coords, other.coords)
    assert first.coords.shape == (100, 3)
    assert first.seed == 11
    assert first.algorithm == 'philox4x64-10'
    assert first.dist_id == 'uniform[-1,1]'


@pytest.mark.parametrize('spec', [
    DistributionSpec(DistributionKind.UNIFORM, support=(-1.0, 1.0)),
    DistributionSpec(DistributionKind.TRUNCATED_NORMAL,
                     params={'mu': 0.3, 'sigma': 0.5}, support=(-1.0, 1.0)),
    DistributionSpec(DistributionKind.BETA_SCALED,
                     params={'alpha': 2.0, 'beta': 5.0}, support=(0.0, 4.0)),
])
def test_samples_follow_centered_law(spec):
    distribution = make_distribution(spec)
    coords = sample_coordinates(distribution, 100_000, 1, seed=5).coords
    low, high = distribution.support
    assert coords.min() >= low and coords.max() <= high
    samples = coords.ravel()
    moments = distribution.moments
    for power, expected in ((2, moments.m2), (3, moments.m3),
                            (4, moments.m4)):
        values = samples ** power
        standard_error = values.std() / np.sqrt(values.size)
        assert abs(values.mean() - expected) <= 5 * standard_error


def test_spec_dict_form(uniform_spec):
    data = uniform_spec.to_dict()
    assert data == {'kind': 'uniform', 'params': {}, 'support': [-1.0, 1.0]}
    assert DistributionSpec.from_dict(data) == uniform_spec
    with pytest.raises(InvalidParameterError):
        DistributionSpec.from_dict({**data, 'scale': 2})


@pytest.mark.parametrize('seed', [-1, 2 ** 64])
def test_generator_rejects_out_of_range_seed(seed):
    with pytest.raises(InvalidParameterError):
        make_generator(seed)
