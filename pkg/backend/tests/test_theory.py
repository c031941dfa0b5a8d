import math

import numpy as np
import pytest

from distributions.laws import (DistributionKind, DistributionSpec,
                                MomentSet, make_distribution)
from edm_lab.exceptions import (InvalidParameterError,
                                SingularMomentMatrixError,
                                UnboundedNodeCountError)
from linalg.kernels import cubic_real_roots, eig_sym
from theory.bounds import (TheoryParams, build_Rd, chernoff_failure,
                           coherence_constants, corollary1_theta,
                           cubic_coeffs, evaluate_bounds,
                           lambda_star_general, lambda_star_symmetric,
                           min_nodes, prior_work_lambda_min, rd_spectrum,
                           sample_complexity, theta, theta_symmetric)


def test_uniform_d2_constants(uniform):
    bounds = evaluate_bounds(TheoryParams(moments=uniform.moments, dim=2,
                                          t=0.5, gamma=0.1))
    assert bounds.theta == pytest.approx(59.2206, abs=1e-3)
    assert bounds.mu0 == pytest.approx(29.6103, abs=1e-3)
    assert bounds.mu1 == pytest.approx(59.2206, abs=1e-3)
    assert bounds.N_min == 1748
    assert bounds.eps_t.eps <= 0.1
    assert not bounds.flags['eps_vacuous']


def test_uniform_d3_theta(uniform):
    assert theta(uniform.moments, 3) == pytest.approx(104.44, abs=0.01)


def test_uniform_d2_cubic(uniform):
    cubic = cubic_coeffs(uniform.moments, 2)
    assert cubic.alpha0 == pytest.approx(8 / 135)
    assert cubic.alpha1 == pytest.approx(-97 / 135)
    assert cubic.alpha2 == pytest.approx(88 / 45)
    assert cubic.alpha3 == -1.0


def test_spectrum_identity():
    rng = np.random.default_rng(7)
    for _ in range(50):
        alpha, beta = rng.uniform(0.5, 5.0, 2)
        low = -rng.uniform(0.5, 2.0)
        spec = DistributionSpec(DistributionKind.BETA_SCALED,
                                params={'alpha': alpha, 'beta': beta},
                                support=(low, low + rng.uniform(1.0, 4.0)))
        moments = make_distribution(spec).moments
        for dim in range(1, 7):
            expected = np.sort(eig_sym(build_Rd(moments, dim)).eigvals)
            found = rd_spectrum(moments, dim)
            tolerance = 1e-9 * np.maximum(1.0, np.abs(expected))
            assert np.all(np.abs(found - expected) <= tolerance)


@pytest.mark.parametrize('dim', range(1, 11))
def test_theta_paths_agree(uniform, dim):
    general = theta(uniform.moments, dim)
    assert theta_symmetric(uniform.moments, dim) == pytest.approx(
        general, rel=1e-9)
    assert corollary1_theta(dim) == pytest.approx(general, rel=1e-9)


def test_symmetric_path_rejects_skewed_law():
    moments = MomentSet(m2=0.2, m3=0.05, m4=0.1, c=1.0)
    with pytest.raises(InvalidParameterError):
        lambda_star_symmetric(moments, 2)


def test_singular_moment_matrix():
    rademacher = MomentSet(m2=1.0, m3=0.0, m4=1.0, c=1.0)
    with pytest.raises(SingularMomentMatrixError):
        lambda_star_general(rademacher, 2)


def test_coherence_constants_at_t_zero():
    assert coherence_constants(10.0, 2, 0.0) == (math.inf, math.inf)


@pytest.mark.parametrize('t,gamma,message', [
    (1.0, 0.1, 't must be < 1 for N_min'),
    (0.5, 0.0, 'gamma must be > 0 for N_min'),
])
def test_min_nodes_unbounded(t, gamma, message):
    with pytest.raises(UnboundedNodeCountError, match=message):
        min_nodes(59.2, 2, t, gamma)


def test_min_nodes_is_smallest(uniform):
    theta_value = theta(uniform.moments, 2)
    n_min = min_nodes(theta_value, 2, 0.5, 0.1)
    assert chernoff_failure(theta_value, 2, 0.5, n_min).eps <= 0.1
    assert chernoff_failure(theta_value, 2, 0.5, n_min - 1).eps > 0.1


def test_small_network_is_vacuous(uniform):
    bounds = evaluate_bounds(
        TheoryParams(moments=uniform.moments, dim=2), n_nodes=10,
    )
    assert bounds.eps_t.vacuous
    assert bounds.flags['eps_vacuous']
    assert bounds.flags['below_N_min']


def test_sample_complexity_at_n_min(uniform):
    theta_value = theta(uniform.moments, 2)
    mu0, mu1 = coherence_constants(theta_value, 2, 0.5)
    complexity = sample_complexity(mu0, mu1, 1748, 4, 3.0, 1.0)
    assert 5.4e8 < complexity.m_general < 5.6e8
    assert complexity.general_vacuous
    assert not complexity.improved_applicable
    assert complexity.m_improved is None


def test_sample_complexity_rejects_small_beta():
    with pytest.raises(InvalidParameterError):
        sample_complexity(1.0, 1.0, 100, 4, 2.0, 1.0)


def test_prior_work_lambda_min():
    lambda_min, gap = prior_work_lambda_min(2)
    assert lambda_min == pytest.approx(0.118202, abs=1e-5)
    assert gap > 0.2


@pytest.mark.parametrize('field,value', [
    ('dim', 0), ('t', 1.5), ('gamma', -0.1), ('beta', 2.0), ('big_c', 0.0),
])
def test_theory_params_validation(uniform, field, value):
    kwargs = {'moments': uniform.moments, 'dim': 2, field: value}
    with pytest.raises(InvalidParameterError):
        TheoryParams(**kwargs)


def test_uniform_d2_cubic_roots(uniform):
    roots = cubic_real_roots(cubic_coeffs(uniform.moments, 2))
    assert roots == pytest.approx([0.118202, 1 / 3, 1.504020], abs=1e-6)
    assert roots[0] == pytest.approx((73 - math.sqrt(3889)) / 90,
                                     abs=1e-12)


def test_uniform_d2_rd_spectrum(uniform):
    eig = eig_sym(build_Rd(uniform.moments, 2))
    assert eig.eigvals == pytest.approx([1.504020, 1 / 3, 1 / 3, 0.118202],
                                        abs=1e-6)


@pytest.mark.parametrize('dim,expected', [
    (1, (54 - math.sqrt(2436)) / 90),
    (2, (73 - math.sqrt(3889)) / 90),
    (3, (34 - math.sqrt(916)) / 30),
])
def test_uniform_lambda_star(uniform, dim, expected):
    assert lambda_star_general(uniform.moments, dim) == pytest.approx(
        expected, abs=1e-12)
    lambda_min, _ = prior_work_lambda_min(dim)
    assert lambda_min == pytest.approx(expected, abs=1e-10)


def test_uniform_d1_lambda_star_value(uniform):
    assert lambda_star_general(uniform.moments, 1) == pytest.approx(
        0.051675, abs=1e-6)
    assert lambda_star_general(uniform.moments, 3) == pytest.approx(
        0.124484, abs=1e-6)
