import numpy as np
import pytest

from edm.matrices import (NodeCloud, build_edm, factor_edm, numerical_rank,
                          rank_one_expansion)
from edm_lab.exceptions import InvalidParameterError
from theory.bounds import row_norm_bound


def test_line_edm(line_cloud):
    expected = np.array([[0.0, 1.0, 9.0],
                         [1.0, 0.0, 4.0],
                         [9.0, 4.0, 0.0]])
    assert np.array_equal(build_edm(line_cloud).entries, expected)


def test_single_node_rejected():
    with pytest.raises(InvalidParameterError, match='N must be >= 2'):
        build_edm(NodeCloud(coords=np.zeros((1, 2))))


def test_edm_structure(make_cloud):
    entries = build_edm(make_cloud(80, 3, seed=1)).entries
    assert np.array_equal(entries, entries.T)
    assert np.all(np.diag(entries) == 0)
    assert np.all(entries >= 0)


def test_factorization_reconstructs_edm(make_cloud):
    cloud = make_cloud(60, 2, seed=2)
    direct = build_edm(cloud).entries
    factorization = factor_edm(cloud)
    assert factorization.X.shape == (60, 4)
    assert np.array_equal(factorization.D, [[0.0, 0.0, 0.0, 1.0],
                                            [0.0, -2.0, 0.0, 0.0],
                                            [0.0, 0.0, -2.0, 0.0],
                                            [1.0, 0.0, 0.0, 0.0]])
    scale = np.abs(direct).max()
    assert np.abs(factorization.reconstruct().entries - direct).max() \
        <= 1e-12 * scale
    assert np.abs(rank_one_expansion(cloud).entries - direct).max() \
        <= 1e-12 * scale


@pytest.mark.parametrize('dim', [1, 2, 3])
def test_generic_rank_is_d_plus_2(make_cloud, dim):
    assert numerical_rank(build_edm(make_cloud(40, dim, seed=dim))) \
        == dim + 2


def test_collinear_cloud_loses_rank():
    t = np.linspace(-1.0, 1.0, 30)
    cloud = NodeCloud(coords=np.column_stack([t, 2 * t]))
    assert numerical_rank(build_edm(cloud)) == 3


def test_zero_matrix_has_rank_zero():
    cloud = NodeCloud(coords=np.zeros((5, 2)))
    assert numerical_rank(build_edm(cloud)) == 0


def test_permutation_equivariance(make_cloud):
    cloud = make_cloud(25, 2, seed=4)
    permutation = np.random.default_rng(0).permutation(25)
    permuted = build_edm(cloud.permute(permutation)).entries
    original = build_edm(cloud).entries
    assert np.array_equal(permuted,
                          original[np.ix_(permutation, permutation)])


def test_row_norms_respect_support_bound(make_cloud):
    dim = 3
    norms = factor_edm(make_cloud(500, dim, seed=6)).row_norms_sq()
    assert norms.max() <= row_norm_bound(1.0, dim)
    assert norms.min() >= 1.0


def test_three_point_line_factorization():
    cloud = NodeCloud(coords=np.array([0.0, 1.0, 2.0]))
    factorization = factor_edm(cloud)
    assert np.array_equal(factorization.X, [[1.0, 0.0, 0.0],
                                            [1.0, 1.0, 1.0],
                                            [1.0, 2.0, 4.0]])
    assert np.array_equal(factorization.D, [[0.0, 0.0, 1.0],
                                            [0.0, -2.0, 0.0],
                                            [1.0, 0.0, 0.0]])
    edm = build_edm(cloud)
    assert np.array_equal(edm.entries, [[0.0, 1.0, 4.0],
                                        [1.0, 0.0, 1.0],
                                        [4.0, 1.0, 0.0]])
    assert np.array_equal(factorization.reconstruct().entries, edm.entries)
    assert numerical_rank(edm) == 3
