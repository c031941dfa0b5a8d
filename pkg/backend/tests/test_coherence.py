import numpy as np
import pytest

from coherence.subspace import (coherence_qr_path, coherence_svd_path,
                                gramian_check)
from edm.matrices import EdmMatrix, NodeCloud, build_edm, factor_edm
from edm_lab.exceptions import RankBoundViolationError, RankDeficiencyError


def test_two_point_edm_svd_path():
    edm = EdmMatrix(entries=np.array([[0.0, 1.0], [1.0, 0.0]]))
    report = coherence_svd_path(edm, 1)
    assert report.effective_rank == 2
    assert report.mu_U == pytest.approx(1.0)
    assert report.mu1_emp == pytest.approx(np.sqrt(2.0))
    assert sorted(report.eigenvalues) == pytest.approx([-1.0, 1.0])


@pytest.mark.parametrize('dim,n_nodes,seed', [
    (1, 50, 0), (2, 100, 1), (3, 200, 2), (2, 500, 3),
])
def test_paths_agree(make_cloud, dim, n_nodes, seed):
    cloud = make_cloud(n_nodes, dim, seed)
    qr = coherence_qr_path(cloud)
    svd = coherence_svd_path(build_edm(cloud), dim)
    assert qr.effective_rank == svd.effective_rank == dim + 2
    assert qr.mu_U == pytest.approx(svd.mu_U, rel=1e-8)
    assert qr.mu1_emp == pytest.approx(svd.mu1_emp, rel=1e-6)
    assert abs(qr.mu_U_pm - qr.mu_U) <= 1e-12
    assert 1.0 <= qr.mu_U <= n_nodes / (dim + 2) + 1e-12


def test_square_case_has_unit_coherence(make_cloud):
    report = coherence_qr_path(make_cloud(4, 2, seed=9))
    assert report.mu_U == pytest.approx(1.0, abs=1e-12)


def test_permutation_invariance(make_cloud):
    cloud = make_cloud(120, 2, seed=10)
    permutation = np.random.default_rng(1).permutation(120)
    assert coherence_qr_path(cloud.permute(permutation)).mu_U \
        == pytest.approx(coherence_qr_path(cloud).mu_U, rel=1e-10)


def test_far_node_spikes_coherence(make_cloud):
    generic = make_cloud(10, 2, seed=11).coords
    coords = np.vstack([generic, np.zeros((200, 2)), [[50.0, 0.0]]])
    cloud = NodeCloud(coords=coords)
    report = coherence_qr_path(cloud)
    n_nodes, rank = coords.shape[0], 4
    assert report.mu_U >= 0.9 * n_nodes / rank
    assert report.mu_U <= n_nodes / rank + 1e-9


def test_rank_deficient_cloud():
    t = np.linspace(-1.0, 1.0, 20)
    with pytest.raises(RankDeficiencyError):
        coherence_qr_path(NodeCloud(coords=np.column_stack([t, 2 * t])))


def test_non_edm_violates_rank_bound():
    rng = np.random.default_rng(3)
    B = rng.standard_normal((10, 10))
    with pytest.raises(RankBoundViolationError):
        coherence_svd_path(EdmMatrix(entries=B + B.T), 1)


def test_qr_quantities(make_cloud):
    cloud = make_cloud(200, 2, seed=12)
    report = coherence_qr_path(cloud)
    X = factor_edm(cloud).X
    assert report.sigma_min_sq_A == pytest.approx(
        np.linalg.eigvalsh(X.T @ X).min(), rel=1e-9)
    assert report.max_row_norm_sq == pytest.approx(
        np.max(np.sum(X ** 2, axis=1)))
    assert report.mu_U <= report.bound_chain * (1 + 1e-12)
    assert gramian_check(cloud) <= 1e-10 * np.linalg.norm(X) ** 2


def test_line_of_three_nodes_is_full_rank():
    cloud = NodeCloud(coords=np.array([0.0, 1.0, 2.0]))
    report = coherence_qr_path(cloud)
    assert report.effective_rank == 3
    assert report.mu_U == pytest.approx(1.0, abs=1e-12)


@pytest.mark.slow
def test_paths_agree_on_random_clouds(make_cloud):
    rng = np.random.default_rng(200)
    for index in range(200):
        dim = int(rng.integers(1, 4))
        n_nodes = int(rng.integers(50, 501))
        cloud = make_cloud(n_nodes, dim, seed=1000 + index)
        qr = coherence_qr_path(cloud)
        svd = coherence_svd_path(build_edm(cloud), dim)
        assert abs(qr.mu_U - svd.mu_U) <= 1e-10 * qr.mu_U
        assert qr.mu1_emp == pytest.approx(svd.mu1_emp, rel=1e-8)
        assert abs(qr.mu_U_pm - qr.mu_U) <= 1e-12
        assert svd.mu_U_pm == svd.mu_U


@pytest.mark.parametrize('scale', [1e-3, 0.5, 40.0])
def test_coherence_is_scale_invariant(make_cloud, scale):
    cloud = make_cloud(150, 2, seed=13)
    scaled = NodeCloud(coords=scale * cloud.coords)
    base = coherence_qr_path(cloud).mu_U
    assert abs(coherence_qr_path(scaled).mu_U - base) <= 1e-10 * base
    assert abs(coherence_svd_path(build_edm(scaled), 2).mu_U - base) \
        <= 1e-10 * base


@pytest.mark.parametrize('dim,n_nodes,seed', [(1, 60, 14), (2, 150, 15),
                                              (3, 300, 16)])
def test_joint_coherence_meets_a1_with_equality(make_cloud, dim, n_nodes,
                                                seed):
    cloud = make_cloud(n_nodes, dim, seed)
    report = coherence_svd_path(build_edm(cloud), dim)
    rank = report.effective_rank
    values, vectors = np.linalg.eigh(build_edm(cloud).entries)
    keep = np.abs(values) > 1e-10 * np.abs(values).max()
    joint = (vectors[:, keep] * np.sign(values[keep])) @ vectors[:, keep].T
    assert np.abs(joint).max() == pytest.approx(
        report.mu1_emp * np.sqrt(rank) / n_nodes, rel=1e-9)
    assert report.mu1_emp <= report.mu_U * np.sqrt(rank) * (1 + 1e-12)
