import numpy as np
import pytest

from edm.matrices import build_edm
from edm_lab.exceptions import (ComplexRootsError, InvalidParameterError,
                                NotSymmetricError)
from linalg.kernels import (CubicCoeffs, cubic_real_roots, eig_sym,
                            svd_sym_truncated, thin_qr)


class TestThinQr:

    def test_two_by_one(self):
        qr = thin_qr(np.array([[3.0], [4.0]]))
        assert qr.V[:, 0] == pytest.approx([0.6, 0.8])
        assert qr.A[0, 0] == pytest.approx(5.0)
        assert not qr.deficient

    @pytest.mark.parametrize('seed', range(20))
    def test_random_tall_matrices(self, seed):
        rng = np.random.default_rng(seed)
        M = rng.standard_normal((rng.integers(5, 300), 5))
        qr = thin_qr(M)
        assert np.abs(qr.V.T @ qr.V - np.eye(5)).max() <= 1e-12
        assert np.abs(qr.V @ qr.A - M).max() <= 1e-12 * np.linalg.norm(M)
        assert np.all(np.diag(qr.A) >= 0)
        assert np.array_equal(qr.A, np.triu(qr.A))

    def test_deficient_columns_flagged(self):
        column = np.arange(1.0, 11.0)
        M = np.column_stack([np.ones(10), column, 2 * column])
        assert thin_qr(M).deficient

    @pytest.mark.slow
    def test_many_random_shapes(self):
        rng = np.random.default_rng(501)
        for _ in range(500):
            n_cols = int(rng.integers(1, 8))
            M = rng.standard_normal((int(rng.integers(n_cols, 400)), n_cols))
            qr = thin_qr(M)
            assert np.abs(qr.V.T @ qr.V - np.eye(n_cols)).max() <= 1e-12
            assert np.abs(qr.V @ qr.A - M).max() \
                <= 1e-12 * np.linalg.norm(M)
            assert np.all(np.diag(qr.A) >= 0)

    def test_wide_matrix_rejected(self):
        with pytest.raises(InvalidParameterError):
            thin_qr(np.ones((2, 3)))


class TestEigSym:

    @pytest.mark.parametrize('seed', range(20))
    def test_reconstruction(self, seed):
        rng = np.random.default_rng(seed)
        size = int(rng.integers(1, 9))
        B = rng.standard_normal((size, size))
        S = B + B.T
        eig = eig_sym(S)
        rebuilt = (eig.eigvecs * eig.eigvals) @ eig.eigvecs.T
        assert np.abs(rebuilt - S).max() <= 1e-10 * max(1.0,
                                                        np.abs(S).max())
        assert np.abs(eig.eigvecs.T @ eig.eigvecs - np.eye(size)).max() \
            <= 1e-12
        magnitudes = np.abs(eig.eigvals)
        assert np.all(magnitudes[:-1] >= magnitudes[1:])
        assert np.sort(eig.eigvals) == pytest.approx(
            np.linalg.eigvalsh(S), abs=1e-10)

    def test_two_point_edm_is_indefinite(self):
        eig = eig_sym(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert sorted(eig.eigvals) == pytest.approx([-1.0, 1.0])

    @pytest.mark.parametrize('delta', [1e-3, 0.5, 7.0])
    def test_equal_magnitudes_put_positive_first(self, delta):
        eig = eig_sym(np.array([[0.0, delta], [delta, 0.0]]))
        assert eig.eigvals == pytest.approx([delta, -delta])
        assert eig.eigvals[0] > 0 > eig.eigvals[1]

    @pytest.mark.parametrize('size', [1, 4, 9])
    def test_identity(self, size):
        eig = eig_sym(np.eye(size))
        assert np.array_equal(eig.eigvals, np.ones(size))
        assert np.abs(eig.eigvecs.T @ eig.eigvecs - np.eye(size)).max() \
            <= 1e-15

    @pytest.mark.slow
    def test_random_symmetric_matrices(self):
        rng = np.random.default_rng(500)
        for _ in range(500):
            size = int(rng.integers(1, 9))
            B = rng.standard_normal((size, size))
            S = B + B.T
            eig = eig_sym(S)
            rebuilt = (eig.eigvecs * eig.eigvals) @ eig.eigvecs.T
            assert np.abs(rebuilt - S).max() \
                <= 1e-10 * max(1.0, np.abs(S).max())
            assert np.abs(eig.eigvecs.T @ eig.eigvecs - np.eye(size)).max() \
                <= 1e-12

    def test_asymmetric_rejected(self):
        with pytest.raises(NotSymmetricError):
            eig_sym(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestSvdSymTruncated:

    def test_low_rank_edm(self, make_cloud):
        entries = build_edm(make_cloud(60, 2, seed=8)).entries
        svd = svd_sym_truncated(entries, 4)
        reference = np.sort(np.abs(np.linalg.eigvalsh(entries)))[::-1][:4]
        assert svd.singular_values == pytest.approx(reference, rel=1e-9)
        assert np.abs(svd.U.T @ svd.U - np.eye(4)).max() <= 1e-10
        rebuilt = (svd.U * (svd.singular_values * svd.signs)) @ svd.U.T
        assert np.abs(rebuilt - entries).max() \
            <= 1e-8 * np.abs(entries).max()
        assert svd.signs.tolist().count(-1.0) >= 1

    def test_identity(self):
        svd = svd_sym_truncated(np.eye(8), 3)
        assert svd.singular_values == pytest.approx(np.ones(3))
        assert np.array_equal(svd.signs, np.ones(3))
        assert np.abs(svd.U.T @ svd.U - np.eye(3)).max() <= 1e-12

    @pytest.mark.parametrize('k', [0, 61])
    def test_rank_out_of_range(self, make_cloud, k):
        entries = build_edm(make_cloud(60, 2)).entries
        with pytest.raises(InvalidParameterError):
            svd_sym_truncated(entries, k)


class TestCubicRealRoots:

    def test_distinct_roots(self):
        coeffs = CubicCoeffs(alpha0=6.0, alpha1=-11.0, alpha2=6.0)
        assert cubic_real_roots(coeffs) == pytest.approx([1.0, 2.0, 3.0],
                                                         abs=1e-12)

    def test_triple_root(self):
        coeffs = CubicCoeffs(alpha0=8.0, alpha1=-12.0, alpha2=6.0)
        assert cubic_real_roots(coeffs) == pytest.approx([2.0, 2.0, 2.0],
                                                         abs=1e-9)

    def test_complex_pair(self):
        with pytest.raises(ComplexRootsError) as info:
            cubic_real_roots(CubicCoeffs(alpha0=0.0, alpha1=1.0,
                                         alpha2=0.0, alpha3=1.0))
        assert info.value.discriminant < 0

    def test_zero_leading_coefficient(self):
        with pytest.raises(InvalidParameterError):
            CubicCoeffs(alpha0=1.0, alpha1=1.0, alpha2=1.0, alpha3=0.0)

    def test_random_separated_roots(self):
        rng = np.random.default_rng(2024)
        checked = 0
        while checked < 500:
            roots = np.sort(rng.uniform(-5.0, 5.0, 3))
            if np.min(np.diff(roots)) < 0.1:
                continue
            r1, r2, r3 = roots
            coeffs = CubicCoeffs(
                alpha0=r1 * r2 * r3,
                alpha1=-(r1 * r2 + r1 * r3 + r2 * r3),
                alpha2=r1 + r2 + r3,
            )
            found = cubic_real_roots(coeffs)
            scale = max(1.0, *map(abs, coeffs.as_tuple()))
            assert np.abs(coeffs(found)).max() <= 1e-10 * scale
            assert found == pytest.approx(roots, abs=1e-8)
            checked += 1
