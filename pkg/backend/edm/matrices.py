"""Матрицы евклидовых расстояний и их структурная факторизация."""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist, squareform

from edm_lab.exceptions import InvalidParameterError

RANK_REL_TOL = 1e-10


@dataclass
class NodeCloud:
    """Координаты N узлов в R^d (строка i = p_i) и метаданные генерации."""
    coords: np.ndarray
    seed: Optional[int] = None
    dist_id: str = 'free-form'
    algorithm: Optional[str] = None

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.ndim != 2 or coords.shape[1] < 1:
            raise InvalidParameterError('coords must be an N x d matrix')
        self.coords = coords

    @property
    def n_nodes(self):
        return self.coords.shape[0]

    @property
    def dim(self):
        return self.coords.shape[1]

    def permute(self, permutation):
        return NodeCloud(coords=self.coords[np.asarray(permutation)],
                         seed=self.seed, dist_id=self.dist_id,
                         algorithm=self.algorithm)


@dataclass
class EdmMatrix:
    entries: np.ndarray

    @property
    def n_nodes(self):
        return self.entries.shape[0]


@dataclass
class EdmFactorization:
    """Delta = X D X^T, строка X_i = [1, p_i^T, ||p_i||^2].

    D связывает первый и последний столбцы X (D[0, -1] = D[-1, 0] = 1),
    в середине диагонали стоит -2.
    """
    X: np.ndarray
    D: np.ndarray

    def reconstruct(self):
        return EdmMatrix(entries=self.X @ self.D @ self.X.T)

    def row_norms_sq(self):
        return np.einsum('ij,ij->i', self.X, self.X)


def _require_pairs(cloud):
    if cloud.n_nodes < 2:
        raise InvalidParameterError('N must be >= 2')


def build_edm(cloud):
    """Delta(i, j) = sum_k (x_ik - x_jk)^2, каждая пара считается один раз."""
    _require_pairs(cloud)
    return EdmMatrix(entries=squareform(pdist(cloud.coords, 'sqeuclidean')))


def factor_edm(cloud):
    _require_pairs(cloud)
    coords = cloud.coords
    n_nodes, dim = coords.shape
    X = np.column_stack([
        np.ones(n_nodes),
        coords,
        np.einsum('ij,ij->i', coords, coords),
    ])
    D = -2.0 * np.eye(dim + 2)
    D[0, 0] = D[-1, -1] = 0.0
    D[0, -1] = D[-1, 0] = 1.0
    return EdmFactorization(X=X, D=D)


def rank_one_expansion(cloud):
    """Delta = 1 p^T - 2 sum_k x_k x_k^T + p 1^T, p = (||p_i||^2)."""
    _require_pairs(cloud)
    coords = cloud.coords
    norms = np.einsum('ij,ij->i', coords, coords)
    ones = np.ones_like(norms)
    entries = np.outer(ones, norms) + np.outer(norms, ones)
    for column in coords.T:
        entries -= 2.0 * np.outer(column, column)
    return EdmMatrix(entries=entries)


def numerical_rank(edm, rel_tol=RANK_REL_TOL):
    """Число |lambda_k| > rel_tol * |lambda_1| симметричного разложения."""
    if not 0 < rel_tol < 1:
        raise InvalidParameterError('rel_tol must lie in (0, 1)')
    spectrum = np.abs(np.linalg.eigvalsh(edm.entries))
    top = spectrum.max(initial=0.0)
    if top == 0:
        return 0
    return int(np.count_nonzero(spectrum > rel_tol * top))
