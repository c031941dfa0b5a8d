"""Случайные маски наблюдаемых элементов."""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from distributions.laws import make_generator
from edm_lab.exceptions import InvalidParameterError, ShapeMismatchError


class MaskMode(str, Enum):
    ALL_ENTRIES = 'all-entries'
    SYMMETRIC_OFFDIAG = 'symmetric-offdiag'


@dataclass
class SampleMask:
    """Множество Omega наблюдаемых координат (индексы с нуля)."""
    rows: np.ndarray
    cols: np.ndarray
    mode: MaskMode
    n_nodes: int
    seed: int

    @property
    def m(self):
        return int(self.rows.size)

    @property
    def symmetric(self):
        return self.mode is MaskMode.SYMMETRIC_OFFDIAG

    def coords(self):
        return set(zip(self.rows.tolist(), self.cols.tolist()))

    def as_matrix(self):
        observed = np.zeros((self.n_nodes, self.n_nodes), dtype=bool)
        observed[self.rows, self.cols] = True
        return observed

    def observe(self, matrix):
        """Значения матрицы на Omega в порядке маски."""
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (self.n_nodes, self.n_nodes):
            raise ShapeMismatchError(
                f'matrix shape {matrix.shape} does not match mask '
                f'N = {self.n_nodes}'
            )
        return matrix[self.rows, self.cols]


def sample_mask(n_nodes, m, mode=MaskMode.SYMMETRIC_OFFDIAG, seed=0):
    """Равномерная выборка m координат без возвращения."""
    try:
        mode = MaskMode(mode)
    except ValueError as exc:
        raise InvalidParameterError(f'unknown mask mode: {mode!r}') from exc
    if n_nodes < 1:
        raise InvalidParameterError('N must be >= 1')
    rng = make_generator(seed)
    if mode is MaskMode.ALL_ENTRIES:
        if not 0 <= m <= n_nodes ** 2:
            raise InvalidParameterError(f'm must lie in [0, N^2 = '
                                        f'{n_nodes ** 2}]')
        flat = np.sort(rng.choice(n_nodes ** 2, size=m, replace=False))
        rows, cols = np.divmod(flat, n_nodes)
    else:
        if m % 2 or not 0 <= m <= n_nodes ** 2 - n_nodes:
            raise InvalidParameterError(
                f'm must be even and lie in [0, N^2 - N = '
                f'{n_nodes ** 2 - n_nodes}] for symmetric-offdiag masks'
            )
        upper_rows, upper_cols = np.triu_indices(n_nodes, k=1)
        picked = np.sort(rng.choice(upper_rows.size, size=m // 2,
                                    replace=False))
        rows = np.concatenate([upper_rows[picked], upper_cols[picked]])
        cols = np.concatenate([upper_cols[picked], upper_rows[picked]])
    return SampleMask(rows=rows.astype(np.intp), cols=cols.astype(np.intp),
                      mode=mode, n_nodes=n_nodes, seed=int(seed))
