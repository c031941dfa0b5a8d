"""Плотные численные ядра.

Матрицы здесь маленькие (до (d+2) x (d+2)) или низкого ранга, поэтому
ядра написаны напрямую на numpy: QR через отражения Хаусхолдера,
циклический метод Якоби, блочные итерации подпространства и
тригонометрическое решение кубического уравнения.
"""
from dataclasses import dataclass

import numpy as np

from edm_lab.exceptions import (ComplexRootsError, ConvergenceError,
                                InvalidParameterError, NotSymmetricError)

ORTHO_TOL = 1e-12
RESIDUAL_TOL = 1e-10
QR_DEFICIENCY_TOL = 1e-13
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 30
SUBSPACE_MAX_ITER = 500
CUBIC_DISCRIMINANT_TOL = 1e-12


@dataclass
class QrThin:
    """Тонкое QR: M = V A, V^T V = I_k, A верхнетреугольная."""
    V: np.ndarray
    A: np.ndarray
    deficient: bool = False


@dataclass
class SymEig:
    """Собственные пары, упорядоченные по убыванию |lambda|."""
    eigvals: np.ndarray
    eigvecs: np.ndarray


@dataclass(frozen=True)
class CubicCoeffs:
    """Коэффициенты sum(alpha_i * lambda^i)."""
    alpha0: float
    alpha1: float
    alpha2: float
    alpha3: float = -1.0

    def __post_init__(self):
        if self.alpha3 == 0:
            raise InvalidParameterError('alpha3 must be non-zero')

    def as_tuple(self):
        return (self.alpha0, self.alpha1, self.alpha2, self.alpha3)

    def __call__(self, value):
        return ((self.alpha3 * value + self.alpha2) * value
                + self.alpha1) * value + self.alpha0

    def derivative(self, value):
        return ((3 * self.alpha3 * value + 2 * self.alpha2) * value
                + self.alpha1)


@dataclass
class TruncatedSvd:
    """Усеченное SVD симметричной матрицы: S = U |Lambda| (U sign)^T."""
    singular_values: np.ndarray
    U: np.ndarray
    signs: np.ndarray
    iterations: int = 0


def thin_qr(matrix):
    """Тонкое QR отражениями Хаусхолдера; diag(A) >= 0."""
    M = np.array(matrix, dtype=float, copy=True)
    if M.ndim != 2:
        raise InvalidParameterError('thin_qr expects a matrix')
    n_rows, n_cols = M.shape
    if n_rows < n_cols:
        raise InvalidParameterError('thin_qr requires N >= k')
    R = M.copy()
    reflectors = []
    for j in range(n_cols):
        x = R[j:, j]
        norm_x = np.linalg.norm(x)
        if norm_x == 0:
            reflectors.append(None)
            continue
        alpha = -norm_x if x[0] >= 0 else norm_x
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        R[j:, j:] -= 2.0 * np.outer(v, v @ R[j:, j:])
        reflectors.append(v)
    V = np.eye(n_rows, n_cols)
    for j in reversed(range(n_cols)):
        v = reflectors[j]
        if v is not None:
            V[j:, :] -= 2.0 * np.outer(v, v @ V[j:, :])
    A = np.triu(R[:n_cols, :])
    signs = np.where(np.diag(A) < 0, -1.0, 1.0)
    A = signs[:, None] * A
    V = V * signs
    scale = np.linalg.norm(M)
    deficient = bool(
        scale == 0 or np.any(np.abs(np.diag(A)) < QR_DEFICIENCY_TOL * scale)
    )
    return QrThin(V=V, A=A, deficient=deficient)


def _sorted_by_magnitude(eigvals, eigvecs):
    # при равных |lambda| положительное число идет первым
    order = np.lexsort((-eigvals, -np.abs(eigvals)))
    return SymEig(eigvals=eigvals[order], eigvecs=eigvecs[:, order])


def eig_sym(matrix):
    """Спектральное разложение симметричной матрицы циклическим Якоби."""
    S = np.array(matrix, dtype=float, copy=True)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise InvalidParameterError('eig_sym expects a square matrix')
    size = S.shape[0]
    max_abs = np.max(np.abs(S)) if S.size else 0.0
    if np.max(np.abs(S - S.T), initial=0.0) > ORTHO_TOL * max_abs:
        raise NotSymmetricError('eig_sym expects a symmetric matrix')
    A = (S + S.T) / 2
    Q = np.eye(size)
    threshold = JACOBI_TOL * np.linalg.norm(A)
    for _ in range(JACOBI_MAX_SWEEPS + 1):
        off = np.abs(A - np.diag(np.diag(A)))
        if off.max(initial=0.0) <= threshold:
            return _sorted_by_magnitude(np.diag(A).copy(), Q)
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = A[p, q]
                if abs(apq) <= threshold:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                sign = 1.0 if theta >= 0 else -1.0
                t = sign / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p, row_q = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
                vec_p, vec_q = Q[:, p].copy(), Q[:, q].copy()
                Q[:, p] = c * vec_p - s * vec_q
                Q[:, q] = s * vec_p + c * vec_q
    raise ConvergenceError(
        f'Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps'
    )


def svd_sym_truncated(matrix, k, start=None, max_iter=SUBSPACE_MAX_ITER):
    """Верхние k собственных пар по |lambda| итерациями подпространства.

    Сингулярные числа равны |lambda|, правые векторы получаются
    умножением левых на вектор знаков.
    """
    S = np.asarray(matrix, dtype=float)
    size = S.shape[0]
    if S.ndim != 2 or S.shape[1] != size:
        raise InvalidParameterError(
            'svd_sym_truncated expects a square matrix')
    if not 1 <= k <= size:
        raise InvalidParameterError('k must satisfy 1 <= k <= N')
    block = min(k + 2, size)
    if start is None:
        rng = np.random.Generator(np.random.Philox(0))
        start = rng.standard_normal((size, block))
    Q = thin_qr(start[:, :block]).V
    residuals = []
    for iteration in range(1, max_iter + 1):
        Q = thin_qr(S @ Q).V
        Z = S @ Q
        ritz = eig_sym((Q.T @ Z + Z.T @ Q) / 2)
        W = Q @ ritz.eigvecs
        theta = ritz.eigvals
        R = Z @ ritz.eigvecs - W * theta
        worst = float(np.max(np.linalg.norm(R[:, :k], axis=0)))
        residuals.append(worst)
        if worst <= RESIDUAL_TOL * abs(theta[0]):
            values = theta[:k]
            return TruncatedSvd(singular_values=np.abs(values),
                                U=W[:, :k],
                                signs=np.where(values < 0, -1.0, 1.0),
                                iterations=iteration)
    raise ConvergenceError(
        f'subspace iteration did not converge in {max_iter} iterations, '
        f'last residual {residuals[-1]:.3e}',
        history=residuals,
    )


def cubic_real_roots(coeffs):
    """Три вещественных корня кубического уравнения по возрастанию."""
    a3 = coeffs.alpha3
    b, c, d = coeffs.alpha2 / a3, coeffs.alpha1 / a3, coeffs.alpha0 / a3
    p = (3 * c - b * b) / 3
    q = (2 * b ** 3 - 9 * b * c + 27 * d) / 27
    discriminant = -(4 * p ** 3 + 27 * q ** 2)
    scale = max(1.0, abs(p), abs(q) ** (2 / 3))
    if discriminant < -CUBIC_DISCRIMINANT_TOL * scale ** 3:
        raise ComplexRootsError(
            f'cubic has a complex root pair, discriminant {discriminant:.6e}',
            discriminant=discriminant,
        )
    if p >= 0:
        shifted = np.full(3, np.cbrt(-q))
    else:
        radius = 2 * np.sqrt(-p / 3)
        cosine = np.clip(3 * q / (p * radius), -1.0, 1.0)
        phi = np.arccos(cosine) / 3
        shifted = radius * np.cos(phi - 2 * np.pi * np.arange(3) / 3)
    roots = shifted - b / 3
    for _ in range(2):
        slope = coeffs.derivative(roots)
        step = np.divide(coeffs(roots), slope, out=np.zeros(3),
                         where=np.abs(slope) > 1e-300)
        polished = roots - step
        better = np.abs(coeffs(polished)) < np.abs(coeffs(roots))
        roots = np.where(better, polished, roots)
    return np.sort(roots)
