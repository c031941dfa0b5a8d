"""Восстановление EDM минимизацией ядерной нормы (singular value thresholding).

Итерация: X = shrink(Y, tau), Y += step * P_Omega(M - X). Для симметричной
маски итерации симметричны, и порог применяется к собственным числам.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import ArpackNoConvergence, eigsh, lsqr

from edm_lab.exceptions import (DivergenceError, InvalidParameterError,
                                ShapeMismatchError)

logger = logging.getLogger(__name__)

TAU_FACTOR = 5.0
STEP_FACTOR = 1.2
DEFAULT_TOL = 1e-4
DEFAULT_MAX_ITER = 1000
DEFAULT_INITIAL_RANK = 6
RANK_STEP = 2
DIVERGENCE_FACTOR = 10.0
DIVERGENCE_PATIENCE = 20
REFINE_START = 5e-2
REFINE_EVERY = 5
REFINE_STEPS = 4


@dataclass(frozen=True)
class SvtParams:
    tau: float
    step: float
    max_iter: int = DEFAULT_MAX_ITER
    tol: float = DEFAULT_TOL
    initial_rank: int = DEFAULT_INITIAL_RANK
    refine: bool = True

    def __post_init__(self):
        if not (self.tau > 0 and self.step > 0 and self.tol > 0):
            raise InvalidParameterError('tau, step and tol must be positive')
        if self.max_iter < 1 or self.initial_rank < 1:
            raise InvalidParameterError(
                'max_iter and initial_rank must be >= 1'
            )

    @classmethod
    def defaults(cls, n_nodes, m, dim=None, tau_factor=TAU_FACTOR,
                 step_factor=STEP_FACTOR, **overrides):
        """tau = 5N, step = 1.2 N^2 / m, начальный ранг d + 4."""
        values = {
            'tau': tau_factor * n_nodes,
            'step': step_factor * n_nodes ** 2 / max(m, 1),
            'initial_rank': dim + 4 if dim else DEFAULT_INITIAL_RANK,
        }
        values.update({key: value for key, value in overrides.items()
                       if value is not None})
        return cls(**values)


@dataclass
class CompletionResult:
    estimate: np.ndarray
    iterations: int
    residual_history: list = field(default_factory=list)
    converged: bool = False
    rel_error: Optional[float] = None
    final_rank: int = 0


def recovery_error(truth, estimate):
    """Относительная ошибка ||estimate - truth||_F / ||truth||_F.

    Для нулевой truth возвращает ||estimate||_F.
    """
    truth = np.asarray(truth, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    if truth.shape != estimate.shape:
        raise ShapeMismatchError(
            f'shape mismatch: {truth.shape} vs {estimate.shape}'
        )
    scale = np.linalg.norm(truth)
    if scale == 0:
        return float(np.linalg.norm(estimate))
    return float(np.linalg.norm(estimate - truth) / scale)


def _start_vector(size):
    return np.random.Generator(np.random.Philox(0)).standard_normal(size)


def _top_eigenpairs(Y, rank):
    size = Y.shape[0]
    if rank < size - 1:
        try:
            return eigsh(Y, k=rank, which='LM', v0=_start_vector(size))
        except ArpackNoConvergence:
            logger.debug('ARPACK did not converge at rank %d, using eigh',
                         rank)
    return linalg.eigh(Y)


def _shrink_symmetric(Y, tau, rank):
    """Порог tau по |lambda|; ранг растет, пока младшее |lambda| > tau.

    Собственные пары считает ARPACK (eigsh): Y в ходе итераций не низкого
    ранга, а нужна только верхняя часть спектра. Возвращает X, рабочий
    ранг ARPACK и ранг X.
    """
    size = Y.shape[0]
    while True:
        values, vectors = _top_eigenpairs(Y, rank)
        if values.size >= size - 1 or np.min(np.abs(values)) <= tau:
            break
        rank = min(rank + RANK_STEP, size)
        logger.debug('SVT rank grown to %d', rank)
    keep = np.abs(values) > tau
    shrunk = np.sign(values[keep]) * (np.abs(values[keep]) - tau)
    X = (vectors[:, keep] * shrunk) @ vectors[:, keep].T
    return (X + X.T) / 2, rank, int(keep.sum())


def _shrink_general(Y, tau):
    U, singular, Vt = linalg.svd(Y, full_matrices=False)
    keep = singular > tau
    return (U[:, keep] * (singular[keep] - tau)) @ Vt[keep], int(keep.sum())


def _truncate(Z, rank, symmetric):
    if symmetric:
        values, vectors = linalg.eigh((Z + Z.T) / 2)
        order = np.argsort(-np.abs(values))[:rank]
        X = (vectors[:, order] * values[order]) @ vectors[:, order].T
        return (X + X.T) / 2, vectors[:, order], vectors[:, order]
    U, singular, Vt = linalg.svd(Z, full_matrices=False)
    X = (U[:, :rank] * singular[:rank]) @ Vt[:rank]
    return X, U[:, :rank], Vt[:rank].T


def _tangent_step(U, V, M, W, symmetric):
    """Ближайшая по Omega точка касательного пространства: U B^T + C V^T.

    Для симметричной маски C = B. Решается разреженным МНК.
    """
    size, rank = U.shape
    rows, cols = np.nonzero(W)
    obs = np.repeat(np.arange(rows.size), rank)
    k = np.arange(rank)
    left = (cols[:, None] * rank + k).ravel()
    right = (rows[:, None] * rank + k).ravel()
    offset = 0 if symmetric else size * rank
    design = sparse.csr_matrix(
        (np.concatenate([U[rows].ravel(), V[cols].ravel()]),
         (np.concatenate([obs, obs]),
          np.concatenate([left, right + offset]))),
        shape=(rows.size, size * rank + offset),
    )
    solution = lsqr(design, M[rows, cols], atol=1e-14, btol=1e-14,
                    iter_lim=20 * design.shape[1])[0]
    B = solution[:size * rank].reshape(size, rank)
    C = B if symmetric else solution[size * rank:].reshape(size, rank)
    return U @ B.T + C @ V.T


def _refine(X, rank, M, W, scale, tol, symmetric):
    """Шаги Гаусса-Ньютона на многообразии матриц ранга rank.

    Возвращает (Z, невязка) при невязке <= tol, иначе None.
    """
    _, U, V = _truncate(X, rank, symmetric)
    relative = np.inf
    for _ in range(REFINE_STEPS):
        Z, U, V = _truncate(_tangent_step(U, V, M, W, symmetric), rank,
                            symmetric)
        previous = relative
        relative = float(np.linalg.norm(np.where(W, M - Z, 0.0)) / scale)
        if not np.isfinite(relative) or relative > previous / 2:
            return None
        if relative <= tol:
            return Z, relative
    return None


def _observation_matrix(observed, mask):
    values = np.asarray(observed, dtype=float)
    if values.shape != (mask.m,):
        raise ShapeMismatchError(
            f'expected {mask.m} observed values, got {values.shape}'
        )
    M = np.zeros((mask.n_nodes, mask.n_nodes))
    W = np.zeros((mask.n_nodes, mask.n_nodes), dtype=bool)
    M[mask.rows, mask.cols] = values
    W[mask.rows, mask.cols] = True
    if mask.symmetric:
        W[np.diag_indices(mask.n_nodes)] = True
    return M, W


def svt_complete(observed, mask, n_nodes, params, truth=None):
    """Решение задачи min ||X||_* при X = M на Omega итерациями SVT.

    Когда невязка падает ниже REFINE_START, каждые REFINE_EVERY итераций
    пробуется уточнение при текущем ранге X; оно принимается, только если
    невязка на Omega не больше tol.
    """
    if mask.n_nodes != n_nodes:
        raise ShapeMismatchError(
            f'mask is for N = {mask.n_nodes}, got N = {n_nodes}'
        )
    if mask.m == 0:
        raise InvalidParameterError('mask is empty')
    M, W = _observation_matrix(observed, mask)
    scale = np.linalg.norm(M)

    def finish(estimate, iterations, history, converged, rank):
        return CompletionResult(
            estimate=estimate,
            iterations=iterations,
            residual_history=history,
            converged=converged,
            rel_error=(recovery_error(truth, estimate)
                       if truth is not None else None),
            final_rank=rank,
        )

    if W.all():
        # Omega покрывает все элементы: допустимая точка единственна.
        return finish(M.copy(), 1, [0.0], True, n_nodes)
    if scale == 0:
        return finish(np.zeros_like(M), 0, [0.0], True, 0)

    kick = math.ceil(params.tau / (params.step * np.linalg.norm(M, 2)))
    Y = kick * params.step * M
    working_rank = min(params.initial_rank, n_nodes)
    history = []
    strikes = 0
    for iteration in range(1, params.max_iter + 1):
        if mask.symmetric:
            X, working_rank, rank = _shrink_symmetric(Y, params.tau,
                                                      working_rank)
        else:
            X, rank = _shrink_general(Y, params.tau)
        residual = np.where(W, M - X, 0.0)
        relative = float(np.linalg.norm(residual) / scale)
        history.append(relative)
        logger.debug('SVT iteration %d: residual %.3e, rank %d',
                     iteration, relative, rank)
        if relative <= params.tol:
            logger.info('SVT converged in %d iterations', iteration)
            return finish(X, iteration, history, True, rank)
        if (params.refine and rank and relative <= REFINE_START
                and iteration % REFINE_EVERY == 0):
            refined = _refine(X, rank, M, W, scale, params.tol,
                              mask.symmetric)
            if refined is not None:
                history[-1] = refined[1]
                logger.info('SVT converged in %d iterations after '
                            'refinement at rank %d', iteration, rank)
                return finish(refined[0], iteration, history, True, rank)
        strikes = strikes + 1 if relative > DIVERGENCE_FACTOR * history[0] \
            else 0
        if strikes >= DIVERGENCE_PATIENCE:
            raise DivergenceError(
                f'SVT diverged: residual above {DIVERGENCE_FACTOR:g}x the '
                f'initial value for {DIVERGENCE_PATIENCE} iterations',
                history=history,
            )
        Y += params.step * residual
    logger.warning('SVT stopped after %d iterations, residual %.3e',
                   params.max_iter, history[-1])
    return finish(X, params.max_iter, history, False, rank)
