"""Точная когерентность подпространств EDM двумя независимыми путями.

QR-путь повторяет построение доказательства: X = V A, затем
A D A^T = Q Lambda Q^T и U = V Q. Нормы строк U и V совпадают, поэтому
mu(U) берется прямо из V. SVD-путь раскладывает саму Delta.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from edm.matrices import factor_edm, numerical_rank
from edm_lab.exceptions import (NumericalError, RankBoundViolationError,
                                RankDeficiencyError)
from linalg.kernels import eig_sym, svd_sym_truncated, thin_qr

RANK_REL_TOL = 1e-10
PATH_QR = 'qr'
PATH_SVD = 'svd'


@dataclass
class CoherenceReport:
    mu_U: float
    mu_U_pm: float
    mu1_emp: float
    sigma_min_sq_A: Optional[float]
    n_nodes: int
    dim: int
    effective_rank: int
    path: str
    max_row_norm_sq: Optional[float] = None
    bound_chain: Optional[float] = None
    eigenvalues: list = field(default_factory=list)
    tolerances: dict = field(default_factory=lambda: {
        'rank_rel_tol': RANK_REL_TOL,
    })


def _row_coherence(basis, n_nodes, rank):
    return n_nodes / rank * float(np.max(np.einsum('ij,ij->i', basis, basis)))


def _joint_coherence(basis, signs, n_nodes, rank):
    """Наименьшее mu1, при котором A1 выполняется с равенством."""
    joint = (basis * signs) @ basis.T
    return float(np.max(np.abs(joint))) * n_nodes / math.sqrt(rank)


def coherence_qr_path(cloud):
    factorization = factor_edm(cloud)
    X = factorization.X
    n_nodes, rank = X.shape
    qr = thin_qr(X)
    if qr.deficient:
        raise RankDeficiencyError(
            f'X is rank deficient: the cloud lies in a lower-dimensional '
            f'set, diag(A) = {np.diag(qr.A).tolist()}'
        )
    V, A = qr.V, qr.A
    gram = eig_sym(A.T @ A)
    sigma_min_sq = float(np.min(gram.eigvals))
    reduced = eig_sym(A @ factorization.D @ A.T)
    U = V @ reduced.eigvecs
    signs = np.where(reduced.eigvals < 0, -1.0, 1.0)
    mu_U = _row_coherence(V, n_nodes, rank)
    max_row_norm_sq = float(np.max(factorization.row_norms_sq()))
    return CoherenceReport(
        mu_U=mu_U,
        mu_U_pm=_row_coherence(U * signs, n_nodes, rank),
        mu1_emp=_joint_coherence(U, signs, n_nodes, rank),
        sigma_min_sq_A=sigma_min_sq,
        n_nodes=n_nodes,
        dim=cloud.dim,
        effective_rank=rank,
        path=PATH_QR,
        max_row_norm_sq=max_row_norm_sq,
        bound_chain=n_nodes / rank * max_row_norm_sq / sigma_min_sq,
        eigenvalues=reduced.eigvals.tolist(),
    )


def coherence_svd_path(edm, dim):
    n_nodes = edm.n_nodes
    bound = dim + 2
    effective_rank = numerical_rank(edm, RANK_REL_TOL)
    if effective_rank > bound:
        raise RankBoundViolationError(
            f'effective rank {effective_rank} exceeds d + 2 = {bound}'
        )
    svd = svd_sym_truncated(edm.entries, min(bound, n_nodes))
    keep = svd.singular_values > RANK_REL_TOL * svd.singular_values[0]
    rank = int(np.count_nonzero(keep))
    if rank == 0:
        raise RankDeficiencyError('EDM is numerically zero')
    U, signs = svd.U[:, keep], svd.signs[keep]
    mu_U = _row_coherence(U, n_nodes, rank)
    mu_U_pm = _row_coherence(U * signs, n_nodes, rank)
    if mu_U_pm != mu_U:
        raise NumericalError('sign flips changed the row norms of U')
    return CoherenceReport(
        mu_U=mu_U,
        mu_U_pm=mu_U_pm,
        mu1_emp=_joint_coherence(U, signs, n_nodes, rank),
        sigma_min_sq_A=None,
        n_nodes=n_nodes,
        dim=dim,
        effective_rank=rank,
        path=PATH_SVD,
        eigenvalues=(svd.singular_values[keep] * signs).tolist(),
    )


def gramian_check(cloud):
    """max |A^T A - X^T X|: граммиан через QR и через сумму X_i^T X_i."""
    X = factor_edm(cloud).X
    A = thin_qr(X).A
    return float(np.max(np.abs(A.T @ A - X.T @ X)))