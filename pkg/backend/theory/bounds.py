"""Замкнутые формулы для когерентности случайных EDM.

Логарифм везде натуральный.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from distributions.laws import MomentSet
from edm_lab.exceptions import (InvalidParameterError,
                                SingularMomentMatrixError,
                                UnboundedNodeCountError)
from linalg.kernels import CubicCoeffs, cubic_real_roots, eig_sym

POSITIVITY_FLOOR = 1e-14
SYMMETRY_TOL = 1e-12
PRIOR_WORK_CLAIM = 1 / 3


@dataclass(frozen=True)
class TheoryParams:
    moments: MomentSet
    dim: int
    t: float = 0.5
    gamma: float = 0.1
    beta: float = 3.0
    big_c: float = 1.0

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidParameterError('d must be >= 1')
        if not 0 <= self.t <= 1:
            raise InvalidParameterError('t must lie in [0, 1]')
        if not 0 <= self.gamma <= 1:
            raise InvalidParameterError('gamma must lie in [0, 1]')
        if not self.beta > 2:
            raise InvalidParameterError('beta must be > 2')
        if not self.big_c > 0:
            raise InvalidParameterError('C must be > 0')


@dataclass(frozen=True)
class ChernoffBound:
    eps: float
    vacuous: bool


@dataclass(frozen=True)
class SampleComplexity:
    m_general: int
    m_improved: Optional[int]
    improved_applicable: bool
    general_vacuous: bool
    improved_vacuous: Optional[bool]


@dataclass
class TheoryBounds:
    R_d: np.ndarray
    cubic: CubicCoeffs
    cubic_roots: np.ndarray
    lambda_star: float
    theta: float
    mu0: float
    mu1: float
    N_min: int
    n_nodes: int
    eps_t: ChernoffBound
    complexity: SampleComplexity
    params: TheoryParams
    theta_symmetric: Optional[float] = None
    flags: dict = field(default_factory=dict)


def build_Rd(moments, dim):
    """Матрица R_d = E{X_1^T X_1} размера (d+2) x (d+2)."""
    m2, m3, m4 = moments.m2, moments.m3, moments.m4
    size = dim + 2
    R = np.zeros((size, size))
    R[0, 0] = 1.0
    R[0, -1] = R[-1, 0] = dim * m2
    R[1:-1, 1:-1] = m2 * np.eye(dim)
    R[1:-1, -1] = R[-1, 1:-1] = m3
    R[-1, -1] = dim * (m4 - m2 ** 2) + dim ** 2 * m2 ** 2
    return R


def cubic_coeffs(moments, dim):
    m2, m3, m4 = moments.m2, moments.m3, moments.m4
    d = dim
    return CubicCoeffs(
        alpha0=(m4 * m2 - m2 ** 3 - m3 ** 2) * d,
        alpha1=(-m2 ** 3 * d ** 2
                + (m2 ** 3 + m3 ** 2 + m2 ** 2 - m4 - m4 * m2) * d
                - m2),
        alpha2=m2 ** 2 * d ** 2 + (m4 - m2 ** 2) * d + m2 + 1,
        alpha3=-1.0,
    )


def rd_spectrum(moments, dim):
    """Спектр R_d: три корня кубики и m2 кратности d - 1, по возрастанию."""
    roots = cubic_real_roots(cubic_coeffs(moments, dim))
    return np.sort(np.concatenate([roots, np.full(dim - 1, moments.m2)]))


def lambda_star_general(moments, dim):
    """lambda* = min{lambda_1, lambda_2, lambda_3, m2}."""
    candidates = np.append(cubic_real_roots(cubic_coeffs(moments, dim)),
                           moments.m2)
    if np.any(candidates <= POSITIVITY_FLOOR):
        raise SingularMomentMatrixError(
            f'R_d numerically singular: eigenvalue candidates '
            f'{candidates.tolist()}'
        )
    return float(candidates.min())


def lambda_star_symmetric(moments, dim):
    """lambda* для симметричного закона (m3 = 0).

    Равно удвоенному собственному числу блока; удвоение компенсируется
    множителем 2 в theta_symmetric.
    """
    if abs(moments.m3) > SYMMETRY_TOL:
        raise InvalidParameterError(
            'm3 != 0: the law is not symmetric, use lambda_star_general'
        )
    spread = moments.m4 - moments.m2 ** 2
    zeta = dim * spread + dim ** 2 * moments.m2 ** 2 + 1
    value = min(zeta - math.sqrt(max(zeta ** 2 - 4 * dim * spread, 0.0)),
                2 * moments.m2)
    if value <= POSITIVITY_FLOOR:
        raise SingularMomentMatrixError(
            f'R_d numerically singular: lambda* = {value:.3e}'
        )
    return value


def row_norm_bound(c, dim):
    """Почти наверное ||X_i||^2 <= 1 + d c^2 + d^2 c^4."""
    return 1 + dim * c ** 2 + dim ** 2 * c ** 4


def theta(moments, dim):
    return row_norm_bound(moments.c, dim) / lambda_star_general(moments, dim)


def theta_symmetric(moments, dim):
    return 2 * row_norm_bound(moments.c, dim) / lambda_star_symmetric(
        moments, dim)


def corollary1_theta(dim):
    """theta для координат из U[-1, 1]."""
    if dim < 1:
        raise InvalidParameterError('d must be >= 1')
    zeta = 5 * dim ** 2 + 4 * dim + 45
    return 90 * (1 + dim + dim ** 2) / (zeta - math.sqrt(zeta ** 2
                                                          - 720 * dim))


def coherence_constants(theta_value, dim, t):
    """mu0 = theta / (t (d+2)), mu1 = mu0 sqrt(d+2); при t = 0 бесконечны."""
    if t == 0:
        return math.inf, math.inf
    mu0 = theta_value / (t * (dim + 2))
    return mu0, mu0 * math.sqrt(dim + 2)


def min_nodes(theta_value, dim, t, gamma):
    """Наименьшее целое N, при котором eps(t) <= gamma."""
    if t >= 1:
        raise UnboundedNodeCountError('t must be < 1 for N_min')
    if t < 0:
        raise InvalidParameterError('t must lie in [0, 1)')
    if gamma <= 0:
        raise UnboundedNodeCountError('gamma must be > 0 for N_min')
    if gamma > 1:
        raise InvalidParameterError('gamma must lie in (0, 1]')
    bound = (2 * theta_value * (math.log(dim + 2) - math.log(gamma))
             / (1 - t) ** 2)
    return max(1, math.ceil(bound))


def chernoff_failure(theta_value, dim, t, n_nodes):
    """eps(t) = (d+2) exp(-N (1-t)^2 / (2 theta)); eps > 1 -- пустая оценка."""
    eps = (dim + 2) * math.exp(-n_nodes * (1 - t) ** 2 / (2 * theta_value))
    return ChernoffBound(eps=eps, vacuous=eps > 1)


def sample_complexity(mu0, mu1, n_nodes, rank, beta, big_c):
    """Число наблюдений из теоремы о восстановлении; C задает пользователь."""
    if min(mu0, mu1, n_nodes, rank, big_c) <= 0:
        raise InvalidParameterError('sample_complexity needs positive inputs')
    if not beta > 2:
        raise InvalidParameterError('beta must be > 2')
    scale = n_nodes * rank * beta * math.log(n_nodes)
    leading = max(mu1 ** 2, math.sqrt(mu0) * mu1, mu0 * n_nodes ** 0.25)
    m_general = math.ceil(big_c * leading * scale)
    ceiling = n_nodes ** 2
    applicable = rank <= n_nodes ** 0.2 / mu0
    m_improved = None
    improved_vacuous = None
    if applicable:
        m_improved = math.ceil(big_c * mu0 * n_nodes ** 1.2 * rank * beta
                               * math.log(n_nodes))
        improved_vacuous = m_improved > ceiling
    return SampleComplexity(
        m_general=m_general,
        m_improved=m_improved,
        improved_applicable=applicable,
        general_vacuous=m_general > ceiling,
        improved_vacuous=improved_vacuous,
    )


def prior_work_matrix(dim):
    third = 1 / 3
    size = dim + 2
    R = np.zeros((size, size))
    R[0, 0] = 1.0
    R[0, -1] = R[-1, 0] = dim / 3
    R[1:-1, 1:-1] = third * np.eye(dim)
    R[-1, -1] = (dim / 3) ** 2 + 4 * dim / 45
    return R


def prior_work_lambda_min(dim):
    """lambda_min матрицы, для которой ранее утверждалось значение 1/3."""
    if dim < 1:
        raise InvalidParameterError('d must be >= 1')
    lambda_min = float(np.min(eig_sym(prior_work_matrix(dim)).eigvals))
    return lambda_min, abs(lambda_min - PRIOR_WORK_CLAIM)


def evaluate_bounds(params, n_nodes=None):
    """Полный набор констант; eps(t) считается при n_nodes или при N_min."""
    moments, dim = params.moments, params.dim
    cubic = cubic_coeffs(moments, dim)
    roots = cubic_real_roots(cubic)
    lambda_star = lambda_star_general(moments, dim)
    theta_value = row_norm_bound(moments.c, dim) / lambda_star
    mu0, mu1 = coherence_constants(theta_value, dim, params.t)
    n_min = min_nodes(theta_value, dim, params.t, params.gamma)
    nodes = n_nodes or n_min
    eps = chernoff_failure(theta_value, dim, params.t, nodes)
    rank = dim + 2
    if math.isfinite(mu0) and nodes > 1:
        complexity = sample_complexity(mu0, mu1, nodes, rank, params.beta,
                                       params.big_c)
    else:
        complexity = None
    symmetric = None
    if abs(moments.m3) <= SYMMETRY_TOL:
        symmetric = theta_symmetric(moments, dim)
    return TheoryBounds(
        R_d=build_Rd(moments, dim),
        cubic=cubic,
        cubic_roots=roots,
        lambda_star=lambda_star,
        theta=theta_value,
        mu0=mu0,
        mu1=mu1,
        N_min=n_min,
        n_nodes=nodes,
        eps_t=eps,
        complexity=complexity,
        params=params,
        theta_symmetric=symmetric,
        flags={
            'eps_vacuous': eps.vacuous,
            'below_N_min': nodes < n_min,
            'm_general_vacuous': (complexity.general_vacuous
                                  if complexity else None),
            'm_improved_applicable': (complexity.improved_applicable
                                      if complexity else None),
        },
    )
