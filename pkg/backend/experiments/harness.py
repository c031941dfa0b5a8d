"""Монте-Карло проверки вероятностных утверждений о случайных EDM.

Сид каждого испытания выводится из (master_seed, index) через SeedSequence,
поэтому результат не зависит от порядка и числа потоков.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from coherence.subspace import coherence_qr_path, coherence_svd_path
from completion.masks import MaskMode, sample_mask
from completion.svt import SvtParams, svt_complete
from distributions.laws import (RNG_ALGORITHM, SEED_LIMIT, DistributionKind,
                                DistributionSpec, make_distribution,
                                sample_coordinates)
from edm.matrices import NodeCloud, build_edm, factor_edm, numerical_rank
from edm_lab.exceptions import EdmLabError, InvalidParameterError
from linalg.kernels import eig_sym
from theory.bounds import (PRIOR_WORK_CLAIM, build_Rd, chernoff_failure,
                           coherence_constants, lambda_star_general,
                           min_nodes, prior_work_lambda_min, theta)

logger = logging.getLogger(__name__)

SLACK_SIGMAS = 3
SUCCESS_THRESHOLD = 1e-3
SIGN_INVARIANCE_TOL = 1e-12
PRIOR_WORK_DIMS = (1, 2, 3)

CLAIM_CHERNOFF = 'chernoff'
CLAIM_COHERENCE = 'coherence'
CLAIM_RANK = 'rank'


def derive_trial_seed(master_seed, index):
    """64-битный сид испытания: хеш SeedSequence от пары (master, index)."""
    if not 0 <= int(master_seed) < SEED_LIMIT or int(index) < 0:
        raise InvalidParameterError(
            'master seed must be a 64-bit unsigned integer, index >= 0'
        )
    state = np.random.SeedSequence([int(master_seed), int(index)])
    return int(state.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class McConfig:
    dist: DistributionSpec
    dim: int
    n_nodes: int
    trials: int
    t: float = 0.5
    gamma: float = 0.1
    master_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidParameterError('trials must be >= 1')
        if self.n_nodes < 2:
            raise InvalidParameterError('N must be >= 2')
        if self.dim < 1:
            raise InvalidParameterError('d must be >= 1')
        if not 0 <= self.t <= 1 or not 0 <= self.gamma <= 1:
            raise InvalidParameterError('t and gamma must lie in [0, 1]')
        if not 0 <= self.master_seed < SEED_LIMIT:
            raise InvalidParameterError(
                'master seed must be a 64-bit unsigned integer'
            )


@dataclass
class TrialRow:
    trial: int
    seed: int
    mu_U: Optional[float] = None
    sigma_min_sq_A: Optional[float] = None
    rank: Optional[int] = None
    failure: bool = False
    error: str = ''


@dataclass
class McReport:
    claim: str
    config: McConfig
    failures: int
    errors: int
    bound: float
    rows: list = field(default_factory=list)
    n_min: Optional[int] = None
    extra: dict = field(default_factory=dict)
    algorithm: str = RNG_ALGORITHM
    needs_n_min: bool = False

    @property
    def trials(self):
        return self.config.trials

    @property
    def empirical_rate(self):
        return self.failures / self.trials

    @property
    def below_n_min(self):
        return self.n_min is not None and self.config.n_nodes < self.n_min

    @property
    def vacuous(self):
        """Граница >= 1 или гарантия требует N >= N_min, а N меньше."""
        if self.needs_n_min and (self.n_min is None or self.below_n_min):
            return True
        return self.bound >= 1

    @property
    def slack(self):
        p = min(max(self.bound, 0.0), 1.0)
        return SLACK_SIGMAS * math.sqrt(p * (1 - p) / self.trials)

    @property
    def passed(self):
        return self.vacuous or self.empirical_rate <= self.bound + self.slack


def _run_trials(config, trial, workers):
    indices = range(config.trials)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(trial, indices))
    else:
        rows = [trial(index) for index in indices]
    return sorted(rows, key=lambda row: row.trial)


def _trial_cloud(config, distribution, seed):
    return sample_coordinates(distribution, config.n_nodes, config.dim,
                              seed)


def _qr_trial(config, distribution, index, is_failure):
    seed = derive_trial_seed(config.master_seed, index)
    row = TrialRow(trial=index, seed=seed)
    try:
        cloud = _trial_cloud(config, distribution, seed)
        report = coherence_qr_path(cloud)
    except EdmLabError as exc:
        logger.warning('trial %d (seed %d) failed: %s', index, seed, exc)
        row.error = str(exc)
        return row
    row.mu_U = report.mu_U
    row.sigma_min_sq_A = report.sigma_min_sq_A
    row.rank = report.effective_rank
    row.failure = bool(is_failure(report))
    return row


def _theory_constants(config, distribution):
    moments = distribution.moments
    theta_value = theta(moments, config.dim)
    eps = chernoff_failure(theta_value, config.dim, config.t,
                           config.n_nodes)
    try:
        n_min = min_nodes(theta_value, config.dim, config.t, config.gamma)
    except InvalidParameterError:
        n_min = None
    if eps.vacuous:
        logger.warning('bound is vacuous at N = %d: eps = %.3g',
                       config.n_nodes, eps.eps)
    return theta_value, eps.eps, n_min


def _finish(claim, config, rows, bound, n_min, needs_n_min=False,
            **extra):
    report = McReport(
        claim=claim,
        config=config,
        failures=sum(row.failure for row in rows),
        errors=sum(bool(row.error) for row in rows),
        bound=bound,
        rows=rows,
        n_min=n_min,
        extra=extra,
        needs_n_min=needs_n_min,
    )
    logger.info('%s: %d/%d failures, %d errors, bound %.4g, passed=%s',
                claim, report.failures, report.trials, report.errors,
                bound, report.passed)
    return report


def run_chernoff_mc(config, workers=1):
    """Частота события sigma_min^2(A) <= t N lambda* против eps(t)."""
    distribution = make_distribution(config.dist)
    _, bound, n_min = _theory_constants(config, distribution)
    threshold = (config.t * config.n_nodes
                 * lambda_star_general(distribution.moments, config.dim))
    logger.info('chernoff: %d trials, N = %d, threshold %.6g',
                config.trials, config.n_nodes, threshold)
    rows = _run_trials(
        config,
        lambda index: _qr_trial(
            config, distribution, index,
            lambda report: report.sigma_min_sq_A <= threshold,
        ),
        workers,
    )
    return _finish(CLAIM_CHERNOFF, config, rows, bound, n_min,
                   threshold=threshold)


def run_coherence_mc(config, workers=1):
    """Частота {mu(U) > mu0 или mu1_emp > mu1} против gamma.

    Гарантия действует при N >= N_min; ниже отчет помечается vacuous.
    """
    distribution = make_distribution(config.dist)
    theta_value, eps, n_min = _theory_constants(config, distribution)
    mu0, mu1 = coherence_constants(theta_value, config.dim, config.t)
    if n_min is None or config.n_nodes < n_min:
        logger.warning('coherence guarantee needs N >= N_min = %s, got %d',
                       n_min, config.n_nodes)
    logger.info('coherence: %d trials, N = %d, mu0 = %.6g, mu1 = %.6g',
                config.trials, config.n_nodes, mu0, mu1)
    rows = _run_trials(
        config,
        lambda index: _qr_trial(
            config, distribution, index,
            lambda report: report.mu_U > mu0 or report.mu1_emp > mu1,
        ),
        workers,
    )
    return _finish(CLAIM_COHERENCE, config, rows, config.gamma, n_min,
                   needs_n_min=True, mu0=mu0, mu1=mu1, eps=eps)


def _rank_trial(config, distribution, index):
    seed = derive_trial_seed(config.master_seed, index)
    row = TrialRow(trial=index, seed=seed)
    try:
        cloud = _trial_cloud(config, distribution, seed)
        row.rank = numerical_rank(build_edm(cloud))
    except EdmLabError as exc:
        logger.warning('trial %d (seed %d) failed: %s', index, seed, exc)
        row.error = str(exc)
        return row
    row.failure = row.rank > config.dim + 2
    return row


def run_rank_mc(config, workers=1):
    """rank(Delta) <= d + 2 для каждого облака; утверждение детерминировано."""
    distribution = make_distribution(config.dist)
    rows = _run_trials(
        config, lambda index: _rank_trial(config, distribution, index),
        workers,
    )
    generic = sum(row.rank == config.dim + 2 for row in rows)
    return _finish(CLAIM_RANK, config, rows, 0.0, None,
                   generic_rank_hits=generic,
                   generic_rate=generic / config.trials)


@dataclass
class GramianRow:
    n_nodes: int
    seed: int
    max_deviation: float
    lambda_min: float


@dataclass
class GramianReport:
    dist_id: str
    dim: int
    lambda_star: float
    rows: list = field(default_factory=list)

    @property
    def passed(self):
        return all(row.lambda_min > 0 for row in self.rows)


def run_gramian_lln(dist, dim, n_grid, seed=0):
    """Отклонение X^T X / N от R_d и lambda_min(X^T X / N) по сетке N."""
    if not n_grid or min(n_grid) < 2:
        raise InvalidParameterError('n_grid must contain values >= 2')
    distribution = make_distribution(dist)
    R = build_Rd(distribution.moments, dim)
    rows = []
    for index, n_nodes in enumerate(sorted(n_grid)):
        cloud_seed = derive_trial_seed(seed, index)
        cloud = sample_coordinates(distribution, n_nodes, dim, cloud_seed)
        X = factor_edm(cloud).X
        gram = X.T @ X / n_nodes
        rows.append(GramianRow(
            n_nodes=n_nodes,
            seed=cloud_seed,
            max_deviation=float(np.max(np.abs(gram - R))),
            lambda_min=float(np.min(eig_sym(gram).eigvals)),
        ))
    return GramianReport(
        dist_id=distribution.dist_id,
        dim=dim,
        lambda_star=lambda_star_general(distribution.moments, dim),
        rows=rows,
    )


@dataclass
class SweepRow:
    m: int
    seed: int
    rel_error: Optional[float]
    iterations: int
    converged: bool
    success: bool
    error: str = ''


@dataclass
class SweepPoint:
    m: int
    runs: int
    successes: int

    @property
    def success_rate(self):
        return self.successes / self.runs


@dataclass
class CompletionSweep:
    dist_id: str
    dim: int
    n_nodes: int
    mode: str
    rows: list = field(default_factory=list)
    points: list = field(default_factory=list)

    @property
    def monotone(self):
        rates = [point.success_rate for point in self.points]
        return all(low <= high for low, high in zip(rates, rates[1:]))

    @property
    def passed(self):
        return (self.monotone and bool(self.points)
                and self.points[-1].success_rate == 1.0)


def _sweep_run(truth, n_nodes, dim, m, mode, mask_seed, svt_overrides):
    try:
        mask = sample_mask(n_nodes, m, mode, mask_seed)
        params = SvtParams.defaults(n_nodes, m, dim, **svt_overrides)
        result = svt_complete(mask.observe(truth), mask, n_nodes, params,
                              truth=truth)
    except EdmLabError as exc:
        logger.warning('completion m = %d (seed %d) failed: %s',
                       m, mask_seed, exc)
        return SweepRow(m=m, seed=mask_seed, rel_error=None, iterations=0,
                        converged=False, success=False, error=str(exc))
    return SweepRow(
        m=m,
        seed=mask_seed,
        rel_error=result.rel_error,
        iterations=result.iterations,
        converged=result.converged,
        success=result.rel_error <= SUCCESS_THRESHOLD,
    )


def _check_m_grid(m_grid, n_nodes, mode):
    limit = n_nodes ** 2 if mode is MaskMode.ALL_ENTRIES \
        else n_nodes ** 2 - n_nodes
    for m in m_grid:
        if not 0 <= m <= limit or (mode is MaskMode.SYMMETRIC_OFFDIAG
                                   and m % 2):
            raise InvalidParameterError(
                f'm = {m} is not a valid sample size for {mode.value} '
                f'masks with N = {n_nodes}'
            )


def run_completion_sweep(dist, dim, n_nodes, m_grid, seeds_per_point,
                         master_seed=0, mode=MaskMode.SYMMETRIC_OFFDIAG,
                         svt_overrides=None, workers=1):
    """Доля успешных восстановлений (rel_error <= 1e-3) по сетке m.

    Для каждого сида облако одно и то же на всех m; маска зависит от
    сида облака и m.
    """
    mode = MaskMode(mode)
    if seeds_per_point < 1 or not m_grid:
        raise InvalidParameterError('need a non-empty m grid and seeds >= 1')
    _check_m_grid(m_grid, n_nodes, mode)
    svt_overrides = svt_overrides or {}
    distribution = make_distribution(dist)
    jobs = []
    for index in range(seeds_per_point):
        cloud_seed = derive_trial_seed(master_seed, index)
        truth = build_edm(sample_coordinates(distribution, n_nodes, dim,
                                             cloud_seed)).entries
        for m in sorted(m_grid):
            jobs.append((truth, m, derive_trial_seed(cloud_seed, m)))
    logger.info('completion sweep: %d runs, N = %d, grid %s',
                len(jobs), n_nodes, sorted(m_grid))

    def run(job):
        truth, m, mask_seed = job
        return _sweep_run(truth, n_nodes, dim, m, mode, mask_seed,
                          svt_overrides)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, jobs))
    else:
        rows = [run(job) for job in jobs]
    rows.sort(key=lambda row: (row.m, row.seed))
    points = []
    for m in sorted(set(m_grid)):
        subset = [row for row in rows if row.m == m]
        points.append(SweepPoint(m=m, runs=len(subset),
                                 successes=sum(row.success
                                               for row in subset)))
    return CompletionSweep(dist_id=distribution.dist_id, dim=dim,
                           n_nodes=n_nodes, mode=mode.value, rows=rows,
                           points=points)


@dataclass
class Section4Report:
    prior_work: dict
    not_psd_eigenvalues: list
    sign_invariance_gap: float
    coherence_path_gap: float

    @property
    def lambda_min_d2(self):
        return self.prior_work[2]['lambda_min']

    @property
    def passed(self):
        return (all(entry['gap'] > 0 for entry in self.prior_work.values())
                and min(self.not_psd_eigenvalues) < 0
                and self.sign_invariance_gap <= SIGN_INVARIANCE_TOL)


def section4_checks(seed=0):
    """Поправки к ранее опубликованным утверждениям о R_d и EDM."""
    prior_work = {}
    for dim in PRIOR_WORK_DIMS:
        lambda_min, gap = prior_work_lambda_min(dim)
        prior_work[dim] = {'lambda_min': lambda_min, 'gap': gap,
                           'claimed': PRIOR_WORK_CLAIM}
    pair = build_edm(NodeCloud(coords=np.array([0.0, 1.0])))
    eigenvalues = sorted(eig_sym(pair.entries).eigvals.tolist(),
                         reverse=True)
    uniform = make_distribution(DistributionSpec(DistributionKind.UNIFORM))
    cloud = sample_coordinates(uniform, 100, 2, seed)
    qr_report = coherence_qr_path(cloud)
    svd_report = coherence_svd_path(build_edm(cloud), cloud.dim)
    return Section4Report(
        prior_work=prior_work,
        not_psd_eigenvalues=eigenvalues,
        sign_invariance_gap=abs(qr_report.mu_U_pm - qr_report.mu_U),
        coherence_path_gap=abs(qr_report.mu_U - svd_report.mu_U),
    )
