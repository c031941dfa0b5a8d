import logging

from django.db import transaction

from experiments.models import MonteCarloRun, TrialRecord

logger = logging.getLogger(__name__)


def save_report(report):
    """Сохраняет McReport и его строки одной транзакцией."""
    config = report.config
    with transaction.atomic():
        run = MonteCarloRun.objects.create(
            claim=report.claim,
            dist_id=config.dist.dist_id,
            dim=config.dim,
            n_nodes=config.n_nodes,
            trials=report.trials,
            t=config.t,
            gamma=config.gamma,
            master_seed=str(config.master_seed),
            algorithm=report.algorithm,
            failures=report.failures,
            errors=report.errors,
            empirical_rate=report.empirical_rate,
            bound=report.bound,
            passed=report.passed,
        )
        TrialRecord.objects.bulk_create(
            TrialRecord(
                run=run,
                trial=row.trial,
                seed=str(row.seed),
                mu_U=row.mu_U,
                sigma_min_sq_A=row.sigma_min_sq_A,
                rank=row.rank,
                failure=row.failure,
                error=row.error,
            )
            for row in report.rows
        )
    logger.info('saved %s run #%d with %d trials', report.claim, run.pk,
                len(report.rows))
    return run
