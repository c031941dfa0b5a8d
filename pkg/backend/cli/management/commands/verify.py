from pathlib import Path

from django.conf import settings
from django.core.management import BaseCommand
from django.core.management.base import CommandError

from cli.renderers import (GramianCsvRenderer, SweepCsvRenderer,
                           TrialCsvRenderer)
from cli.serializers import (CompletionSweepSerializer,
                             GramianReportSerializer, McReportSerializer,
                             VerifySerializer)
from cli.utils import (CLAIM_FAILED, USAGE_ERROR, add_config_argument,
                       add_distribution_arguments, load_options, render_json,
                       translate_errors, write_file)
from distributions.laws import make_distribution
from experiments.harness import (McConfig, run_chernoff_mc,
                                 run_coherence_mc, run_completion_sweep,
                                 run_gramian_lln, run_rank_mc)
from experiments.utils import save_report
from theory.bounds import min_nodes, theta

MC_RUNNERS = {
    'chernoff': run_chernoff_mc,
    'coherence': run_coherence_mc,
    'rank': run_rank_mc,
}
DEFAULT_NODES = 100


class Command(BaseCommand):
    """Монте-Карло проверка вероятностных утверждений"""
    help = ('Runs a Monte Carlo validation; exits with 1 when the claim '
            'is violated beyond the statistical slack')

    def add_arguments(self, parser):
        add_config_argument(parser)
        add_distribution_arguments(parser)
        parser.add_argument('--claim', default=None,
                            choices=('chernoff', 'coherence', 'rank',
                                     'gramian', 'completion'))
        parser.add_argument('--d', type=int, default=None)
        parser.add_argument('--n', type=int, default=None,
                            help='N (по умолчанию N_min или 100)')
        parser.add_argument('--t', type=float, default=None)
        parser.add_argument('--gamma', type=float, default=None)
        parser.add_argument('--trials', type=int, default=None)
        parser.add_argument('--seed', type=int, default=None,
                            help='главный сид')
        parser.add_argument('--out', default=None,
                            help='каталог для CSV построчных результатов')
        parser.add_argument('--save', action='store_true', default=None,
                            help='сохранить прогон в базу данных')
        parser.add_argument('--m-grid', dest='m_grid', type=int, nargs='+',
                            default=None)
        parser.add_argument('--seeds', type=int, default=None,
                            help='сидов на точку сетки m')
        parser.add_argument('--mode', default=None,
                            choices=('symmetric-offdiag', 'all-entries'))
        parser.add_argument('--n-grid', dest='n_grid', type=int, nargs='+',
                            default=None)

    def _default_nodes(self, attrs):
        if attrs['claim'] in ('chernoff', 'coherence'):
            moments = make_distribution(attrs['spec']).moments
            return min_nodes(theta(moments, attrs['d']), attrs['d'],
                             attrs['t'], attrs['gamma'])
        return DEFAULT_NODES

    def _run_mc(self, attrs, out, workers):
        config = McConfig(
            dist=attrs['spec'],
            dim=attrs['d'],
            n_nodes=attrs.get('n') or self._default_nodes(attrs),
            trials=attrs['trials'],
            t=attrs['t'],
            gamma=attrs['gamma'],
            master_seed=attrs['seed'],
        )
        report = MC_RUNNERS[attrs['claim']](config, workers=workers)
        payload = McReportSerializer(report).data
        payload['rows_file'] = write_file(
            out / f'{report.claim}_trials.csv',
            TrialCsvRenderer().render({
                'meta': {'claim': report.claim,
                         'dist': config.dist.dist_id,
                         'master_seed': config.master_seed,
                         'algorithm': report.algorithm},
                'rows': report.rows,
            }),
        )
        if attrs['save']:
            payload['run_id'] = save_report(report).pk
        return payload, report.passed

    def _run_gramian(self, attrs, out):
        report = run_gramian_lln(attrs['spec'], attrs['d'], attrs['n_grid'],
                                 attrs['seed'])
        payload = GramianReportSerializer(report).data
        payload['rows_file'] = write_file(
            out / 'gramian.csv',
            GramianCsvRenderer().render({
                'meta': {'dist': report.dist_id, 'dim': report.dim},
                'rows': report.rows,
            }),
        )
        return payload, report.passed

    def _run_sweep(self, attrs, out, workers):
        svt = settings.EDM_LAB['SVT']
        sweep = run_completion_sweep(
            attrs['spec'], attrs['d'], attrs.get('n') or DEFAULT_NODES,
            attrs['m_grid'], attrs['seeds'], master_seed=attrs['seed'],
            mode=attrs['mode'],
            svt_overrides={'tau_factor': svt['TAU_FACTOR'],
                           'step_factor': svt['STEP_FACTOR'],
                           'max_iter': svt['MAX_ITER'],
                           'tol': svt['TOL']},
            workers=workers,
        )
        payload = CompletionSweepSerializer(sweep).data
        payload['rows_file'] = write_file(
            out / 'sweep.csv',
            SweepCsvRenderer().render({
                'meta': {'dist': sweep.dist_id, 'n_nodes': sweep.n_nodes,
                         'mode': sweep.mode},
                'rows': sweep.rows,
            }),
        )
        return payload, sweep.passed

    @translate_errors
    def handle(self, *args, **options):
        attrs = load_options(options, VerifySerializer)
        claim = attrs['claim']
        if attrs['save'] and claim not in MC_RUNNERS:
            raise CommandError(
                '--save applies to the chernoff, coherence and rank claims',
                returncode=USAGE_ERROR,
            )
        out = Path(attrs['out'])
        workers = settings.EDM_LAB['THREADS']
        if claim in MC_RUNNERS:
            payload, passed = self._run_mc(attrs, out, workers)
        elif claim == 'gramian':
            payload, passed = self._run_gramian(attrs, out)
        else:
            payload, passed = self._run_sweep(attrs, out, workers)
        self.stdout.write(render_json(payload))
        if not passed:
            raise CommandError(f'claim {claim} violated beyond the slack',
                               returncode=CLAIM_FAILED)
