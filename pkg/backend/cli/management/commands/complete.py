from pathlib import Path

from django.conf import settings
from django.core.management import BaseCommand

from cli.parsers import EdmCsvParser
from cli.renderers import EdmCsvRenderer
from cli.serializers import (CompleteSerializer, CompletionResultSerializer,
                             round_significant)
from cli.utils import (add_config_argument, load_options, read_file,
                       render_json, translate_errors, write_file)
from completion.masks import sample_mask
from completion.svt import SvtParams, svt_complete


class Command(BaseCommand):
    """Восстановление EDM по случайной выборке элементов (SVT)"""
    help = 'Samples m entries of an EDM and completes it with SVT'

    def add_arguments(self, parser):
        add_config_argument(parser)
        parser.add_argument('--in', dest='input', default=None,
                            help='edm.csv')
        parser.add_argument('--m', type=int, default=None,
                            help='число наблюдаемых элементов')
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--mode', default=None,
                            choices=('symmetric-offdiag', 'all-entries'))
        parser.add_argument('--d', type=int, default=None,
                            help='размерность (для начального ранга SVT)')
        parser.add_argument('--tau', type=float, default=None)
        parser.add_argument('--step', type=float, default=None)
        parser.add_argument('--max-iter', dest='max_iter', type=int,
                            default=None)
        parser.add_argument('--tol', type=float, default=None)
        parser.add_argument('--out', default=None,
                            help='каталог для estimate.csv')

    @translate_errors
    def handle(self, *args, **options):
        attrs = load_options(options, CompleteSerializer)
        parsed = read_file(attrs['input'], EdmCsvParser)
        truth = parsed['values']
        n_nodes = truth.shape[0]
        dim = attrs.get('d') or int(parsed['meta'].get('dim', 0)) or None
        svt = settings.EDM_LAB['SVT']
        params = SvtParams.defaults(
            n_nodes, attrs['m'], dim,
            tau_factor=svt['TAU_FACTOR'],
            step_factor=svt['STEP_FACTOR'],
            max_iter=attrs.get('max_iter', svt['MAX_ITER']),
            tol=attrs.get('tol', svt['TOL']),
            tau=attrs.get('tau'),
            step=attrs.get('step'),
        )
        mask = sample_mask(n_nodes, attrs['m'], attrs['mode'],
                           attrs['seed'])
        result = svt_complete(mask.observe(truth), mask, n_nodes, params,
                              truth=truth)
        payload = {
            'n_nodes': n_nodes,
            'm': mask.m,
            'mode': mask.mode.value,
            'seed': mask.seed,
            'tau': round_significant(params.tau),
            'step': round_significant(params.step),
            **CompletionResultSerializer(result).data,
        }
        if attrs.get('out'):
            payload['estimate'] = write_file(
                Path(attrs['out']) / 'estimate.csv',
                EdmCsvRenderer().render({
                    'meta': {'n_nodes': n_nodes, 'm': mask.m,
                             'seed': mask.seed},
                    'rows': result.estimate,
                }),
            )
        self.stdout.write(render_json(payload))
