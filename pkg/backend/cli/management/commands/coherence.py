from django.core.management import BaseCommand

from cli.parsers import CloudCsvParser
from cli.serializers import (CoherenceInputSerializer,
                             CoherenceReportSerializer, round_significant)
from cli.utils import (add_config_argument, add_distribution_arguments,
                       load_options, read_file, render_json,
                       translate_errors)
from coherence.subspace import coherence_qr_path, coherence_svd_path
from distributions.laws import make_distribution, sample_coordinates
from edm.matrices import NodeCloud, build_edm


def _load_cloud(attrs):
    if 'input' in attrs:
        parsed = read_file(attrs['input'], CloudCsvParser)
        meta = parsed['meta']
        seed = meta.get('seed', '')
        return NodeCloud(coords=parsed['values'],
                         seed=int(seed) if seed.isdigit() else None,
                         dist_id=meta.get('dist', 'free-form'),
                         algorithm=meta.get('algorithm') or None)
    distribution = make_distribution(attrs['spec'])
    return sample_coordinates(distribution, attrs['n'], attrs['d'],
                              attrs['seed'])


class Command(BaseCommand):
    """Точная когерентность подпространства EDM (QR и/или SVD)"""
    help = 'Computes mu(U), mu1 and sigma_min^2(A) for a node cloud'

    def add_arguments(self, parser):
        add_config_argument(parser)
        add_distribution_arguments(parser)
        parser.add_argument('--in', dest='input', default=None,
                            help='cloud.csv, вместо генерации')
        parser.add_argument('--n', type=int, default=None)
        parser.add_argument('--d', type=int, default=None)
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--path', default=None,
                            choices=('qr', 'svd', 'both'))

    @translate_errors
    def handle(self, *args, **options):
        attrs = load_options(options, CoherenceInputSerializer)
        cloud = _load_cloud(attrs)
        reports = {}
        if attrs['path'] in ('qr', 'both'):
            reports['qr'] = coherence_qr_path(cloud)
        if attrs['path'] in ('svd', 'both'):
            reports['svd'] = coherence_svd_path(build_edm(cloud), cloud.dim)
        payload = {
            'dist': cloud.dist_id,
            'seed': cloud.seed,
            'algorithm': cloud.algorithm,
            'reports': {name: CoherenceReportSerializer(report).data
                        for name, report in reports.items()},
        }
        if len(reports) == 2:
            payload['path_gap'] = round_significant(
                abs(reports['qr'].mu_U - reports['svd'].mu_U)
            )
        self.stdout.write(render_json(payload))
