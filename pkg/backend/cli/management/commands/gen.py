from pathlib import Path

from django.core.management import BaseCommand

from cli.renderers import CloudCsvRenderer, EdmCsvRenderer
from cli.serializers import GenSerializer
from cli.utils import (add_config_argument, add_distribution_arguments,
                       load_options, render_json, translate_errors,
                       write_file)
from distributions.laws import make_distribution, sample_coordinates
from edm.matrices import build_edm


class Command(BaseCommand):
    """Генерация облака узлов и его EDM в CSV"""
    help = 'Samples a node cloud and writes cloud.csv and edm.csv'

    def add_arguments(self, parser):
        add_config_argument(parser)
        add_distribution_arguments(parser)
        parser.add_argument('--n', type=int, default=None,
                            help='число узлов N')
        parser.add_argument('--d', type=int, default=None,
                            help='размерность d')
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--out', default=None,
                            help='каталог для CSV')

    @translate_errors
    def handle(self, *args, **options):
        attrs = load_options(options, GenSerializer)
        distribution = make_distribution(attrs['spec'])
        cloud = sample_coordinates(distribution, attrs['n'], attrs['d'],
                                   attrs['seed'])
        edm = build_edm(cloud)
        meta = {
            'dist': cloud.dist_id,
            'n_nodes': cloud.n_nodes,
            'dim': cloud.dim,
            'seed': cloud.seed,
            'algorithm': cloud.algorithm,
        }
        out = Path(attrs['out'])
        cloud_path = write_file(
            out / 'cloud.csv',
            CloudCsvRenderer().render({'meta': meta, 'rows': cloud.coords}),
        )
        edm_path = write_file(
            out / 'edm.csv',
            EdmCsvRenderer().render({'meta': meta, 'rows': edm.entries}),
        )
        self.stdout.write(render_json({
            **meta,
            'cloud': cloud_path,
            'edm': edm_path,
        }))
