from django.core.management import BaseCommand

from cli.serializers import BoundsSerializer, TheoryBoundsSerializer
from cli.utils import (add_config_argument, add_distribution_arguments,
                       load_options, render_json, translate_errors)
from theory.bounds import evaluate_bounds


class Command(BaseCommand):
    """Замкнутые оценки: lambda*, theta, mu0, mu1, N_min, eps(t), m"""
    help = 'Prints the closed-form coherence bounds as JSON'

    def add_arguments(self, parser):
        add_config_argument(parser)
        add_distribution_arguments(parser)
        for moment in ('m2', 'm3', 'm4', 'c'):
            parser.add_argument(f'--{moment}', type=float, default=None)
        parser.add_argument('--d', type=int, default=None)
        parser.add_argument('--t', type=float, default=None)
        parser.add_argument('--gamma', type=float, default=None)
        parser.add_argument('--beta', type=float, default=None)
        parser.add_argument('--bigC', dest='big_c', type=float,
                            default=None, help='константа C теоремы')
        parser.add_argument('--n', type=int, default=None,
                            help='N для eps(t) и m (по умолчанию N_min)')

    @translate_errors
    def handle(self, *args, **options):
        attrs = load_options(options, BoundsSerializer)
        bounds = evaluate_bounds(attrs['params'], attrs.get('n'))
        self.stdout.write(render_json(TheoryBoundsSerializer(bounds).data))
