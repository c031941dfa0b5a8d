from django.core.management import BaseCommand
from django.core.management.base import CommandError

from cli.serializers import Section4ReportSerializer, Section4Serializer
from cli.utils import (CLAIM_FAILED, add_config_argument, load_options,
                       render_json, translate_errors)
from experiments.harness import section4_checks


class Command(BaseCommand):
    """Проверка поправок к ранее опубликованным утверждениям"""
    help = 'Checks lambda_min of the prior-work moment matrix and EDM PSD-ness'

    def add_arguments(self, parser):
        add_config_argument(parser)
        parser.add_argument('--seed', type=int, default=None,
                            help='сид облака для проверки mu(U+-) = mu(U)')

    @translate_errors
    def handle(self, *args, **options):
        attrs = load_options(options, Section4Serializer)
        report = section4_checks(attrs['seed'])
        self.stdout.write(render_json(Section4ReportSerializer(report).data))
        if not report.passed:
            raise CommandError('section4 checks failed',
                               returncode=CLAIM_FAILED)
