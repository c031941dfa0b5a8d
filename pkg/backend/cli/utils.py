import functools
import json
import logging
from pathlib import Path

from django.core.management.base import CommandError
from rest_framework import serializers
from rest_framework.exceptions import ParseError
from rest_framework.renderers import JSONRenderer

from distributions.laws import DistributionKind
from edm_lab.exceptions import InvalidParameterError, NumericalError

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
CLAIM_FAILED = 1

BASE_OPTIONS = {'verbosity', 'settings', 'pythonpath', 'traceback',
                'no_color', 'force_color', 'skip_checks', 'stdout',
                'stderr', 'config'}


def add_config_argument(parser):
    parser.add_argument('--config', default=None,
                        help='JSON-файл с параметрами (ключи = имена флагов)')


def add_distribution_arguments(parser):
    parser.add_argument('--dist', default=None,
                        choices=[kind.value for kind in DistributionKind])
    parser.add_argument('--a', type=float, default=None,
                        help='левая граница носителя')
    parser.add_argument('--b', type=float, default=None,
                        help='правая граница носителя')
    parser.add_argument('--mu', type=float, default=None)
    parser.add_argument('--sigma', type=float, default=None)
    parser.add_argument('--shape1', type=float, default=None,
                        help='alpha для beta-scaled')
    parser.add_argument('--shape2', type=float, default=None,
                        help='beta для beta-scaled')


def _read_config(path):
    try:
        with open(path, encoding='utf-8') as config_file:
            data = json.load(config_file)
    except (OSError, ValueError) as exc:
        raise CommandError(f'cannot read config {path}: {exc}',
                           returncode=USAGE_ERROR)
    if not isinstance(data, dict):
        raise CommandError('config must be a JSON object',
                           returncode=USAGE_ERROR)
    return {key.replace('-', '_'): value for key, value in data.items()}


def load_options(options, serializer_class):
    """Флаги поверх --config, затем проверка сериализатором."""
    data = _read_config(options['config']) if options.get('config') else {}
    data.update({key: value for key, value in options.items()
                 if key not in BASE_OPTIONS and value is not None})
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        raise CommandError(_format_errors(serializer.errors),
                           returncode=USAGE_ERROR)
    return serializer.validated_data


def _format_errors(errors):
    if isinstance(errors, dict):
        parts = []
        for key, value in errors.items():
            text = _format_errors(value)
            parts.append(text if key == 'non_field_errors'
                         else f'{key}: {text}')
        return '; '.join(parts)
    if isinstance(errors, list):
        return '; '.join(_format_errors(item) for item in errors)
    return str(errors)


def translate_errors(handle):
    """Ошибки библиотеки -> CommandError с кодом выхода.

    Неверные параметры и файлы -> 2, численные ошибки -> 1.
    """

    @functools.wraps(handle)
    def wrapper(*args, **kwargs):
        try:
            return handle(*args, **kwargs)
        except CommandError:
            raise
        except serializers.ValidationError as exc:
            raise CommandError(_format_errors(exc.detail),
                               returncode=USAGE_ERROR) from exc
        except (InvalidParameterError, ParseError, OSError) as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc
        except NumericalError as exc:
            raise CommandError(str(exc), returncode=CLAIM_FAILED) from exc

    return wrapper


def render_json(data):
    return JSONRenderer().render(
        data, renderer_context={'indent': 2}
    ).decode('utf-8')


def write_file(path, content):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding='utf-8')
    logger.info('wrote %s', path)
    return str(path)


def read_file(path, parser_class):
    with open(path, 'rb') as stream:
        return parser_class().parse(stream)
