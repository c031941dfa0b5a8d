import csv
import io

import numpy as np
from django.conf import settings
from rest_framework import renderers


def format_cell(value):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f'{float(value):.{settings.EDM_LAB["FLOAT_DIGITS"]}g}'
    return str(value)


class CsvRenderer(renderers.BaseRenderer):
    """CSV с метаданными в строках '# key=value' и фиксированной шапкой.

    data: {'meta': {...}, 'rows': [...]}.
    """

    media_type = 'text/csv'
    format = 'csv'
    columns = ()

    def get_columns(self, data):
        return list(self.columns)

    def get_row(self, item):
        return [getattr(item, column) for column in self.columns]

    def render(self, data, accepted_media_type=None, renderer_context=None):
        text_buffer = io.StringIO()
        for key, value in data.get('meta', {}).items():
            text_buffer.write(f'# {key}={format_cell(value)}\n')
        writer = csv.writer(text_buffer, lineterminator='\n')
        writer.writerow(self.get_columns(data))
        for item in data['rows']:
            writer.writerow([format_cell(value)
                             for value in self.get_row(item)])
        return text_buffer.getvalue()


class MatrixCsvRenderer(CsvRenderer):
    prefix = ''

    def get_columns(self, data):
        width = np.asarray(data['rows']).shape[1]
        return [f'{self.prefix}{index}' for index in range(1, width + 1)]

    def get_row(self, item):
        return list(item)


class CloudCsvRenderer(MatrixCsvRenderer):
    """Координаты узлов: колонки x1..xd."""
    prefix = 'x'


class EdmCsvRenderer(MatrixCsvRenderer):
    """Матрица расстояний: колонки c1..cN."""
    prefix = 'c'


class TrialCsvRenderer(CsvRenderer):
    columns = ('trial', 'seed', 'mu_U', 'sigma_min_sq_A', 'rank',
               'failure', 'error')


class SweepCsvRenderer(CsvRenderer):
    columns = ('m', 'seed', 'rel_error', 'iterations', 'converged',
               'success', 'error')


class GramianCsvRenderer(CsvRenderer):
    columns = ('n_nodes', 'seed', 'max_deviation', 'lambda_min')
