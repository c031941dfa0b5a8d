import csv
import io

import numpy as np
from rest_framework.exceptions import ParseError
from rest_framework.parsers import BaseParser


class MatrixCsvParser(BaseParser):
    """Читает CSV, записанный MatrixCsvRenderer.

    Возвращает {'meta': {...}, 'values': ndarray}.
    """

    media_type = 'text/csv'
    prefix = ''

    def parse(self, stream, media_type=None, parser_context=None):
        text = stream.read()
        if isinstance(text, bytes):
            text = text.decode('utf-8')
        meta = {}
        body = []
        for line in text.splitlines():
            if line.startswith('#'):
                key, _, value = line[1:].strip().partition('=')
                meta[key.strip()] = value.strip()
            elif line.strip():
                body.append(line)
        if not body:
            raise ParseError('CSV file has no header')
        rows = list(csv.reader(io.StringIO('\n'.join(body))))
        header, rows = rows[0], rows[1:]
        expected = [f'{self.prefix}{index}'
                    for index in range(1, len(header) + 1)]
        if header != expected:
            raise ParseError(
                f'unexpected CSV header {header[:3]}..., expected '
                f'{self.prefix}1..{self.prefix}{len(header)}'
            )
        try:
            values = np.array(rows, dtype=float)
        except ValueError as exc:
            raise ParseError(f'malformed CSV values: {exc}')
        if values.ndim != 2 or values.shape[1] != len(header):
            raise ParseError('CSV rows do not match the header width')
        self.check_shape(values)
        return {'meta': meta, 'values': values}

    def check_shape(self, values):
        pass


class CloudCsvParser(MatrixCsvParser):
    prefix = 'x'


class EdmCsvParser(MatrixCsvParser):
    prefix = 'c'

    def check_shape(self, values):
        if values.shape[0] != values.shape[1]:
            raise ParseError(
                f'EDM must be square, got {values.shape[0]} x '
                f'{values.shape[1]}'
            )
