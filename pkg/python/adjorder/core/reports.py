# encoding: utf-8
#
# @Author:    adjorder developers
# @Date:      March 9, 2021
# @Filename:  reports.py
# @License:   BSD 3-Clause
#

"""Report files: TSV and JSON for machines, aligned text for people.

All numbers are formatted with fixed precision so reruns give identical
bytes.
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

import math
import os

from adjorder.core.infogain import unit_factor
from adjorder.utils import ioutils


__all__ = ['write_results', 'write_reversed', 'write_ablation', 'write_scatter',
           'write_omitted', 'render_table']


def _num(value, digits=3):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return 'NA'
    return '{0:.{1}f}'.format(value, digits)


def _json_num(value):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return round(float(value), 12)


def _summary_json(ss, factor=1.0):
    return {'n': ss.n, 'mean': _json_num(ss.mean * factor),
            'ci_low': None if ss.ci_low is None else _json_num(ss.ci_low * factor),
            'ci_high': None if ss.ci_high is None else _json_num(ss.ci_high * factor)}


def _ci(summary, digits=3):
    if summary.ci_low is None:
        return 'NA', 'NA'
    return _num(summary.ci_low, digits), _num(summary.ci_high, digits)


def render_table(header, rows):
    """Left-aligned text columns separated by two spaces."""

    rows = [[str(cell) for cell in row] for row in rows]
    widths = [len(hh) for hh in header]
    for row in rows:
        widths = [max(ww, len(cell)) for ww, cell in zip(widths, row)]
    lines = ['  '.join(cell.ljust(ww) for cell, ww in zip(header, widths)).rstrip()]
    lines.append('  '.join('-' * ww for ww in widths))
    for row in rows:
        lines.append('  '.join(cell.ljust(ww) for cell, ww in zip(row, widths)).rstrip())
    return lines


def _beta_scale(units):
    # x is scaled by unit_factor, so beta1 scales by its inverse
    return 1.0 / unit_factor(units)


def write_results(directory, reports, summary, units='nats'):
    """Per-(language, template) results and their macro summaries.

    Writes ``results.tsv``, ``results.json`` and ``results.txt``.
    """

    scale = _beta_scale(units)
    header = ['language', 'template', 'n', 'beta1', 'p', 'token_acc', 'type_acc', 'coverage']

    rows = []
    for rr in sorted(reports, key=lambda rr: (rr.template, rr.language)):
        rows.append([rr.language, rr.template, str(rr.n_triples), _num(rr.beta1 * scale),
                     _num(rr.p_value), _num(rr.token_accuracy), _num(rr.type_accuracy),
                     _num(rr.coverage)])
    ioutils.write_tsv(os.path.join(directory, 'results.tsv'), rows, header=header)

    macro_header = ['template', 'statistic', 'n', 'mean', 'ci_low', 'ci_high']
    macro_rows = []
    for template, stats in summary.items():
        for name in ('beta1', 'token_accuracy', 'type_accuracy'):
            ss = stats[name]
            factor = scale if name == 'beta1' else 1.0
            low, high = ('NA', 'NA') if ss.ci_low is None else (_num(ss.ci_low * factor),
                                                                 _num(ss.ci_high * factor))
            macro_rows.append([template, name, str(ss.n), _num(ss.mean * factor), low, high])
    ioutils.write_tsv(os.path.join(directory, 'results_macro.tsv'), macro_rows,
                      header=macro_header)

    payload = {
        'units': units,
        'datasets': [{'language': rr.language, 'template': rr.template, 'n': rr.n_triples,
                      'n_test': rr.n_test, 'beta0': _json_num(rr.beta0),
                      'beta1': _json_num(rr.beta1 * scale), 'se1': _json_num(rr.se1 * scale),
                      'p': _json_num(rr.p_value), 'token_acc': _json_num(rr.token_accuracy),
                      'type_acc': _json_num(rr.type_accuracy),
                      'coverage': _json_num(rr.coverage),
                      'separation_detected': rr.separation_detected, 'error': rr.error}
                     for rr in sorted(reports, key=lambda rr: (rr.template, rr.language))],
        'macro': {template: {name: _summary_json(ss, scale if name == 'beta1' else 1.0)
                             for name, ss in stats.items()}
                  for template, stats in summary.items()},
    }
    ioutils.write_json(os.path.join(directory, 'results.json'), payload)

    lines = render_table(header, rows)
    lines.append('')
    lines.extend(render_table(macro_header, macro_rows))
    ioutils.write_lines(os.path.join(directory, 'results.txt'), lines)


def write_reversed(directory, table):
    """``template n rate ci_low ci_high`` (``reversed.tsv`` and ``.txt``)."""

    header = ['template', 'n', 'rate', 'ci_low', 'ci_high']
    rows = []
    for template, ss in table:
        low, high = _ci(ss)
        rows.append([template, str(ss.n), _num(ss.mean), low, high])
    ioutils.write_tsv(os.path.join(directory, 'reversed.tsv'), rows, header=header)
    ioutils.write_lines(os.path.join(directory, 'reversed.txt'), render_table(header, rows))


def write_ablation(directory, rows):
    """Predictor by template accuracy and positive-beta1 proportion."""

    columns = []
    for row in rows:
        for name in row.accuracy:
            if name not in columns:
                columns.append(name)
    # "all" stays last
    columns = [cc for cc in columns if cc != 'all'] + (['all'] if 'all' in columns else [])

    header = ['predictor'] + ['acc_{0}'.format(cc) for cc in columns] \
        + ['pos_{0}'.format(cc) for cc in columns]
    table = []
    for row in rows:
        table.append([row.predictor] + [_num(row.accuracy.get(cc)) for cc in columns]
                     + [_num(row.proportion.get(cc)) for cc in columns])
    ioutils.write_tsv(os.path.join(directory, 'ablation.tsv'), table, header=header)

    lines = render_table(header, table)
    for row in rows:
        for note in row.excluded:
            lines.append('# excluded ({0}): {1}'.format(row.predictor, note))
    ioutils.write_lines(os.path.join(directory, 'ablation.txt'), lines)


def write_scatter(directory, reports, units='nats'):
    """One point per dataset: beta1 against token accuracy."""

    scale = _beta_scale(units)
    rows = [[_num(rr.beta1 * scale), _num(rr.token_accuracy), rr.template, rr.language]
            for rr in sorted(reports, key=lambda rr: (rr.template, rr.language)) if rr.ok]
    ioutils.write_tsv(os.path.join(directory, 'scatter.tsv'), rows,
                      header=['beta1', 'token_acc', 'template', 'language'])


def write_omitted(directory, omitted):
    """Reason lines for datasets below the thresholds or with failed fits."""

    ioutils.write_lines(os.path.join(directory, 'omitted.txt'),
                        ['{0}\t{1}\t{2}'.format(*entry) for entry in sorted(omitted)])
