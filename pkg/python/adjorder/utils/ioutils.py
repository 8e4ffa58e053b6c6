# encoding: utf-8
#
# @Author:    adjorder developers
# @Date:      March 3, 2021
# @Filename:  ioutils.py
# @License:   BSD 3-Clause
#

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

import csv
import glob
import gzip
import io
import json
import os

from adjorder.core.exceptions import AdjorderInputError


def open_text(path):
    """Opens a plain or gzip-compressed UTF-8 text file for reading.

    Compression is detected from the magic bytes, not the extension. Invalid
    bytes decode to lone surrogates (``surrogateescape``) so that a reader
    can reject the affected lines instead of the whole file.
    """
    try:
        with open(path, 'rb') as fp:
            magic = fp.read(2)
    except (IOError, OSError) as ee:
        raise AdjorderInputError('cannot open {0!r}: {1}'.format(path, ee))

    if magic == b'\x1f\x8b':
        return io.TextIOWrapper(gzip.open(path, 'rb'), encoding='utf-8', errors='surrogateescape')
    return open(path, 'r', encoding='utf-8', errors='surrogateescape')


def expand_paths(patterns, suffixes=('.conllu', '.conllu.gz', '.conll', '.conll.gz')):
    """Expands a list of files, directories and glob patterns.

    Directories contribute every file with one of ``suffixes``. The result
    is sorted and deduplicated so that runs do not depend on listing order.

    Raises:
        AdjorderInputError:
            if a pattern names nothing that exists
    """
    found = set()
    for pattern in patterns:
        pattern = os.path.expanduser(pattern)
        if os.path.isdir(pattern):
            for root, _, files in os.walk(pattern):
                for name in files:
                    if name.endswith(tuple(suffixes)):
                        found.add(os.path.join(root, name))
        elif os.path.isfile(pattern):
            found.add(pattern)
        else:
            matches = [pp for pp in glob.glob(pattern) if os.path.isfile(pp)]
            if not matches:
                raise AdjorderInputError('no such file or directory: {0!r}'.format(pattern))
            found.update(matches)
    return sorted(found)


def ensure_dir(path):
    """Creates ``path`` (and parents) if needed and returns it."""
    if not os.path.isdir(path):
        os.makedirs(path)
    return path


def write_lines(path, lines):
    """Writes LF-terminated UTF-8 lines."""
    with open(path, 'w', encoding='utf-8', newline='\n') as fp:
        for line in lines:
            fp.write(line)
            fp.write('\n')


def read_lines(path):
    """Reads UTF-8 lines, stripped of their terminator, skipping blank ones."""
    if not os.path.isfile(path):
        raise AdjorderInputError('missing file {0!r}'.format(path))
    with open(path, 'r', encoding='utf-8') as fp:
        return [line.rstrip('\n') for line in fp if line.strip()]


def write_tsv(path, rows, header=None):
    """Writes rows as tab-separated values, LF line endings, no quoting."""
    with open(path, 'w', encoding='utf-8', newline='') as fp:
        writer = csv.writer(fp, delimiter='\t', lineterminator='\n',
                            quoting=csv.QUOTE_NONE, escapechar='\\')
        if header is not None:
            writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def read_tsv(path, skip_header=False):
    """Reads a tab-separated file written by `write_tsv`.

    Lines starting with ``#`` are treated as comments.
    """
    if not os.path.isfile(path):
        raise AdjorderInputError('missing file {0!r}'.format(path))
    with open(path, 'r', encoding='utf-8', newline='') as fp:
        reader = csv.reader((line for line in fp if not line.startswith('#')),
                            delimiter='\t', quoting=csv.QUOTE_NONE, escapechar='\\')
        rows = list(reader)
    if skip_header and rows:
        rows = rows[1:]
    return rows


def write_json(path, data):
    """Writes JSON deterministically (sorted keys, fixed indentation)."""
    with open(path, 'w', encoding='utf-8', newline='\n') as fp:
        json.dump(data, fp, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=True)
        fp.write('\n')

