# encoding: utf-8
#
# @Author:    adjorder developers
# @Date:      March 3, 2021
# @Filename:  conllu_ingest.py
# @License:   BSD 3-Clause
#

"""Streaming CoNLL-U reader producing validated `Sentence` records."""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, Optional, Tuple

import conllu
from conllu.exceptions import ParseException

from adjorder import log
from adjorder.core.exceptions import AdjorderParseError
from adjorder.utils import ioutils


__all__ = ['Token', 'Sentence', 'IngestStats', 'parse_conllu', 'read_conllu_file', 'PARSE_MODES']

PARSE_MODES = ('strict', 'robust')
N_FIELDS = 10


@dataclass(frozen=True)
class Token:
    """One basic (non-range, non-empty-node) CoNLL-U token."""

    index: int
    form: str
    lemma: str
    upos: str
    head: int
    deprel: str


@dataclass(frozen=True)
class Sentence:
    """A validated sentence: token indices are exactly ``1..n``."""

    tokens: Tuple[Token, ...]
    source_id: str

    def __len__(self):
        return len(self.tokens)

    def token(self, index):
        """Returns the token with 1-based surface position ``index``."""
        return self.tokens[index - 1]

    @cached_property
    def children(self) -> Dict[int, Tuple[Token, ...]]:
        """Maps a token index (0 for the root) to its dependents in surface order."""
        kids = {}
        for tok in self.tokens:
            kids.setdefault(tok.head, []).append(tok)
        return {head: tuple(deps) for head, deps in kids.items()}

    def dependents(self, index):
        return self.children.get(index, ())


@dataclass
class IngestStats:
    """Counters shared by the readers of one run."""

    files: int = 0
    blocks: int = 0
    sentences: int = 0
    malformed: int = 0

    def merge(self, other):
        self.files += other.files
        self.blocks += other.blocks
        self.sentences += other.sentences
        self.malformed += other.malformed
        return self

    def as_dict(self):
        return {'files': self.files, 'blocks': self.blocks,
                'sentences': self.sentences, 'malformed': self.malformed}


class _Malformed(Exception):

    def __init__(self, reason, line_number):
        super(_Malformed, self).__init__(reason)
        self.reason = reason
        self.line_number = line_number


def _build_sentence(block, source_id):
    """Turns one block of ``(line_number, text)`` pairs into a `Sentence`.

    Returns `None` for comment-only blocks. Raises `_Malformed` otherwise
    when any token line or the dependency structure is invalid.
    """

    token_lines = [(num, text) for num, text in block if not text.startswith('#')]
    if not token_lines:
        return None

    for num, text in token_lines:
        try:
            text.encode('utf-8')
        except UnicodeEncodeError:
            raise _Malformed('invalid UTF-8', num)
        if len(text.split('\t')) != N_FIELDS:
            raise _Malformed('expected {0} tab-separated fields'.format(N_FIELDS), num)

    try:
        parsed = conllu.parse('\n'.join(text for _, text in token_lines) + '\n\n')
    except (ParseException, ValueError) as ee:
        raise _Malformed(str(ee), token_lines[0][0])

    if len(parsed) != 1:
        raise _Malformed('block does not form a single sentence', token_lines[0][0])

    # conllu decodes "3-4" and "5.1" ids to tuples; only integers are basic tokens.
    tokens = []
    for (num, _), raw in zip(token_lines, parsed[0]):
        tid = raw['id']
        if not isinstance(tid, int):
            continue
        head = raw['head']
        form = (raw['form'] or '').strip()
        lemma = (raw['lemma'] or '').strip()
        if not isinstance(head, int):
            raise _Malformed('head is not an integer', num)
        if not form or not lemma:
            raise _Malformed('empty form or lemma', num)
        if tid < 1 or head < 0 or head == tid:
            raise _Malformed('invalid id/head pair {0}/{1}'.format(tid, head), num)
        tokens.append((num, Token(index=tid, form=form, lemma=lemma,
                                  upos=raw['upos'] or '_', head=head,
                                  deprel=raw['deprel'] or '_')))

    if not tokens:
        return None

    n_tokens = len(tokens)
    for position, (num, tok) in enumerate(tokens, start=1):
        if tok.index != position:
            raise _Malformed('token ids are not 1..n', num)
        if tok.head > n_tokens:
            raise _Malformed('head {0} out of range'.format(tok.head), num)

    return Sentence(tokens=tuple(tok for _, tok in tokens), source_id=source_id)


def _blocks(lines):
    """Groups lines into blank-line separated blocks of (line number, text)."""

    block = []
    for num, line in enumerate(lines, start=1):
        text = line.rstrip('\r\n')
        if text.strip():
            block.append((num, text))
        elif block:
            yield block
            block = []
    if block:
        yield block


def parse_conllu(lines: Iterable[str], mode: str = 'robust', source_id: str = '<stream>',
                 stats: Optional[IngestStats] = None) -> Iterator[Sentence]:
    """Streams CoNLL-U lines into `Sentence` records.

    Comment lines are ignored, multiword-token ranges and empty nodes are
    dropped. Each sentence gets a ``source_id`` of ``<source>#<n>``, with
    ``n`` counting sentence blocks from 1.

    Parameters:
        lines (iterable of str):
            the text, one line per item (a file object works)
        mode (str):
            ``strict`` raises on the first malformed block, ``robust``
            drops it and increments ``stats.malformed``
        source_id (str):
            provenance label, usually the file path
        stats (IngestStats):
            counters updated in place; a fresh one is used if `None`

    Raises:
        AdjorderParseError:
            in strict mode, on any malformed token line or structure
    """

    if mode not in PARSE_MODES:
        raise ValueError('invalid parse mode {0!r}'.format(mode))

    stats = stats if stats is not None else IngestStats()

    for block in _blocks(lines):
        stats.blocks += 1
        sentence_id = '{0}#{1}'.format(source_id, stats.blocks)
        try:
            sentence = _build_sentence(block, sentence_id)
        except _Malformed as ee:
            if mode == 'strict':
                raise AdjorderParseError(ee.reason, source_id=source_id,
                                         line_number=ee.line_number)
            stats.malformed += 1
            log.debug('dropping malformed sentence {0} (line {1}): {2}'.format(
                sentence_id, ee.line_number, ee.reason))
            continue

        if sentence is None:
            continue

        stats.sentences += 1
        yield sentence


def read_conllu_file(path, mode='robust', stats=None):
    """Parses a plain or gzipped CoNLL-U file. See `parse_conllu`."""

    stats = stats if stats is not None else IngestStats()
    stats.files += 1
    with ioutils.open_text(path) as fp:
        for sentence in parse_conllu(fp, mode=mode, source_id=str(path), stats=stats):
            yield sentence
