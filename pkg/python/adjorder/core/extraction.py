# encoding: utf-8
#
# @Author:    adjorder developers
# @Date:      March 4, 2021
# @Filename:  extraction.py
# @License:   BSD 3-Clause
#

"""Noun-phrase and adjective-adjective-noun triple extraction."""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, List, Optional

from adjorder.core.exceptions import AdjorderPreconditionError
from adjorder.core.lexicon import LEMMA_SEPARATOR, normalize
from adjorder.utils import ioutils


__all__ = ['Template', 'NpOccurrence', 'Triple', 'ExtractionOptions', 'extract_nps',
           'extract_triples', 'classify_template', 'aggregate_triples', 'aggregate_nps',
           'triples_from_counts', 'write_triples', 'read_triples', 'write_nps', 'read_nps',
           'DEFAULT_MODIFIERS']


DEFAULT_MODIFIERS = frozenset(['amod'])


class Template(str, Enum):
    """Linear configuration of a noun and its two adjectives."""

    AAN = 'AAN'
    ANA = 'ANA'
    NAA = 'NAA'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class NpOccurrence:
    """One noun with at least one adjectival modifier: one observation of m."""

    noun_lemma: str
    adjective_lemmas: FrozenSet[str]
    source_id: str = ''


@dataclass(frozen=True)
class Triple:
    """An attested (template, noun, first adjective, second adjective) record.

    ``adj_first`` and ``adj_second`` follow surface order.
    """

    template: Template
    noun: str
    adj_first: str
    adj_second: str
    count: int = 1

    @property
    def key(self):
        return (self.template, self.noun, self.adj_first, self.adj_second)

    def lemmas(self):
        return (self.noun, self.adj_first, self.adj_second)


@dataclass(frozen=True)
class ExtractionOptions:
    """Knobs shared by `extract_nps` and `extract_triples`.

    Parameters:
        modifier_deprels (frozenset or None):
            relations that make an ADJ dependent a modifier; `None` accepts
            any relation
        ignore_punct_deps (bool):
            if True, PUNCT dependents do not count against the
            "no other dependents" constraint of triples
    """

    modifier_deprels: Optional[FrozenSet[str]] = DEFAULT_MODIFIERS
    ignore_punct_deps: bool = False

    def is_modifier(self, tok):
        if tok.upos != 'ADJ':
            return False
        return self.modifier_deprels is None or tok.deprel in self.modifier_deprels

    def counted_dependents(self, sentence, index):
        deps = sentence.dependents(index)
        if self.ignore_punct_deps:
            deps = tuple(dd for dd in deps if dd.upos != 'PUNCT' and dd.deprel != 'punct')
        return deps


DEFAULT_OPTIONS = ExtractionOptions()


def classify_template(noun_position: int, adj_positions) -> Template:
    """Assigns AAN, ANA or NAA from three consecutive surface positions.

    Raises:
        AdjorderPreconditionError:
            if the positions are not three distinct consecutive integers
    """

    positions = sorted([noun_position] + list(adj_positions))
    if len(positions) != 3 or positions[2] - positions[0] != 2 or len(set(positions)) != 3:
        raise AdjorderPreconditionError('positions {0} are not three consecutive tokens'.format(
            positions))

    if noun_position == positions[2]:
        return Template.AAN
    if noun_position == positions[0]:
        return Template.NAA
    return Template.ANA


def extract_nps(sentence, lexicon, options=DEFAULT_OPTIONS) -> List[NpOccurrence]:
    """Returns one occurrence per NOUN token with whitelisted ADJ modifiers.

    The occurrence is dropped unless the noun and every modifying
    adjective pass the lexicon.
    """

    found = []
    for tok in sentence.tokens:
        if tok.upos != 'NOUN':
            continue
        modifiers = [dd for dd in sentence.dependents(tok.index) if options.is_modifier(dd)]
        if not modifiers:
            continue
        noun = normalize(tok.lemma)
        adjectives = frozenset(normalize(dd.lemma) for dd in modifiers)
        if noun not in lexicon.nouns or not adjectives <= lexicon.adjectives:
            continue
        found.append(NpOccurrence(noun_lemma=noun, adjective_lemmas=adjectives,
                                  source_id=sentence.source_id))
    return found


def extract_triples(sentence, lexicon, options=DEFAULT_OPTIONS) -> List[Triple]:
    """Returns strict triples with count 1.

    A NOUN qualifies when it has exactly two dependents, both modifying
    adjectives with no dependents of their own, the three tokens are
    contiguous, the adjective lemmas differ and all lemmas pass the lexicon.
    """

    found = []
    for tok in sentence.tokens:
        if tok.upos != 'NOUN':
            continue
        deps = options.counted_dependents(sentence, tok.index)
        if len(deps) != 2 or not all(options.is_modifier(dd) for dd in deps):
            continue
        if any(options.counted_dependents(sentence, dd.index) for dd in deps):
            continue
        positions = sorted([tok.index, deps[0].index, deps[1].index])
        if positions[2] - positions[0] != 2:
            continue

        first, second = sorted(deps, key=lambda dd: dd.index)
        noun = normalize(tok.lemma)
        adj_first = normalize(first.lemma)
        adj_second = normalize(second.lemma)
        if adj_first == adj_second:
            continue
        if noun not in lexicon.nouns or adj_first not in lexicon.adjectives \
                or adj_second not in lexicon.adjectives:
            continue

        template = classify_template(tok.index, (first.index, second.index))
        found.append(Triple(template=template, noun=noun, adj_first=adj_first,
                            adj_second=adj_second))
    return found


def aggregate_triples(triples: Iterable[Triple]) -> Counter:
    """Sums counts per (template, noun, adj_first, adj_second)."""

    totals = Counter()
    for triple in triples:
        totals[triple.key] += triple.count
    return totals


def aggregate_nps(occurrences: Iterable[NpOccurrence]) -> Counter:
    """Counts occurrences per (noun, sorted adjective tuple)."""

    totals = Counter()
    for occ in occurrences:
        totals[(occ.noun_lemma, tuple(sorted(occ.adjective_lemmas)))] += 1
    return totals


def triples_from_counts(counts) -> List[Triple]:
    """Turns an aggregated mapping back into sorted `Triple` records."""

    return [Triple(template=Template(key[0]), noun=key[1], adj_first=key[2],
                   adj_second=key[3], count=count)
            for key, count in sorted(counts.items(), key=lambda kv: _sort_key(kv[0]))]


def _sort_key(key):
    return tuple(str(part) for part in key)


def write_triples(path, counts):
    """``template noun adj_first adj_second count``, sorted lexicographically."""

    rows = [[str(key[0]), key[1], key[2], key[3], str(count)]
            for key, count in sorted(counts.items(), key=lambda kv: _sort_key(kv[0]))]
    ioutils.write_tsv(path, rows)


def read_triples(path) -> Counter:
    counts = Counter()
    for row in ioutils.read_tsv(path):
        template, noun, adj_first, adj_second, count = row
        counts[(Template(template), noun, adj_first, adj_second)] += int(count)
    return counts


def write_nps(path, counts):
    """``noun adj1,adj2,... count`` with the adjective list sorted."""

    rows = [[noun, LEMMA_SEPARATOR.join(adjectives), str(count)]
            for (noun, adjectives), count in sorted(counts.items())]
    ioutils.write_tsv(path, rows)


def read_nps(path) -> Counter:
    counts = Counter()
    for noun, adjectives, count in ioutils.read_tsv(path):
        counts[(noun, tuple(sorted(adjectives.split(LEMMA_SEPARATOR))))] += int(count)
    return counts
