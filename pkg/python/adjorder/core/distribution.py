# encoding: utf-8
#
# @Author:    adjorder developers
# @Date:      March 5, 2021
# @Filename:  distribution.py
# @License:   BSD 3-Clause
#

"""The listener distribution over feature vectors and its partitions.

A feature vector is the set of lemmas (noun plus adjectives) of one noun
phrase; every lemma is a binary feature. Counts are kept as exact integers
and probabilities are only formed when asked for. Keys are always held in
sorted order, so every floating point sum runs in the same order no matter
how the counts were accumulated.
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Tuple

import numpy

from adjorder import log
from adjorder.core.exceptions import AdjorderInputError, AdjorderPreconditionError
from adjorder.core.lexicon import LEMMA_SEPARATOR
from adjorder.utils import ioutils


__all__ = ['feature_key', 'UniverseDistribution', 'Partition', 'build_distribution',
           'distribution_from_np_counts', 'partition', 'WEIGHT_MODES', 'write_distribution',
           'read_distribution']


WEIGHT_MODES = ('support-count', 'probability-mass')

FeatureVectorKey = Tuple[str, ...]


def feature_key(noun, adjectives) -> FeatureVectorKey:
    """Canonical key: sorted lemma set of the noun and its adjectives."""
    return tuple(sorted(set(adjectives) | set([noun])))


class UniverseDistribution(object):
    """Immutable counts over feature vectors.

    Parameters:
        counts (mapping):
            feature vector key (tuple of lemmas) to positive integer count;
            keys are canonicalized (sorted, deduplicated) on the way in
    """

    def __init__(self, counts=None):

        merged = Counter()
        for key, count in (counts or {}).items():
            if count <= 0:
                raise ValueError('counts must be positive, got {0} for {1}'.format(count, key))
            merged[tuple(sorted(set(key)))] += int(count)

        self._keys = tuple(sorted(merged))
        self._counts = numpy.array([merged[key] for key in self._keys], dtype=numpy.int64)
        self._positions = None
        self._features = None

    @classmethod
    def _from_arrays(cls, keys, counts):
        new = cls.__new__(cls)
        new._keys = keys
        new._counts = counts
        new._positions = None
        new._features = None
        return new

    @property
    def keys(self):
        return self._keys

    @property
    def counts(self):
        """Read-only view of the integer counts, aligned with `keys`."""
        view = self._counts.view()
        view.flags.writeable = False
        return view

    @property
    def total_tokens(self) -> int:
        return int(self._counts.sum())

    @property
    def support_size(self) -> int:
        return len(self._keys)

    def __len__(self):
        return len(self._keys)

    def __bool__(self):
        return len(self._keys) > 0

    def __eq__(self, other):
        if not isinstance(other, UniverseDistribution):
            return NotImplemented
        return self._keys == other._keys and numpy.array_equal(self._counts, other._counts)

    def __hash__(self):
        return hash((self._keys, self._counts.tobytes()))

    def __repr__(self):
        return '<UniverseDistribution support={0} total={1}>'.format(self.support_size,
                                                                     self.total_tokens)

    def as_dict(self):
        return dict(zip(self._keys, (int(cc) for cc in self._counts)))

    def probabilities(self):
        """Probabilities aligned with `keys`. Empty for an empty distribution."""
        if not self._keys:
            return numpy.zeros(0)
        return self._counts / self._counts.sum()

    def positions(self):
        """Maps each key to its position in `keys`."""
        if self._positions is None:
            self._positions = {key: ii for ii, key in enumerate(self._keys)}
        return self._positions

    def _feature_index(self):
        # inverted index lemma -> key positions, built on first use
        if self._features is None:
            index = {}
            for ii, key in enumerate(self._keys):
                for lemma in key:
                    index.setdefault(lemma, []).append(ii)
            self._features = {lemma: numpy.array(pos, dtype=numpy.intp)
                              for lemma, pos in index.items()}
        return self._features

    def feature_positions(self, feature):
        """Sorted positions of the keys containing ``feature``."""
        return self._feature_index().get(feature, numpy.zeros(0, dtype=numpy.intp))

    def support_of(self, feature):
        """Number of keys containing ``feature``."""
        return len(self.feature_positions(feature))

    def restrict(self, positions):
        """Sub-distribution over the keys at ``positions`` (original counts)."""
        positions = numpy.asarray(positions, dtype=numpy.intp)
        keys = tuple(self._keys[ii] for ii in positions)
        return UniverseDistribution._from_arrays(keys, self._counts[positions].copy())

    def scaled(self, factor):
        """All counts multiplied by a positive integer."""
        if int(factor) != factor or factor <= 0:
            raise ValueError('scale factor must be a positive integer')
        return UniverseDistribution._from_arrays(self._keys, self._counts * int(factor))


@dataclass(frozen=True)
class Partition:
    """Split of a distribution on one feature.

    ``positive`` holds the keys containing the feature (L'), ``negative``
    the rest; both keep their original counts.
    """

    positive: UniverseDistribution
    negative: UniverseDistribution
    weight_positive: float
    weight_negative: float


def build_distribution(occurrences: Iterable) -> UniverseDistribution:
    """Counts feature vectors from a stream of `NpOccurrence`.

    Occurrences whose noun equals their only adjective collapse to a
    one-lemma key and are skipped.
    """

    counts = Counter()
    skipped = 0
    for occ in occurrences:
        key = feature_key(occ.noun_lemma, occ.adjective_lemmas)
        if len(key) < 2:
            skipped += 1
            continue
        counts[key] += 1

    if skipped:
        log.debug('skipped {0} single-lemma noun phrases'.format(skipped))

    return UniverseDistribution(counts)


def distribution_from_np_counts(np_counts: Mapping) -> UniverseDistribution:
    """Builds the distribution from an aggregated NP table.

    ``np_counts`` maps ``(noun, adjective tuple)`` to a count, as returned
    by `adjorder.core.extraction.read_nps`.
    """

    counts = Counter()
    for (noun, adjectives), count in np_counts.items():
        key = feature_key(noun, adjectives)
        if len(key) >= 2:
            counts[key] += count
    return UniverseDistribution(counts)


def partition(dist: UniverseDistribution, feature: str,
              weight_mode: str = 'support-count') -> Partition:
    """Partitions ``dist`` on ``feature``.

    In ``support-count`` mode the weights are the shares of distinct keys on
    each side; in ``probability-mass`` mode they are the shares of tokens.
    A feature found in no key gives an empty positive side.

    Raises:
        AdjorderPreconditionError:
            if ``dist`` is empty
    """

    if weight_mode not in WEIGHT_MODES:
        raise ValueError('invalid weight mode {0!r}'.format(weight_mode))
    if not dist:
        raise AdjorderPreconditionError('cannot partition an empty distribution')

    inside = dist.feature_positions(feature)
    mask = numpy.zeros(dist.support_size, dtype=bool)
    mask[inside] = True

    positive = dist.restrict(numpy.flatnonzero(mask))
    negative = dist.restrict(numpy.flatnonzero(~mask))

    if weight_mode == 'support-count':
        weight_positive = positive.support_size / dist.support_size
        weight_negative = negative.support_size / dist.support_size
    else:
        total = dist.total_tokens
        weight_positive = positive.total_tokens / total
        weight_negative = negative.total_tokens / total

    return Partition(positive=positive, negative=negative,
                     weight_positive=weight_positive, weight_negative=weight_negative)


def write_distribution(path, dist):
    """``lemma1,lemma2,...<TAB>count`` per key, sorted, after a header line."""

    with open(path, 'w', encoding='utf-8', newline='\n') as fp:
        fp.write('# total={0}\tsupport={1}\n'.format(dist.total_tokens, dist.support_size))
        for key, count in zip(dist.keys, dist.counts):
            fp.write('{0}\t{1}\n'.format(LEMMA_SEPARATOR.join(key), int(count)))


def read_distribution(path):
    """Reads a file written by `write_distribution` and checks its header."""

    with open(path, 'r', encoding='utf-8') as fp:
        header = fp.readline()
    fields = dict(part.split('=') for part in header.lstrip('# ').strip().split('\t'))

    counts = {}
    for lemmas, count in ioutils.read_tsv(path):
        counts[tuple(lemmas.split(LEMMA_SEPARATOR))] = int(count)
    dist = UniverseDistribution(counts)

    if dist.total_tokens != int(fields['total']) or dist.support_size != int(fields['support']):
        raise AdjorderInputError('distribution file {0!r} does not match its header'.format(path))
    return dist
