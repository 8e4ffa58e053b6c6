# encoding: utf-8
#
# @Author:    adjorder developers
# @Date:      March 5, 2021
# @Filename:  infogain.py
# @License:   BSD 3-Clause
#

"""KL divergence, information gain and template-aware triple scoring.

Everything is in nats. For a feature f splitting L into L' (f present)
and its complement, the gain is::

    IG(L, f) = w+ * KL(L' || L) + w- * KL(complement || L)

with the weights given by the partition (see
`adjorder.core.distribution.partition`). An empty side contributes 0.
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy
from scipy.special import rel_entr

from adjorder import log
from adjorder.core.distribution import UniverseDistribution, partition
from adjorder.core.exceptions import AdjorderSupportError
from adjorder.core.extraction import Template
from adjorder.utils import ioutils


__all__ = ['kl_divergence', 'IGBundle', 'information_gain', 'TripleScore', 'TripleScorer',
           'score_triple', 'PREDICTORS', 'UNCONDITIONED', 'NOUN_CONDITIONED',
           'write_scores', 'unit_factor', 'coverage', 'ZERO_BUNDLE']


PREDICTORS = ('ig', 'kl_positive', 'kl_negative')
UNCONDITIONED = 'unconditioned'
NOUN_CONDITIONED = 'noun-conditioned'


def unit_factor(units):
    """Multiplier turning nats into ``units`` (``nats`` or ``bits``)."""
    if units == 'nats':
        return 1.0
    if units == 'bits':
        return 1.0 / math.log(2)
    raise ValueError('invalid units {0!r}'.format(units))


def kl_divergence(sub: UniverseDistribution, base: UniverseDistribution) -> float:
    """D_KL[sub || base] in nats, both normalized on the fly.

    Terms with zero probability under ``sub`` contribute 0 and an empty
    ``sub`` has divergence 0.

    Raises:
        AdjorderSupportError:
            if a key of ``sub`` is not in the support of ``base``
    """

    if not sub:
        return 0.0

    where = base.positions()
    try:
        aligned = numpy.array([where[key] for key in sub.keys], dtype=numpy.intp)
    except KeyError as ee:
        raise AdjorderSupportError('key {0} is outside the base support'.format(ee.args[0]))

    p_sub = sub.probabilities()
    p_base = base.probabilities()[aligned]

    return float(numpy.sum(rel_entr(p_sub, p_base)))


@dataclass(frozen=True)
class IGBundle:
    """Both KL terms of a split, their weights and the weighted sum."""

    kl_positive: float
    kl_negative: float
    weight_positive: float
    weight_negative: float
    ig: float
    support: int = 0

    def component(self, predictor):
        """One of ``ig``, ``kl_positive`` or ``kl_negative``."""
        if predictor not in PREDICTORS:
            raise ValueError('invalid predictor {0!r}'.format(predictor))
        return getattr(self, predictor)


ZERO_BUNDLE = IGBundle(kl_positive=0.0, kl_negative=0.0, weight_positive=0.0,
                       weight_negative=1.0, ig=0.0, support=0)


def information_gain(dist: UniverseDistribution, feature: str,
                     weight_mode: str = 'support-count') -> IGBundle:
    """Information gain of partitioning ``dist`` on ``feature``.

    A feature absent from every key gives ``ig == 0``; so does a feature
    present in every key.
    """

    split = partition(dist, feature, weight_mode=weight_mode)

    kl_positive = kl_divergence(split.positive, dist) if split.positive else 0.0
    kl_negative = kl_divergence(split.negative, dist) if split.negative else 0.0

    ig = split.weight_positive * kl_positive + split.weight_negative * kl_negative

    return IGBundle(kl_positive=kl_positive, kl_negative=kl_negative,
                    weight_positive=split.weight_positive,
                    weight_negative=split.weight_negative, ig=ig,
                    support=split.positive.support_size)


@dataclass(frozen=True)
class TripleScore:
    """IG bundles of both adjectives of a triple.

    ``usable`` is False when the base distribution is empty, an adjective
    has no support in it, or both gains are exactly zero; such triples are
    left out of the regression.
    """

    triple: object
    ig_first: IGBundle
    ig_second: IGBundle
    conditioning: str
    usable: bool = True
    reason: str = ''


class TripleScorer(object):
    """Scores triples against one listener distribution.

    Gains are memoized per (base distribution, feature); the noun-restricted
    bases used for NAA triples are memoized per noun. Lookups use
    `dict.setdefault`, so concurrent inserts of the same value are harmless.

    Parameters:
        dist (UniverseDistribution):
            the listener distribution built from training noun phrases
        weight_mode (str):
            ``support-count`` or ``probability-mass``
    """

    def __init__(self, dist, weight_mode='support-count'):

        self.dist = dist
        self.weight_mode = weight_mode
        self.coverage = Counter()
        self._gains = {}
        self._noun_bases = {}

    def noun_base(self, noun):
        """L' of the noun: the keys of the full distribution containing it."""
        base = self._noun_bases.get(noun)
        if base is None:
            base = self.dist.restrict(self.dist.feature_positions(noun))
            base = self._noun_bases.setdefault(noun, base)
        return base

    def gain(self, feature, noun=None):
        """IG of ``feature`` on the full distribution, or on L' of ``noun``."""
        memo_key = (noun, feature)
        bundle = self._gains.get(memo_key)
        if bundle is None:
            base = self.dist if noun is None else self.noun_base(noun)
            bundle = information_gain(base, feature, self.weight_mode) if base else ZERO_BUNDLE
            bundle = self._gains.setdefault(memo_key, bundle)
        return bundle

    def score(self, triple) -> TripleScore:
        """Scores one triple; NAA adjectives are scored after the noun."""

        if Template(triple.template) == Template.NAA:
            conditioning = NOUN_CONDITIONED
            noun = triple.noun
            base = self.noun_base(noun)
        else:
            conditioning = UNCONDITIONED
            noun = None
            base = self.dist

        ig_first = self.gain(triple.adj_first, noun)
        ig_second = self.gain(triple.adj_second, noun)

        reason = ''
        if not base:
            reason = 'empty-base'
        elif ig_first.ig == 0.0 and ig_second.ig == 0.0:
            reason = 'zero-gain'

        self.coverage['usable' if not reason else reason] += triple.count

        return TripleScore(triple=triple, ig_first=ig_first, ig_second=ig_second,
                           conditioning=conditioning, usable=not reason, reason=reason)

    def score_all(self, triples):
        scores = [self.score(triple) for triple in triples]
        unusable = sum(1 for ss in scores if not ss.usable)
        if unusable:
            log.debug('{0} of {1} triple types are unusable: {2}'.format(
                unusable, len(scores), dict(self.coverage)))
        return scores


def score_triple(dist, triple, weight_mode='support-count') -> TripleScore:
    """Scores a single triple without sharing a memo table."""
    return TripleScorer(dist, weight_mode=weight_mode).score(triple)


def coverage(scores) -> Optional[float]:
    """Token share of usable scores, `None` when there are none."""
    total = sum(ss.triple.count for ss in scores)
    if total == 0:
        return None
    return sum(ss.triple.count for ss in scores if ss.usable) / total


def write_scores(path, scores, units='nats'):
    """Writes the scored-triples table, sorted by triple key."""

    factor = unit_factor(units)

    def fmt(value):
        return '{0:.12g}'.format(value * factor)

    rows = []
    for ss in sorted(scores, key=lambda ss: tuple(str(part) for part in ss.triple.key)):
        tt = ss.triple
        rows.append([str(tt.template), tt.noun, tt.adj_first, tt.adj_second, str(tt.count),
                     fmt(ss.ig_first.ig), fmt(ss.ig_second.ig),
                     fmt(ss.ig_first.kl_positive), fmt(ss.ig_first.kl_negative),
                     fmt(ss.ig_second.kl_positive), fmt(ss.ig_second.kl_negative),
                     '1' if ss.usable else '0'])

    header = ['template', 'noun', 'adj_first', 'adj_second', 'count', 'ig_first', 'ig_second',
              'kl_pos_first', 'kl_neg_first', 'kl_pos_second', 'kl_neg_second', 'usable']
    ioutils.write_tsv(path, rows, header=header)
