# encoding: utf-8
#
# test_infogain.py


from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

import math

import numpy
import pytest
from pytest import mark

from adjorder.core.distribution import UniverseDistribution, partition
from adjorder.core.exceptions import AdjorderSupportError
from adjorder.core.extraction import Template, Triple
from adjorder.core.infogain import (NOUN_CONDITIONED, UNCONDITIONED, TripleScorer, coverage,
                                    information_gain, kl_divergence, score_triple, unit_factor,
                                    write_scores)

from .conftest import brute_force_ig


# six vectors: "car" appears in three of them
SIX = {('car', 'red', 'small'): 4, ('car', 'old', 'red'): 2, ('car', 'small'): 1,
       ('box', 'red'): 3, ('big', 'blue', 'box'): 5, ('house', 'old', 'small'): 2}


def _random_universe(rng):
    lemmas = ['l{0}'.format(ii) for ii in range(int(rng.integers(3, 9)))]
    counts = {}
    for _ in range(int(rng.integers(1, 12))):
        size = int(rng.integers(2, len(lemmas) + 1))
        key = tuple(sorted(rng.choice(lemmas, size=size, replace=False).tolist()))
        counts[key] = counts.get(key, 0) + int(rng.integers(1, 20))
    return counts, lemmas


class TestKL(object):

    def test_identity(self, four_vectors):

        assert kl_divergence(four_vectors, four_vectors) == pytest.approx(0.0, abs=1e-15)

    @mark.parametrize('feature', ['f2'])
    def test_four_vectors_sides(self, four_vectors, feature):

        split = partition(four_vectors, feature)
        assert kl_divergence(split.positive, four_vectors) == pytest.approx(math.log(2), abs=1e-12)
        assert kl_divergence(split.negative, four_vectors) == pytest.approx(math.log(2), abs=1e-12)

    def test_empty_sub(self, four_vectors):

        assert kl_divergence(UniverseDistribution(), four_vectors) == 0.0

    def test_support_violation(self, four_vectors):

        with pytest.raises(AdjorderSupportError):
            kl_divergence(UniverseDistribution({('zz', 'yy'): 1}), four_vectors)

    def test_restriction_is_log_ratio(self, four_vectors):

        split = partition(four_vectors, 'f0')
        expected = math.log(four_vectors.total_tokens / split.positive.total_tokens)
        assert kl_divergence(split.positive, four_vectors) == pytest.approx(expected, abs=1e-12)


class TestInformationGain(object):

    def test_four_vectors_f2(self, four_vectors):

        bundle = information_gain(four_vectors, 'f2')
        assert bundle.ig == pytest.approx(math.log(2), abs=1e-12)
        assert bundle.weight_positive == 0.5
        assert bundle.support == 2

    def test_four_vectors_f1(self, four_vectors):

        expected = 0.75 * math.log(10 / 9) + 0.25 * math.log(10)
        assert information_gain(four_vectors, 'f1').ig == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.654670, abs=1e-5)

    @mark.parametrize('feature', ['absent', 'f0', 'm2'])
    def test_matches_brute_force(self, four_vectors, feature):

        for mode in ('support-count', 'probability-mass'):
            assert information_gain(four_vectors, feature, mode).ig == \
                pytest.approx(brute_force_ig(four_vectors.as_dict(), feature, mode), abs=1e-12)

    def test_degenerate_features(self):

        dist = UniverseDistribution({('a', 'n'): 2, ('b', 'n'): 3})
        assert information_gain(dist, 'n').ig == 0.0
        assert information_gain(dist, 'zzz').ig == 0.0

    def test_component(self, four_vectors):

        bundle = information_gain(four_vectors, 'f1')
        assert bundle.component('kl_negative') == bundle.kl_negative
        with pytest.raises(ValueError):
            bundle.component('entropy')

    def test_properties_on_random_universes(self):

        rng = numpy.random.default_rng(2021)
        for _ in range(1000):
            counts, lemmas = _random_universe(rng)
            dist = UniverseDistribution(counts)
            tripled = dist.scaled(3)
            for feature in lemmas:
                bundle = information_gain(dist, feature)
                assert bundle.ig >= 0.0
                assert bundle.kl_positive >= 0.0 and bundle.kl_negative >= 0.0
                assert bundle.ig - (bundle.weight_positive * bundle.kl_positive +
                                    bundle.weight_negative * bundle.kl_negative) == \
                    pytest.approx(0.0, abs=1e-12)

                support = dist.support_of(feature)
                if support in (0, dist.support_size):
                    assert bundle.ig == 0.0
                else:
                    assert bundle.ig > 0.0

                scaled = information_gain(tripled, feature)
                assert scaled.ig == pytest.approx(bundle.ig, abs=1e-12)


class TestScoring(object):

    def test_ana_uses_full_distribution(self):

        dist = UniverseDistribution(SIX)
        triple = Triple(template=Template.ANA, noun='car', adj_first='old', adj_second='red')
        score = score_triple(dist, triple)
        assert score.conditioning == UNCONDITIONED
        assert score.ig_first == information_gain(dist, 'old')
        assert score.ig_second == information_gain(dist, 'red')
        assert score.usable

    def test_naa_matches_two_stage_brute_force(self):

        dist = UniverseDistribution(SIX)
        triple = Triple(template=Template.NAA, noun='car', adj_first='red', adj_second='small')
        score = score_triple(dist, triple)
        assert score.conditioning == NOUN_CONDITIONED

        survivors = {kk: cc for kk, cc in SIX.items() if 'car' in kk}
        assert score.ig_first.ig == pytest.approx(brute_force_ig(survivors, 'red'), abs=1e-12)
        assert score.ig_second.ig == pytest.approx(brute_force_ig(survivors, 'small'), abs=1e-12)
        assert score.usable

    def test_single_vector_noun_is_unusable(self):

        dist = UniverseDistribution({('blue', 'house', 'old'): 3, ('big', 'box'): 2})
        triple = Triple(template=Template.NAA, noun='house', adj_first='old', adj_second='blue')
        score = score_triple(dist, triple)
        assert score.ig_first.ig == 0.0 and score.ig_second.ig == 0.0
        assert not score.usable
        assert score.reason == 'zero-gain'

    @mark.parametrize(('template', 'noun', 'first', 'reason'),
                      [(Template.NAA, 'wug', 'red', 'empty-base'),
                       (Template.AAN, 'box', 'zzz', 'zero-gain'),
                       (Template.NAA, 'box', 'zzz', 'zero-gain')])
    def test_unusable_reasons(self, template, noun, first, reason):

        dist = UniverseDistribution(SIX)
        triple = Triple(template=template, noun=noun, adj_first=first, adj_second='qzx', count=4)
        scorer = TripleScorer(dist)
        score = scorer.score(triple)
        assert not score.usable
        assert score.reason == reason
        assert scorer.coverage[reason] == 4
        assert coverage([score]) == 0.0

    @mark.parametrize('template', [Template.AAN, Template.ANA])
    def test_one_unseen_adjective(self, template):

        dist = UniverseDistribution({('big', 'box'): 3, ('box', 'red'): 1, ('car', 'red'): 2})
        triple = Triple(template=template, noun='box', adj_first='big', adj_second='qzx', count=2)
        scorer = TripleScorer(dist)
        score = scorer.score(triple)
        assert score.ig_first.ig == pytest.approx(math.log(2), abs=1e-12)
        assert score.ig_second.ig == 0.0
        assert score.usable
        assert score.reason == ''
        assert scorer.coverage['usable'] == 2

    def test_memoized(self):

        scorer = TripleScorer(UniverseDistribution(SIX))
        first = scorer.gain('red', 'car')
        assert scorer.gain('red', 'car') is first
        assert scorer.noun_base('car') is scorer.noun_base('car')
        assert scorer.noun_base('car').support_size == 3


class TestFiles(object):

    def test_units(self):

        assert unit_factor('nats') == 1.0
        assert unit_factor('bits') * math.log(2) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            unit_factor('bans')

    def test_write_scores_bits(self, tmp_path):

        dist = UniverseDistribution(SIX)
        scorer = TripleScorer(dist)
        scores = scorer.score_all([
            Triple(template=Template.NAA, noun='car', adj_first='red', adj_second='small'),
            Triple(template=Template.AAN, noun='box', adj_first='big', adj_second='blue',
                   count=2)])
        path = str(tmp_path / 'scored.tsv')
        write_scores(path, scores, units='bits')
        with open(path, encoding='utf-8') as fp:
            lines = fp.read().splitlines()

        assert lines[0].split('\t')[:5] == ['template', 'noun', 'adj_first', 'adj_second',
                                             'count']
        assert lines[1].startswith('AAN\tbox\tbig\tblue\t2\t')
        ig_bits = float(lines[1].split('\t')[5])
        assert ig_bits == pytest.approx(information_gain(dist, 'big').ig / math.log(2), rel=1e-10)
        assert lines[2].endswith('\t1')
