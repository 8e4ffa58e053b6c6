# encoding: utf-8
#
# conftest.py
#


from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

import math
import os
from collections import Counter

import numpy
import pytest

from adjorder.core.distribution import UniverseDistribution
from adjorder.core.extraction import Template, write_nps, write_triples
from adjorder.core.pipeline import RunConfig


# m0..m3 carry 0.1, 0.3, 0.2, 0.4 of the mass; f1 is in m1..m3, f2 in m1 and m2.
FOUR_VECTOR_COUNTS = {('f0', 'm0'): 1,
                  ('f0', 'f1', 'f2', 'm1'): 3,
                  ('f1', 'f2', 'm2'): 2,
                  ('f0', 'f1', 'm3'): 4}

ADJECTIVES = ['big', 'blue', 'old', 'red', 'small', 'new', 'nice', 'long']
NOUNS = ['box', 'house', 'car', 'room', 'people']
UPOS_WEIGHTS = [('ADJ', 0.35), ('NOUN', 0.30), ('DET', 0.15), ('VERB', 0.10), ('PUNCT', 0.10)]


@pytest.fixture
def four_vectors():
    return UniverseDistribution(FOUR_VECTOR_COUNTS)


def render_sentence(tokens, sent_id=None):
    """CoNLL-U text of ``(form, lemma, upos, head, deprel)`` rows, ids 1..n."""

    lines = []
    if sent_id is not None:
        lines.append('# sent_id = {0}'.format(sent_id))
    for ii, (form, lemma, upos, head, deprel) in enumerate(tokens, start=1):
        lines.append('\t'.join([str(ii), form, lemma, upos, '_', '_', str(head), deprel,
                                '_', '_']))
    return '\n'.join(lines) + '\n\n'


def _random_sentence(rng):
    n_tokens = int(rng.integers(3, 10))
    names = [name for name, _ in UPOS_WEIGHTS]
    probs = numpy.array([ww for _, ww in UPOS_WEIGHTS])
    upos = [names[ii] for ii in rng.choice(len(names), size=n_tokens, p=probs / probs.sum())]
    root = int(rng.integers(1, n_tokens + 1))

    tokens = []
    for ii in range(1, n_tokens + 1):
        pos = upos[ii - 1]
        if ii == root:
            head = 0
        else:
            nouns = [jj for jj in range(max(1, ii - 2), min(n_tokens, ii + 2) + 1)
                     if upos[jj - 1] == 'NOUN' and jj != ii]
            if pos == 'ADJ' and nouns and rng.random() < 0.8:
                head = int(rng.choice(nouns))
            else:
                head = int(rng.choice([jj for jj in range(0, n_tokens + 1) if jj != ii]))

        if pos == 'ADJ':
            lemma = str(rng.choice(ADJECTIVES + ['qzx']))
            deprel = 'amod' if rng.random() < 0.85 else 'conj'
        elif pos == 'NOUN':
            lemma = str(rng.choice(NOUNS + ['Box', 'wug']))
            deprel = 'nsubj'
        elif pos == 'PUNCT':
            lemma, deprel = '.', 'punct'
        elif pos == 'DET':
            lemma, deprel = 'the', 'det'
        else:
            lemma, deprel = 'see', 'root'
        form = lemma.capitalize() if rng.random() < 0.2 else lemma
        tokens.append((form, form if pos == 'ADJ' and rng.random() < 0.1 else lemma, pos,
                       head, deprel))
    return tokens


HANDCRAFTED = [
    # AAN with both adjectives on the noun
    [('big', 'big', 'ADJ', 3, 'amod'), ('blue', 'blue', 'ADJ', 3, 'amod'),
     ('box', 'box', 'NOUN', 0, 'root')],
    # ANA
    [('the', 'the', 'DET', 3, 'det'), ('old', 'old', 'ADJ', 3, 'amod'),
     ('house', 'house', 'NOUN', 0, 'root'), ('red', 'red', 'ADJ', 3, 'amod')],
    # NAA
    [('car', 'car', 'NOUN', 0, 'root'), ('red', 'red', 'ADJ', 1, 'amod'),
     ('small', 'small', 'ADJ', 1, 'amod')],
    # the best room available: an NP but no triple
    [('the', 'the', 'DET', 4, 'det'), ('best', 'best', 'ADJ', 4, 'amod'),
     ('available', 'available', 'ADJ', 4, 'amod'), ('room', 'room', 'NOUN', 0, 'root'),
     ('.', '.', 'PUNCT', 4, 'punct')],
    # the people nice to us: the adjective has its own dependent
    [('nice', 'nice', 'ADJ', 2, 'amod'), ('people', 'people', 'NOUN', 0, 'root'),
     ('old', 'old', 'ADJ', 2, 'amod'), ('us', 'we', 'PRON', 3, 'obl')],
    # adjectives on the noun but not contiguous
    [('big', 'big', 'ADJ', 3, 'amod'), ('see', 'see', 'VERB', 0, 'root'),
     ('box', 'box', 'NOUN', 2, 'obj'), ('really', 'really', 'ADV', 5, 'advmod'),
     ('blue', 'blue', 'ADJ', 3, 'amod')],
    # out-of-lexicon adjective
    [('blue', 'blue', 'ADJ', 3, 'amod'), ('qzx', 'qzx', 'ADJ', 3, 'amod'),
     ('box', 'box', 'NOUN', 0, 'root')],
    # same lemma twice
    [('big', 'big', 'ADJ', 3, 'amod'), ('big', 'big', 'ADJ', 3, 'amod'),
     ('house', 'house', 'NOUN', 0, 'root')],
    # upper-case lemmas normalize into the lexicon
    [('Big', 'Big', 'ADJ', 3, 'amod'), ('Blue', 'Blue', 'ADJ', 3, 'amod'),
     ('Box', 'Box', 'NOUN', 0, 'root')],
    # a punctuation dependent on the noun
    [('new', 'new', 'ADJ', 3, 'amod'), ('long', 'long', 'ADJ', 3, 'amod'),
     ('car', 'car', 'NOUN', 0, 'root'), ('.', '.', 'PUNCT', 3, 'punct')],
]


def fixture_sentences(n_sentences=50, seed=7):
    """Handcrafted sentences first, then seeded random trees, as token rows."""

    rng = numpy.random.default_rng(seed)
    sentences = list(HANDCRAFTED)
    while len(sentences) < n_sentences:
        sentences.append(_random_sentence(rng))
    return sentences[:n_sentences]


@pytest.fixture
def conllu_fixture(tmp_path):
    """Writes the 50-sentence fixture; returns ``(path, token rows)``."""

    sentences = fixture_sentences()
    path = tmp_path / 'fixture.conllu'
    path.write_text(''.join(render_sentence(ss, sent_id=ii)
                            for ii, ss in enumerate(sentences, start=1)), encoding='utf-8')
    return str(path), sentences


def brute_force_ig(counts, feature, weight_mode='support-count'):
    """Two-sided gain of ``feature`` over a plain ``{key: count}`` dict."""

    total = sum(counts.values())
    positive = {kk: cc for kk, cc in counts.items() if feature in kk}
    negative = {kk: cc for kk, cc in counts.items() if feature not in kk}

    def kl(side):
        if not side:
            return 0.0
        side_total = sum(side.values())
        return sum((cc / side_total) * math.log((cc / side_total) / (counts[kk] / total))
                   for kk, cc in side.items())

    if weight_mode == 'support-count':
        wp, wn = len(positive) / len(counts), len(negative) / len(counts)
    else:
        wp = sum(positive.values()) / total
        wn = sum(negative.values()) / total
    return wp * kl(positive) + wn * kl(negative)


def make_universe(rng, n_vectors=200, n_adjectives=30, n_nouns=20):
    adjectives = ['adj{0:02d}'.format(ii) for ii in range(n_adjectives)]
    nouns = ['noun{0:02d}'.format(ii) for ii in range(n_nouns)]
    nps = Counter()
    while len(nps) < n_vectors:
        noun = nouns[int(rng.integers(n_nouns))]
        size = int(rng.choice([1, 2, 3], p=[0.3, 0.5, 0.2]))
        chosen = tuple(sorted(rng.choice(adjectives, size=size, replace=False).tolist()))
        if (noun, chosen) not in nps:
            nps[(noun, chosen)] = int(rng.integers(1, 51))
    return nps


def make_synthetic_triples(rng, nps, n_tokens, noise=0.10):
    """Triples whose order puts the higher-gain adjective first, ``noise`` flipped.

    Scores follow the template rule: the full universe for AAN and ANA, the
    vectors containing the noun for NAA. Pairs with tied gains are not drawn.
    """

    counts = {tuple(sorted(set(adjs) | {noun})): cc for (noun, adjs), cc in nps.items()}
    pool = [(noun, adjs, cc) for (noun, adjs), cc in sorted(nps.items()) if len(adjs) >= 2]
    weights = numpy.array([cc for _, _, cc in pool], dtype=float)
    weights /= weights.sum()

    memo = {}

    def gain(feature, noun):
        if (noun, feature) not in memo:
            base = counts if noun is None else {kk: cc for kk, cc in counts.items()
                                                if noun in kk}
            memo[(noun, feature)] = brute_force_ig(base, feature)
        return memo[(noun, feature)]

    triples = {tt: Counter() for tt in Template}
    for template in Template:
        drawn = 0
        while drawn < n_tokens:
            noun, adjs, _ = pool[int(rng.choice(len(pool), p=weights))]
            first, second = rng.choice(adjs, size=2, replace=False).tolist()
            scope = noun if template == Template.NAA else None
            delta = gain(first, scope) - gain(second, scope)
            if abs(delta) < 1e-9:
                continue
            if delta < 0:
                first, second = second, first
            if rng.random() < noise:
                first, second = second, first
            triples[template][(template, noun, first, second)] += 1
            drawn += 1

    merged = Counter()
    for part in triples.values():
        merged.update(part)
    return merged


def write_synthetic_language(output_dir, language, seed, n_train=20000, n_test=5000):
    """Writes the extraction artifacts of one synthetic language."""

    rng = numpy.random.default_rng(seed)
    nps = make_universe(rng)
    train = make_synthetic_triples(rng, nps, n_train)
    test = make_synthetic_triples(rng, nps, n_test)

    for role, triples in (('train', train), ('test', test)):
        role_dir = os.path.join(output_dir, language, role)
        os.makedirs(role_dir, exist_ok=True)
        write_nps(os.path.join(role_dir, 'nps.tsv'), nps)
        write_triples(os.path.join(role_dir, 'triples.tsv'), triples)

    return nps, train, test


@pytest.fixture(scope='module')
def synthetic_dir(tmp_path_factory):
    """Artifacts of two synthetic languages, shared by a test module."""

    root = tmp_path_factory.mktemp('synthetic')
    write_synthetic_language(str(root), 'syn', seed=11)
    write_synthetic_language(str(root), 'alt', seed=23)
    return str(root)


@pytest.fixture
def synthetic_config(synthetic_dir):
    return RunConfig(language='syn', languages=['syn', 'alt'], output_dir=synthetic_dir)
