# encoding: utf-8
#
# @Author:    adjorder developers
# @Date:      March 3, 2021
# @Filename:  lexicon.py
# @License:   BSD 3-Clause
#

"""ADJ / NOUN lemma whitelists harvested from curated treebanks."""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

import os
from dataclasses import dataclass
from typing import FrozenSet, Iterable

from adjorder import log
from adjorder.utils import ioutils


__all__ = ['normalize', 'Lexicon', 'build_lexicon', 'lexicon_paths', 'LEMMA_SEPARATOR']

# joins the lemmas of a feature vector in the nps and distribution tables
LEMMA_SEPARATOR = ','


def normalize(form: str) -> str:
    """Case-normalizes a lemma.

    Plain `str.lower`: locale independent and applied per codepoint, with
    no Turkish dotted/dotless i tailoring. Idempotent.
    """
    return form.lower()


def lexicon_paths(directory, language):
    """Returns the ``(adjective, noun)`` file paths of a language."""
    return (os.path.join(directory, '{0}.adj.txt'.format(language)),
            os.path.join(directory, '{0}.noun.txt'.format(language)))


@dataclass(frozen=True)
class Lexicon:
    """Normalized lemma whitelists of one language.

    Membership queries normalize their argument, so
    ``lexicon.has_adjective(x) == lexicon.has_adjective(normalize(x))``.
    """

    adjectives: FrozenSet[str]
    nouns: FrozenSet[str]
    language: str

    def has_adjective(self, lemma):
        return normalize(lemma) in self.adjectives

    def has_noun(self, lemma):
        return normalize(lemma) in self.nouns

    def __len__(self):
        return len(self.adjectives) + len(self.nouns)

    def union(self, other):
        """Merges two lexicons of the same language (set union)."""
        if other.language != self.language:
            raise ValueError('cannot merge lexicons of {0!r} and {1!r}'.format(
                self.language, other.language))
        return Lexicon(adjectives=self.adjectives | other.adjectives,
                       nouns=self.nouns | other.nouns, language=self.language)

    @classmethod
    def empty(cls, language):
        return cls(adjectives=frozenset(), nouns=frozenset(), language=language)

    def save(self, directory):
        """Writes ``<lang>.adj.txt`` and ``<lang>.noun.txt``, sorted and unique."""
        ioutils.ensure_dir(directory)
        adj_path, noun_path = lexicon_paths(directory, self.language)
        ioutils.write_lines(adj_path, sorted(self.adjectives))
        ioutils.write_lines(noun_path, sorted(self.nouns))
        return adj_path, noun_path

    @classmethod
    def load(cls, directory, language):
        """Reads the files written by `save`.

        Raises:
            AdjorderInputError:
                if either file is missing
        """
        adj_path, noun_path = lexicon_paths(directory, language)
        adjectives = frozenset(normalize(ll) for ll in ioutils.read_lines(adj_path)
                               if LEMMA_SEPARATOR not in ll)
        nouns = frozenset(normalize(ll) for ll in ioutils.read_lines(noun_path)
                          if LEMMA_SEPARATOR not in ll)
        return cls(adjectives=adjectives, nouns=nouns, language=language)


def build_lexicon(sentences: Iterable, language: str) -> Lexicon:
    """Collects the normalized lemmas of all ADJ and NOUN tokens.

    An empty stream gives an empty lexicon, which then rejects everything
    downstream. Lemmas containing `LEMMA_SEPARATOR` are left out, so noun
    phrases using them never reach the feature-vector tables.
    """

    adjectives = set()
    nouns = set()
    skipped = 0
    for sentence in sentences:
        for tok in sentence.tokens:
            if tok.upos not in ('ADJ', 'NOUN'):
                continue
            lemma = normalize(tok.lemma)
            if LEMMA_SEPARATOR in lemma:
                skipped += 1
            elif tok.upos == 'ADJ':
                adjectives.add(lemma)
            else:
                nouns.add(lemma)

    log.debug('lexicon {0}: {1} adjectives, {2} nouns, {3} lemma(s) with {4!r} skipped'.format(
        language, len(adjectives), len(nouns), skipped, LEMMA_SEPARATOR))

    return Lexicon(adjectives=frozenset(adjectives), nouns=frozenset(nouns), language=language)
