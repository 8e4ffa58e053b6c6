# encoding: utf-8
#
# @Author:    adjorder developers
# @Date:      March 10, 2021
# @Filename:  pipeline.py
# @License:   BSD 3-Clause
#

"""Run configuration and the end-to-end stages behind the command line.

Output layout under ``output-dir``::

    <lang>/resolved_config.yml                      (lexicon and extract stages)
    <lang>/lexicon/<lang>.adj.txt, <lang>.noun.txt
    <lang>/train/nps.tsv, triples.tsv, stats.json      (and <lang>/test/)
    <lang>/analysis/distribution.tsv, scored_train.tsv, scored_test.tsv
    report/results.*, reversed.*, ablation.*, scatter.tsv, omitted.txt
    report/resolved_config.yml                       (analysis stages)
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

import multiprocessing
import os
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, field, fields
from functools import partial
from typing import List, Optional

from adjorder import NAME, log
from adjorder.core import reports
from adjorder.core.conllu_ingest import PARSE_MODES, IngestStats, read_conllu_file
from adjorder.core.distribution import (WEIGHT_MODES, distribution_from_np_counts,
                                        write_distribution)
from adjorder.core.exceptions import (AdjorderConfigError, AdjorderInputError,
                                      AdjorderNoDataError, AdjorderUserWarning)
from adjorder.core.extraction import (ExtractionOptions, Template, aggregate_nps,
                                      aggregate_triples, extract_nps, extract_triples,
                                      read_nps, read_triples, triples_from_counts, write_nps,
                                      write_triples)
from adjorder.core.infogain import TripleScorer, write_scores
from adjorder.core.lexicon import Lexicon, build_lexicon
from adjorder.core.model_eval import (TRAIN_WEIGHTINGS, TemplateData, ablate, analyze_template,
                                      apply_thresholds, greedy_order, reversed_rate_table,
                                      summarize_reports)
from adjorder.utils import ioutils
from adjorder.utils.configuration import get_config, write_yaml


__all__ = ['RunConfig', 'cmd_lexicon', 'cmd_extract', 'cmd_analyze', 'cmd_ablate',
           'cmd_reversed_rate', 'cmd_greedy', 'ROLES']


ROLES = ('train', 'test')
UNITS = ('nats', 'bits')
RESOLVED_CONFIG = 'resolved_config.yml'


@dataclass
class RunConfig:
    """Every knob of a run. File keys are the field names with hyphens."""

    language: str = 'en'
    languages: List[str] = field(default_factory=list)
    lexicon_paths: List[str] = field(default_factory=list)
    train_paths: List[str] = field(default_factory=list)
    test_paths: List[str] = field(default_factory=list)
    modifier_deprels: Optional[List[str]] = field(default_factory=lambda: ['amod'])
    ignore_punct_deps: bool = False
    weight_mode: str = 'support-count'
    train_weighting: str = 'token'
    ridge: float = 1e-9
    min_triples: int = 5000
    min_template_share: float = 0.10
    output_dir: str = 'adjorder-out'
    units: str = 'nats'
    parse_mode: str = 'robust'
    workers: int = 1

    @staticmethod
    def file_key(name):
        return name.replace('_', '-')

    @classmethod
    def keys(cls):
        return [cls.file_key(ff.name) for ff in fields(cls)]

    @classmethod
    def from_mapping(cls, mapping):
        """Builds a validated config from a hyphen-keyed mapping.

        Raises:
            AdjorderConfigError:
                on unknown keys or invalid values
        """
        known = {cls.file_key(ff.name): ff.name for ff in fields(cls)}
        unknown = sorted(set(mapping) - set(known))
        if unknown:
            raise AdjorderConfigError('unknown keys {0}'.format(unknown))

        kwargs = {known[key]: value for key, value in mapping.items()}
        deprels = kwargs.get('modifier_deprels', ['amod'])
        if deprels == 'any' or deprels is None:
            kwargs['modifier_deprels'] = None
        elif isinstance(deprels, str):
            kwargs['modifier_deprels'] = [deprels]

        for key in ('languages', 'lexicon_paths', 'train_paths', 'test_paths'):
            if key in kwargs:
                value = kwargs[key] or []
                kwargs[key] = [value] if isinstance(value, str) else [str(vv) for vv in value]

        try:
            config = cls(**kwargs)
            config.ridge = float(config.ridge)
            config.min_triples = int(config.min_triples)
            config.min_template_share = float(config.min_template_share)
            config.workers = int(config.workers)
            config.language = str(config.language)
        except (TypeError, ValueError) as ee:
            raise AdjorderConfigError(str(ee))

        config.check()
        return config

    @classmethod
    def load(cls, path=None, overrides=None):
        """Packaged defaults, merged with ``path`` and then ``overrides``."""
        if path is not None and not os.path.isfile(os.path.expanduser(path)):
            raise AdjorderInputError('config file {0!r} not found'.format(path))
        mapping = get_config(NAME, user_path=path)
        for key, value in (overrides or {}).items():
            if value is not None:
                mapping[key] = value
        return cls.from_mapping(mapping)

    def to_mapping(self):
        mapping = {}
        for ff in fields(self):
            value = getattr(self, ff.name)
            if ff.name == 'modifier_deprels':
                value = 'any' if value is None else sorted(value)
            elif isinstance(value, list):
                value = list(value)
            mapping[self.file_key(ff.name)] = value
        return mapping

    def dump(self, path):
        write_yaml(path, self.to_mapping())

    def check(self):
        """Validates values that do not touch the filesystem."""
        choices = [('weight-mode', self.weight_mode, WEIGHT_MODES),
                   ('train-weighting', self.train_weighting, TRAIN_WEIGHTINGS),
                   ('units', self.units, UNITS),
                   ('parse-mode', self.parse_mode, PARSE_MODES)]
        for key, value, allowed in choices:
            if value not in allowed:
                raise AdjorderConfigError('{0} must be one of {1}, got {2!r}'.format(
                    key, list(allowed), value))
        if self.ridge < 0:
            raise AdjorderConfigError('ridge must be non-negative')
        if self.min_triples < 0 or self.min_template_share < 0:
            raise AdjorderConfigError('thresholds must be non-negative')
        if self.workers < 1:
            raise AdjorderConfigError('workers must be at least 1')
        if not self.language:
            raise AdjorderConfigError('language is required')

    def require_paths(self, key):
        """Expands the path list of a role; every entry must exist."""
        patterns = getattr(self, key)
        if not patterns:
            raise AdjorderConfigError('{0} is empty'.format(self.file_key(key)))
        return ioutils.expand_paths(patterns)

    @property
    def extraction_options(self):
        deprels = None if self.modifier_deprels is None else frozenset(self.modifier_deprels)
        return ExtractionOptions(modifier_deprels=deprels,
                                 ignore_punct_deps=self.ignore_punct_deps)

    @property
    def analysis_languages(self):
        return sorted(set(self.languages)) if self.languages else [self.language]

    def language_dir(self, language=None, *parts):
        return os.path.join(self.output_dir, language or self.language, *parts)

    def report_dir(self):
        return os.path.join(self.output_dir, 'report')

    def write_resolved(self, directory):
        """Stores the resolved configuration next to the outputs of a stage."""
        path = os.path.join(ioutils.ensure_dir(directory), RESOLVED_CONFIG)
        self.dump(path)
        return path


def _map(func, items, workers):
    """Ordered map, on a process pool when ``workers > 1``."""
    if workers > 1 and len(items) > 1:
        with multiprocessing.Pool(min(workers, len(items))) as pool:
            return pool.map(func, items)
    return [func(item) for item in items]


def _lexicon_of_file(path, language, mode):
    stats = IngestStats()
    lexicon = build_lexicon(read_conllu_file(path, mode=mode, stats=stats), language)
    return lexicon, stats


def _extract_file(path, lexicon, options, mode):
    stats = IngestStats()
    nps, triples = Counter(), Counter()
    for sentence in read_conllu_file(path, mode=mode, stats=stats):
        nps.update(aggregate_nps(extract_nps(sentence, lexicon, options)))
        triples.update(aggregate_triples(extract_triples(sentence, lexicon, options)))
    return nps, triples, stats


def cmd_lexicon(config: RunConfig):
    """Builds the ADJ/NOUN whitelists from the lexicon corpora.

    Returns:
        lexicon (Lexicon):
            the merged lexicon, also written to ``<lang>/lexicon/``
    """

    paths = config.require_paths('lexicon_paths')
    config.write_resolved(config.language_dir())
    log.info('building {0} lexicon from {1} file(s)'.format(config.language, len(paths)))

    results = _map(partial(_lexicon_of_file, language=config.language,
                           mode=config.parse_mode), paths, config.workers)

    lexicon = Lexicon.empty(config.language)
    stats = IngestStats()
    for part, part_stats in results:
        lexicon = lexicon.union(part)
        stats.merge(part_stats)

    if not lexicon.adjectives and not lexicon.nouns:
        warnings.warn('lexicon for {0} is empty: every noun phrase will be rejected'.format(
            config.language), AdjorderUserWarning)

    adj_path, noun_path = lexicon.save(config.language_dir(None, 'lexicon'))
    log.info('{0} adjectives -> {1}'.format(len(lexicon.adjectives), adj_path))
    log.info('{0} nouns -> {1}'.format(len(lexicon.nouns), noun_path))
    if stats.malformed:
        log.warning('{0} malformed sentence(s) dropped'.format(stats.malformed))
    return lexicon


def cmd_extract(config: RunConfig):
    """Extracts NP and triple tables for the train and test roles.

    Returns:
        summary (dict):
            role to the stats written in ``<lang>/<role>/stats.json``
    """

    lexicon_dir = config.language_dir(None, 'lexicon')
    try:
        lexicon = Lexicon.load(lexicon_dir, config.language)
    except AdjorderInputError:
        raise AdjorderInputError('no lexicon for {0!r} in {1!r}; run `lexicon` first'.format(
            config.language, lexicon_dir))

    role_paths = {'train': config.require_paths('train_paths')}
    if config.test_paths:
        role_paths['test'] = config.require_paths('test_paths')
    config.write_resolved(config.language_dir())

    summary = {}
    for role, paths in sorted(role_paths.items()):
        log.info('extracting {0} role from {1} file(s)'.format(role, len(paths)))
        results = _map(partial(_extract_file, lexicon=lexicon,
                               options=config.extraction_options, mode=config.parse_mode),
                       paths, config.workers)

        nps, triples, stats = Counter(), Counter(), IngestStats()
        for part_nps, part_triples, part_stats in results:
            nps.update(part_nps)
            triples.update(part_triples)
            stats.merge(part_stats)

        role_dir = ioutils.ensure_dir(config.language_dir(None, role))
        write_nps(os.path.join(role_dir, 'nps.tsv'), nps)
        write_triples(os.path.join(role_dir, 'triples.tsv'), triples)

        per_template = {tt.value: {'tokens': 0, 'types': 0} for tt in Template}
        for key, count in triples.items():
            per_template[str(key[0])]['tokens'] += count
            per_template[str(key[0])]['types'] += 1

        role_stats = stats.as_dict()
        role_stats.update({'np_tokens': sum(nps.values()), 'np_types': len(nps),
                           'triples': per_template})
        ioutils.write_json(os.path.join(role_dir, 'stats.json'), role_stats)
        if stats.malformed:
            log.warning('{0}: {1} malformed sentence(s) dropped'.format(role, stats.malformed))
        log.info('{0}: {1} sentences, {2} NP tokens, {3} triple tokens'.format(
            role, stats.sentences, sum(nps.values()), sum(triples.values())))
        summary[role] = role_stats

    return summary


@dataclass
class LanguageData:
    """Everything the analysis needs for one language."""

    language: str
    distribution: object
    datasets: List[TemplateData]
    train_scores: list
    test_scores: list
    coverage: dict


def load_language(config: RunConfig, language: str, write=True) -> LanguageData:
    """Builds L from training NPs and scores both triple tables.

    Raises:
        AdjorderInputError:
            if the training or testing extraction artifacts are missing
    """

    train_dir = config.language_dir(language, 'train')
    test_dir = config.language_dir(language, 'test')
    for path in (os.path.join(train_dir, 'nps.tsv'), os.path.join(train_dir, 'triples.tsv'),
                 os.path.join(test_dir, 'triples.tsv')):
        if not os.path.isfile(path):
            raise AdjorderInputError('missing {0!r}; run `extract` first'.format(path))

    dist = distribution_from_np_counts(read_nps(os.path.join(train_dir, 'nps.tsv')))
    log.info('{0}: listener distribution with {1} feature vectors, {2} tokens'.format(
        language, dist.support_size, dist.total_tokens))

    scorer = TripleScorer(dist, weight_mode=config.weight_mode)
    train_scores = scorer.score_all(triples_from_counts(
        read_triples(os.path.join(train_dir, 'triples.tsv'))))
    train_coverage = dict(scorer.coverage)
    scorer.coverage.clear()
    test_scores = scorer.score_all(triples_from_counts(
        read_triples(os.path.join(test_dir, 'triples.tsv'))))
    test_coverage = dict(scorer.coverage)

    by_template = defaultdict(lambda: ([], []))
    for score in train_scores:
        by_template[str(score.triple.template)][0].append(score)
    for score in test_scores:
        by_template[str(score.triple.template)][1].append(score)

    datasets = [TemplateData(language=language, template=tt, train=by_template[tt.value][0],
                             test=by_template[tt.value][1])
                for tt in Template if by_template[tt.value][0]]

    if write:
        out = ioutils.ensure_dir(config.language_dir(language, 'analysis'))
        write_distribution(os.path.join(out, 'distribution.tsv'), dist)
        write_scores(os.path.join(out, 'scored_train.tsv'), train_scores, units=config.units)
        write_scores(os.path.join(out, 'scored_test.tsv'), test_scores, units=config.units)

    return LanguageData(language=language, distribution=dist, datasets=datasets,
                        train_scores=train_scores, test_scores=test_scores,
                        coverage={'train': train_coverage, 'test': test_coverage})


def _prepare(config, write=True):
    """Loads every analysis language and applies the reporting thresholds."""

    loaded = [load_language(config, language, write=write)
              for language in config.analysis_languages]
    datasets = [data for lang in loaded for data in lang.datasets]
    kept, omitted = apply_thresholds(datasets, min_triples=config.min_triples,
                                     min_template_share=config.min_template_share)
    for language, template, reason in omitted:
        log.info('omitting {0} {1}: {2}'.format(language, template, reason))
    if not kept:
        raise AdjorderNoDataError('no (language, template) dataset passes min-triples={0} and '
                                  'min-template-share={1}'.format(config.min_triples,
                                                                  config.min_template_share))
    return loaded, kept, omitted


def _reversed_table(kept):
    triple_sets = {(data.language, str(data.template)): [ss.triple for ss in data.train]
                   for data in kept}
    return reversed_rate_table(triple_sets)


def cmd_analyze(config: RunConfig):
    """Scores, fits, evaluates and writes the full report bundle.

    Returns:
        reports (list of TemplateReport):
            one per dataset that passed the thresholds

    Raises:
        AdjorderNoDataError:
            if no dataset passes the thresholds or none could be fitted
    """

    config.write_resolved(config.report_dir())
    loaded, kept, omitted = _prepare(config)
    out = ioutils.ensure_dir(config.report_dir())

    template_reports = []
    for data in kept:
        report = analyze_template(data, predictor='ig', ridge=config.ridge,
                                  weighting=config.train_weighting)
        if report.ok:
            log.info('{0} {1}: n={2} beta1={3:.3f} P={4:.3g} token acc={5:.3f}'.format(
                report.language, report.template, report.n_triples, report.beta1,
                report.p_value, report.token_accuracy))
        else:
            omitted.append((report.language, report.template, 'fit failed: ' + report.error))
        template_reports.append(report)

    summary = summarize_reports(template_reports)
    reports.write_results(out, template_reports, summary, units=config.units)
    reports.write_scatter(out, template_reports, units=config.units)
    reports.write_reversed(out, _reversed_table(kept))
    reports.write_ablation(out, ablate(kept, ridge=config.ridge,
                                       weighting=config.train_weighting))
    reports.write_omitted(out, omitted)
    ioutils.write_json(os.path.join(out, 'coverage.json'),
                       {lang.language: lang.coverage for lang in loaded})

    if not any(rr.ok for rr in template_reports):
        raise AdjorderNoDataError('no template could be fitted; see {0}'.format(
            os.path.join(out, 'omitted.txt')))

    return template_reports


def cmd_ablate(config: RunConfig):
    """Writes only the ablation table. Returns the `AblationRow` list."""

    config.write_resolved(config.report_dir())
    _, kept, _ = _prepare(config, write=False)
    rows = ablate(kept, ridge=config.ridge, weighting=config.train_weighting)
    reports.write_ablation(ioutils.ensure_dir(config.report_dir()), rows)
    return rows


def cmd_reversed_rate(config: RunConfig):
    """Writes only the reversed-pair table. Returns its rows."""

    config.write_resolved(config.report_dir())
    _, kept, _ = _prepare(config, write=False)
    table = _reversed_table(kept)
    reports.write_reversed(ioutils.ensure_dir(config.report_dir()), table)
    return table


def cmd_greedy(config: RunConfig, lemmas):
    """Greedy IG order of ``lemmas`` over the training distribution."""

    path = os.path.join(config.language_dir(None, 'train'), 'nps.tsv')
    if not os.path.isfile(path):
        raise AdjorderInputError('missing {0!r}; run `extract` first'.format(path))
    dist = distribution_from_np_counts(read_nps(path))
    return greedy_order(dist, lemmas, weight_mode=config.weight_mode)
