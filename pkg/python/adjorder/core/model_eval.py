# encoding: utf-8
#
# @Author:    adjorder developers
# @Date:      March 8, 2021
# @Filename:  model_eval.py
# @License:   BSD 3-Clause
#

"""Regression protocol, accuracies, macro statistics and diagnostics.

For every triple the two adjectives are put in codepoint order: alpha1 is
the smaller lemma, and the permutation pi1 places it in the first adjective
slot of the template. The response is whether pi1 is the attested order and
the predictor is ``IG(alpha1) - IG(alpha2)`` (or one of the KL terms).
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy
from scipy import stats
from scipy.special import expit

from adjorder import log
from adjorder.core.distribution import partition
from adjorder.core.exceptions import (AdjorderConvergenceError, AdjorderDegenerateFitError,
                                      AdjorderFitError, AdjorderPreconditionError)
from adjorder.core.extraction import Template
from adjorder.core.infogain import PREDICTORS, coverage, information_gain


__all__ = ['Canonical', 'canonicalize', 'Observation', 'make_observations', 'LogisticFit',
           'fit_logistic', 'evaluate', 'MacroSummary', 'macro_summary', 'reversed_pair_rate',
           'TemplateData', 'TemplateReport', 'analyze_template', 'apply_thresholds',
           'summarize_reports', 'reversed_rate_table', 'AblationRow', 'ablate',
           'GreedyOrder', 'greedy_order', 'TRAIN_WEIGHTINGS']


TRAIN_WEIGHTINGS = ('token', 'type')
ALL = 'all'


@dataclass(frozen=True)
class Canonical:
    """Unordered identity of a triple plus its attested orientation."""

    key: Tuple[str, str, str, str]
    y: int
    alpha1: str
    alpha2: str


def canonicalize(triple) -> Canonical:
    """Finds pi1 for a triple and whether it is the attested order.

    Raises:
        AdjorderPreconditionError:
            if both adjectives share a lemma
    """

    if triple.adj_first == triple.adj_second:
        raise AdjorderPreconditionError('identical adjective lemmas {0!r}'.format(
            triple.adj_first))

    alpha1, alpha2 = sorted([triple.adj_first, triple.adj_second])
    y = 1 if triple.adj_first == alpha1 else 0
    return Canonical(key=(str(triple.template), triple.noun, alpha1, alpha2), y=y,
                     alpha1=alpha1, alpha2=alpha2)


@dataclass(frozen=True)
class Observation:

    key: Tuple[str, str, str, str]
    x: float
    y: int
    weight: int


def make_observations(scores, predictor='ig', skipped=None) -> List[Observation]:
    """One observation per usable scored triple.

    Parameters:
        scores (list of TripleScore):
            scored triples of one template
        predictor (str):
            ``ig``, ``kl_positive`` or ``kl_negative``
        skipped (collections.Counter):
            if given, ``skipped['unusable']`` is increased by the token
            count of each skipped triple

    Returns:
        observations (list):
            with ``x = predictor(alpha1) - predictor(alpha2)``
    """

    if predictor not in PREDICTORS:
        raise ValueError('invalid predictor {0!r}'.format(predictor))

    observations = []
    for score in scores:
        if not score.usable:
            if skipped is not None:
                skipped['unusable'] += score.triple.count
            continue
        canon = canonicalize(score.triple)
        first = score.ig_first.component(predictor)
        second = score.ig_second.component(predictor)
        # ig_first belongs to the attested first adjective
        x = first - second if canon.y == 1 else second - first
        observations.append(Observation(key=canon.key, x=x, y=canon.y,
                                        weight=score.triple.count))
    return observations


@dataclass(frozen=True)
class LogisticFit:

    beta0: float
    beta1: float
    se0: float
    se1: float
    p0: float
    p1: float
    converged: bool
    iterations: int
    separation_detected: bool
    gradient_norm: float = 0.0
    loglik: float = 0.0

    def linear(self, x):
        return self.beta0 + self.beta1 * x


def _separable(x, y):
    """True for (quasi-)complete separation of the labels by x."""

    if x.min() == x.max():
        return False
    zeros = x[y == 0]
    ones = x[y == 1]
    return zeros.max() <= ones.min() or ones.max() <= zeros.min()


def _penalized_loglik(design, y, w, beta, ridge):
    eta = design @ beta
    return float(numpy.sum(w * (y * eta - numpy.logaddexp(0.0, eta))) - 0.5 * ridge * beta @ beta)


def fit_logistic(observations: Sequence[Observation], ridge: float = 1e-9,
                 weighting: str = 'token', max_iter: int = 100, beta_cap: float = 50.0,
                 tol: float = 1e-10) -> LogisticFit:
    """Weighted maximum-likelihood fit of ``logit p = beta0 + beta1 * x``.

    Newton-Raphson with step halving on the ridge-penalized log-likelihood.
    Standard errors come from the inverse observed information at the
    solution and P-values from two-sided Wald tests.

    When the labels are separable by x the fit stops as soon as a
    coefficient passes ``beta_cap`` while the likelihood still improves;
    the coefficients are then clipped to the cap. Separable data is always
    flagged, even when the ridge keeps the optimum finite.

    Raises:
        AdjorderDegenerateFitError:
            fewer than two observations, or a single label
        AdjorderConvergenceError:
            no convergence within ``max_iter`` steps on non-separable data
    """

    if weighting not in TRAIN_WEIGHTINGS:
        raise ValueError('invalid train weighting {0!r}'.format(weighting))
    if ridge < 0:
        raise ValueError('ridge must be non-negative')
    if len(observations) < 2:
        raise AdjorderDegenerateFitError('need at least two observations, got {0}'.format(
            len(observations)))

    x = numpy.array([obs.x for obs in observations], dtype=float)
    y = numpy.array([obs.y for obs in observations], dtype=float)
    if weighting == 'token':
        w = numpy.array([obs.weight for obs in observations], dtype=float)
    else:
        w = numpy.ones(len(observations))

    if y.min() == y.max():
        raise AdjorderDegenerateFitError()
    if not numpy.all(numpy.isfinite(x)):
        raise AdjorderFitError('non-finite predictor values')

    design = numpy.column_stack([numpy.ones_like(x), x])
    penalty = ridge * numpy.eye(2)
    separable = _separable(x, y)

    beta = numpy.zeros(2)
    loglik = _penalized_loglik(design, y, w, beta, ridge)
    converged = False
    separation = False
    iterations = 0

    while True:
        prob = expit(design @ beta)
        grad = design.T @ (w * (y - prob)) - ridge * beta
        if numpy.linalg.norm(grad) <= tol:
            converged = True
            break
        if iterations >= max_iter:
            break

        info = (design.T * (w * prob * (1.0 - prob))) @ design + penalty
        try:
            step = numpy.linalg.solve(info, grad)
        except numpy.linalg.LinAlgError:
            step = numpy.linalg.lstsq(info, grad, rcond=None)[0]

        scale = 1.0
        candidate = beta + step
        cand_loglik = _penalized_loglik(design, y, w, candidate, ridge)
        while cand_loglik < loglik and scale > 1e-10:
            scale /= 2.0
            candidate = beta + scale * step
            cand_loglik = _penalized_loglik(design, y, w, candidate, ridge)

        iterations += 1
        improved = cand_loglik > loglik
        moved = numpy.max(numpy.abs(candidate - beta))
        beta, loglik = candidate, max(cand_loglik, loglik)

        if separable and improved and numpy.max(numpy.abs(beta)) > beta_cap:
            beta = numpy.clip(beta, -beta_cap, beta_cap)
            separation = True
            break

        # Newton has reached machine precision; the gradient is roundoff.
        if moved <= 1e-14 * (1.0 + numpy.max(numpy.abs(beta))):
            converged = True
            break

    if separable:
        separation = True

    if not converged and not separation:
        raise AdjorderConvergenceError('Newton-Raphson did not converge in {0} iterations'.format(
            max_iter))

    prob = expit(design @ beta)
    grad = design.T @ (w * (y - prob)) - ridge * beta
    info = (design.T * (w * prob * (1.0 - prob))) @ design + penalty
    cov = numpy.linalg.pinv(info)
    se = numpy.sqrt(numpy.clip(numpy.diag(cov), 0.0, None))

    with numpy.errstate(divide='ignore', invalid='ignore'):
        zval = numpy.where(se > 0, beta / se, numpy.inf * numpy.sign(beta))
    pval = 2.0 * stats.norm.sf(numpy.abs(zval))

    return LogisticFit(beta0=float(beta[0]), beta1=float(beta[1]), se0=float(se[0]),
                       se1=float(se[1]), p0=float(pval[0]), p1=float(pval[1]),
                       converged=converged, iterations=iterations,
                       separation_detected=separation,
                       gradient_norm=float(numpy.linalg.norm(grad)),
                       loglik=_penalized_loglik(design, y, w, beta, ridge))


def evaluate(fit: LogisticFit, observations: Sequence[Observation]) -> Tuple[float, float]:
    """Token- and type-accuracy of a fit.

    pi1 is predicted when ``beta0 + beta1 * x >= 0``. Token accuracy weighs
    observations by count; type accuracy counts each (key, attested order)
    once.

    Raises:
        AdjorderPreconditionError:
            if there are no observations
    """

    if not observations:
        raise AdjorderPreconditionError('cannot evaluate on zero observations')

    correct_tokens = 0
    total_tokens = 0
    by_type = {}
    for obs in observations:
        predicted = 1 if fit.linear(obs.x) >= 0 else 0
        hit = predicted == obs.y
        correct_tokens += obs.weight if hit else 0
        total_tokens += obs.weight
        by_type[(obs.key, obs.y)] = hit

    token_accuracy = correct_tokens / total_tokens
    type_accuracy = sum(by_type.values()) / len(by_type)
    return token_accuracy, type_accuracy


@dataclass(frozen=True)
class MacroSummary:
    """Mean with a 95% t interval; the interval is `None` when n == 1."""

    mean: float
    ci_low: Optional[float]
    ci_high: Optional[float]
    n: int


def macro_summary(values, confidence=0.95) -> MacroSummary:
    """Macro-average of per-language values with a Student-t interval.

    Raises:
        AdjorderPreconditionError:
            on an empty list
    """

    values = numpy.asarray(list(values), dtype=float)
    if values.size == 0:
        raise AdjorderPreconditionError('macro summary of an empty list')

    mean = float(values.mean())
    if values.size == 1:
        return MacroSummary(mean=mean, ci_low=None, ci_high=None, n=1)

    half = stats.t.ppf(0.5 + confidence / 2.0, values.size - 1) * values.std(ddof=1) \
        / math.sqrt(values.size)
    return MacroSummary(mean=mean, ci_low=float(mean - half), ci_high=float(mean + half),
                        n=int(values.size))


def reversed_pair_rate(triples) -> float:
    """Share of adjective pairs attested in both relative orders.

    Computed over pair types of one language and template; the noun is
    ignored. The denominator is the number of pairs attested at least once.

    Raises:
        AdjorderPreconditionError:
            if ``triples`` is empty
    """

    orders = defaultdict(set)
    for triple in triples:
        pair = frozenset([triple.adj_first, triple.adj_second])
        orders[pair].add((triple.adj_first, triple.adj_second))

    if not orders:
        raise AdjorderPreconditionError('reversed pair rate of an empty triple set')

    both = sum(1 for seen in orders.values() if len(seen) == 2)
    return both / len(orders)


@dataclass
class TemplateData:
    """Scored training and held-out triples of one language and template."""

    language: str
    template: Template
    train: list
    test: list = field(default_factory=list)

    @property
    def train_tokens(self):
        return sum(ss.triple.count for ss in self.train)


@dataclass(frozen=True)
class TemplateReport:

    language: str
    template: str
    predictor: str
    n_triples: int
    n_test: int
    beta0: float
    beta1: float
    se1: float
    p_value: float
    token_accuracy: float
    type_accuracy: float
    coverage: Optional[float]
    separation_detected: bool = False
    error: str = ''

    @property
    def ok(self):
        return not self.error


def analyze_template(data: TemplateData, predictor='ig', ridge=1e-9,
                     weighting='token') -> TemplateReport:
    """Fits on the training triples and evaluates on the held-out ones.

    Without held-out triples the training triples are evaluated. Fit
    failures come back as a report with ``error`` set instead of raising.
    """

    train = make_observations(data.train, predictor)
    held_out = data.test if data.test else data.train
    test = make_observations(held_out, predictor)
    n_triples = sum(obs.weight for obs in train)
    n_test = sum(obs.weight for obs in test)
    nan = float('nan')

    def failed(message):
        log.warning('{0} {1} ({2}): {3}'.format(data.language, data.template, predictor,
                                                 message))
        return TemplateReport(language=data.language, template=str(data.template),
                              predictor=predictor, n_triples=n_triples, n_test=n_test,
                              beta0=nan, beta1=nan, se1=nan, p_value=nan, token_accuracy=nan,
                              type_accuracy=nan, coverage=coverage(held_out), error=message)

    try:
        fit = fit_logistic(train, ridge=ridge, weighting=weighting)
    except AdjorderFitError as ee:
        return failed(str(ee))

    if not test:
        return failed('no usable held-out triples')

    token_accuracy, type_accuracy = evaluate(fit, test)

    return TemplateReport(language=data.language, template=str(data.template),
                          predictor=predictor, n_triples=n_triples, n_test=n_test,
                          beta0=fit.beta0, beta1=fit.beta1, se1=fit.se1, p_value=fit.p1,
                          token_accuracy=token_accuracy, type_accuracy=type_accuracy,
                          coverage=coverage(held_out),
                          separation_detected=fit.separation_detected)


def apply_thresholds(datasets: Sequence[TemplateData], min_triples=5000,
                     min_template_share=0.10):
    """Drops languages with too few triples and templates with too small a share.

    Returns:
        kept (list):
            the datasets that pass, in input order
        omitted (list):
            ``(language, template, reason)`` for every dropped dataset
    """

    totals = defaultdict(int)
    for data in datasets:
        totals[data.language] += data.train_tokens

    kept, omitted = [], []
    for data in datasets:
        total = totals[data.language]
        if total < min_triples:
            omitted.append((data.language, str(data.template),
                            'language has {0} triples < min-triples {1}'.format(
                                total, min_triples)))
            continue
        share = data.train_tokens / total if total else 0.0
        if share < min_template_share:
            omitted.append((data.language, str(data.template),
                            'template share {0:.3f} < min-template-share {1}'.format(
                                share, min_template_share)))
            continue
        kept.append(data)
    return kept, omitted


def _templates_present(reports):
    return [tt.value for tt in Template if any(rr.template == tt.value for rr in reports)]


def summarize_reports(reports: Sequence[TemplateReport]) -> Dict[str, Dict[str, MacroSummary]]:
    """Per-template and comprehensive macro summaries of successful reports.

    Returns a mapping template (or ``all``) to ``{'beta1', 'token_accuracy',
    'type_accuracy'}`` summaries.
    """

    good = [rr for rr in reports if rr.ok]
    summary = {}
    for name in _templates_present(good) + [ALL]:
        group = good if name == ALL else [rr for rr in good if rr.template == name]
        if not group:
            continue
        summary[name] = {'beta1': macro_summary(rr.beta1 for rr in group),
                         'token_accuracy': macro_summary(rr.token_accuracy for rr in group),
                         'type_accuracy': macro_summary(rr.type_accuracy for rr in group)}
    return summary


def reversed_rate_table(triple_sets: Dict[Tuple[str, str], list]):
    """Macro-averaged reversed-pair rates per template and over all datasets.

    Parameters:
        triple_sets (dict):
            ``(language, template)`` to the attested triples of that dataset

    Returns:
        rows (list):
            ``(template, summary)`` with ``all`` last
    """

    rates = {}
    for (language, template), triples in sorted(triple_sets.items()):
        if triples:
            rates[(language, str(template))] = reversed_pair_rate(triples)

    rows = []
    for tt in Template:
        values = [rate for (_, template), rate in sorted(rates.items()) if template == tt.value]
        if values:
            rows.append((tt.value, macro_summary(values)))
    if rates:
        rows.append((ALL, macro_summary(rate for _, rate in sorted(rates.items()))))
    return rows


@dataclass
class AblationRow:
    """Accuracy and positive-beta1 proportion of one predictor."""

    predictor: str
    accuracy: Dict[str, float] = field(default_factory=dict)
    proportion: Dict[str, float] = field(default_factory=dict)
    reports: List[TemplateReport] = field(default_factory=list)
    excluded: List[str] = field(default_factory=list)


def ablate(datasets: Sequence[TemplateData], predictors=PREDICTORS, ridge=1e-9,
           weighting='token') -> List[AblationRow]:
    """Refits every dataset with each predictor.

    Accuracy is the macro-averaged token accuracy; proportion is the share
    of datasets with ``beta1 > 0``. Failed fits are excluded and noted.
    """

    rows = []
    for predictor in predictors:
        row = AblationRow(predictor=predictor)
        for data in datasets:
            report = analyze_template(data, predictor=predictor, ridge=ridge,
                                      weighting=weighting)
            if report.ok:
                row.reports.append(report)
            else:
                row.excluded.append('{0} {1}: {2}'.format(data.language, data.template,
                                                          report.error))

        for name in _templates_present(row.reports) + [ALL]:
            group = row.reports if name == ALL else [rr for rr in row.reports
                                                      if rr.template == name]
            if not group:
                continue
            row.accuracy[name] = macro_summary(rr.token_accuracy for rr in group).mean
            row.proportion[name] = sum(1 for rr in group if rr.beta1 > 0) / len(group)
        rows.append(row)
    return rows


@dataclass(frozen=True)
class GreedyOrder:
    """Lemmas in greedy IG order and the gain at each step."""

    order: Tuple[str, ...]
    gains: Tuple[float, ...]
    degenerate: bool


def greedy_order(dist, lemmas, weight_mode='support-count') -> GreedyOrder:
    """Orders lemmas the way ID3 orders tree nodes.

    Repeatedly picks the lemma with the largest gain on the surviving
    distribution (ties go to the lexicographically smaller lemma) and keeps
    the positive side. If that side empties early, the rest follow in
    lexicographic order and the result is flagged degenerate.

    Raises:
        AdjorderPreconditionError:
            if a lemma has no support in ``dist``
    """

    remaining = sorted(set(lemmas))
    missing = [ll for ll in remaining if dist.support_of(ll) == 0]
    if missing:
        raise AdjorderPreconditionError('lemmas without support: {0}'.format(missing))

    current = dist
    order, gains = [], []
    degenerate = False
    while remaining:
        if not current:
            degenerate = True
            order.extend(remaining)
            break
        scored = [(information_gain(current, ll, weight_mode).ig, ll) for ll in remaining]
        best_gain, best = min(scored, key=lambda sc: (-sc[0], sc[1]))
        order.append(best)
        gains.append(best_gain)
        remaining.remove(best)
        current = partition(current, best, weight_mode).positive

    return GreedyOrder(order=tuple(order), gains=tuple(gains), degenerate=degenerate)
