# encoding: utf-8
#
# @Author:    adjorder developers
# @Date:      March 10, 2021
# @Filename:  __main__.py
# @License:   BSD 3-Clause
#

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals

import argparse
import logging
import os
import sys

from . import __version__, log
from .core.conllu_ingest import PARSE_MODES
from .core.distribution import WEIGHT_MODES
from .core.exceptions import (AdjorderConfigError, AdjorderError, AdjorderInputError,
                              AdjorderNoDataError, AdjorderParseError)
from .core.infogain import unit_factor
from .core.model_eval import TRAIN_WEIGHTINGS
from .core.pipeline import (UNITS, RunConfig, cmd_ablate, cmd_analyze, cmd_extract, cmd_greedy,
                            cmd_lexicon, cmd_reversed_rate)


EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INPUT = 2
EXIT_NO_DATA = 3

COMMANDS = {'lexicon': cmd_lexicon,
            'extract': cmd_extract,
            'analyze': cmd_analyze,
            'ablate': cmd_ablate,
            'reversed-rate': cmd_reversed_rate}


def _add_config_options(parser):
    """One flag per configuration key; `None` means "keep the file value"."""

    group = parser.add_argument_group('configuration keys (override --config)')
    group.add_argument('--language', type=str, help='language code of this run')
    group.add_argument('--languages', type=str, nargs='+',
                       help='language directories aggregated by analyze/ablate/reversed-rate')
    group.add_argument('--lexicon-paths', type=str, nargs='+',
                       help='CoNLL-U files, directories or globs for the lexicon')
    group.add_argument('--train-paths', type=str, nargs='+', help='training corpora')
    group.add_argument('--test-paths', type=str, nargs='+', help='held-out corpora')
    group.add_argument('--modifier-deprels', type=str, nargs='+',
                       help='relations counted as adjectival modifiers, or "any"')
    group.add_argument('--ignore-punct-deps', action='store_true', default=None,
                       help='punctuation dependents do not disqualify a triple')
    group.add_argument('--weight-mode', type=str, choices=WEIGHT_MODES,
                       help='partition weights: shares of types or of tokens')
    group.add_argument('--train-weighting', type=str, choices=TRAIN_WEIGHTINGS,
                       help='weight training observations by tokens or types')
    group.add_argument('--ridge', type=float, help='ridge penalty of the logistic fit')
    group.add_argument('--min-triples', type=int,
                       help='minimum training triple tokens per language')
    group.add_argument('--min-template-share', type=float,
                       help='minimum share of a template within its language')
    group.add_argument('--output-dir', type=str, help='root of all artifacts')
    group.add_argument('--units', type=str, choices=UNITS, help='units of reported gains')
    group.add_argument('--parse-mode', type=str, choices=PARSE_MODES,
                       help='strict aborts on malformed CoNLL-U, robust drops it')
    group.add_argument('--workers', type=int, help='processes for reading corpora')


def _overrides(args):
    overrides = {}
    for key in RunConfig.keys():
        value = getattr(args, key.replace('-', '_'), None)
        if key == 'modifier-deprels' and value == ['any']:
            value = 'any'
        overrides[key] = value
    return overrides


def build_parser():

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', type=str, default=None,
                        help='YAML file merged over the packaged defaults')
    common.add_argument('-v', '--verbose', action='store_true', default=False,
                        help='debug output on the console')
    common.add_argument('-q', '--quiet', action='store_true', default=False,
                        help='only warnings and errors on the console')
    common.add_argument('--log-file', type=str, default=None, help='also log to this file')
    _add_config_options(common)

    parser = argparse.ArgumentParser(
        prog=os.path.basename(sys.argv[0]) if sys.argv and sys.argv[0] else 'adjorder',
        description='predicts adjective order from the information gain of adjectives')
    parser.add_argument('--version', action='version', version=__version__)

    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    subparsers.add_parser('lexicon', parents=[common],
                          help='build ADJ/NOUN whitelists from curated treebanks')
    subparsers.add_parser('extract', parents=[common],
                          help='extract noun phrases and triples for train and test')
    subparsers.add_parser('analyze', parents=[common],
                          help='score, fit and evaluate; write every report')
    subparsers.add_parser('ablate', parents=[common],
                          help='refit with each IG component as the predictor')
    subparsers.add_parser('reversed-rate', parents=[common],
                          help='share of adjective pairs attested in both orders')

    greedy = subparsers.add_parser('greedy', parents=[common],
                                   help='greedy IG order of a bag of lemmas')
    greedy.add_argument('lemmas', type=str, nargs='+', help='lemmas to order')

    return parser


def _set_verbosity(args):
    if args.verbose:
        log.set_level(logging.DEBUG)
    elif args.quiet:
        log.set_level(logging.WARNING)
    else:
        log.set_level(logging.INFO)
    if args.log_file:
        log.start_file_logger(args.log_file)


def _print_greedy(result, units):
    for step, lemma in enumerate(result.order):
        gain = '{0:.6f}'.format(result.gains[step] * unit_factor(units)) \
            if step < len(result.gains) else 'NA'
        print('{0}\t{1}\t{2}'.format(step + 1, lemma, gain))
    print('# degenerate={0}'.format('true' if result.degenerate else 'false'))


def main(argv=None):
    """Runs one subcommand and returns its exit code."""

    args = build_parser().parse_args(argv)
    _set_verbosity(args)

    try:
        config = RunConfig.load(args.config, overrides=_overrides(args))
        if args.command == 'greedy':
            _print_greedy(cmd_greedy(config, args.lemmas), config.units)
        else:
            COMMANDS[args.command](config)
    except (AdjorderInputError, AdjorderConfigError, AdjorderParseError) as ee:
        log.error(str(ee))
        return EXIT_INPUT
    except AdjorderNoDataError as ee:
        log.error(str(ee))
        return EXIT_NO_DATA
    except AdjorderError as ee:
        log.error(str(ee))
        return EXIT_ERROR

    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
