# !usr/bin/env python
# -*- coding: utf-8 -*-
#
# Licensed under a 3-clause BSD license.
#
# @Author: adjorder developers
# @Date:   2021-03-02
# @Filename: exceptions.py
# @License: BSD 3-Clause

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import
from __future__ import unicode_literals


class AdjorderError(Exception):
    """A custom core adjorder exception"""

    def __init__(self, message=None):

        # raw constructor arguments, replayed by __reduce__
        self.__dict__.setdefault('_init_args', (message,))

        message = 'There has been an error' \
            if not message else message

        super(AdjorderError, self).__init__(message)

    def __reduce__(self):
        return (self.__class__, self._init_args)


class AdjorderParseError(AdjorderError):
    """Raised on a malformed CoNLL-U block in strict mode."""

    def __init__(self, message=None, source_id=None, line_number=None):

        self._init_args = (message, source_id, line_number)
        self.source_id = source_id
        self.line_number = line_number

        if not message:
            message = 'Malformed CoNLL-U input'
        if source_id is not None:
            location = source_id if line_number is None else '{0}:{1}'.format(source_id,
                                                                              line_number)
            message = '{0} ({1})'.format(message, location)

        super(AdjorderParseError, self).__init__(message)


class AdjorderInputError(AdjorderError):
    """A missing or unreadable input path, or a missing upstream artifact."""

    def __init__(self, message=None):
        self._init_args = (message,)
        if not message:
            message = 'Error reading input'
        else:
            message = 'Error reading input. {0}'.format(message)

        super(AdjorderInputError, self).__init__(message)


class AdjorderConfigError(AdjorderError):
    """An invalid configuration key or value."""

    def __init__(self, message=None):
        self._init_args = (message,)
        if not message:
            message = 'Invalid configuration'
        else:
            message = 'Invalid configuration. {0}'.format(message)

        super(AdjorderConfigError, self).__init__(message)


class AdjorderPreconditionError(AdjorderError, ValueError):
    """A caller violated the precondition of an operation."""
    pass


class AdjorderSupportError(AdjorderError):
    """The support of a sub-distribution is not contained in its base."""
    pass


class AdjorderFitError(AdjorderError):
    """Base class for logistic regression failures."""
    pass


class AdjorderDegenerateFitError(AdjorderFitError):
    """Too few observations, or a single label, to fit a template."""

    def __init__(self, message=None):

        message = 'Degenerate template: observations carry a single label' \
            if not message else message

        super(AdjorderDegenerateFitError, self).__init__(message)


class AdjorderConvergenceError(AdjorderFitError):
    """Newton-Raphson did not converge and no separation was detected."""
    pass


class AdjorderNoDataError(AdjorderError):
    """No (language, template) dataset passes the reporting thresholds."""

    def __init__(self, message=None):

        message = 'No template passes the reporting thresholds' \
            if not message else message

        super(AdjorderNoDataError, self).__init__(message)


class AdjorderWarning(Warning):
    """Base warning for adjorder."""


class AdjorderUserWarning(UserWarning, AdjorderWarning):
    """A run that completes but whose output is probably not what was meant."""
    pass
