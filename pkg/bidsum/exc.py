# Copyright (C) 2026 The bidsum developers
#
# This module is part of bidsum and is released under
# the New BSD License: http://www.opensource.org/licenses/bsd-license.php
"""Module with common exceptions"""

__all__ = ('BidsError', 'InvalidInput', 'ParseError', 'SchemaError',
           'TrainingFailure', 'UsageError')


class BidsError(Exception):
    """All errors thrown by bidsum"""


class InvalidInput(BidsError, ValueError):
    """Thrown if the arguments of an operation violate its preconditions"""


class ParseError(BidsError):
    """Thrown if the parsing of a file failed due to an invalid format.
    Instantiate with the message, and optionally the path and 1-based line number"""

    def __init__(self, message, path=None, line=None):
        super(ParseError, self).__init__(message, path, line)

    @property
    def message(self):
        return self.args[0]

    @property
    def path(self):
        return self.args[1]

    @property
    def line(self):
        return self.args[2]

    def __str__(self):
        location = ''
        if self.path is not None:
            location = str(self.path)
            if self.line is not None:
                location += ":%i" % self.line
            location += ": "
        # END handle location
        return "%s%s" % (location, self.message)


class SchemaError(ParseError):
    """A parsed record does not match the expected schema. The field attribute
    names the path to the offending value, like ``relevant_windows[1][0]``"""

    def __init__(self, message, path=None, line=None, field=None, qid=None):
        super(SchemaError, self).__init__(message, path, line)
        self.field = field
        self.qid = qid

    def __str__(self):
        parts = list()
        if self.qid is not None:
            parts.append("qid %s" % self.qid)
        if self.field is not None:
            parts.append("field '%s'" % self.field)
        prefix = super(SchemaError, self).__str__()
        if not parts:
            return prefix
        return "%s (%s)" % (prefix, ', '.join(parts))


class TrainingFailure(BidsError):
    """Training produced a non-finite loss. Instantiate with the 1-based epoch"""

    @property
    def epoch(self):
        return self.args[0]

    def __str__(self):
        detail = ''
        if len(self.args) > 1:
            detail = ": %s" % self.args[1]
        return "training diverged at epoch %i%s" % (self.epoch, detail)


class UsageError(BidsError):
    """Command line flags were missing, malformed or contradicting each other"""
