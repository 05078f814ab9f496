"""
Errors raised by the toolkit.
"""


class DsnBenchError(Exception):
    """Base class for every toolkit error."""


class InvalidMessage(DsnBenchError, ValueError):
    """A message or message id violates its invariants."""


class EndpointUnreachable(DsnBenchError):
    """A channel endpoint or subscription cannot be reached."""


class DuplicateChannel(DsnBenchError, ValueError):
    """A channel id is already open in the pocket."""


class StorageFull(DsnBenchError):
    """The backing store refused a write."""


class ChannelClosed(DsnBenchError):
    """Operation on a closed channel."""


class UnknownThread(DsnBenchError, KeyError):
    """Reply target is not known to the channel."""


class MalformedDocument(DsnBenchError, ValueError):
    """A feed document cannot be parsed."""

    def __init__(self, message, offset):
        super().__init__(f'{message} (at byte {offset})')
        self.offset = offset


class MalformedTrace(DsnBenchError, ValueError):
    """A trace or topology record cannot be parsed."""

    def __init__(self, message, lineno):
        super().__init__(f'line {lineno}: {message}')
        self.lineno = lineno


class TopologyMismatch(DsnBenchError, ValueError):
    """Trace and topology disagree on users."""


class InvalidModel(DsnBenchError, ValueError):
    """Distribution parameters are out of range."""


class FitError(DsnBenchError, ValueError):
    """Samples cannot support the requested fit."""


class MissingRecords(DsnBenchError):
    """A SimLog lacks records for forwards it should cover."""

    def __init__(self, mids):
        self.mids = sorted(mids)
        shown = ', '.join(self.mids[:20])
        more = '' if len(self.mids) <= 20 else f' (+{len(self.mids) - 20})'
        super().__init__(f'missing SimLog records for: {shown}{more}')


class HarnessError(DsnBenchError):
    """The DSN run cannot start or continue."""
