"""
Update/forward activity records and the trace file format.

One record per line, tab-separated: kind, mid, parent_mid ("-" when absent),
uid, uname, t (decimal seconds), text (escaped).
"""
import enum
import logging
import math
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Optional

from core.codec import escape_text, format_seconds, parse_ms, round_seconds
from core.codec import unescape_text
from core.exceptions import MalformedTrace

logger = logging.getLogger(__name__)

NO_PARENT = '-'
FIELD_COUNT = 7


class EventKind(str, enum.Enum):
    UPDATE = 'update'
    FORWARD = 'forward'


@dataclass(frozen=True)
class TraceEvent:
    kind: EventKind
    mid: str
    parent_mid: Optional[str]
    uid: str
    uname: str
    t: float
    text: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'kind', EventKind(self.kind))
        if not math.isfinite(self.t) or self.t < 0:
            raise ValueError(f'event {self.mid}: invalid time {self.t!r}')
        object.__setattr__(self, 't', round_seconds(self.t))
        if self.is_forward and not self.parent_mid:
            raise ValueError(f'forward {self.mid} has no parent')
        if not self.is_forward and self.parent_mid:
            raise ValueError(f'update {self.mid} has a parent')

    @property
    def is_forward(self):
        return self.kind == EventKind.FORWARD

    def to_line(self):
        return '\t'.join((
            self.kind.value,
            self.mid,
            self.parent_mid or NO_PARENT,
            self.uid,
            self.uname,
            format_seconds(self.t),
            escape_text(self.text),
        ))


def parse_event(line, lineno):
    fields = line.rstrip('\n').split('\t')
    if len(fields) != FIELD_COUNT:
        raise MalformedTrace(
            f'expected {FIELD_COUNT} fields, got {len(fields)}', lineno
        )
    kind, mid, parent, uid, uname, t, text = fields
    if not mid or not uid:
        raise MalformedTrace('empty mid or uid', lineno)
    try:
        return TraceEvent(
            kind=kind,
            mid=mid,
            parent_mid=None if parent == NO_PARENT else parent,
            uid=uid,
            uname=uname,
            t=parse_ms(t) / 1000,
            text=unescape_text(text),
        )
    except ValueError as exc:
        raise MalformedTrace(str(exc), lineno) from exc


def reachable(events):
    """Mids reachable from update events through parent links."""
    children = defaultdict(list)
    queue = deque()
    for event in events:
        if event.is_forward:
            children[event.parent_mid].append(event.mid)
        else:
            queue.append(event.mid)
    kept = set(queue)
    while queue:
        for child in children.get(queue.popleft(), ()):
            if child not in kept:
                kept.add(child)
                queue.append(child)
    return kept


def parse_trace(lines):
    """
    Read trace records in file order.

    Forwards whose parent never appears (directly or through a dropped
    ancestor) are dropped with a warning.
    """
    events = []
    lines_of = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip() or line.startswith('#'):
            continue
        event = parse_event(line, lineno)
        if event.mid in lines_of:
            raise MalformedTrace(
                f'duplicate mid {event.mid} (first on line '
                f'{lines_of[event.mid]})', lineno,
            )
        lines_of[event.mid] = lineno
        events.append(event)
    kept = reachable(events)
    for event in events:
        if event.mid not in kept:
            logger.warning('line %d: dropping forward %s of unknown %s',
                           lines_of[event.mid], event.mid, event.parent_mid)
    return [e for e in events if e.mid in kept]


def dump_trace(events, stream):
    """Write events in the trace file format."""
    for event in events:
        stream.write(event.to_line() + '\n')


def filter_window(events, t0, t1):
    """Keep roots posted in [t0, t1] together with all their forwards."""
    if t0 > t1:
        raise ValueError('window start is after its end')
    roots = [e for e in events if not e.is_forward and t0 <= e.t <= t1]
    children = defaultdict(list)
    for event in events:
        if event.is_forward:
            children[event.parent_mid].append(event.mid)
    kept = set()
    queue = deque(e.mid for e in roots)
    while queue:
        mid = queue.popleft()
        if mid in kept:
            continue
        kept.add(mid)
        queue.extend(children.get(mid, ()))
    return [e for e in events if e.mid in kept]


def trace_counts(events):
    """Roots-only and roots-plus-forwards message counts."""
    roots = sum(1 for e in events if not e.is_forward)
    return {
        'roots': roots,
        'forwards': len(events) - roots,
        'messages': len(events),
    }
