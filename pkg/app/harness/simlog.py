"""
Run logs: per-message post times and per-bot resource counters.

File format, tab-separated: '#' metadata lines, then
    MSG mid uid kind T_trace T_posted
    BOT uid queries_issued queries_served bytes_served polls_completed
        messages_stored
    RAW mid wall_offset            (real mode only)
"""
import logging
from dataclasses import dataclass, field
from typing import Dict

from channel.counters import ResourceCounters
from core.codec import format_seconds, parse_ms
from core.exceptions import MalformedTrace

logger = logging.getLogger(__name__)

METADATA_KEYS = ('mode', 'h', 'seed', 'accel', 'run_start', 'duration',
                 'fetch_latency', 'bots')


@dataclass(frozen=True)
class MessageRecord:
    mid: str
    uid: str
    kind: str
    t_trace: float
    t_posted: float

    @property
    def efd_ms(self):
        return round(self.t_posted * 1000) - round(self.t_trace * 1000)


@dataclass
class SimLog:
    metadata: Dict[str, str] = field(default_factory=dict)
    messages: Dict[str, MessageRecord] = field(default_factory=dict)
    bots: Dict[str, ResourceCounters] = field(default_factory=dict)
    raw: Dict[str, float] = field(default_factory=dict)

    @property
    def h(self):
        return float(self.metadata['h'])

    @property
    def mode(self):
        return self.metadata.get('mode', 'virtual')

    @property
    def duration(self):
        return float(self.metadata.get('duration', 0))

    def record(self, mid, uid, kind, t_trace, t_posted):
        self.messages[mid] = MessageRecord(mid, uid, kind, t_trace, t_posted)

    def dump(self, stream):
        for key in METADATA_KEYS:
            if key in self.metadata:
                stream.write(f'# {key}={self.metadata[key]}\n')
        for mid in sorted(self.messages):
            r = self.messages[mid]
            stream.write(
                f'MSG\t{r.mid}\t{r.uid}\t{r.kind}\t'
                f'{format_seconds(r.t_trace)}\t{format_seconds(r.t_posted)}\n'
            )
        for uid in sorted(self.bots):
            row = '\t'.join(str(v) for v in self.bots[uid].as_row())
            stream.write(f'BOT\t{uid}\t{row}\n')
        for mid in sorted(self.raw):
            stream.write(f'RAW\t{mid}\t{self.raw[mid]:.6f}\n')

    @classmethod
    def load(cls, lines):
        log = cls()
        for lineno, line in enumerate(lines, start=1):
            line = line.rstrip('\n')
            if not line:
                continue
            if line.startswith('#'):
                key, sep, value = line[1:].strip().partition('=')
                if sep:
                    log.metadata[key] = value
                continue
            fields = line.split('\t')
            try:
                cls._load_record(log, fields)
            except (ValueError, IndexError) as exc:
                raise MalformedTrace(
                    f'bad {fields[0]} record: {exc}', lineno
                ) from exc
        if 'h' not in log.metadata:
            raise MalformedTrace('missing h metadata', 1)
        return log

    @staticmethod
    def _load_record(log, fields):
        tag = fields[0]
        if tag == 'MSG' and len(fields) == 6:
            _, mid, uid, kind, t_trace, t_posted = fields
            log.record(mid, uid, kind, parse_ms(t_trace) / 1000,
                       parse_ms(t_posted) / 1000)
        elif tag == 'BOT' and len(fields) == 7:
            qi, qs, bs, polls, stored = (int(v) for v in fields[2:])
            log.bots[fields[1]] = ResourceCounters(
                queries_issued=qi, queries_served=qs, bytes_served=bs,
                polls_completed=polls, messages_stored=stored,
            )
        elif tag == 'RAW' and len(fields) == 3:
            log.raw[fields[1]] = float(fields[2])
        else:
            raise ValueError(f'unexpected record with {len(fields)} fields')
