"""
Bots: one per user, polling followee feeds every query gap and forwarding
what the trace says their user forwarded.
"""
import heapq
import logging
import math
import threading
import zlib
from collections import Counter
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from django.conf import settings

from channel.counters import ResourceCounters
from core.exceptions import EndpointUnreachable, TopologyMismatch
from core.messages import message_digest
from harness.behavior import behavior_forward_time

logger = logging.getLogger(__name__)


def draw_phase(uid, h, seed):
    """Uniform start offset in [0, h), reproducible per (uid, seed)."""
    rng = np.random.default_rng([seed, zlib.crc32(uid.encode('utf-8'))])
    phase = math.floor(rng.uniform(0, h) * 1000) / 1000
    return min(phase, math.nextafter(h, 0))


@dataclass(frozen=True)
class BotConfig:
    uid: str
    h: float
    phase: Optional[float] = None
    feed_entry_limit: Optional[int] = None

    def __post_init__(self):
        if not self.h > 0 or not math.isfinite(self.h):
            raise ValueError(f'query gap must be positive, got {self.h!r}')
        if self.phase is not None and not 0 <= self.phase < self.h:
            raise ValueError(
                f'phase {self.phase} outside [0, {self.h}) for {self.uid}'
            )
        if self.feed_entry_limit is None:
            object.__setattr__(
                self, 'feed_entry_limit', settings.DSNBENCH_FEED_ENTRY_LIMIT
            )
        if self.feed_entry_limit < 1:
            raise ValueError('feed_entry_limit must be at least 1')


class ScheduledForward(NamedTuple):
    due: float
    event: object
    parent: object


@dataclass
class BotState:
    config: BotConfig
    followees: Tuple[str, ...]
    phase: float
    run_start: float = 0.0
    polls_scheduled: int = 0
    seen: set = field(default_factory=set)
    forwarded: set = field(default_factory=set)
    pending_forwards: List = field(default_factory=list)
    counters: ResourceCounters = field(default_factory=ResourceCounters)
    served_queries: Counter = field(default_factory=Counter)
    served_bytes: Counter = field(default_factory=Counter)
    versions: dict = field(default_factory=dict)
    busy: bool = False
    lock: object = field(default_factory=threading.Lock, repr=False,
                         compare=False)

    @property
    def uid(self):
        return self.config.uid

    @property
    def next_poll(self):
        return self.poll_time(self.polls_scheduled)

    def poll_time(self, k):
        return self.run_start + self.phase + k * self.config.h

    def pop_forward(self, mid):
        """Remove a due forward from the pending schedule."""
        with self.lock:
            self.pending_forwards = [
                item for item in self.pending_forwards if item[1] != mid
            ]
            heapq.heapify(self.pending_forwards)


def bot_init(config, topology, seed=0, run_start=0.0):
    """State of a bot before its first poll at run_start + phase."""
    if config.uid not in topology:
        raise TopologyMismatch(f'bot {config.uid} is not in the topology')
    phase = config.phase
    if phase is None:
        phase = draw_phase(config.uid, config.h, seed)
    return BotState(
        config=config,
        followees=tuple(topology.followees(config.uid)),
        phase=phase,
        run_start=run_start,
    )


def bot_poll(state, fetcher, plan, now, fetch_latency=0.0, clock=None):
    """
    Fetch every followee feed and schedule forwards of newly seen parents.

    `clock`, when given, reports the time the fetches completed; otherwise
    each followee query takes `fetch_latency` seconds.
    """
    new = []
    for uid, document in fetcher.fetch_many(state.followees):
        state.counters.queries_issued += 1
        if isinstance(document, EndpointUnreachable):
            logger.debug('%s: %s unreachable: %s', state.uid, uid, document)
            continue
        state.served_queries[uid] += 1
        state.served_bytes[uid] += document.byte_size
        if state.versions.get(uid) == document.version:
            continue
        state.versions[uid] = document.version
        for message in document.entries:
            digest = message_digest(message)
            if digest not in state.seen:
                state.seen.add(digest)
                new.append(message)
    if clock is not None:
        t_seen = clock()
    else:
        t_seen = now + fetch_latency * len(state.followees)
    scheduled = []
    for message in new:
        for event in plan.forwards_for(state.uid, message.native_id):
            if event.mid in state.forwarded:
                continue
            state.forwarded.add(event.mid)
            due = behavior_forward_time(t_seen, event.t)
            with state.lock:
                heapq.heappush(state.pending_forwards, (due, event.mid))
            scheduled.append(ScheduledForward(due, event, message))
    state.counters.polls_completed += 1
    return scheduled


class StoreFetcher:
    """Reads followee feeds straight from a feed store."""

    def __init__(self, store, endpoints, empty):
        self.store = store
        self.endpoints = endpoints
        self.empty = empty

    def fetch_one(self, uid):
        try:
            document = self.store.read(self.endpoints[uid])
        except EndpointUnreachable as exc:
            return uid, exc
        return uid, document if document is not None else self.empty(uid)

    def fetch_many(self, uids):
        return [self.fetch_one(uid) for uid in uids]


class PooledFetcher(StoreFetcher):
    """Fetches the followees of one poll round in parallel."""

    def __init__(self, store, endpoints, empty, executor):
        super().__init__(store, endpoints, empty)
        self.executor = executor

    def fetch_many(self, uids):
        return list(self.executor.map(self.fetch_one, uids))
