"""
Run loops over a replay plan.

Queue entries are (time, kind, uid, mid); equal times order posts before
forwards before polls, then by uid and mid.
"""
import heapq
import logging
import math
import time

from django.conf import settings

from channel.channels import (
    ChannelConfig,
    ChannelKind,
    Subscription,
    channel_open,
)
from channel.store import MemoryFeedStore
from harness.bots import BotConfig, StoreFetcher, bot_init, bot_poll
from harness.plan import replay_plan
from harness.simlog import SimLog

logger = logging.getLogger(__name__)

POST = 0
FORWARD = 1
POLL = 2


class Run:
    """Shared setup and bookkeeping of a DSN run."""
    mode = None

    def __init__(self, events, topology, h, seed=0, duration=None,
                 feed_entry_limit=None):
        if not h > 0 or not math.isfinite(h):
            raise ValueError(f'query gap must be positive, got {h!r}')
        self.topology = topology
        self.h = h
        self.seed = seed
        self.feed_entry_limit = (
            feed_entry_limit or settings.DSNBENCH_FEED_ENTRY_LIMIT
        )
        self.plan = replay_plan(events, topology)
        span = self.plan.span
        if span is None:
            self.run_start = 0.0
            default = settings.DSNBENCH_DEFAULT_DURATION
        else:
            self.run_start = float(math.floor(span[0]))
            default = span[1] - self.run_start + (self.plan.max_depth + 1) * h
        self.duration = default if duration is None else duration
        if self.duration < 0:
            raise ValueError('run duration must be non-negative')
        self.run_end = self.run_start + self.duration
        self.states = {
            uid: bot_init(
                BotConfig(uid, h, feed_entry_limit=self.feed_entry_limit),
                topology, seed, self.run_start,
            )
            for uid in topology.uids
        }
        self.parents = {}
        self.queue = []
        self.simlog = SimLog()

    def open_channels(self, endpoint, subscription_endpoint, **kwargs):
        channels = {}
        for uid in self.topology.uids:
            config = ChannelConfig(
                channel_id=uid,
                platform=ChannelKind.FEED_PULL,
                self_userid=uid,
                self_username=self.topology.uname(uid),
                endpoint=endpoint(uid),
                subscriptions=tuple(
                    Subscription(f, subscription_endpoint(f))
                    for f in self.states[uid].followees
                ),
                feed_entry_limit=self.feed_entry_limit,
            )
            channels[uid] = channel_open(config, **kwargs)
        return channels

    def seed_queue(self):
        self.queue = [(e.t, POST, e.uid, e.mid) for e in self.plan.roots]
        for uid, state in self.states.items():
            if state.next_poll <= self.run_end:
                self.queue.append((state.next_poll, POLL, uid, ''))
        heapq.heapify(self.queue)

    def schedule_next_poll(self, state):
        state.polls_scheduled += 1
        t = state.next_poll
        if t <= self.run_end:
            heapq.heappush(self.queue, (t, POLL, state.uid, ''))

    def schedule_forward(self, uid, scheduled):
        self.parents[scheduled.event.mid] = scheduled.parent
        heapq.heappush(
            self.queue, (scheduled.due, FORWARD, uid, scheduled.event.mid)
        )

    def post(self, channel, uid, mid, now):
        event = self.plan.events[mid]
        if event.is_forward:
            self.states[uid].pop_forward(mid)
            message = channel.forward(
                self.parents.pop(mid), event.text or None, now, native_id=mid
            )
        else:
            message = channel.update(event.text, now, native_id=mid)
        self.simlog.record(mid, uid, event.kind.value, event.t, message.time)
        return message

    def finish(self, channels, **metadata):
        for state in self.states.values():
            for followee, queries in state.served_queries.items():
                served = self.states[followee].counters
                served.queries_served += queries
                served.bytes_served += state.served_bytes[followee]
        for uid, state in self.states.items():
            state.counters.messages_stored = \
                channels[uid].counters.messages_stored
            channels[uid].close()
        self.simlog.bots = {
            uid: state.counters for uid, state in self.states.items()
        }
        self.simlog.metadata = {
            'mode': self.mode,
            'h': repr(float(self.h)),
            'seed': str(self.seed),
            'run_start': repr(self.run_start),
            'duration': repr(float(self.duration)),
            'bots': str(len(self.states)),
            **{k: str(v) for k, v in metadata.items()},
        }
        unposted = len(self.plan.events) - len(self.simlog.messages)
        if unposted:
            logger.warning('%d planned messages were not posted before the '
                           'run ended', unposted)
        return self.simlog


class VirtualRun(Run):
    """Deterministic discrete-event run on a virtual clock."""
    mode = 'virtual'

    def __init__(self, *args, fetch_latency=0.0, **kwargs):
        super().__init__(*args, **kwargs)
        if fetch_latency < 0:
            raise ValueError('fetch latency must be non-negative')
        self.fetch_latency = fetch_latency

    def execute(self):
        started = time.monotonic()
        store = MemoryFeedStore()
        channels = self.open_channels(
            lambda uid: f'mem://{uid}', lambda uid: f'mem://{uid}',
            feeds=store,
        )
        fetcher = StoreFetcher(
            store,
            {uid: f'mem://{uid}' for uid in channels},
            lambda uid: channels[uid].document,
        )
        self.seed_queue()
        logger.info('virtual run: %d bots, %d messages, h=%s, %.0fs',
                    len(self.states), len(self.plan.events), self.h,
                    self.duration)
        while self.queue:
            t, kind, uid, mid = heapq.heappop(self.queue)
            if kind == POLL:
                state = self.states[uid]
                self.schedule_next_poll(state)
                for scheduled in bot_poll(state, fetcher, self.plan, t,
                                          self.fetch_latency):
                    self.schedule_forward(uid, scheduled)
            else:
                self.post(channels[uid], uid, mid, t)
        logger.info('virtual run finished in %.1fs',
                    time.monotonic() - started)
        return self.finish(channels, accel=1.0,
                           fetch_latency=self.fetch_latency)
