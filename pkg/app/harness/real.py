"""
Real-mode runs: bots poll each other over HTTP on an accelerated clock.
"""
import heapq
import logging
import queue
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from django.conf import settings

from channel.server import FeedServer
from channel.store import HttpFeedReader, file_feeds
from harness.bots import PooledFetcher, bot_poll
from harness.runs import POLL, Run

logger = logging.getLogger(__name__)

# longest the scheduler sleeps before checking for finished polls
TICK = 0.05


class RealRun(Run):
    """
    Bots multiplexed on a worker pool, feeds served by an embedded server.

    Trace times are divided by `accel` on the wall clock; every recorded
    time is converted back to the trace timescale.
    """
    mode = 'real'

    def __init__(self, *args, accel=1.0, host=None, port=None, workers=None,
                 fetch_workers=None, work_dir=None, **kwargs):
        super().__init__(*args, **kwargs)
        if not accel >= 1:
            raise ValueError(f'acceleration must be at least 1, got {accel}')
        self.accel = accel
        self.host = host
        self.port = port
        self.workers = workers or settings.DSNBENCH_WORKERS
        self.fetch_workers = fetch_workers or settings.DSNBENCH_FETCH_WORKERS
        self.work_dir = work_dir
        self.wall_start = None
        self.results = queue.SimpleQueue()
        self.inflight = 0

    def trace_time(self):
        elapsed = time.monotonic() - self.wall_start
        return self.run_start + elapsed * self.accel

    def wall_time(self, t):
        return self.wall_start + (t - self.run_start) / self.accel

    def poll_task(self, state, fetcher, t):
        try:
            return state.uid, bot_poll(
                state, fetcher, self.plan, t, clock=self.trace_time
            )
        except Exception:
            logger.exception('poll of %s failed', state.uid)
            return state.uid, []

    def poll_done(self, future):
        self.inflight -= 1
        uid, scheduled = future.result()
        self.states[uid].busy = False
        for item in scheduled:
            self.schedule_forward(uid, item)

    def execute(self):
        work_dir = Path(self.work_dir or tempfile.mkdtemp(prefix='dsnbench-'))
        feed_dir = work_dir / 'feeds'
        with HttpFeedReader() as reader, \
                FeedServer(feed_dir, self.host, self.port) as server, \
                ThreadPoolExecutor(self.workers,
                                   thread_name_prefix='bot') as bots, \
                ThreadPoolExecutor(self.fetch_workers,
                                   thread_name_prefix='fetch') as fetches:
            channels = self.open_channels(
                lambda uid: str(feed_dir / f'{uid}.atom'), server.url
            )
            for channel in channels.values():
                file_feeds.write(channel.config.endpoint, channel.document)
            fetcher = PooledFetcher(
                reader, {uid: server.url(uid) for uid in channels},
                None, fetches,
            )
            self.seed_queue()
            logger.info('real run: %d bots on %s, h=%s, accel=%s, %.0fs wall',
                        len(self.states), server.url('<uid>'), self.h,
                        self.accel, self.duration / self.accel)
            self.wall_start = time.monotonic()
            self.loop(channels, fetcher, bots)
        return self.finish(channels, accel=self.accel, fetch_latency=0.0)

    def loop(self, channels, fetcher, bots):
        while self.queue or self.inflight:
            try:
                while True:
                    self.poll_done(self.results.get_nowait())
            except queue.Empty:
                pass
            if not self.queue:
                if self.inflight:
                    self.poll_done(self.results.get())
                continue
            t, kind, uid, mid = self.queue[0]
            wait = self.wall_time(t) - time.monotonic()
            if wait > 0:
                try:
                    self.poll_done(self.results.get(timeout=min(wait, TICK)))
                except queue.Empty:
                    pass
                continue
            heapq.heappop(self.queue)
            if kind == POLL:
                state = self.states[uid]
                self.schedule_next_poll(state)
                if state.busy:
                    logger.info('%s: previous poll still running, skipping',
                                uid)
                    continue
                state.busy = True
                self.inflight += 1
                future = bots.submit(self.poll_task, state, fetcher, t)
                future.add_done_callback(self.results.put)
            else:
                self.post(channels[uid], uid, mid, self.trace_time())
                self.simlog.raw[mid] = time.monotonic() - self.wall_start
