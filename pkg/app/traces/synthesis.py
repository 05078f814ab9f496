"""
Synthetic traces drawn from a fitted model.
"""
import logging

import numpy as np

from traces.records import EventKind, TraceEvent

logger = logging.getLogger(__name__)


def synth_trace(model, n_roots, window, topology, seed=0):
    """
    Roots uniform over `window` by random users, each followed by a chain
    of forwards.

    Each forwarder is a random follower of the previous author, or a random
    other user when that author has no followers.
    """
    t0, t1 = window
    if not 0 <= t0 <= t1:
        raise ValueError(f'invalid window {window!r}')
    if n_roots < 0:
        raise ValueError('root count must be non-negative')
    if not len(topology):
        raise ValueError('cannot synthesize a trace on an empty topology')
    delays = model.delay_law()
    lengths = model.length_law()
    rng = np.random.default_rng(seed)
    uids = topology.uids
    times = np.sort(rng.uniform(t0, t1, n_roots))
    authors = rng.integers(len(uids), size=n_roots)
    chain_lengths = lengths.sample(rng, n_roots)
    events = []
    for k in range(n_roots):
        uid = uids[authors[k]]
        mid = f'r{k:06d}'
        root = TraceEvent(
            EventKind.UPDATE, mid, None, uid, topology.uname(uid),
            float(times[k]), f'message {mid}',
        )
        events.append(root)
        parent = root
        for step, delay in enumerate(delays.sample(rng, chain_lengths[k]), 1):
            forwarder = _pick_forwarder(rng, topology, uids, parent.uid)
            parent = TraceEvent(
                EventKind.FORWARD, f'{mid}.{step}', parent.mid, forwarder,
                topology.uname(forwarder), parent.t + float(delay),
            )
            events.append(parent)
    logger.info('synthesized %d roots and %d forwards',
                n_roots, len(events) - n_roots)
    return events


def _pick_forwarder(rng, topology, uids, author):
    followers = topology.followers(author)
    if followers:
        return followers[rng.integers(len(followers))]
    if len(uids) == 1:
        return author
    pick = uids[rng.integers(len(uids) - 1)]
    # skip over the author
    return pick if pick != author else uids[-1]
