"""
Replay plans: which bot posts which trace message, and after which parent.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import networkx as nx

from core.exceptions import TopologyMismatch
from traces.forest import build_forward_forest
from traces.topology import PUSH

logger = logging.getLogger(__name__)


@dataclass
class ReplayPlan:
    """
    Roots in posting order and forwards keyed by (forwarder, parent mid).

    `forest` holds exactly the replayable messages.
    """
    roots: List = field(default_factory=list)
    forwards: Dict[Tuple[str, str], List] = field(default_factory=dict)
    events: Dict[str, object] = field(default_factory=dict)
    forest: object = None
    dropped: List[str] = field(default_factory=list)

    @property
    def max_depth(self):
        return self.forest.max_depth() if self.forest is not None else 0

    @property
    def span(self):
        """(first root time, last event time), or None when empty."""
        if not self.roots:
            return None
        return (min(e.t for e in self.roots),
                max(e.t for e in self.events.values()))

    def forwards_for(self, uid, parent_mid):
        return self.forwards.get((uid, parent_mid), ())


def replay_plan(events, topology):
    """
    Sanitize a trace for replay on a topology.

    Roots by unknown users are an error. Forwards by unknown users, or by
    users who do not follow the parent's author, can never be observed and
    are dropped with a warning along with their own forwards.
    """
    forest = build_forward_forest(events)
    roots = [forest.event(mid) for mid in forest.roots]
    missing = sorted({e.uid for e in roots if e.uid not in topology})
    if missing:
        raise TopologyMismatch(
            f'{len(missing)} trace authors missing from topology: '
            + ', '.join(missing[:10])
        )
    warned_push = set()
    plan = ReplayPlan(
        roots=sorted(roots, key=lambda e: (e.t, e.uid, e.mid)),
    )
    queue = deque()
    for event in roots:
        plan.events[event.mid] = event
        queue.append(event)
    while queue:
        parent = queue.popleft()
        for child_mid in forest.graph.successors(parent.mid):
            child = forest.event(child_mid)
            reason = None
            if child.uid not in topology:
                reason = f'user {child.uid} not in topology'
            elif not topology.follows(child.uid, parent.uid):
                reason = f'{child.uid} does not follow {parent.uid}'
            if reason:
                logger.warning('dropping forward %s: %s', child_mid, reason)
                plan.dropped.append(child_mid)
                plan.dropped.extend(
                    sorted(nx.descendants(forest.graph, child_mid))
                )
                continue
            edge = (child.uid, parent.uid)
            if topology.link_kind(*edge) == PUSH and edge not in warned_push:
                warned_push.add(edge)
                logger.warning('%s follows %s by push; replaying as pull',
                               *edge)
            plan.events[child.mid] = child
            plan.forwards.setdefault((child.uid, parent.mid), []).append(child)
            queue.append(child)
    plan.forest = forest.restricted(plan.events)
    if plan.dropped:
        logger.warning('%d trace forwards cannot be replayed',
                       len(plan.dropped))
    return plan

