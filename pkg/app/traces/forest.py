"""
Forward forests built from traces, and the statistics fitted from them.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Tuple

import networkx as nx
import numpy as np

from core.codec import to_ms

logger = logging.getLogger(__name__)


class ForwardForest:
    """
    Directed forest of parent -> forward edges.

    Nodes are mids carrying the originating event under the 'event'
    attribute. Every node is reachable from exactly one root.
    """

    def __init__(self, graph, roots):
        self.graph = graph
        self.roots = list(roots)

    def __len__(self):
        return self.graph.number_of_nodes()

    def __contains__(self, mid):
        return mid in self.graph

    def event(self, mid):
        return self.graph.nodes[mid]['event']

    @property
    def events(self):
        return [data['event'] for _, data in self.graph.nodes(data=True)]

    def edges(self):
        """(parent event, child event) for every forward."""
        for parent, child in self.graph.edges():
            yield self.event(parent), self.event(child)

    def forward_mids(self):
        return [child for _, child in self.graph.edges()]

    def depths(self, root):
        """Hop count of every node below a root, root included."""
        return nx.single_source_shortest_path_length(self.graph, root)

    def chain_ends(self):
        """
        (root mid, leaf mid, length) of every root-to-leaf chain.

        Roots that were never forwarded have no chains.
        """
        for root in self.roots:
            if self.graph.out_degree(root) == 0:
                continue
            for mid, depth in self.depths(root).items():
                if self.graph.out_degree(mid) == 0:
                    yield root, mid, depth

    def max_depth(self):
        return max((d for _, _, d in self.chain_ends()), default=0)

    def restricted(self, mids):
        """Sub-forest over the given mids, keeping this forest's roots."""
        mids = set(mids)
        graph = self.graph.subgraph(mids).copy()
        return ForwardForest(graph, [r for r in self.roots if r in mids])


def build_forward_forest(events):
    """
    Link forwards to their parents.

    A forward earlier than its parent, or whose parent is unknown, is dropped
    with a warning together with everything forwarded from it.
    """
    by_mid = {e.mid: e for e in events}
    children = {}
    for event in events:
        if event.is_forward:
            children.setdefault(event.parent_mid, []).append(event)
    graph = nx.DiGraph()
    roots = [e.mid for e in events if not e.is_forward]
    queue = deque()
    for mid in roots:
        graph.add_node(mid, event=by_mid[mid])
        queue.append(mid)
    while queue:
        parent = by_mid[queue.popleft()]
        for child in children.get(parent.mid, ()):
            if child.t < parent.t:
                logger.warning(
                    'dropping forward %s: posted %.3fs before its parent %s',
                    child.mid, parent.t - child.t, parent.mid,
                )
                continue
            graph.add_node(child.mid, event=child)
            graph.add_edge(parent.mid, child.mid)
            queue.append(child.mid)
    orphans = sum(1 for e in events if e.mid not in graph)
    if orphans:
        logger.warning('%d forwards not linked into the forest', orphans)
    return ForwardForest(graph, roots)


@dataclass(frozen=True)
class TraceStats:
    """Delay and chain-length samples of a forest."""
    intrinsic_delays: Tuple[float, ...]
    chain_lengths: Tuple[int, ...]
    mean_L: float
    roots: int = 0
    forwards: int = 0

    @property
    def positive_delays(self):
        return tuple(d for d in self.intrinsic_delays if d > 0)


def extract_stats(forest):
    """Collect intrinsic delays and chain lengths of a forest."""
    delays = tuple(
        (to_ms(child.t) - to_ms(parent.t)) / 1000
        for parent, child in forest.edges()
    )
    lengths = tuple(length for _, _, length in forest.chain_ends())
    return TraceStats(
        intrinsic_delays=delays,
        chain_lengths=lengths,
        mean_L=float(np.mean(lengths)) if lengths else 0.0,
        roots=len(forest.roots),
        forwards=len(delays),
    )
