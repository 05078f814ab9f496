"""
Follow graphs between users.

An edge u -> v means u follows v; its 'kind' attribute is the link kind
('pull' or 'push'). File format, one user per line, tab-separated:
uid, uname, comma-separated followees with an optional ':push' suffix.
"""
import logging

import networkx as nx
import numpy as np

from core.exceptions import MalformedTrace, TopologyMismatch

logger = logging.getLogger(__name__)

PULL = 'pull'
PUSH = 'push'
LINK_KINDS = (PULL, PUSH)


class Topology:
    """Users and who follows whom."""

    def __init__(self, graph=None):
        self.graph = graph if graph is not None else nx.DiGraph()

    def __len__(self):
        return self.graph.number_of_nodes()

    def __contains__(self, uid):
        return uid in self.graph

    @property
    def uids(self):
        return list(self.graph.nodes)

    def add_user(self, uid, uname):
        if not uid or not uname or any(c.isspace() for c in uname):
            raise ValueError(f'invalid user {uid!r}/{uname!r}')
        self.graph.add_node(uid, uname=uname)

    def follow(self, uid, followee, kind=PULL):
        if kind not in LINK_KINDS:
            raise ValueError(f'unknown link kind {kind!r}')
        if uid == followee:
            raise ValueError(f'{uid} cannot follow itself')
        for user in (uid, followee):
            if user not in self.graph:
                raise TopologyMismatch(f'unknown user {user}')
        self.graph.add_edge(uid, followee, kind=kind)

    def uname(self, uid):
        try:
            return self.graph.nodes[uid]['uname']
        except KeyError:
            raise TopologyMismatch(f'unknown user {uid}') from None

    def followees(self, uid):
        """Uids `uid` follows, in insertion order."""
        return list(self.graph.successors(uid))

    def followers(self, uid):
        return list(self.graph.predecessors(uid))

    def follows(self, uid, followee):
        return self.graph.has_edge(uid, followee)

    def link_kind(self, uid, followee):
        return self.graph.edges[uid, followee]['kind']

    def edge_count(self):
        return self.graph.number_of_edges()

    def dump(self, stream):
        for uid, data in self.graph.nodes(data=True):
            links = ','.join(
                f if self.link_kind(uid, f) == PULL else f'{f}:{PUSH}'
                for f in self.followees(uid)
            )
            stream.write(f'{uid}\t{data["uname"]}\t{links}\n')

    @classmethod
    def load(cls, lines):
        """Read a topology file; followees may be declared on later lines."""
        rows = []
        topology = cls()
        for lineno, line in enumerate(lines, start=1):
            if not line.strip() or line.startswith('#'):
                continue
            fields = line.rstrip('\n').split('\t')
            if len(fields) != 3:
                raise MalformedTrace(
                    f'expected 3 fields, got {len(fields)}', lineno
                )
            uid, uname, links = fields
            if uid in topology:
                raise MalformedTrace(f'duplicate user {uid}', lineno)
            try:
                topology.add_user(uid, uname)
            except ValueError as exc:
                raise MalformedTrace(str(exc), lineno) from exc
            rows.append((lineno, uid, links))
        for lineno, uid, links in rows:
            for link in filter(None, links.split(',')):
                followee, _, kind = link.partition(':')
                try:
                    topology.follow(uid, followee, kind or PULL)
                except (ValueError, TopologyMismatch) as exc:
                    raise MalformedTrace(str(exc), lineno) from exc
        return topology

    @classmethod
    def synth(cls, n_users, mean_followees, seed=0):
        """
        Random pull topology with Poisson out-degrees.

        Out-degrees are capped at n_users - 1 and no user follows itself.
        """
        if n_users < 1:
            raise ValueError('a topology needs at least one user')
        if mean_followees < 0:
            raise ValueError('mean followee count must be non-negative')
        rng = np.random.default_rng(seed)
        width = len(str(n_users - 1))
        uids = [f'u{i:0{width}d}' for i in range(n_users)]
        topology = cls()
        for i, uid in enumerate(uids):
            topology.add_user(uid, f'user{i}')
        degrees = np.minimum(rng.poisson(mean_followees, n_users), n_users - 1)
        for i, degree in enumerate(degrees):
            picks = rng.choice(n_users - 1, size=int(degree), replace=False)
            for j in np.sort(picks):
                # skip over self
                target = int(j) + (j >= i)
                topology.graph.add_edge(uids[i], uids[target], kind=PULL)
        logger.info('synthesized topology: %d users, %d follows',
                    n_users, topology.edge_count())
        return topology
