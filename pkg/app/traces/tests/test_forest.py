"""
Tests for forward forests and trace statistics.
"""
from django.test import SimpleTestCase

from traces.forest import build_forward_forest, extract_stats
from traces.records import EventKind, TraceEvent


def update(mid, t):
    return TraceEvent(EventKind.UPDATE, mid, None, 'u0', 'n0', t)


def forward(mid, parent, t, uid='u1'):
    return TraceEvent(EventKind.FORWARD, mid, parent, uid, f'n{uid}', t)


class ForwardForestTests(SimpleTestCase):
    """Test linking forwards to their parents."""

    def test_chain(self):
        forest = build_forward_forest([
            update('m0', 0), forward('m1', 'm0', 10), forward('m2', 'm1', 25),
        ])

        self.assertEqual(forest.roots, ['m0'])
        self.assertEqual(forest.max_depth(), 2)
        self.assertEqual(list(forest.chain_ends()), [('m0', 'm2', 2)])

    def test_branching(self):
        forest = build_forward_forest([
            update('m0', 0), forward('m1', 'm0', 5), forward('m2', 'm0', 7),
        ])

        self.assertEqual(forest.graph.out_degree('m0'), 2)
        self.assertEqual(sorted(forest.forward_mids()), ['m1', 'm2'])

    def test_child_before_parent_dropped(self):
        """Test an earlier child is dropped with its subtree."""
        events = [
            update('m0', 10), forward('m1', 'm0', 5), forward('m2', 'm1', 20),
        ]

        with self.assertLogs('traces.forest', level='WARNING') as logs:
            forest = build_forward_forest(events)

        self.assertEqual(len(forest), 1)
        self.assertNotIn('m2', forest)
        self.assertIn('dropping forward m1', logs.output[0])

    def test_equal_times_kept(self):
        forest = build_forward_forest(
            [update('m0', 3), forward('m1', 'm0', 3)]
        )

        self.assertIn('m1', forest)

    def test_restricted(self):
        forest = build_forward_forest([
            update('m0', 0), forward('m1', 'm0', 1), update('m2', 2),
        ])

        sub = forest.restricted(['m0', 'm1'])

        self.assertEqual(sub.roots, ['m0'])
        self.assertEqual(len(sub), 2)


class ExtractStatsTests(SimpleTestCase):
    """Test delays and chain lengths."""

    def test_chain(self):
        stats = extract_stats(build_forward_forest([
            update('m0', 0), forward('m1', 'm0', 10), forward('m2', 'm1', 25),
        ]))

        self.assertEqual(stats.intrinsic_delays, (10.0, 15.0))
        self.assertEqual(stats.chain_lengths, (2,))
        self.assertEqual(stats.mean_L, 2.0)

    def test_two_children(self):
        stats = extract_stats(build_forward_forest([
            update('m0', 0), forward('m1', 'm0', 5), forward('m2', 'm0', 7),
        ]))

        self.assertEqual(stats.chain_lengths, (1, 1))
        self.assertEqual(stats.mean_L, 1.0)

    def test_unforwarded_roots(self):
        stats = extract_stats(build_forward_forest([update('m0', 0)]))

        self.assertEqual(stats.chain_lengths, ())
        self.assertEqual(stats.mean_L, 0.0)
        self.assertEqual(stats.roots, 1)

    def test_edges_match_forwards(self):
        events = [update('m0', 0), forward('m1', 'm0', 0),
                  forward('m2', 'm1', 0.5), forward('m3', 'm0', 2)]

        stats = extract_stats(build_forward_forest(events))

        self.assertEqual(stats.forwards, 3)
        self.assertTrue(all(d >= 0 for d in stats.intrinsic_delays))
        self.assertEqual(sorted(stats.positive_delays), [0.5, 2.0])
