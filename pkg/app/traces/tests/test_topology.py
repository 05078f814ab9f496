"""
Tests for follow topologies.
"""
import io

from django.test import SimpleTestCase

from core.exceptions import MalformedTrace, TopologyMismatch
from traces.topology import PULL, PUSH, Topology


class TopologyTests(SimpleTestCase):
    """Test building and reading topologies."""

    def setUp(self):
        self.topology = Topology()
        self.topology.add_user('u1', 'alice')
        self.topology.add_user('u2', 'bob')

    def test_follow(self):
        self.topology.follow('u1', 'u2')

        self.assertTrue(self.topology.follows('u1', 'u2'))
        self.assertFalse(self.topology.follows('u2', 'u1'))
        self.assertEqual(self.topology.followers('u2'), ['u1'])
        self.assertEqual(self.topology.link_kind('u1', 'u2'), PULL)

    def test_no_self_loops(self):
        with self.assertRaises(ValueError):
            self.topology.follow('u1', 'u1')

    def test_unknown_followee(self):
        with self.assertRaises(TopologyMismatch):
            self.topology.follow('u1', 'u9')

    def test_unknown_uname(self):
        with self.assertRaises(TopologyMismatch):
            self.topology.uname('u9')

    def test_uname_with_space(self):
        with self.assertRaises(ValueError):
            self.topology.add_user('u3', 'two words')

    def test_dump_and_load(self):
        self.topology.follow('u1', 'u2', PUSH)
        self.topology.follow('u2', 'u1')
        stream = io.StringIO()

        self.topology.dump(stream)
        loaded = Topology.load(stream.getvalue().splitlines())

        self.assertEqual(
            stream.getvalue(), 'u1\talice\tu2:push\nu2\tbob\tu1\n'
        )
        self.assertEqual(loaded.link_kind('u1', 'u2'), PUSH)
        self.assertEqual(loaded.followees('u2'), ['u1'])


class TopologyLoadTests(SimpleTestCase):
    """Test topology file errors."""

    def test_forward_reference(self):
        topology = Topology.load(['a\tA\tb\n', 'b\tB\t\n'])

        self.assertEqual(topology.followees('a'), ['b'])

    def test_explicit_pull_suffix(self):
        topology = Topology.load(['a\tA\tb:pull\n', 'b\tB\t\n'])

        self.assertEqual(topology.link_kind('a', 'b'), PULL)

    def test_unknown_followee(self):
        with self.assertRaises(MalformedTrace) as cm:
            Topology.load(['a\tA\t\n', 'b\tB\tzzz\n'])

        self.assertEqual(cm.exception.lineno, 2)

    def test_self_follow(self):
        with self.assertRaises(MalformedTrace):
            Topology.load(['a\tA\ta\n'])

    def test_unknown_kind(self):
        with self.assertRaises(MalformedTrace):
            Topology.load(['a\tA\tb:carrier\n', 'b\tB\t\n'])

    def test_duplicate_user(self):
        with self.assertRaises(MalformedTrace):
            Topology.load(['a\tA\t\n', 'a\tA\t\n'])

    def test_field_count(self):
        with self.assertRaises(MalformedTrace):
            Topology.load(['a\tA\n'])


class SynthTopologyTests(SimpleTestCase):
    """Test random topologies."""

    def test_two_users_one_followee(self):
        topology = Topology.synth(2, 1, seed=3)

        self.assertEqual(topology.uids, ['u0', 'u1'])
        for uid in topology.uids:
            self.assertNotIn(uid, topology.followees(uid))
            self.assertLessEqual(len(topology.followees(uid)), 1)

    def test_no_self_loops_and_degree_cap(self):
        topology = Topology.synth(50, 200, seed=1)

        for uid in topology.uids:
            followees = topology.followees(uid)
            self.assertNotIn(uid, followees)
            self.assertEqual(len(followees), 49)

    def test_deterministic(self):
        first, second = io.StringIO(), io.StringIO()

        Topology.synth(200, 5, seed=7).dump(first)
        Topology.synth(200, 5, seed=7).dump(second)

        self.assertEqual(first.getvalue(), second.getvalue())

    def test_mean_degree(self):
        topology = Topology.synth(2000, 10, seed=2)

        self.assertAlmostEqual(topology.edge_count() / 2000, 10, delta=0.5)

    def test_invalid_sizes(self):
        with self.assertRaises(ValueError):
            Topology.synth(0, 1)
        with self.assertRaises(ValueError):
            Topology.synth(5, -1)
