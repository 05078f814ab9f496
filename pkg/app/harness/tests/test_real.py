"""
Tests for real-mode runs over HTTP.
"""
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from harness.simulation import run_simulation
from traces.records import EventKind, TraceEvent
from traces.topology import Topology


class RealRunTests(SimpleTestCase):
    """Test a small accelerated run on a free port."""

    def test_small_run(self):
        topology = Topology()
        for uid in ('a', 'b', 'c'):
            topology.add_user(uid, f'user_{uid}')
        topology.follow('b', 'a')
        topology.follow('c', 'a')
        trace = [
            TraceEvent(EventKind.UPDATE, 'm0', None, 'a', 'user_a', 0, 'go'),
            TraceEvent(EventKind.FORWARD, 'm1', 'm0', 'b', 'user_b', 5),
        ]

        with tempfile.TemporaryDirectory() as tmp:
            simlog = run_simulation(
                trace, topology, 10, seed=1, mode='real', accel=20,
                host='127.0.0.1', port=0, work_dir=tmp, workers=4,
                fetch_workers=2,
            )
            published = (Path(tmp) / 'feeds' / 'b.atom').read_bytes()

        self.assertEqual(simlog.mode, 'real')
        self.assertEqual(simlog.metadata['accel'], '20')
        self.assertEqual(set(simlog.messages), {'m0', 'm1'})
        for record in simlog.messages.values():
            self.assertGreaterEqual(record.efd_ms, 0)
        self.assertEqual(set(simlog.raw), {'m0', 'm1'})
        self.assertIn(b'RT @user_a go', published)
        self.assertGreater(simlog.bots['a'].queries_served, 0)
        self.assertEqual(simlog.bots['b'].messages_stored, 1)
