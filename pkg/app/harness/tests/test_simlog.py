"""
Tests for run logs.
"""
import io

from django.test import SimpleTestCase

from channel.counters import ResourceCounters
from core.exceptions import MalformedTrace
from harness.simlog import SimLog


class SimLogTests(SimpleTestCase):
    """Test writing and reading run logs."""

    def setUp(self):
        self.simlog = SimLog(metadata={'mode': 'real', 'h': '300.0',
                                       'accel': '12'})
        self.simlog.record('m0', 'u1', 'update', 10, 10)
        self.simlog.record('m1', 'u2', 'forward', 20.5, 321.25)
        self.simlog.bots['u1'] = ResourceCounters(
            queries_issued=3, queries_served=4, bytes_served=900,
            messages_stored=1, polls_completed=3,
        )
        self.simlog.raw['m1'] = 25.1

    def dump(self):
        stream = io.StringIO()
        self.simlog.dump(stream)
        return stream.getvalue()

    def test_format(self):
        lines = self.dump().splitlines()

        self.assertEqual(lines[:3], ['# mode=real', '# h=300.0', '# accel=12'])
        self.assertIn('MSG\tm1\tu2\tforward\t20.500\t321.250', lines)
        self.assertIn('BOT\tu1\t3\t4\t900\t3\t1', lines)
        self.assertIn('RAW\tm1\t25.100000', lines)

    def test_load(self):
        loaded = SimLog.load(io.StringIO(self.dump()))

        self.assertEqual(loaded.h, 300)
        self.assertEqual(loaded.mode, 'real')
        self.assertEqual(loaded.messages, self.simlog.messages)
        self.assertEqual(loaded.bots, self.simlog.bots)
        self.assertEqual(loaded.raw, self.simlog.raw)

    def test_efd(self):
        self.assertEqual(self.simlog.messages['m1'].efd_ms, 300750)

    def test_missing_h(self):
        with self.assertRaises(MalformedTrace):
            SimLog.load(['MSG\tm0\tu1\tupdate\t1.000\t1.000\n'])

    def test_bad_record(self):
        with self.assertRaises(MalformedTrace) as cm:
            SimLog.load(['# h=1\n', 'BOT\tu1\tmany\t0\t0\t0\t0\n'])

        self.assertEqual(cm.exception.lineno, 2)

    def test_unknown_record(self):
        with self.assertRaises(MalformedTrace):
            SimLog.load(['# h=1\n', 'LOG\tsomething\n'])
