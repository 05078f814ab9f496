"""
Test the toolkit's management commands end to end.
"""
import csv
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from analytics.serializers import load_model
from harness.simlog import SimLog
from traces.records import parse_trace
from traces.topology import Topology


def run(*args, **options):
    """Call a command and return what it printed."""
    out = StringIO()
    call_command(*args, stdout=out, **options)
    return out.getvalue()


class CommandLineTests(SimpleTestCase):
    """Test the synth, run, analyze and compare pipeline."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.tmp = tempfile.TemporaryDirectory()
        cls.root = Path(cls.tmp.name)
        cls.topology = str(cls.root / 'topology.tsv')
        cls.trace = str(cls.root / 'trace.tsv')
        cls.runs = cls.root / 'runs'
        run('synth_topology', users=30, mean_followees=4, seed=1,
            out=str(cls.root))
        run('synth_trace', topology=cls.topology, roots=40,
            window='0,3600', seed=1, out=str(cls.root))
        run('run', trace=cls.trace, topology=cls.topology,
            sweep='100,200,400', seed=1, out=str(cls.runs))

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()
        super().tearDownClass()

    def test_synth_topology(self):
        with open(self.topology) as fh:
            topology = Topology.load(fh)

        self.assertEqual(len(topology), 30)

    def test_synth_topology_too_small(self):
        with self.assertRaises(CommandError):
            run('synth_topology', users=1, out=str(self.root / 'small'))

    def test_synth_trace(self):
        with open(self.trace) as fh:
            events = parse_trace(fh)

        self.assertEqual(sum(1 for e in events if not e.is_forward), 40)
        self.assertTrue(all(e.t >= 0 for e in events))

    def test_synth_trace_bad_window(self):
        with self.assertRaises(CommandError):
            run('synth_trace', topology=self.topology, window='10,5',
                out=str(self.root / 'bad'))

    def test_synth_trace_missing_topology(self):
        with self.assertRaisesMessage(CommandError, 'missing inputs'):
            run('synth_trace', topology=str(self.root / 'nope.tsv'),
                out=str(self.root / 'bad'))

    def test_sweep_writes_one_simlog_per_gap(self):
        names = sorted(p.name for p in self.runs.glob('simlog*.tsv'))

        self.assertEqual(names, ['simlog-h100.tsv', 'simlog-h200.tsv',
                                 'simlog-h400.tsv'])
        with open(self.runs / 'simlog-h200.tsv') as fh:
            simlog = SimLog.load(fh)
        self.assertEqual(simlog.h, 200)
        self.assertEqual(len(simlog.bots), 30)

    def test_single_run(self):
        out = self.root / 'single'

        printed = run('run', trace=self.trace, topology=self.topology,
                      h=300, out=str(out))

        self.assertTrue((out / 'simlog.tsv').exists())
        self.assertIn('h=300 bots=30', printed)

    def test_run_with_fetch_latency(self):
        """Test per-query latency reaches the virtual run."""
        out = self.root / 'latency'

        run('run', trace=self.trace, topology=self.topology, h=30,
            fetch_latency=1.5, out=str(out))

        with open(out / 'simlog.tsv') as fh:
            simlog = SimLog.load(fh)
        self.assertEqual(simlog.metadata['fetch_latency'], '1.5')

    def test_run_needs_query_gap(self):
        with self.assertRaises(CommandError):
            run('run', trace=self.trace, topology=self.topology,
                out=str(self.root / 'bad'))

    def test_usage_error(self):
        with self.assertRaises(CommandError):
            call_command('run', '--mode', 'sometimes', stdout=StringIO())

    def test_toolkit_error_becomes_command_error(self):
        trace = self.root / 'stranger.tsv'
        trace.write_text('update\tm0\t-\tstranger\ts\t1.000\thi\n')

        with self.assertRaisesMessage(CommandError, 'stranger'):
            run('run', trace=str(trace), topology=self.topology, h=60,
                out=str(self.root / 'bad'))

    def test_predict(self):
        out = self.root / 'predict'

        run('predict', sweep='60,600,1200', out=str(out))

        with open(out / 'predictions.csv', newline='') as fh:
            rows = list(csv.DictReader(fh))
        self.assertEqual([r['h'] for r in rows], ['60', '600', '1200'])
        values = [float(r['predicted_efd']) for r in rows]
        self.assertEqual(values, sorted(values))

    def test_fit(self):
        out = self.root / 'fit'
        run('synth_trace', topology=self.topology, roots=500, seed=2,
            out=str(out))

        printed = run('fit', trace=str(out / 'trace.tsv'), out=str(out))

        model = load_model(out / 'model.json')
        self.assertLess(model.c, 0)
        self.assertIn('roots=500', printed)

    def test_fit_too_few_forwards(self):
        with self.assertRaises(CommandError):
            run('fit', trace=self.trace, out=str(self.root / 'nofit'))

    def test_analyze(self):
        out = self.root / 'analyze'

        run('analyze', trace=self.trace, topology=self.topology,
            simlog=[str(self.runs)], out=str(out))

        self.assertTrue((out / 'cdf-h100.csv').exists())
        self.assertIn('h: 400s', (out / 'summary.txt').read_text())
        with open(out / 'efd.csv', newline='') as fh:
            self.assertEqual(len(list(csv.DictReader(fh))), 3)

    def test_compare_within_tolerance(self):
        out = self.root / 'compare'

        printed = run('compare', trace=self.trace, topology=self.topology,
                      simlog=[str(self.runs)], tolerance=100, out=str(out))

        self.assertTrue((out / 'comparison.csv').exists())
        self.assertTrue((out / 'resources.csv').exists())
        self.assertIn('query rate', printed)

    def test_compare_flagged_exit_status(self):
        with self.assertRaises(CommandError) as cm:
            run('compare', trace=self.trace, topology=self.topology,
                simlog=[str(self.runs)], tolerance=0,
                out=str(self.root / 'flagged'))

        self.assertEqual(cm.exception.returncode, 2)

    def test_compare_without_resource_fit(self):
        out = self.root / 'compare-one'

        printed = run('compare', trace=self.trace, topology=self.topology,
                      simlog=[str(self.runs / 'simlog-h100.tsv')],
                      tolerance=100, out=str(out))

        self.assertIn('no resource fit', printed)
        self.assertFalse((out / 'resources.csv').exists())
