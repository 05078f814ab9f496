"""
Tests for EFD, resource and comparison reports.
"""
import csv
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from analytics.distributions import PUBLISHED_MODEL
from analytics.efd import predict_efd
from analytics.reports import (
    EfdReport,
    compare_report,
    comparison_summary,
    efd_summary,
    empirical_efd,
    resource_fit,
    write_cdf_csv,
    write_comparison_csv,
    write_efd_csv,
)
from channel.counters import ResourceCounters
from core.exceptions import FitError, MissingRecords
from harness.plan import replay_plan
from harness.simlog import SimLog
from harness.simulation import run_simulation
from traces.forest import build_forward_forest
from traces.records import EventKind, TraceEvent
from traces.synthesis import synth_trace
from traces.topology import Topology


def chain_events():
    return [
        TraceEvent(EventKind.UPDATE, 'm0', None, 'a', 'na', 0),
        TraceEvent(EventKind.FORWARD, 'm1', 'm0', 'b', 'nb', 10),
        TraceEvent(EventKind.FORWARD, 'm2', 'm1', 'c', 'nc', 30),
        TraceEvent(EventKind.FORWARD, 'm3', 'm0', 'c', 'nc', 50),
    ]


def simlog_for(posted, h=300):
    simlog = SimLog(metadata={'h': str(h)})
    for event in chain_events():
        simlog.record(event.mid, event.uid, event.kind.value, event.t,
                      posted.get(event.mid, event.t))
    return simlog


class EmpiricalEfdTests(SimpleTestCase):
    """Test EFD statistics of a run."""

    def setUp(self):
        self.forest = build_forward_forest(chain_events())

    def test_perfect_delivery(self):
        report = empirical_efd(simlog_for({}), self.forest)

        self.assertEqual(report.count, 3)
        self.assertEqual(report.fraction_zero, 1)
        self.assertEqual(report.empirical_mean, 0)
        self.assertEqual(report.cdf, ((0.0, 1.0),))

    def test_delays(self):
        report = empirical_efd(
            simlog_for({'m1': 10, 'm2': 72, 'm3': 50}), self.forest
        )

        self.assertEqual(report.empirical_mean, 14)
        self.assertEqual(report.chain_mean, 21)
        self.assertAlmostEqual(report.fraction_zero, 2 / 3)
        self.assertEqual(report.empirical_percentiles[50], 0)
        self.assertEqual(report.fraction_within[60], 1)
        self.assertEqual(report.cdf, ((0.0, 2 / 3), (42.0, 1.0)))

    def test_single_forward(self):
        events = chain_events()[:2]
        simlog = SimLog(metadata={'h': '60'})
        simlog.record('m0', 'a', 'update', 0, 0)
        simlog.record('m1', 'b', 'forward', 10, 52)

        report = empirical_efd(simlog, build_forward_forest(events))

        self.assertEqual(report.empirical_mean, 42)
        self.assertEqual(report.fraction_zero, 0)

    def test_percentiles_ordered(self):
        report = empirical_efd(
            simlog_for({'m1': 11, 'm2': 90, 'm3': 400}), self.forest
        )
        values = [report.empirical_percentiles[p] for p in (50, 68, 90, 99)]

        self.assertEqual(values, sorted(values))

    def test_with_model(self):
        report = empirical_efd(simlog_for({}), self.forest, PUBLISHED_MODEL)

        self.assertEqual(report.analytical_mean,
                         predict_efd(300, PUBLISHED_MODEL))
        self.assertEqual(report.relative_gap, -1)

    def test_missing_records(self):
        simlog = simlog_for({})
        del simlog.messages['m2']
        del simlog.messages['m3']

        with self.assertRaises(MissingRecords) as cm:
            empirical_efd(simlog, self.forest)

        self.assertEqual(cm.exception.mids, ['m2', 'm3'])

    def test_summary_text(self):
        report = empirical_efd(simlog_for({'m1': 12}), self.forest)

        text = efd_summary(report)

        self.assertIn('forwards: 3', text)
        self.assertIn('h: 300s', text)


class ResourceFitTests(SimpleTestCase):
    """Test fitting rates against the query gap."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        topology = Topology.synth(30, 4, seed=2)
        trace = synth_trace(PUBLISHED_MODEL, 15, (0, 1800), topology, seed=2)
        cls.simlogs = [
            run_simulation(trace, topology, h, seed=1)
            for h in (100, 200, 400)
        ]

    def test_virtual_rates_fit_exactly(self):
        report = resource_fit(self.simlogs)

        self.assertEqual([row.h for row in report.rows], [100, 200, 400])
        for row, residual in zip(report.rows, report.residuals_q):
            self.assertLess(abs(residual) / row.query_rate, 1e-9)
        self.assertGreater(report.beta_q, 0)
        self.assertGreaterEqual(report.beta_s, 0)

    def test_doubling_gap_halves_query_rate(self):
        rows = resource_fit(self.simlogs).rows

        self.assertAlmostEqual(rows[0].query_rate, 2 * rows[1].query_rate)

    def test_memory_independent_of_gap(self):
        report = resource_fit(self.simlogs)

        self.assertAlmostEqual(report.memory_fit[1], 0, places=6)

    def test_needs_three_gaps(self):
        with self.assertRaises(FitError):
            resource_fit(self.simlogs[:2])

    def test_repeated_runs_averaged(self):
        report = resource_fit(self.simlogs + self.simlogs[:1])

        self.assertEqual(report.rows[0].runs, 2)

    def test_polls_without_queries(self):
        simlogs = []
        for h in (10, 20, 40):
            simlog = SimLog(metadata={'h': str(h), 'duration': '400'})
            simlog.bots['a'] = ResourceCounters(polls_completed=400 // h)
            simlogs.append(simlog)

        report = resource_fit(simlogs)

        self.assertEqual(report.beta_q, 0)
        self.assertAlmostEqual(report.cpu_fit[1], 1)


def efd_report(h, chain_mean):
    return EfdReport(
        h=h, count=10, empirical_mean=chain_mean, chain_mean=chain_mean,
        empirical_percentiles={50: 0.0, 68: 0.0, 90: 0.0, 99: 0.0},
        fraction_zero=0.5,
    )


class CompareReportTests(SimpleTestCase):
    """Test model comparison tables."""

    def test_rows_sorted_and_flagged(self):
        near = predict_efd(1200, PUBLISHED_MODEL) * 1.05
        high = predict_efd(30, PUBLISHED_MODEL) * 2

        with self.assertLogs('analytics.reports', level='WARNING'):
            table = compare_report(
                [efd_report(1200, near), efd_report(30, high)],
                PUBLISHED_MODEL, tolerance=0.15,
            )

        self.assertEqual([row.h for row in table.rows], [30, 1200])
        self.assertTrue(table.rows[0].flagged)
        self.assertEqual(table.rows[0].direction, 'under-prediction')
        self.assertFalse(table.rows[1].flagged)
        self.assertAlmostEqual(table.rows[1].relative_gap, 0.05)
        self.assertTrue(table.flagged)

    def test_over_prediction(self):
        low = predict_efd(600, PUBLISHED_MODEL) * 0.5

        with self.assertLogs('analytics.reports', level='WARNING'):
            table = compare_report([efd_report(600, low)], PUBLISHED_MODEL)

        self.assertEqual(table.rows[0].direction, 'over-prediction')

    def test_empty(self):
        table = compare_report([], PUBLISHED_MODEL)

        self.assertEqual(len(table), 0)
        self.assertFalse(table.flagged)

    def test_written_files(self):
        reports = [efd_report(600, 100.0), efd_report(1200, 200.0)]
        table = compare_report(reports, PUBLISHED_MODEL, tolerance=10)

        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp)
            write_comparison_csv(table, out / 'comparison.csv')
            write_efd_csv(reports, out / 'efd.csv')
            write_cdf_csv(reports[0], out / 'cdf.csv')
            with open(out / 'comparison.csv', newline='') as fh:
                rows = list(csv.DictReader(fh))
            with open(out / 'efd.csv', newline='') as fh:
                header = next(csv.reader(fh))
            cdf = (out / 'cdf.csv').read_text()

        self.assertEqual([r['h'] for r in rows], ['600', '1200'])
        self.assertEqual(rows[0]['flagged'], 'no')
        self.assertIn('p68', header)
        self.assertEqual(cdf, 'efd_seconds,cumulative_fraction\n')
        self.assertIn('tolerance: 1000%', comparison_summary(table))


class ReplayedForestTests(SimpleTestCase):

    def test_report_over_replayed_forest(self):
        """Test a virtual run covers every replayable forward."""
        topology = Topology.synth(50, 5, seed=3)
        trace = synth_trace(PUBLISHED_MODEL, 30, (0, 3600), topology, seed=3)
        simlog = run_simulation(trace, topology, 300, seed=3)

        report = empirical_efd(simlog, replay_plan(trace, topology).forest)

        self.assertEqual(report.h, 300)
        self.assertGreaterEqual(min(v for v, _ in report.cdf), 0)
