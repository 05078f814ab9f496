"""
Empirical EFD and resource reports, model comparison tables, and their
CSV/text renderings.
"""
import csv
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from django.conf import settings

from analytics.efd import cross_check, predict_efd
from core.exceptions import FitError, MissingRecords

logger = logging.getLogger(__name__)

PERCENTILES = (50, 68, 90, 99)
# delay thresholds reported as "forwarded within" fractions
WITHIN = (60, 600, 3600)


@dataclass
class EfdReport:
    h: float
    count: int
    empirical_mean: float
    chain_mean: float
    empirical_percentiles: Dict[int, float]
    fraction_zero: float
    fraction_within: Dict[int, float] = field(default_factory=dict)
    analytical_mean: Optional[float] = None
    relative_gap: Optional[float] = None
    cdf: Tuple[Tuple[float, float], ...] = ()


def relative_gap(empirical, analytical):
    if analytical > 0:
        return (empirical - analytical) / analytical
    return 0.0 if empirical == 0 else math.inf


def empirical_efd(simlog, forest, model=None):
    """
    EFD of every forward in the forest, from a SimLog.

    `chain_mean` averages the EFD of the last forward of each chain; it is
    the quantity the model predicts.
    """
    forwards = forest.forward_mids()
    missing = [mid for mid in forwards if mid not in simlog.messages]
    if missing:
        raise MissingRecords(missing)
    values = np.array(
        [simlog.messages[mid].efd_ms for mid in forwards], dtype=np.int64
    ) / 1000
    chains = np.array([
        simlog.messages[leaf].efd_ms for _, leaf, _ in forest.chain_ends()
    ], dtype=np.int64) / 1000
    if values.size:
        percentiles = dict(zip(
            PERCENTILES, (float(v) for v in np.percentile(values, PERCENTILES))
        ))
        points, counts = np.unique(values, return_counts=True)
        cumulative = np.cumsum(counts) / values.size
        cdf = tuple(zip(points.tolist(), cumulative.tolist()))
        within = {t: float(np.mean(values <= t)) for t in WITHIN}
    else:
        percentiles = {p: 0.0 for p in PERCENTILES}
        cdf = ()
        within = {t: 0.0 for t in WITHIN}
    report = EfdReport(
        h=simlog.h,
        count=int(values.size),
        empirical_mean=float(values.mean()) if values.size else 0.0,
        chain_mean=float(chains.mean()) if chains.size else 0.0,
        empirical_percentiles=percentiles,
        fraction_zero=float(np.mean(values == 0)) if values.size else 0.0,
        fraction_within=within,
        cdf=cdf,
    )
    if model is not None:
        report.analytical_mean = predict_efd(report.h, model)
        report.relative_gap = relative_gap(
            report.chain_mean, report.analytical_mean
        )
    return report


@dataclass
class ResourceRow:
    h: float
    runs: int
    query_rate: float
    byte_rate: float
    memory: float
    cpu: float


@dataclass
class ResourceReport:
    """
    Per-bot rates against 1/h.

    Query and byte rates are fitted through the origin; the memory proxy
    (messages stored) and CPU proxy (polls per second) get constant-plus-
    slope fits.
    """
    rows: Tuple[ResourceRow, ...]
    beta_q: float
    beta_s: float
    residuals_q: Tuple[float, ...]
    residuals_s: Tuple[float, ...]
    memory_fit: Tuple[float, float]
    cpu_fit: Tuple[float, float]

    @property
    def max_relative_residual(self):
        worst = 0.0
        for row, rq, rs in zip(self.rows, self.residuals_q, self.residuals_s):
            if row.query_rate:
                worst = max(worst, abs(rq) / row.query_rate)
            if row.byte_rate:
                worst = max(worst, abs(rs) / row.byte_rate)
        return worst


def _bot_rates(simlog):
    """Mean per-bot rates over each bot's polling span."""
    h = simlog.h
    duration = simlog.duration
    queries, volume, memory, cpu = [], [], [], []
    for counters in simlog.bots.values():
        span = counters.polls_completed * h
        queries.append(counters.queries_issued / span if span else 0.0)
        volume.append(counters.bytes_served / span if span else 0.0)
        memory.append(counters.messages_stored)
        cpu.append(counters.polls_completed / duration if duration else 0.0)
    if not queries:
        return 0.0, 0.0, 0.0, 0.0
    return (float(np.mean(queries)), float(np.mean(volume)),
            float(np.mean(memory)), float(np.mean(cpu)))


def _through_origin(x, y):
    denominator = float(x @ x)
    beta = float(x @ y) / denominator if denominator else 0.0
    return beta, tuple((y - beta * x).tolist())


def resource_fit(simlogs):
    """Fit per-bot query and byte rates as beta / h."""
    grouped = defaultdict(list)
    for simlog in simlogs:
        grouped[simlog.h].append(_bot_rates(simlog))
    if len(grouped) < 3:
        raise FitError(
            f'resource fit needs at least 3 query gaps, got {len(grouped)}'
        )
    rows = tuple(
        ResourceRow(h, len(rates), *np.mean(rates, axis=0).tolist())
        for h, rates in sorted(grouped.items())
    )
    x = np.array([1 / r.h for r in rows])
    query_rates = np.array([r.query_rate for r in rows])
    byte_rates = np.array([r.byte_rate for r in rows])
    beta_q, residuals_q = _through_origin(x, query_rates)
    beta_s, residuals_s = _through_origin(x, byte_rates)
    memory = np.polyfit(x, [r.memory for r in rows], 1)
    cpu = np.polyfit(x, [r.cpu for r in rows], 1)
    return ResourceReport(
        rows=rows,
        beta_q=beta_q,
        beta_s=beta_s,
        residuals_q=residuals_q,
        residuals_s=residuals_s,
        memory_fit=(float(memory[1]), float(memory[0])),
        cpu_fit=(float(cpu[1]), float(cpu[0])),
    )


@dataclass
class ComparisonRow:
    h: float
    count: int
    empirical_mean: float
    chain_mean: float
    analytical_mean: float
    relative_gap: float
    flagged: bool
    direction: str
    closed_form_gap: float


@dataclass
class ComparisonTable:
    rows: Tuple[ComparisonRow, ...] = ()
    tolerance: float = 0.0

    def __len__(self):
        return len(self.rows)

    @property
    def flagged(self):
        return any(row.flagged for row in self.rows)


def compare_report(reports, model, tolerance=None):
    """Empirical vs analytical chain EFD per query gap, sorted by h."""
    tolerance = (
        settings.DSNBENCH_COMPARE_TOLERANCE
        if tolerance is None else tolerance
    )
    rows = []
    for report in sorted(reports, key=lambda r: r.h):
        analytical = predict_efd(report.h, model)
        gap = relative_gap(report.chain_mean, analytical)
        flagged = abs(gap) > tolerance
        direction = ''
        if flagged:
            direction = 'under-prediction' if gap > 0 else 'over-prediction'
            logger.warning('h=%s: model %s by %.1f%%', report.h, direction,
                           100 * abs(gap))
        check = cross_check(report.h, model, n=100_000)
        rows.append(ComparisonRow(
            h=report.h,
            count=report.count,
            empirical_mean=report.empirical_mean,
            chain_mean=report.chain_mean,
            analytical_mean=analytical,
            relative_gap=gap,
            flagged=flagged,
            direction=direction,
            closed_form_gap=check.closed_form_gap,
        ))
    return ComparisonTable(tuple(rows), tolerance)


def _fmt(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, float):
        return f'{value:.6g}'
    return str(value)


def write_rows(path, header, rows):
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_efd_csv(reports, path):
    header = ['h', 'count', 'empirical_mean', 'chain_mean']
    header += [f'p{p}' for p in PERCENTILES]
    header += ['fraction_zero']
    header += [f'within_{t}s' for t in WITHIN]
    header += ['analytical_mean', 'relative_gap']
    write_rows(path, header, (
        [r.h, r.count, r.empirical_mean, r.chain_mean]
        + [r.empirical_percentiles[p] for p in PERCENTILES]
        + [r.fraction_zero]
        + [r.fraction_within.get(t) for t in WITHIN]
        + [r.analytical_mean, r.relative_gap]
        for r in sorted(reports, key=lambda r: r.h)
    ))


def write_cdf_csv(report, path):
    write_rows(path, ['efd_seconds', 'cumulative_fraction'], report.cdf)


def write_comparison_csv(table, path):
    write_rows(path, [
        'h', 'count', 'empirical_mean', 'chain_mean', 'analytical_mean',
        'relative_gap', 'flagged', 'direction', 'closed_form_gap',
    ], (
        [r.h, r.count, r.empirical_mean, r.chain_mean, r.analytical_mean,
         r.relative_gap, r.flagged, r.direction, r.closed_form_gap]
        for r in table.rows
    ))


def write_resource_csv(report, path):
    write_rows(path, [
        'h', 'runs', 'query_rate', 'byte_rate', 'memory', 'cpu',
        'query_residual', 'byte_residual',
    ], (
        [r.h, r.runs, r.query_rate, r.byte_rate, r.memory, r.cpu, rq, rs]
        for r, rq, rs in zip(report.rows, report.residuals_q,
                             report.residuals_s)
    ))


def efd_summary(report):
    lines = [
        f'h: {report.h:g}s',
        f'forwards: {report.count}',
        f'mean EFD: {report.empirical_mean:.3f}s '
        f'(chain ends {report.chain_mean:.3f}s)',
        'percentiles: ' + ', '.join(
            f'p{p}={v:.3f}s' for p, v in report.empirical_percentiles.items()
        ),
        f'zero EFD: {100 * report.fraction_zero:.1f}%',
        'within: ' + ', '.join(
            f'{t}s={100 * v:.1f}%' for t, v in report.fraction_within.items()
        ),
    ]
    if report.analytical_mean is not None:
        lines.append(
            f'model: {report.analytical_mean:.3f}s '
            f'(gap {100 * report.relative_gap:+.1f}%)'
        )
    return '\n'.join(lines) + '\n'


def comparison_summary(table, resources=None):
    lines = [f'tolerance: {100 * table.tolerance:.0f}%']
    for r in table.rows:
        mark = f'  FLAGGED {r.direction}' if r.flagged else ''
        lines.append(
            f'h={r.h:g}s empirical={r.chain_mean:.3f}s '
            f'model={r.analytical_mean:.3f}s '
            f'gap={100 * r.relative_gap:+.1f}%{mark}'
        )
    if resources is not None:
        lines.append(
            f'query rate = {resources.beta_q:.6g}/h, '
            f'byte rate = {resources.beta_s:.6g}/h '
            f'(max residual {100 * resources.max_relative_residual:.3f}%)'
        )
        lines.append(
            f'memory = {resources.memory_fit[0]:.6g} + '
            f'{resources.memory_fit[1]:.6g}/h, '
            f'cpu = {resources.cpu_fit[0]:.6g} + {resources.cpu_fit[1]:.6g}/h'
        )
    return '\n'.join(lines) + '\n'
