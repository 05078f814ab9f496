"""
Django command to report empirical EFD of SimLogs.
"""
from analytics.reports import (
    efd_summary,
    empirical_efd,
    write_cdf_csv,
    write_efd_csv,
)
from core.management.base import (
    DsnBenchCommand,
    add_out_argument,
    read_simlogs,
    read_topology,
    read_trace,
    resolve_model,
)
from harness.plan import replay_plan
from traces.forest import extract_stats


class Command(DsnBenchCommand):
    """Write efd.csv, one c.d.f. per SimLog and summary.txt."""
    help = 'Report EFD distributions of SimLogs against the model.'
    subcommand = 'analyze'

    def add_arguments(self, parser):
        parser.add_argument('--trace')
        parser.add_argument('--topology')
        parser.add_argument('--simlog', action='append',
                            help='SimLog file or directory; repeatable.')
        parser.add_argument('--model')
        parser.add_argument('--bins', type=int)
        add_out_argument(parser)

    def handle(self, *args, **options):
        """Entrypoint for command."""
        config = self.run_config(**options)
        plan = replay_plan(read_trace(config.trace),
                           read_topology(config.topology))
        model = resolve_model(config, extract_stats(plan.forest))
        reports = []
        for simlog in read_simlogs(config.simlog):
            report = empirical_efd(simlog, plan.forest, model)
            reports.append(report)
            write_cdf_csv(report, config.out / f'cdf-h{report.h:g}.csv')
        write_efd_csv(reports, config.out / 'efd.csv')
        summary = '\n'.join(
            efd_summary(r) for r in sorted(reports, key=lambda r: r.h)
        )
        (config.out / 'summary.txt').write_text(summary, encoding='utf-8')
        self.stdout.write(summary)
        self.success(f'{len(reports)} reports -> {config.out}')
