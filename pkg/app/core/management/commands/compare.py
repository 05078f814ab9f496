"""
Django command to compare simulated EFD with the analytical model.
"""
from django.core.management.base import CommandError

from analytics.reports import (
    compare_report,
    comparison_summary,
    empirical_efd,
    resource_fit,
    write_comparison_csv,
    write_resource_csv,
)
from core.management.base import (
    FLAGGED,
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
    """
    Write comparison.csv, resources.csv and summary.txt.

    Exits with status 2 when any row exceeds the tolerance.
    """
    help = 'Compare SimLogs over several query gaps with the model.'
    subcommand = 'compare'

    def add_arguments(self, parser):
        parser.add_argument('--trace')
        parser.add_argument('--topology')
        parser.add_argument('--simlog', action='append',
                            help='SimLog file or directory; repeatable.')
        parser.add_argument('--model')
        parser.add_argument('--bins', type=int)
        parser.add_argument('--tolerance', type=float,
                            help='Relative gap that flags a row.')
        add_out_argument(parser)

    def handle(self, *args, **options):
        """Entrypoint for command."""
        config = self.run_config(**options)
        plan = replay_plan(read_trace(config.trace),
                           read_topology(config.topology))
        model = resolve_model(config, extract_stats(plan.forest))
        simlogs = read_simlogs(config.simlog)
        reports = [empirical_efd(s, plan.forest) for s in simlogs]
        table = compare_report(reports, model, config.tolerance)
        write_comparison_csv(table, config.out / 'comparison.csv')
        resources = None
        if len({s.h for s in simlogs}) >= 3:
            resources = resource_fit(simlogs)
            write_resource_csv(resources, config.out / 'resources.csv')
        else:
            self.stdout.write('fewer than 3 query gaps; no resource fit')
        summary = comparison_summary(table, resources)
        (config.out / 'summary.txt').write_text(summary, encoding='utf-8')
        self.stdout.write(summary)
        if table.flagged:
            raise CommandError(
                f'{sum(r.flagged for r in table.rows)} of {len(table)} rows '
                f'exceed the {100 * table.tolerance:.0f}% tolerance',
                returncode=FLAGGED,
            )
        self.success(f'{len(table)} rows within tolerance -> {config.out}')
