"""
Django command to fit the delay and chain-length laws of a trace.
"""
from analytics.fitting import fit_model
from analytics.serializers import dump_model
from core.management.base import DsnBenchCommand, add_out_argument, read_trace
from traces.forest import build_forward_forest, extract_stats
from traces.records import trace_counts


class Command(DsnBenchCommand):
    """Fit a trace and write model.json."""
    help = 'Fit intrinsic delays and chain lengths of a trace.'
    subcommand = 'fit'

    def add_arguments(self, parser):
        parser.add_argument('--trace')
        parser.add_argument('--bins', type=int,
                            help='Log bins per decade (default 30).')
        add_out_argument(parser)

    def handle(self, *args, **options):
        """Entrypoint for command."""
        config = self.run_config(**options)
        events = read_trace(config.trace)
        counts = trace_counts(events)
        self.stdout.write(
            f'roots={counts["roots"]} forwards={counts["forwards"]} '
            f'messages={counts["messages"]}'
        )
        stats = extract_stats(build_forward_forest(events))
        model = fit_model(stats, config.bins)
        self.stdout.write(
            f'a={model.a:.4f} b={model.b:.4f} c={model.c:.4f} '
            f'd={model.d:.4f} mean_L={model.mean_L:.4f}'
        )
        self.stdout.write(
            f'i_min={model.i_min:g} i_max={model.i_max:g} '
            f'Z_i={model.Z_i:.6g} Z_l={model.Z_l:.6g}'
        )
        path = config.out / 'model.json'
        dump_model(model, path)
        self.success(f'model -> {path}')
