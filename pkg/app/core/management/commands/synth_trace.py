"""
Django command to synthesize a trace from a fitted model.
"""
from django.core.management.base import CommandError

from analytics.distributions import PUBLISHED_MODEL
from analytics.serializers import load_model
from core.management.base import (
    DsnBenchCommand,
    add_out_argument,
    add_seed_argument,
    read_topology,
)
from traces.records import dump_trace, trace_counts
from traces.synthesis import synth_trace


def parse_window(text):
    try:
        t0, t1 = (float(v) for v in text.split(','))
    except ValueError:
        raise CommandError(f'--window must be "t0,t1", got {text!r}')
    if not 0 <= t0 <= t1:
        raise CommandError('--window must satisfy 0 <= t0 <= t1')
    return t0, t1


class Command(DsnBenchCommand):
    """Write trace.tsv with roots and forward chains drawn from a model."""
    help = 'Synthesize a trace from a fitted model.'
    subcommand = 'synth_trace'

    def add_arguments(self, parser):
        parser.add_argument('--topology')
        parser.add_argument('--model',
                            help='Model JSON (default: published constants).')
        parser.add_argument('--roots', type=int, default=100)
        parser.add_argument('--window', default='0,86400')
        add_seed_argument(parser)
        add_out_argument(parser)

    def handle(self, *args, **options):
        """Entrypoint for command."""
        config = self.run_config(**options)
        if options['roots'] < 0:
            raise CommandError('--roots must be non-negative')
        window = parse_window(options['window'])
        model = load_model(config.model) if config.model else PUBLISHED_MODEL
        topology = read_topology(config.topology)
        events = synth_trace(model, options['roots'], window, topology,
                             config.seed)
        path = config.out / 'trace.tsv'
        with open(path, 'w', encoding='utf-8') as fh:
            dump_trace(events, fh)
        counts = trace_counts(events)
        self.success(
            f'{counts["roots"]} roots, {counts["forwards"]} forwards -> {path}'
        )
