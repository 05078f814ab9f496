"""
Django command to synthesize a random follow graph.
"""
from pathlib import Path

from django.core.management.base import CommandError

from core.management.base import (
    DsnBenchCommand,
    add_out_argument,
    add_seed_argument,
)
from traces.topology import Topology


class Command(DsnBenchCommand):
    """Write topology.tsv with Poisson out-degrees."""
    help = 'Synthesize a random follow graph.'

    def add_arguments(self, parser):
        parser.add_argument('--users', type=int, default=100)
        parser.add_argument('--mean-followees', type=float, default=5.0)
        add_seed_argument(parser)
        add_out_argument(parser)

    def handle(self, *args, **options):
        """Entrypoint for command."""
        if options['users'] < 2:
            raise CommandError('--users must be at least 2')
        if options['mean_followees'] < 0:
            raise CommandError('--mean-followees must be non-negative')
        topology = Topology.synth(
            options['users'], options['mean_followees'], options['seed']
        )
        out = Path(options['out'])
        out.mkdir(parents=True, exist_ok=True)
        path = out / 'topology.tsv'
        with open(path, 'w', encoding='utf-8') as fh:
            topology.dump(fh)
        self.success(
            f'{len(topology)} users, {topology.edge_count()} follows '
            f'-> {path}'
        )
