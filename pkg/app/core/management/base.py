"""
Shared plumbing for the toolkit's management commands.
"""
import logging
import sys
from dataclasses import replace
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from analytics.distributions import PUBLISHED_MODEL
from analytics.fitting import fit_model
from analytics.serializers import load_model
from core.exceptions import DsnBenchError, FitError
from core.serializers import RunConfigSerializer
from harness.simlog import SimLog
from traces.records import parse_trace
from traces.topology import Topology

logger = logging.getLogger(__name__)

# exit status when a comparison row is flagged
FLAGGED = 2


class DsnBenchCommand(BaseCommand):
    """
    Base for toolkit commands.

    Usage errors and toolkit errors exit with status 1.
    """
    subcommand = None

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        called_from_command_line = parser.called_from_command_line

        def error(message):
            if not called_from_command_line:
                raise CommandError(f'Error: {message}')
            parser.print_usage(sys.stderr)
            parser.exit(1, f'{parser.prog}: error: {message}\n')

        parser.error = error
        return parser

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except DsnBenchError as exc:
            raise CommandError(str(exc)) from exc

    def run_config(self, **options):
        """Validate options into a RunConfig."""
        fields = RunConfigSerializer().fields
        data = {k: v for k, v in options.items() if k in fields}
        data['subcommand'] = self.subcommand
        serializer = RunConfigSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(_format_errors(serializer.errors))
        config = serializer.save()
        config.out.mkdir(parents=True, exist_ok=True)
        return config

    def success(self, message):
        self.stdout.write(self.style.SUCCESS(message))


def _format_errors(errors):
    parts = []
    for name, problems in errors.items():
        if name == 'missing':
            parts.append('missing inputs: ' + ', '.join(map(str, problems)))
        elif name == 'non_field_errors':
            parts.extend(str(p) for p in problems)
        else:
            parts.append(f'--{name}: ' + ' '.join(str(p) for p in problems))
    return '; '.join(parts)


def add_seed_argument(parser):
    parser.add_argument('--seed', type=int, default=0,
                        help='Random seed (default 0).')


def add_out_argument(parser):
    parser.add_argument('--out', default='.',
                        help='Output directory (default: current).')


def read_trace(path):
    with open(path, encoding='utf-8') as fh:
        return parse_trace(fh)


def read_topology(path):
    with open(path, encoding='utf-8') as fh:
        return Topology.load(fh)


def simlog_paths(paths):
    """Expand directories into the SimLog files they hold."""
    found = []
    for path in map(Path, paths):
        if path.is_dir():
            found.extend(sorted(path.glob('simlog*.tsv')))
        else:
            found.append(path)
    return found


def read_simlogs(paths):
    simlogs = []
    for path in simlog_paths(paths):
        with open(path, encoding='utf-8') as fh:
            simlogs.append(SimLog.load(fh))
    return simlogs


def resolve_model(config, stats):
    """
    The model to compare against: --model, else a fit of the trace, else
    the published constants with the trace's mean chain length.
    """
    if config.model:
        return load_model(config.model)
    try:
        return fit_model(stats, config.bins)
    except FitError as exc:
        logger.warning('cannot fit trace (%s); using published constants',
                       exc)
    if stats.mean_L >= 1:
        return replace(PUBLISHED_MODEL, mean_L=stats.mean_L)
    return PUBLISHED_MODEL
