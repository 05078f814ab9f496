"""
Django command to evaluate the analytical EFD model over query gaps.
"""
from analytics.distributions import PUBLISHED_MODEL
from analytics.efd import (
    EfdMethod,
    efd_segment_expectation,
    predict_efd,
    zero_efd_fraction,
)
from analytics.reports import write_rows
from analytics.serializers import load_model
from core.management.base import DsnBenchCommand, add_out_argument


class Command(DsnBenchCommand):
    """Write predictions.csv with one row per query gap."""
    help = 'Predict mean EFD for a sweep of query gaps.'
    subcommand = 'predict'

    def add_arguments(self, parser):
        parser.add_argument('--model',
                            help='Model JSON (default: published constants).')
        parser.add_argument('--h', type=float)
        parser.add_argument('--sweep', help='Comma-separated query gaps.')
        add_out_argument(parser)

    def handle(self, *args, **options):
        """Entrypoint for command."""
        config = self.run_config(**options)
        model = load_model(config.model) if config.model else PUBLISHED_MODEL
        rows = []
        for h in config.query_gaps:
            segment = efd_segment_expectation(h, model)
            closed = efd_segment_expectation(h, model, EfdMethod.CLOSED_FORM)
            predicted = predict_efd(h, model)
            zero = zero_efd_fraction(h, model)
            rows.append([h, segment, closed, predicted, zero])
            self.stdout.write(
                f'h={h:g}s segment={segment:.3f}s efd={predicted:.3f}s '
                f'zero={100 * zero:.1f}%'
            )
        path = config.out / 'predictions.csv'
        write_rows(path, [
            'h', 'segment_quadrature', 'segment_closed_form',
            'predicted_efd', 'zero_fraction',
        ], rows)
        self.success(f'{len(rows)} predictions -> {path}')
