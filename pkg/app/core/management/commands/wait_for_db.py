"""
Django command to wait for the database to be available.
"""
import logging
import time

from psycopg2 import OperationalError as Psycopg2OpError

from django.core.management.base import BaseCommand, CommandError
from django.db.utils import OperationalError

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    """Django command to wait for database."""

    def add_arguments(self, parser):
        parser.add_argument('--timeout', type=float, default=60,
                            help='Give up after this many seconds.')

    def handle(self, *args, **options):
        """Entrypoint for command."""
        self.stdout.write('Waiting for database...')
        deadline = time.monotonic() + options['timeout']
        attempts = 0
        while True:
            attempts += 1
            try:
                self.check(databases=['default'])
                break
            except (Psycopg2OpError, OperationalError) as exc:
                if time.monotonic() >= deadline:
                    raise CommandError(
                        f'Database unavailable after {attempts} attempts'
                    ) from exc
                logger.info('database unavailable (%s), retrying', exc)
                self.stdout.write('Database unavailable, waiting 1 second.')
                time.sleep(1)

        self.stdout.write(self.style.SUCCESS('Database available!'))
