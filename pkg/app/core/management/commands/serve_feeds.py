"""
Django command to serve a directory of feed snapshots.
"""
import time
from pathlib import Path

from django.conf import settings

from channel.server import FeedServer
from core.management.base import DsnBenchCommand


class Command(DsnBenchCommand):
    """Serve <root>/<uid>.atom until interrupted."""
    help = 'Serve feed snapshots over HTTP.'

    def add_arguments(self, parser):
        parser.add_argument('--root', default=str(settings.DSNBENCH_FEED_ROOT))
        parser.add_argument('--host', default=settings.DSNBENCH_HOST)
        parser.add_argument('--port', type=int,
                            default=settings.DSNBENCH_PORT_BASE)

    def handle(self, *args, **options):
        """Entrypoint for command."""
        server = FeedServer(Path(options['root']), options['host'],
                            options['port'])
        with server:
            self.success(f'Serving {server.root} at {server.url("<uid>")}')
            try:
                while True:
                    time.sleep(1)
            except KeyboardInterrupt:
                self.stdout.write('Stopping feed server.')
