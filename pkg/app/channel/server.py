"""
Embedded HTTP server publishing a directory of feed snapshots.
"""
import logging
import threading
from pathlib import Path

from django.conf import settings
from django.core.servers.basehttp import ThreadedWSGIServer, WSGIRequestHandler
from django.core.wsgi import get_wsgi_application

from channel.views import FEED_ROOT_ENVIRON
from core.exceptions import HarnessError

logger = logging.getLogger(__name__)


class FeedServer:
    """Serve <root>/<uid>.atom at http://host:port/<uid>.atom."""

    def __init__(self, root, host=None, port=None):
        self.root = Path(root)
        self.host = host or settings.DSNBENCH_HOST
        self.port = settings.DSNBENCH_PORT_BASE if port is None else port
        self.httpd = None
        self.thread = None

    def _application(self):
        application = get_wsgi_application()
        root = str(self.root)

        def serve(environ, start_response):
            environ[FEED_ROOT_ENVIRON] = root
            return application(environ, start_response)

        return serve

    def start(self):
        self.root.mkdir(parents=True, exist_ok=True)
        try:
            self.httpd = ThreadedWSGIServer(
                (self.host, self.port), WSGIRequestHandler
            )
        except OSError as exc:
            raise HarnessError(
                f'cannot bind feed server to {self.host}:{self.port}: {exc}'
            ) from exc
        self.port = self.httpd.server_address[1]
        self.httpd.set_app(self._application())
        self.thread = threading.Thread(
            target=self.httpd.serve_forever, name='feed-server', daemon=True
        )
        self.thread.start()
        logger.info('serving %s at http://%s:%d/', self.root,
                    self.host, self.port)
        return self

    def stop(self):
        if self.httpd is not None:
            self.httpd.shutdown()
            self.httpd.server_close()
            self.thread.join()
            self.httpd = None

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc_info):
        self.stop()

    def url(self, uid):
        return f'http://{self.host}:{self.port}/{uid}.atom'
