"""
Backing stores for feeds (pull) and inboxes (push).

Endpoints select the store: ``mem://name`` keeps documents in process memory,
``http(s)://`` URLs are read-only remote feeds, anything else is a filesystem
path. Feed writes replace the whole document at once, so readers always see a
complete snapshot.
"""
import errno
import logging
import os
import tempfile
import threading
import zlib
from dataclasses import replace
from pathlib import Path
from urllib.parse import urlparse

import requests
from django.conf import settings

from channel.atom import feed_parse_document
from core.exceptions import (
    EndpointUnreachable,
    MalformedDocument,
    StorageFull,
)
from core.messages import deserialize_message, serialize_message

logger = logging.getLogger(__name__)

MEMORY_SCHEME = 'mem'
HTTP_SCHEMES = ('http', 'https')
_FULL_ERRNOS = (errno.ENOSPC, errno.EDQUOT)


def endpoint_scheme(endpoint):
    """Return 'mem', 'http' or 'file' for an endpoint string."""
    parsed = urlparse(endpoint)
    if parsed.scheme == MEMORY_SCHEME:
        return MEMORY_SCHEME
    if parsed.scheme in HTTP_SCHEMES:
        return 'http'
    return 'file'


def check_endpoint(endpoint, writable):
    """Raise EndpointUnreachable unless an endpoint is usable."""
    if not endpoint:
        raise EndpointUnreachable('empty endpoint')
    try:
        parsed = urlparse(endpoint)
        parsed.port
    except ValueError as exc:
        raise EndpointUnreachable(f'malformed URI {endpoint!r}') from exc
    scheme = endpoint_scheme(endpoint)
    if scheme == MEMORY_SCHEME:
        if not parsed.netloc and not parsed.path:
            raise EndpointUnreachable(f'malformed endpoint {endpoint!r}')
        return
    if scheme == 'http':
        if not parsed.hostname:
            raise EndpointUnreachable(f'malformed URI {endpoint!r}')
        if writable:
            raise EndpointUnreachable(
                f'cannot write to remote endpoint {endpoint!r}'
            )
        return
    if '://' in endpoint and parsed.scheme != 'file':
        raise EndpointUnreachable(f'unsupported endpoint {endpoint!r}')
    if writable:
        path = _file_path(endpoint)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise EndpointUnreachable(
                f'cannot create {path.parent}: {exc}'
            ) from exc


def _file_path(endpoint):
    if endpoint.startswith('file://'):
        return Path(urlparse(endpoint).path)
    return Path(endpoint)


class MemoryFeedStore:
    """Feeds kept in process memory, keyed by endpoint."""

    def __init__(self, max_bytes=None):
        self.max_bytes = max_bytes
        self._documents = {}
        self._versions = {}
        self._lock = threading.Lock()

    def write(self, key, document):
        with self._lock:
            if self.max_bytes is not None:
                used = sum(
                    d.byte_size for k, d in self._documents.items() if k != key
                )
                if used + document.byte_size > self.max_bytes:
                    raise StorageFull(f'feed store full writing {key}')
            version = self._versions.get(key, 0) + 1
            self._versions[key] = version
            self._documents[key] = replace(document, version=version)
            return self._documents[key]

    def read(self, key):
        return self._documents.get(key)

    def clear(self):
        with self._lock:
            self._documents.clear()
            self._versions.clear()


class FileFeedStore:
    """Feeds written as files, replaced atomically."""

    def write(self, key, document):
        path = _file_path(key)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix='.feed-')
            try:
                with os.fdopen(fd, 'wb') as fh:
                    fh.write(document.data)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        except OSError as exc:
            if exc.errno in _FULL_ERRNOS:
                raise StorageFull(f'no space writing {path}') from exc
            raise EndpointUnreachable(f'cannot write {path}: {exc}') from exc
        return replace(document, version=zlib.crc32(document.data))

    def read(self, key):
        path = _file_path(key)
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            return None
        except OSError as exc:
            raise EndpointUnreachable(f'cannot read {path}: {exc}') from exc
        return feed_parse_document(data, version=zlib.crc32(data))


class HttpFeedReader:
    """Read-only access to feeds served over HTTP."""

    def __init__(self, timeout=None):
        self.timeout = timeout
        self._local = threading.local()
        self._lock = threading.Lock()
        self.sessions = []

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    @property
    def session(self):
        session = getattr(self._local, 'session', None)
        if session is None:
            session = self._local.session = requests.Session()
            with self._lock:
                self.sessions.append(session)
        return session

    def close(self):
        """Close the session of every thread that read through this reader."""
        with self._lock:
            sessions, self.sessions = self.sessions, []
            self._local = threading.local()
        for session in sessions:
            session.close()

    def write(self, key, document):
        raise EndpointUnreachable(f'cannot write to remote endpoint {key!r}')

    def read(self, key):
        timeout = self.timeout or settings.DSNBENCH_FETCH_TIMEOUT
        try:
            res = self.session.get(key, timeout=timeout)
        except requests.RequestException as exc:
            raise EndpointUnreachable(f'GET {key} failed: {exc}') from exc
        if res.status_code != 200:
            raise EndpointUnreachable(f'GET {key} returned {res.status_code}')
        try:
            return feed_parse_document(
                res.content, version=zlib.crc32(res.content)
            )
        except MalformedDocument as exc:
            raise EndpointUnreachable(f'GET {key}: {exc}') from exc


memory_feeds = MemoryFeedStore()
file_feeds = FileFeedStore()
http_feeds = HttpFeedReader()


def feed_store_for(endpoint, memory=None):
    """Return the feed store that serves an endpoint."""
    scheme = endpoint_scheme(endpoint)
    if scheme == MEMORY_SCHEME:
        return memory if memory is not None else memory_feeds
    if scheme == 'http':
        return http_feeds
    return file_feeds


class MemoryInboxStore:
    """Push inboxes kept in process memory."""

    def __init__(self, capacity=None):
        self.capacity = capacity
        self._inboxes = {}
        self._lock = threading.Lock()

    def deliver(self, key, message):
        with self._lock:
            inbox = self._inboxes.setdefault(key, [])
            if self.capacity is not None and len(inbox) >= self.capacity:
                raise StorageFull(f'inbox {key} is full')
            inbox.append(message)

    def read(self, key):
        with self._lock:
            return list(self._inboxes.get(key, ()))

    def drain(self, key):
        with self._lock:
            return self._inboxes.pop(key, [])

    def clear(self):
        with self._lock:
            self._inboxes.clear()


class FileInboxStore:
    """Push inboxes as append-only files of canonical message records."""

    def __init__(self):
        self._lock = threading.Lock()

    def deliver(self, key, message):
        path = _file_path(key)
        try:
            with self._lock:
                path.parent.mkdir(parents=True, exist_ok=True)
                with path.open('a', encoding='utf-8') as fh:
                    fh.write(serialize_message(message) + '\n')
        except OSError as exc:
            if exc.errno in _FULL_ERRNOS:
                raise StorageFull(f'no space delivering to {path}') from exc
            raise EndpointUnreachable(f'cannot deliver to {path}') from exc

    def read(self, key):
        path = _file_path(key)
        try:
            with path.open(encoding='utf-8') as fh:
                return [
                    deserialize_message(line) for line in fh if line.strip()
                ]
        except FileNotFoundError:
            return []
        except OSError as exc:
            raise EndpointUnreachable(f'cannot read {path}: {exc}') from exc

    def drain(self, key):
        with self._lock:
            messages = self.read(key)
            path = _file_path(key)
            if path.exists():
                path.unlink()
        return messages


memory_inboxes = MemoryInboxStore()
file_inboxes = FileInboxStore()


def inbox_store_for(endpoint, memory=None):
    """Return the inbox store that serves an inbox root endpoint."""
    scheme = endpoint_scheme(endpoint)
    if scheme == MEMORY_SCHEME:
        return memory if memory is not None else memory_inboxes
    if scheme == 'http':
        raise EndpointUnreachable(
            f'remote inboxes are not supported: {endpoint}'
        )
    return file_inboxes


def inbox_key(root, userid):
    """Location of one user's inbox under an inbox root."""
    return f'{root.rstrip("/")}/{userid}.inbox'


def comment_feed_key(feed_endpoint, thread_id):
    """Location of a thread's comment feed next to its owner feed."""
    return f'{feed_endpoint}.comments.{thread_id}'
