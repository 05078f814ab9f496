"""
Atom-subset feed documents.

Each entry carries exactly an id, an author (name and uid uri), a published
timestamp, a text content element and optional enclosure links. Comment
entries also carry a thr:in-reply-to element naming their thread. Rendering is
deterministic so identical message lists give identical bytes.
"""
import calendar
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Tuple
from xml.dom import minidom
from xml.parsers import expat

from django.utils.dateparse import parse_datetime

from core.codec import escape_text, unescape_text
from core.exceptions import InvalidMessage, MalformedDocument
from core.messages import (
    Attachment,
    AttachmentKind,
    Message,
    MessageID,
)

ATOM_NS = 'http://www.w3.org/2005/Atom'
THREAD_NS = 'http://purl.org/syndication/thread/1.0'
IN_REPLY_TO = 'thr:in-reply-to'
UID_PREFIX = 'urn:uid:'

ENCLOSURE_TYPES = {
    AttachmentKind.LINK: 'text/html',
    AttachmentKind.IMAGE: 'image/*',
    AttachmentKind.VIDEO: 'video/*',
    AttachmentKind.BLOB: 'application/octet-stream',
}
_KIND_BY_TYPE = {v: k for k, v in ENCLOSURE_TYPES.items()}


@dataclass(frozen=True)
class FeedDocument:
    """A rendered feed: newest entries first, with its byte encoding."""
    owner_userid: str
    entries: Tuple[Message, ...]
    data: bytes
    version: int = 0

    @property
    def byte_size(self):
        return len(self.data)


def entry_order(message):
    """Sort key: time descending, ties by native id ascending."""
    return (-message.time_ms, message.native_id)


def format_published(ms):
    seconds, frac = divmod(ms, 1000)
    stamp = datetime.fromtimestamp(seconds, tz=timezone.utc)
    return stamp.strftime('%Y-%m-%dT%H:%M:%S') + f'.{frac:03d}Z'


def parse_published(text):
    stamp = parse_datetime(text)
    if stamp is None or stamp.tzinfo is None:
        raise ValueError(f'not an RFC3339 timestamp: {text!r}')
    stamp = stamp.astimezone(timezone.utc)
    seconds = calendar.timegm(stamp.timetuple())
    return seconds * 1000 + stamp.microsecond // 1000


def _add_text(doc, parent, tag, text):
    node = doc.createElement(tag)
    node.appendChild(doc.createTextNode(text))
    parent.appendChild(node)
    return node


def feed_render(messages, owner, limit, version=0):
    """Render the newest `limit` messages as an Atom-subset document."""
    entries = tuple(sorted(messages, key=entry_order)[:limit])
    doc = minidom.getDOMImplementation().createDocument(None, 'feed', None)
    root = doc.documentElement
    root.setAttribute('xmlns', ATOM_NS)
    if any(m.id.thread_id is not None for m in entries):
        root.setAttribute('xmlns:thr', THREAD_NS)
    _add_text(doc, root, 'title', owner)
    for message in entries:
        entry = doc.createElement('entry')
        _add_text(doc, entry, 'id', message.id.to_urn())
        author = doc.createElement('author')
        _add_text(doc, author, 'name', message.username)
        _add_text(doc, author, 'uri', UID_PREFIX + message.userid)
        entry.appendChild(author)
        _add_text(doc, entry, 'published', format_published(message.time_ms))
        content = _add_text(doc, entry, 'content', escape_text(message.text))
        content.setAttribute('type', 'text')
        for attachment in message.attachments:
            link = doc.createElement('link')
            link.setAttribute('rel', 'enclosure')
            link.setAttribute('type', ENCLOSURE_TYPES[attachment.kind])
            link.setAttribute('href', attachment.uri_or_data)
            entry.appendChild(link)
        if message.id.thread_id is not None:
            reply_to = doc.createElement(IN_REPLY_TO)
            reply_to.setAttribute('ref', message.id.thread_id)
            entry.appendChild(reply_to)
        root.appendChild(entry)
    data = doc.toxml(encoding='utf-8')
    doc.unlink()
    return FeedDocument(owner, entries, data, version)


_ENTRY = ('feed', 'entry')
_FIELDS = {
    _ENTRY + ('id',): 'id',
    _ENTRY + ('author', 'name'): 'username',
    _ENTRY + ('author', 'uri'): 'uri',
    _ENTRY + ('published',): 'published',
    _ENTRY + ('content',): 'content',
}


class _FeedReader:
    """Streaming expat reader that tolerates unknown elements."""

    def __init__(self):
        self.parser = expat.ParserCreate()
        self.parser.buffer_text = True
        self.parser.StartElementHandler = self.start
        self.parser.EndElementHandler = self.end
        self.parser.CharacterDataHandler = self.chars
        self.path = []
        self.text = []
        self.owner = ''
        self.entries = []
        self.entry = None
        self.entry_offset = 0

    def read(self, data):
        try:
            self.parser.Parse(data, True)
        except expat.ExpatError as exc:
            raise MalformedDocument(
                expat.ErrorString(exc.code), self.parser.ErrorByteIndex
            ) from exc
        return self.entries

    def start(self, name, attrs):
        self.path.append(name)
        self.text = []
        path = tuple(self.path)
        if len(path) == 1 and name != 'feed':
            raise MalformedDocument(
                f'root element is {name!r}, not feed',
                self.parser.CurrentByteIndex,
            )
        if path == _ENTRY:
            self.entry = {'attachments': []}
            self.entry_offset = self.parser.CurrentByteIndex
        elif path == _ENTRY + ('link',) and attrs.get('rel') == 'enclosure':
            kind = _KIND_BY_TYPE.get(attrs.get('type'), AttachmentKind.BLOB)
            self.entry['attachments'].append(
                Attachment(kind, attrs.get('href', ''))
            )
        elif path == _ENTRY + (IN_REPLY_TO,) and 'ref' in attrs:
            self.entry['thread_id'] = attrs['ref']

    def chars(self, data):
        self.text.append(data)

    def end(self, name):
        path = tuple(self.path)
        if path == ('feed', 'title'):
            self.owner = ''.join(self.text)
        elif path in _FIELDS and self.entry is not None:
            self.entry[_FIELDS[path]] = ''.join(self.text)
        elif path == _ENTRY:
            self.entries.append(self.build_entry())
            self.entry = None
        self.path.pop()
        self.text = []

    def build_entry(self):
        entry = self.entry
        missing = [
            f for f in ('id', 'username', 'uri', 'published', 'content')
            if f not in entry
        ]
        if missing:
            raise MalformedDocument(
                f'entry lacks {", ".join(missing)}', self.entry_offset
            )
        if not entry['uri'].startswith(UID_PREFIX):
            raise MalformedDocument(
                f'author uri {entry["uri"]!r} is not a uid urn',
                self.entry_offset,
            )
        try:
            return Message(
                id=MessageID.from_urn(entry['id'], entry.get('thread_id')),
                userid=entry['uri'][len(UID_PREFIX):],
                username=entry['username'],
                text=unescape_text(entry['content']),
                time=parse_published(entry['published']) / 1000,
                attachments=tuple(entry['attachments']),
            )
        except (InvalidMessage, ValueError) as exc:
            raise MalformedDocument(str(exc), self.entry_offset) from exc


def feed_parse(data):
    """Parse an Atom-subset document back into messages, newest first."""
    return _FeedReader().read(data)


def feed_parse_document(data, version=0):
    """Parse bytes into a FeedDocument keeping the original encoding."""
    reader = _FeedReader()
    entries = reader.read(data)
    return FeedDocument(reader.owner, tuple(entries), data, version)
