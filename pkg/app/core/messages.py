"""
The common message object shared by every channel.
"""
import enum
import hashlib
import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Tuple
from urllib.parse import quote, unquote

from core.codec import (
    escape_text,
    format_ms,
    parse_ms,
    to_ms,
    unescape_text,
)
from core.exceptions import InvalidMessage

URN_PREFIX = 'urn:dsnbench:'
FORWARD_MARKER = 'RT @'


class AttachmentKind(str, enum.Enum):
    LINK = 'link'
    IMAGE = 'image'
    VIDEO = 'video'
    BLOB = 'blob'


class ReplyStyle(str, enum.Enum):
    TSR = 'TSR'
    FBSR = 'FBSR'


class ForwardStyle(str, enum.Enum):
    URT = 'URT'
    ORT = 'ORT'
    NONE = 'none'


@dataclass(frozen=True)
class WriteModel:
    """How a channel threads replies and carries forwards."""
    reply_style: ReplyStyle = ReplyStyle.FBSR
    forward_style: ForwardStyle = ForwardStyle.URT


DEFAULT_WRITE_MODEL = WriteModel()


@dataclass(frozen=True)
class Attachment:
    kind: AttachmentKind
    uri_or_data: str

    def __post_init__(self):
        try:
            object.__setattr__(self, 'kind', AttachmentKind(self.kind))
        except ValueError as exc:
            raise InvalidMessage(
                f'unknown attachment kind {self.kind!r}'
            ) from exc

    def __str__(self):
        return f'{self.kind.value}:{self.uri_or_data}'

    @classmethod
    def parse(cls, text):
        kind, sep, data = text.partition(':')
        if not sep:
            raise InvalidMessage(f'attachment without kind: {text!r}')
        return cls(kind, data)


@dataclass(frozen=True)
class MessageID:
    """Identifies a message across platforms."""
    platform: str
    channel_id: str
    native_id: str
    thread_id: Optional[str] = None

    @property
    def key(self):
        return (self.platform, self.channel_id, self.native_id)

    @property
    def thread_root(self):
        """Native id of the thread this message belongs to."""
        return self.thread_id or self.native_id

    def to_urn(self):
        parts = (self.platform, self.channel_id, self.native_id)
        return URN_PREFIX + ':'.join(quote(p, safe='') for p in parts)

    @classmethod
    def from_urn(cls, urn, thread_id=None):
        if not urn.startswith(URN_PREFIX):
            raise InvalidMessage(f'not a message urn: {urn!r}')
        parts = urn[len(URN_PREFIX):].split(':')
        if len(parts) != 3:
            raise InvalidMessage(f'malformed message urn: {urn!r}')
        return cls(*(unquote(p) for p in parts), thread_id=thread_id)

    def __str__(self):
        urn = self.to_urn()
        if self.thread_id is not None:
            urn += '#' + quote(self.thread_id, safe='')
        return urn

    @classmethod
    def parse(cls, text):
        urn, sep, thread = text.partition('#')
        return cls.from_urn(urn, unquote(thread) if sep else None)


@dataclass(frozen=True)
class Message:
    """
    A message in the unified representation.

    Times are kept on a millisecond grid; `time` is seconds since epoch.
    """
    id: MessageID
    userid: str
    username: str
    text: str
    time: float
    attachments: Tuple[Attachment, ...] = ()
    optional_fields: Mapping[str, str] = field(default_factory=dict)
    raw: bytes = b''

    def __post_init__(self):
        if not self.userid:
            raise InvalidMessage('userid must not be empty')
        if not self.username:
            raise InvalidMessage('username must not be empty')
        if not math.isfinite(self.time) or self.time < 0:
            raise InvalidMessage(f'invalid message time {self.time!r}')
        object.__setattr__(self, 'time', to_ms(self.time) / 1000)
        object.__setattr__(self, 'attachments', tuple(self.attachments))
        object.__setattr__(
            self, 'optional_fields',
            {str(k): str(v) for k, v in dict(self.optional_fields).items()},
        )

    @property
    def time_ms(self):
        return to_ms(self.time)

    @property
    def native_id(self):
        return self.id.native_id

    def with_id(self, **changes):
        return replace(self, id=replace(self.id, **changes))


_fresh_ids = itertools.count(1)


def make_message(userid, username, text, time, attachments=(),
                 platform='local', channel_id='', native_id=None,
                 thread_id=None, optional_fields=None):
    """Create and return a message with a fresh id."""
    if native_id is None:
        native_id = f'm{next(_fresh_ids)}'
    return Message(
        id=MessageID(platform, channel_id, native_id, thread_id),
        userid=userid,
        username=username,
        text=text,
        time=time,
        attachments=tuple(
            a if isinstance(a, Attachment) else Attachment(*a)
            for a in attachments
        ),
        optional_fields=optional_fields or {},
    )


def compose_forward_text(orig_username, orig_text, comment=None):
    """Build a user-invented retweet: '[comment ]RT @user text'."""
    if not orig_username:
        raise InvalidMessage('forwarded username must not be empty')
    core = f'{FORWARD_MARKER}{orig_username} {orig_text}'
    if comment:
        return f'{comment} {core}'
    return core


def parse_forward_text(text):
    """
    Split a forward into (comment, orig_username, orig_text).

    Returns None when the text carries no forward marker.
    """
    if text.startswith(FORWARD_MARKER):
        comment, rest = '', text[len(FORWARD_MARKER):]
    else:
        head, sep, rest = text.partition(' ' + FORWARD_MARKER)
        if not sep:
            return None
        comment = head
    username, _, orig_text = rest.partition(' ')
    if not username:
        return None
    return comment, username, orig_text


def message_digest(message):
    """Dedup identity over (userid, text, time)."""
    h = hashlib.sha256()
    for part in (message.userid, message.text, str(message.time_ms)):
        h.update(part.encode('utf-8', 'surrogatepass'))
        h.update(b'\x1f')
    return h.hexdigest()


def serialize_message(message):
    """Render the canonical one-line record of a message."""
    mid = message.id
    pairs = [
        ('id.platform', mid.platform),
        ('id.channel', mid.channel_id),
        ('id.native', mid.native_id),
    ]
    if mid.thread_id is not None:
        pairs.append(('id.thread', mid.thread_id))
    pairs += [
        ('userid', message.userid),
        ('username', message.username),
        ('text', message.text),
        ('time', format_ms(message.time_ms)),
    ]
    pairs += [('attachments', str(a)) for a in message.attachments]
    pairs += [
        (f'optional.{k}', v)
        for k, v in sorted(message.optional_fields.items())
    ]
    return '\t'.join(f'{k}={escape_text(v)}' for k, v in pairs)


def deserialize_message(line):
    """Inverse of serialize_message."""
    values = {}
    attachments = []
    optional = {}
    for item in line.rstrip('\n').split('\t'):
        key, sep, value = item.partition('=')
        if not sep:
            raise InvalidMessage(f'field without value: {item!r}')
        value = unescape_text(value)
        if key == 'attachments':
            attachments.append(Attachment.parse(value))
        elif key.startswith('optional.'):
            optional[key[len('optional.'):]] = value
        else:
            values[key] = value
    try:
        return Message(
            id=MessageID(
                values['id.platform'],
                values['id.channel'],
                values['id.native'],
                values.get('id.thread'),
            ),
            userid=values['userid'],
            username=values['username'],
            text=values['text'],
            time=parse_ms(values['time']) / 1000,
            attachments=tuple(attachments),
            optional_fields=optional,
        )
    except KeyError as exc:
        raise InvalidMessage(f'record lacks field {exc.args[0]}') from exc
    except ValueError as exc:
        raise InvalidMessage(str(exc)) from exc
