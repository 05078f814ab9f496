"""
Channels: the five primitives (auth, home_timeline, update, reply, forward)
over pull feeds, push inboxes and a local store.

Every subscription picks its own transport. ``pull`` subscriptions are
fetched when the timeline is read; ``push`` subscriptions name inbox roots
that receive a copy of every update at write time.
"""
import enum
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Tuple
from urllib.parse import urlparse

from django.conf import settings
from django.db import DatabaseError, IntegrityError

from channel.atom import entry_order, feed_render
from channel.counters import ResourceCounters
from channel.store import (
    check_endpoint,
    comment_feed_key,
    feed_store_for,
    inbox_key,
    inbox_store_for,
)
from core.exceptions import (
    ChannelClosed,
    DuplicateChannel,
    EndpointUnreachable,
    InvalidMessage,
    StorageFull,
    UnknownThread,
)
from core.messages import (
    DEFAULT_WRITE_MODEL,
    ForwardStyle,
    Message,
    MessageID,
    ReplyStyle,
    WriteModel,
    compose_forward_text,
    message_digest,
)
from core.models import StoredMessage

logger = logging.getLogger(__name__)


class ChannelKind(str, enum.Enum):
    FEED_PULL = 'feed_pull'
    INBOX_PUSH = 'inbox_push'
    LOCAL_STORE = 'local_store'


class LinkKind(str, enum.Enum):
    PULL = 'pull'
    PUSH = 'push'


@dataclass(frozen=True)
class Subscription:
    userid: str
    endpoint: str
    kind: LinkKind = LinkKind.PULL

    def __post_init__(self):
        object.__setattr__(self, 'kind', LinkKind(self.kind))


@dataclass(frozen=True)
class ChannelConfig:
    """One configured channel; its subscriptions are the friend list."""
    channel_id: str
    platform: ChannelKind
    self_userid: str
    self_username: str
    endpoint: str
    subscriptions: Tuple[Subscription, ...] = ()
    write_model: WriteModel = DEFAULT_WRITE_MODEL
    feed_entry_limit: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'platform', ChannelKind(self.platform))
        object.__setattr__(self, 'subscriptions', tuple(
            s if isinstance(s, Subscription) else Subscription(*s)
            for s in self.subscriptions
        ))
        if self.feed_entry_limit is None:
            object.__setattr__(
                self, 'feed_entry_limit', settings.DSNBENCH_FEED_ENTRY_LIMIT
            )
        if not self.channel_id:
            raise ValueError('channel_id must not be empty')
        if not self.self_userid or not self.self_username:
            raise InvalidMessage('channel identity must not be empty')
        if any(ch.isspace() for ch in self.self_username):
            raise InvalidMessage(
                f'username {self.self_username!r} contains whitespace'
            )
        if self.feed_entry_limit < 1:
            raise ValueError('feed_entry_limit must be at least 1')
        if self.subscriptions and self.platform == ChannelKind.LOCAL_STORE:
            raise ValueError('local_store channels take no subscriptions')

    def subscriptions_of(self, kind):
        return [s for s in self.subscriptions if s.kind == kind]


@dataclass(frozen=True)
class Timeline:
    messages: Tuple[Message, ...]
    fetched_at: float
    failures: Tuple[Tuple[str, str], ...] = field(default=())

    def __len__(self):
        return len(self.messages)

    def __iter__(self):
        return iter(self.messages)


def merge_timeline(messages, count, now, failures=()):
    """Newest `count` messages, deduplicated by digest."""
    seen = set()
    merged = []
    for message in sorted(messages, key=entry_order):
        digest = message_digest(message)
        if digest in seen:
            continue
        seen.add(digest)
        merged.append(message)
        if len(merged) == count:
            break
    return Timeline(tuple(merged), now, tuple(failures))


class Channel:
    """Base channel; subclasses supply where messages are kept."""
    kind = None

    def __init__(self, config, feeds=None, inboxes=None):
        self.config = config
        self.feeds = feeds
        self.inboxes = inboxes
        self.counters = ResourceCounters()
        self.fetches = Counter()
        self.fetched_bytes = Counter()
        self.deliveries = 0
        self.closed = False
        self._known = {}
        self._ids = itertools.count(1)

    def __repr__(self):
        return f'<{type(self).__name__} {self.config.channel_id}>'

    @property
    def channel_id(self):
        return self.config.channel_id

    def open(self):
        """Check the endpoint and load existing state."""
        check_endpoint(self.config.endpoint, writable=True)
        for sub in self.config.subscriptions:
            check_endpoint(sub.endpoint, writable=False)
        return self

    def close(self):
        self.closed = True

    def _check_open(self):
        if self.closed:
            raise ChannelClosed(f'channel {self.channel_id} is closed')

    def _remember(self, message):
        self._known[message.id.key] = message

    def _new_message(self, text, now, native_id=None, thread_id=None,
                     attachments=(), optional_fields=None):
        if native_id is None:
            native_id = f'{self.channel_id}-{next(self._ids)}'
        return Message(
            id=MessageID(
                self.kind.value, self.channel_id, native_id, thread_id
            ),
            userid=self.config.self_userid,
            username=self.config.self_username,
            text=text,
            time=now,
            attachments=attachments,
            optional_fields=optional_fields or {},
        )

    # write side

    def update(self, text, now, native_id=None, attachments=(),
               optional_fields=None):
        """Post a status update and return it."""
        self._check_open()
        message = self._new_message(
            text, now, native_id,
            attachments=attachments, optional_fields=optional_fields,
        )
        self._publish(message)
        self._push(message)
        self._remember(message)
        self.counters.messages_stored += 1
        return message

    def forward(self, orig, comment=None, now=0.0, native_id=None):
        """Forward a message as a user-invented retweet."""
        self._check_open()
        if self.config.write_model.forward_style == ForwardStyle.NONE:
            raise InvalidMessage(f'channel {self.channel_id} cannot forward')
        text = compose_forward_text(orig.username, orig.text, comment)
        return self.update(
            text, now, native_id,
            optional_fields={'forward_of': str(orig.id)},
        )

    def reply(self, target, text, now, native_id=None):
        """Comment on a known message."""
        self._check_open()
        known = self._known.get(target.key)
        if known is None:
            raise UnknownThread(f'unknown reply target {target}')
        thread = known.id.thread_root
        optional = {'reply_to': str(known.id)}
        if self.config.write_model.reply_style == ReplyStyle.TSR:
            message = self._new_message(
                f'@{known.username} {text}', now, native_id,
                optional_fields=optional,
            )
            self._publish(message)
            self._push(message)
        else:
            message = self._new_message(
                text, now, native_id,
                thread_id=thread, optional_fields=optional,
            )
            self._post_comment(message, known)
        self._remember(message)
        self.counters.messages_stored += 1
        return message

    def _publish(self, message):
        raise NotImplementedError

    def _post_comment(self, message, target):
        raise NotImplementedError

    def _push(self, message):
        for sub in self.config.subscriptions_of(LinkKind.PUSH):
            store = inbox_store_for(sub.endpoint, self.inboxes)
            store.deliver(inbox_key(sub.endpoint, sub.userid), message)
            self.deliveries += 1

    # read side

    def fetch(self, subscription):
        """Fetch one pull subscription's feed document."""
        self._check_open()
        store = feed_store_for(subscription.endpoint, self.feeds)
        document = store.read(subscription.endpoint)
        if document is None:
            document = feed_render((), subscription.userid, 1)
        self.counters.queries_issued += 1
        self.fetches[subscription.userid] += 1
        self.fetched_bytes[subscription.userid] += document.byte_size
        return document

    def _gather(self):
        """Messages from pull subscriptions plus failures."""
        messages = []
        failures = []
        for sub in self.config.subscriptions_of(LinkKind.PULL):
            try:
                messages.extend(self.fetch(sub).entries)
            except EndpointUnreachable as exc:
                logger.warning('%s: skipping %s: %s',
                               self.channel_id, sub.userid, exc)
                failures.append((sub.userid, str(exc)))
        return messages, failures

    def home_timeline(self, count, now):
        """Latest messages targeted to this channel's user."""
        self._check_open()
        if count < 1:
            raise ValueError('count must be positive')
        messages, failures = self._gather()
        messages.extend(self._own_inbox())
        messages = [m for m in messages if m.id.thread_id is None]
        for message in messages:
            self._remember(message)
        return merge_timeline(messages, count, now, failures)

    def _own_inbox(self):
        return []

    def read_thread(self, thread_id):
        """Comments of a thread visible to this channel, newest first."""
        self._check_open()
        return tuple(sorted(
            self._thread_messages(thread_id), key=entry_order
        ))

    def _thread_messages(self, thread_id):
        return [m for m in self._own_inbox() if m.id.thread_id == thread_id]


class FeedChannel(Channel):
    """Pull channel: writes its own feed, reads followee feeds."""
    kind = ChannelKind.FEED_PULL

    def open(self):
        super().open()
        self.document = self._store.read(self.config.endpoint)
        if self.document is None:
            self.document = feed_render(
                (), self.config.self_userid, self.config.feed_entry_limit
            )
        for message in self.document.entries:
            self._remember(message)
        return self

    @property
    def _store(self):
        return feed_store_for(self.config.endpoint, self.feeds)

    def _publish(self, message):
        self.document = self._write_feed(
            self.config.endpoint, (message,) + self.document.entries
        )

    def _write_feed(self, key, entries):
        document = feed_render(
            entries, self.config.self_userid, self.config.feed_entry_limit
        )
        return self._store.write(key, document)

    def _post_comment(self, message, target):
        key = comment_feed_key(self.config.endpoint, message.id.thread_id)
        existing = self._store.read(key)
        entries = existing.entries if existing else ()
        self._write_feed(key, (message,) + entries)

    def _thread_messages(self, thread_id):
        messages = []
        own = self._store.read(
            comment_feed_key(self.config.endpoint, thread_id)
        )
        if own is not None:
            messages.extend(own.entries)
        for sub in self.config.subscriptions_of(LinkKind.PULL):
            key = comment_feed_key(sub.endpoint, thread_id)
            try:
                document = feed_store_for(key, self.feeds).read(key)
            except EndpointUnreachable as exc:
                logger.info('%s: no comments from %s: %s',
                            self.channel_id, sub.userid, exc)
                continue
            if document is not None:
                messages.extend(document.entries)
        return messages


class InboxChannel(Channel):
    """Push channel: updates land in subscriber inboxes at write time."""
    kind = ChannelKind.INBOX_PUSH

    @property
    def inbox(self):
        return inbox_key(self.config.endpoint, self.config.self_userid)

    def _publish(self, message):
        pass

    def _post_comment(self, message, target):
        root = self.config.endpoint
        for sub in self.config.subscriptions_of(LinkKind.PUSH):
            if sub.userid == target.userid:
                root = sub.endpoint
                break
        store = inbox_store_for(root, self.inboxes)
        store.deliver(inbox_key(root, target.userid), message)
        self.deliveries += 1

    def _own_inbox(self):
        store = inbox_store_for(self.config.endpoint, self.inboxes)
        return store.read(self.inbox)


class LocalStoreChannel(Channel):
    """Channel persisting to the database; endpoint is db://<alias>."""
    kind = ChannelKind.LOCAL_STORE

    def __init__(self, config, capacity=None, **kwargs):
        super().__init__(config, **kwargs)
        self.capacity = capacity

    @property
    def alias(self):
        return urlparse(self.config.endpoint).netloc or 'default'

    def open(self):
        parsed = urlparse(self.config.endpoint)
        if parsed.scheme != 'db' or self.alias not in settings.DATABASES:
            raise EndpointUnreachable(
                f'{self.config.endpoint!r} is not a configured database'
            )
        return self

    def _rows(self):
        return StoredMessage.objects.using(self.alias).for_channel(
            self.channel_id
        )

    def _save(self, message):
        if self.capacity is not None and \
                self._rows().count() >= self.capacity:
            raise StorageFull(f'store of {self.channel_id} is full')
        try:
            StoredMessage.objects.db_manager(self.alias).store(message)
        except IntegrityError as exc:
            raise InvalidMessage(f'duplicate message id {message.id}') from exc
        except DatabaseError as exc:
            raise StorageFull(f'cannot store {message.id}: {exc}') from exc

    def _publish(self, message):
        self._save(message)

    def _post_comment(self, message, target):
        self._save(message)

    def _gather(self):
        messages = [row.to_message() for row in self._rows()]
        for message in messages:
            self._remember(message)
        return messages, []

    def _thread_messages(self, thread_id):
        rows = self._rows().filter(thread_id=thread_id)
        return [row.to_message() for row in rows]


CHANNEL_CLASSES = {
    ChannelKind.FEED_PULL: FeedChannel,
    ChannelKind.INBOX_PUSH: InboxChannel,
    ChannelKind.LOCAL_STORE: LocalStoreChannel,
}


def channel_open(config, pocket=None, **kwargs):
    """Validate a channel config and return a ready channel."""
    if pocket is not None and config.channel_id in pocket.channels:
        raise DuplicateChannel(f'channel {config.channel_id} already open')
    channel = CHANNEL_CLASSES[config.platform](config, **kwargs).open()
    if pocket is not None:
        pocket.channels[config.channel_id] = channel
    logger.debug('opened %r', channel)
    return channel

