"""
Database models.
"""
from django.db import models

from core.messages import Attachment, Message, MessageID


class StoredMessageQuerySet(models.QuerySet):
    """Queries over stored messages, usable after `using()`."""

    def for_channel(self, channel_id):
        return self.filter(channel_id=channel_id).order_by(
            '-time_ms', 'native_id'
        )


class StoredMessageManager(
    models.Manager.from_queryset(StoredMessageQuerySet)
):
    """Manager for messages persisted by local-store channels."""

    def store(self, message):
        """Persist and return a stored copy of a message."""
        return self.create(
            platform=message.id.platform,
            channel_id=message.id.channel_id,
            native_id=message.id.native_id,
            thread_id=message.id.thread_id or '',
            userid=message.userid,
            username=message.username,
            text=message.text,
            time_ms=message.time_ms,
            attachments=[str(a) for a in message.attachments],
            optional_fields=dict(message.optional_fields),
            raw=message.raw,
        )


class StoredMessage(models.Model):
    """Message kept by a local-store channel."""
    platform = models.CharField(max_length=32)
    channel_id = models.CharField(max_length=255)
    native_id = models.CharField(max_length=255)
    thread_id = models.CharField(max_length=255, blank=True)
    userid = models.CharField(max_length=255)
    username = models.CharField(max_length=255)
    text = models.TextField(blank=True)
    time_ms = models.BigIntegerField()
    attachments = models.JSONField(default=list, blank=True)
    optional_fields = models.JSONField(default=dict, blank=True)
    raw = models.BinaryField(blank=True, default=b'')

    objects = StoredMessageManager()

    class Meta:
        constraints = [
            models.UniqueConstraint(
                fields=['platform', 'channel_id', 'native_id'],
                name='unique_message_id',
            ),
        ]

    def __str__(self):
        return f'{self.username}: {self.text[:40]}'

    def to_message(self):
        """Return the immutable message this row holds."""
        return Message(
            id=MessageID(
                self.platform,
                self.channel_id,
                self.native_id,
                self.thread_id or None,
            ),
            userid=self.userid,
            username=self.username,
            text=self.text,
            time=self.time_ms / 1000,
            attachments=tuple(Attachment.parse(a) for a in self.attachments),
            optional_fields=self.optional_fields,
            raw=bytes(self.raw),
        )
