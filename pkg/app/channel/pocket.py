"""
Pocket: one timeline and update surface over several channels.
"""
import logging

from channel.channels import channel_open, merge_timeline
from core.exceptions import DsnBenchError

logger = logging.getLogger(__name__)


class Pocket:
    """Container holding open channels keyed by channel id."""

    def __init__(self):
        self.channels = {}

    def __len__(self):
        return len(self.channels)

    def add(self, config, **kwargs):
        """Open a channel inside this pocket."""
        return channel_open(config, pocket=self, **kwargs)

    def timeline(self, count, now):
        """Merged home timeline of every open channel."""
        messages = []
        failures = []
        for channel_id, channel in sorted(self.channels.items()):
            if channel.closed:
                continue
            try:
                timeline = channel.home_timeline(count, now)
            except DsnBenchError as exc:
                logger.warning('pocket: %s failed: %s', channel_id, exc)
                failures.append((channel_id, str(exc)))
                continue
            messages.extend(timeline.messages)
            failures.extend(timeline.failures)
        return merge_timeline(messages, count, now, failures)

    def update(self, text, now):
        """Post the same update through every open channel."""
        return {
            channel_id: channel.update(text, now)
            for channel_id, channel in sorted(self.channels.items())
            if not channel.closed
        }

    def close(self):
        for channel in self.channels.values():
            channel.close()
