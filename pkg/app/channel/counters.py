"""
Per-node resource accounting.
"""
from dataclasses import dataclass, fields


@dataclass
class ResourceCounters:
    """Monotonic counters of the work a node did or served."""
    queries_issued: int = 0
    queries_served: int = 0
    bytes_served: int = 0
    messages_stored: int = 0
    polls_completed: int = 0

    def merge(self, other):
        """Add another counter set into this one."""
        for f in fields(self):
            total = getattr(self, f.name) + getattr(other, f.name)
            setattr(self, f.name, total)
        return self

    def as_row(self):
        return (
            self.queries_issued,
            self.queries_served,
            self.bytes_served,
            self.polls_completed,
            self.messages_stored,
        )
