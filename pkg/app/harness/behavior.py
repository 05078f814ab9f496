"""
Data-driven user behavior.
"""


def behavior_forward_time(t_seen, t_trace):
    """
    When a bot posts a forward it saw at `t_seen`.

    A parent seen before the recorded forward time is forwarded at that
    time; one seen later is forwarded as soon as it is seen.
    """
    if t_seen <= t_trace:
        return t_trace
    return t_seen
