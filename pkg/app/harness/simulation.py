"""
Entry point for DSN runs.
"""
import enum

from harness.real import RealRun
from harness.runs import VirtualRun


class RunMode(str, enum.Enum):
    VIRTUAL = 'virtual'
    REAL = 'real'


def run_simulation(trace, topology, h, seed=0, mode=RunMode.VIRTUAL,
                   accel=1.0, duration=None, fetch_latency=0.0, **options):
    """
    Replay a trace on a topology and return the SimLog.

    Virtual runs ignore `accel`; real runs ignore `fetch_latency` since
    fetch time is measured.
    """
    mode = RunMode(mode)
    if not accel >= 1:
        raise ValueError(f'acceleration must be at least 1, got {accel}')
    if mode == RunMode.VIRTUAL:
        run = VirtualRun(trace, topology, h, seed, duration,
                         fetch_latency=fetch_latency)
    else:
        run = RealRun(trace, topology, h, seed, duration, accel=accel,
                      **options)
    return run.execute()
