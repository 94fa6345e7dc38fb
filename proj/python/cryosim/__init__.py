"""Trace-driven multi-clock-domain core and cache-hierarchy timing simulator."""

from ._core import (
    ClockDomain,
    LevelCounters,
    MemCounters,
    MemPattern,
    RunStats,
    SimError,
    Trace,
    __version__,
    bandwidth,
    cycles_to_ticks,
    gen_branchy,
    gen_compute_bound,
    gen_memory_bound,
    load_trace,
    make_domain,
    mpki,
    next_edge,
    preset_names,
    run,
    simpoint_combine,
    speedup,
)

__all__ = [
    "ClockDomain",
    "LevelCounters",
    "MemCounters",
    "MemPattern",
    "RunStats",
    "SimError",
    "Trace",
    "__version__",
    "bandwidth",
    "cycles_to_ticks",
    "gen_branchy",
    "gen_compute_bound",
    "gen_memory_bound",
    "load_trace",
    "make_domain",
    "mpki",
    "next_edge",
    "preset_names",
    "run",
    "simpoint_combine",
    "speedup",
]
