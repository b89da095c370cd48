"""Goldbach circle/ellipse sequences, their randomness statistics, and a
CA-mediated session-key protocol built on Goldbach partitions."""

from gbx.errors import (
    AuthenticationError,
    FrameError,
    GbxError,
    IntegrityFailure,
    InvalidArgument,
    NoAlternativePartition,
    OutOfRange,
)
from gbx.primes import PrimeSieve, build_sieve, is_prime
from gbx.sequences import (
    BSequence,
    CirclePoint,
    EllipseEntry,
    MSequence,
    Partition,
    circle_with_radius,
    ellipse_m,
    m_sequence,
    parity_sequence,
    partition_count,
    partition_lows,
    partitions,
    required_limit,
    to_b_sequence,
)
from gbx.analysis import (
    CorrelationSeries,
    UniqueWindowStats,
    WindowCounts,
    autocorrelation,
    count_windows,
    locate,
    unique_window_count,
    unique_window_stats,
)

__version__ = "0.1.0"
