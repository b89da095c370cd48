"""Autocorrelation and sliding-window substring statistics over b-sequences."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from gbx.errors import InvalidArgument
from gbx.sequences import BSequence

MODES = ("circular", "linear")


@dataclass(frozen=True)
class CorrelationSeries:
    mode: str
    values: tuple[float, ...]

    @property
    def max_lag(self) -> int:
        return len(self.values) - 1

    @property
    def lags(self) -> range:
        return range(len(self.values))

    def off_peak(self) -> np.ndarray:
        """|C(i)| for lags 1..max_lag."""
        return np.abs(np.asarray(self.values[1:], dtype=float))


@dataclass(frozen=True)
class WindowCounts:
    w: int
    length: int
    counts: dict[str, int] = field(default_factory=dict)

    def __getitem__(self, pattern: str) -> int:
        return self.counts.get(pattern, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class UniqueWindowStats:
    """Number of length-w windows whose pattern occurs exactly once, per w."""

    length: int
    counts: dict[int, int] = field(default_factory=dict)


def _symbols(b) -> np.ndarray:
    if isinstance(b, BSequence):
        return np.asarray(b.symbols, dtype=np.int64)
    return np.asarray(b, dtype=np.int64)


def autocorrelation(b, max_lag: int, mode: str = "circular") -> CorrelationSeries:
    """C(i) for i = 0..max_lag.

    circular: ``C(i) = (1/L) * sum_m a[m] * a[(m+i) mod L]``
    linear:   ``C(i) = (1/(L-i)) * sum_{m < L-i} a[m] * a[m+i]``

    Sums are taken in integers, so C(0) is exactly 1.
    """
    a = _symbols(b)
    n = len(a)
    if n == 0:
        raise InvalidArgument("autocorrelation of an empty sequence")
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")
    if max_lag < 0 or max_lag >= n:
        raise InvalidArgument(f"max_lag must lie in [0, {n - 1}], got {max_lag}")
    values = []
    if mode == "circular":
        for i in range(max_lag + 1):
            values.append(int(np.dot(a, np.roll(a, -i))) / n)
    else:
        for i in range(max_lag + 1):
            values.append(int(np.dot(a[: n - i], a[i:])) / (n - i))
    return CorrelationSeries(mode, tuple(values))


def _check_bits(bits: str):
    if not isinstance(bits, str) or set(bits) - {"0", "1"}:
        raise InvalidArgument("expected a string over {'0', '1'}")


def _check_w(bits: str, w: int):
    if w < 1 or w > len(bits):
        raise InvalidArgument(f"window length must lie in [1, {len(bits)}], got {w}")


def count_windows(bits: str, w: int) -> WindowCounts:
    """Overlapping (stride 1) occurrence counts of every length-w pattern."""
    _check_bits(bits)
    _check_w(bits, w)
    c = Counter(bits[i : i + w] for i in range(len(bits) - w + 1))
    return WindowCounts(w, len(bits), dict(sorted(c.items())))


def unique_window_count(bits: str, w: int) -> int:
    return sum(v for v in count_windows(bits, w).counts.values() if v == 1)


def unique_window_stats(bits: str, w_min: int = 2, w_max: int = 20) -> UniqueWindowStats:
    _check_bits(bits)
    w_max = min(w_max, len(bits))
    return UniqueWindowStats(len(bits),
                             {w: unique_window_count(bits, w) for w in range(w_min, w_max + 1)})


def locate(bits: str, pattern: str) -> list[int]:
    """Start indices of every (possibly overlapping) occurrence of ``pattern``."""
    _check_bits(bits)
    _check_bits(pattern)
    if not 1 <= len(pattern) <= len(bits):
        raise InvalidArgument(f"pattern length must lie in [1, {len(bits)}]")
    out = []
    i = bits.find(pattern)
    while i != -1:
        out.append(i)
        i = bits.find(pattern, i + 1)
    return out
