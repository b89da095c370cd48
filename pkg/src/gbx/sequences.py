"""Goldbach partitions, circles, (1,k) ellipses and the sequences built on them.

A (1,k) ellipse around an even center ``two_n`` is the smallest odd ``m`` for
which ``two_n - m`` and ``two_n + k*m`` are both prime. Walking the even
centers of a range gives the m-sequence; reducing each ``m`` modulo 4 gives
the +1/-1 b-sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from gbx.errors import InvalidArgument, OutOfRange
from gbx.primes import PrimeSieve


class Partition(NamedTuple):
    n: int
    p: int
    q: int


class CirclePoint(NamedTuple):
    two_n: int
    lower: int
    upper: int


@dataclass(frozen=True)
class EllipseEntry:
    two_n: int
    k: int
    m: int
    lower: int
    upper: int

    @property
    def span_sum(self) -> int:
        """lower + upper, which equals 2*two_n + (k-1)*m."""
        return self.lower + self.upper

    def row(self) -> tuple[int, int, int, int, int]:
        return (self.two_n, self.lower, self.upper, self.m, self.span_sum)


@dataclass(frozen=True)
class MSequence:
    k: int
    range_start: int
    range_end: int
    entries: tuple[EllipseEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def values(self) -> list[int]:
        return [e.m for e in self.entries]

    @property
    def centers(self) -> list[int]:
        return [e.two_n for e in self.entries]

    def restrict(self, centers: Iterable[int]) -> "MSequence":
        keep = set(centers)
        return MSequence(self.k, self.range_start, self.range_end,
                         tuple(e for e in self.entries if e.two_n in keep))


@dataclass(frozen=True)
class BSequence:
    """A +1/-1 symbol sequence. The bit view writes +1 as '1' and -1 as '0'."""

    symbols: tuple[int, ...]
    origin: str = ""

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.symbols):
            raise InvalidArgument("b-sequence symbols must be +1 or -1")

    def __len__(self):
        return len(self.symbols)

    @property
    def bits(self) -> str:
        return "".join("1" if s == 1 else "0" for s in self.symbols)

    @classmethod
    def from_bits(cls, bits: str, origin: str = "") -> "BSequence":
        if set(bits) - {"0", "1"}:
            raise InvalidArgument("bit strings may only contain '0' and '1'")
        return cls(tuple(1 if c == "1" else -1 for c in bits), origin)


def _require_even(n, name, minimum):
    if int(n) != n or n % 2 or n < minimum:
        raise InvalidArgument(f"{name} must be an even integer >= {minimum}, got {n!r}")


def _require_k(k):
    if int(k) != k or k < 1 or k % 2 == 0:
        raise InvalidArgument(f"k must be an odd integer >= 1, got {k!r}")


def _need(sieve: PrimeSieve, value: int, what: str):
    if value > sieve.limit:
        raise OutOfRange(f"{what} needs primality up to {value}, sieve limit is {sieve.limit}")


def _partition_primes(sieve: PrimeSieve, n: int) -> np.ndarray:
    small = sieve.primes(n // 2)
    return small[sieve.table[n - small]]


def partition_lows(sieve: PrimeSieve, n: int) -> np.ndarray:
    """Smaller members p of every partition p + q = n, ascending."""
    _require_even(n, "n", 4)
    _need(sieve, n, "partition_lows")
    return _partition_primes(sieve, n)


def partitions(sieve: PrimeSieve, n: int) -> list[Partition]:
    """All unordered ``p + q = n`` with p <= q both prime, ascending by p."""
    _require_even(n, "n", 4)
    _need(sieve, n, "partitions")
    return [Partition(n, int(p), n - int(p)) for p in _partition_primes(sieve, n)]


def partition_count(sieve: PrimeSieve, n: int) -> int:
    _require_even(n, "n", 4)
    _need(sieve, n, "partition_count")
    return len(_partition_primes(sieve, n))


def parity_sequence(sieve: PrimeSieve, n_max: int) -> BSequence:
    """One bit per even n in 4..n_max: 1 when n has an odd number of partitions."""
    if n_max < 4:
        raise InvalidArgument(f"n_max must be >= 4, got {n_max}")
    _need(sieve, n_max, "parity_sequence")
    bits = "".join(str(partition_count(sieve, n) % 2) for n in range(4, n_max + 1, 2))
    return BSequence.from_bits(bits, origin=f"parity n<={n_max}")


def circle_with_radius(sieve: PrimeSieve, r: int, start: int, end: int) -> list[CirclePoint]:
    """Even centers in [start, end] with both ``center - r`` and ``center + r`` prime."""
    if int(r) != r or r < 1:
        raise InvalidArgument(f"radius must be a positive integer, got {r!r}")
    _require_even(start, "range start", 0)
    _require_even(end, "range end", 0)
    if start > end:
        return []
    _need(sieve, end + r, "circle_with_radius")
    out = []
    for c in range(start, end + 1, 2):
        if c - r >= 2 and sieve.table[c - r] and sieve.table[c + r]:
            out.append(CirclePoint(c, c - r, c + r))
    return out


def required_limit(k: int, max_center: int) -> int:
    """Sieve limit giving full search headroom to every center <= max_center."""
    return max(max_center + k * max(max_center - 3, 1), 2)


def _ellipse(table: np.ndarray, two_n: int, k: int) -> EllipseEntry | None:
    for m in range(1, two_n - 2, 2):
        if table[two_n - m] and table[two_n + k * m]:
            return EllipseEntry(two_n, k, m, two_n - m, two_n + k * m)
    return None


def ellipse_m(sieve: PrimeSieve, two_n: int, k: int) -> EllipseEntry | None:
    """Minimal-odd-m ellipse at ``two_n``, or None when no odd m <= two_n - 3 works.

    The sieve must cover ``two_n + k*(two_n - 3)`` so that the whole search
    is decidable; short sieves raise :class:`OutOfRange` up front.
    """
    _require_k(k)
    _require_even(two_n, "two_n", 6)
    _need(sieve, required_limit(k, two_n), "ellipse_m")
    return _ellipse(sieve.table, two_n, k)


def m_sequence(sieve: PrimeSieve, k: int, start: int, end: int) -> MSequence:
    _require_k(k)
    _require_even(start, "range start", 6)
    _require_even(end, "range end", 6)
    if start <= end:
        _need(sieve, required_limit(k, end), "m_sequence")
    table = sieve.table
    entries = []
    for c in range(start, end + 1, 2):
        e = _ellipse(table, c, k)
        if e is not None:
            entries.append(e)
    return MSequence(k, start, end, tuple(entries))


def symbol_for(m: int) -> int:
    if m % 2 == 0:
        raise InvalidArgument(f"m must be odd, got {m}")
    return 1 if m % 4 == 1 else -1


def to_b_sequence(ms: MSequence) -> BSequence:
    return BSequence(tuple(symbol_for(e.m) for e in ms.entries),
                     origin=f"k={ms.k} centers {ms.range_start}..{ms.range_end}")
