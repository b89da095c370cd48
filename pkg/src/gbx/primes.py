"""Sieve of Eratosthenes; the only primality authority used by the package."""

from __future__ import annotations

import numpy as np

from gbx.errors import InvalidArgument, OutOfRange


class PrimeSieve:
    """Primality table over ``[0, limit]``.

    Immutable once built, so one instance can be shared between threads.
    """

    __slots__ = ("limit", "_table", "_primes")

    def __init__(self, limit: int):
        if int(limit) != limit or limit < 2:
            raise InvalidArgument(f"sieve limit must be an integer >= 2, got {limit!r}")
        limit = int(limit)
        table = np.ones(limit + 1, dtype=bool)
        table[:2] = False
        table[4::2] = False
        for i in range(3, int(limit**0.5) + 1, 2):
            if table[i]:
                table[i * i :: 2 * i] = False
        table.setflags(write=False)
        self.limit = limit
        self._table = table
        self._primes = None

    def __repr__(self):
        return f"PrimeSieve(limit={self.limit})"

    def __contains__(self, n):
        return self.is_prime(n)

    def _check(self, n):
        if n < 0:
            raise InvalidArgument(f"primality is defined for nonnegative integers, got {n}")
        if n > self.limit:
            raise OutOfRange(f"{n} exceeds sieve limit {self.limit}; build a larger sieve")

    def is_prime(self, n: int) -> bool:
        self._check(n)
        return bool(self._table[n])

    @property
    def table(self) -> np.ndarray:
        """Read-only boolean view, ``table[n]`` is True iff n is prime."""
        return self._table

    def primes(self, upto: int | None = None) -> np.ndarray:
        """Ascending array of primes <= ``upto`` (default: the whole sieve)."""
        if self._primes is None:
            arr = np.flatnonzero(self._table)
            arr.setflags(write=False)
            self._primes = arr
        if upto is None:
            return self._primes
        self._check(upto)
        return self._primes[: np.searchsorted(self._primes, upto, side="right")]

    def count(self, upto: int | None = None) -> int:
        return len(self.primes(upto))


def build_sieve(limit: int) -> PrimeSieve:
    return PrimeSieve(limit)


def is_prime(sieve: PrimeSieve, n: int) -> bool:
    """Primality of ``n``; raises :class:`OutOfRange` past the sieve limit."""
    return sieve.is_prime(n)
