"""d-sequence keystreams: the base-2 expansion digits of 1/p."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from gbx.errors import InvalidArgument


@dataclass(frozen=True)
class DSequence:
    p: int
    start: int
    bits: tuple[int, ...]

    def __len__(self):
        return len(self.bits)

    @property
    def bitstring(self) -> str:
        return "".join(map(str, self.bits))

    def packed(self) -> bytes:
        """Bits packed MSB-first; a trailing partial byte is dropped."""
        out = bytearray()
        for j in range(0, len(self.bits) - 7, 8):
            byte = 0
            for b in self.bits[j : j + 8]:
                byte = (byte << 1) | b
            out.append(byte)
        return bytes(out)


def d_sequence(p: int, n_bits: int, start: int = 1) -> DSequence:
    """Bits ``(2**i mod p) mod 2`` for i = start .. start + n_bits - 1.

    For odd p these are the digits of 1/p after the binary point. Primality
    of ``p`` is the caller's concern.
    """
    if p < 3 or p % 2 == 0:
        raise InvalidArgument(f"d-sequence modulus must be odd and >= 3, got {p}")
    if n_bits < 0 or start < 1:
        raise InvalidArgument("n_bits must be >= 0 and start >= 1")
    r = pow(2, start, p)
    bits = []
    for _ in range(n_bits):
        bits.append(r & 1)
        r = (r * 2) % p
    return DSequence(p, start, tuple(bits))


def multiplicative_order(a: int, n: int) -> int:
    if n < 2 or a % n == 0:
        raise InvalidArgument(f"{a} has no multiplicative order modulo {n}")
    x, k = a % n, 1
    while x != 1:
        x = x * a % n
        k += 1
        if k > n:
            raise InvalidArgument(f"{a} is not a unit modulo {n}")
    return k


def keystream_xor(payload: bytes, ds: DSequence) -> bytes:
    """XOR ``payload`` with the keystream packed MSB-first. Involutive."""
    need = 8 * len(payload)
    if need > len(ds.bits):
        raise InvalidArgument(
            f"keystream has {len(ds.bits)} bits, payload needs {need}; extend n_bits")
    return bytes(x ^ k for x, k in zip(payload, ds.packed()))


def keystream_fingerprint(p: int, n_bits: int = 256) -> bytes:
    """Short digest of a keystream prefix, exchanged for key confirmation."""
    return hashlib.sha256(d_sequence(p, n_bits).packed()).digest()[:8]
