"""Integer encoding, h(.) and XOR masking of session keys."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from gbx.errors import IntegrityFailure, InvalidArgument, OutOfRange
from gbx.primes import PrimeSieve

WIDTH = 8
HASH_INPUT_WIDTH = 8
NONCE_SIZE = 16


def encode_int(x: int, width: int = WIDTH) -> bytes:
    """Big-endian, zero-padded to ``width`` bytes."""
    if x < 0 or x >= 256**width:
        raise InvalidArgument(f"{x} does not fit in {width} bytes")
    return x.to_bytes(width, "big")


def decode_int(data: bytes) -> int:
    return int.from_bytes(data, "big")


def hash_mask(secret: int, width: int = WIDTH, nonce: bytes | None = None) -> bytes:
    """SHA-256 of the 8-byte big-endian secret (then the nonce, if any),
    truncated to ``width`` bytes."""
    if secret < 2:
        raise InvalidArgument(f"secret must be >= 2, got {secret}")
    if not 1 <= width <= 32:
        raise InvalidArgument(f"mask width must lie in [1, 32], got {width}")
    data = encode_int(secret, HASH_INPUT_WIDTH)
    if nonce is not None:
        if len(nonce) != NONCE_SIZE:
            raise InvalidArgument(f"nonce must be {NONCE_SIZE} bytes")
        data += nonce
    return hashlib.sha256(data).digest()[:width]


@dataclass(frozen=True)
class MaskedKey:
    data: bytes

    @property
    def width(self) -> int:
        return len(self.data)

    def hex(self) -> str:
        return self.data.hex()


def _xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


def mask(p: int, key_material: bytes) -> MaskedKey:
    return MaskedKey(_xor(encode_int(p, len(key_material)), key_material))


def unmask(mk: MaskedKey, key_material: bytes) -> int:
    if len(key_material) != mk.width:
        raise InvalidArgument(
            f"key material is {len(key_material)} bytes, masked key is {mk.width}")
    return decode_int(_xor(mk.data, key_material))


def party_recover(mk: MaskedKey, own_secret: int, sieve: PrimeSieve,
                  nonce: bytes | None = None) -> int:
    """Unmask a key share and check that the result is a plausible prime.

    Anything above the sieve limit counts as implausible, so a wrong secret
    (which yields a near-uniform ``8*width``-bit value) is rejected.
    """
    p = unmask(mk, hash_mask(own_secret, mk.width, nonce))
    try:
        ok = sieve.is_prime(p)
    except OutOfRange:
        raise IntegrityFailure(f"recovered value {p} is outside the plausible key range") from None
    if not ok:
        raise IntegrityFailure(f"recovered value {p} is not prime")
    return p
