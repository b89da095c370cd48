"""Party side of the protocol: build requests, recover p, derive the keystream."""

from __future__ import annotations

import hmac
import os

from gbx.errors import AuthenticationError, FrameError, IntegrityFailure, InvalidArgument
from gbx.primes import PrimeSieve
from gbx.protocol.codec import Agree, Error, KeyShare, Request, SESSION_ID_SIZE
from gbx.protocol.dsequence import d_sequence, keystream_fingerprint, keystream_xor
from gbx.protocol.keys import NONCE_SIZE, WIDTH, MaskedKey, party_recover

# Keys above this are treated as implausible; it bounds the sieve a party builds.
DEFAULT_MAX_KEY = 1 << 22


class Party:
    def __init__(self, party_id, secret: int, *, width: int = WIDTH,
                 sieve: PrimeSieve | None = None, use_nonce: bool = False, randbytes=os.urandom):
        if isinstance(party_id, str):
            party_id = party_id.encode()
        if secret < 3 or secret % 2 == 0:
            raise InvalidArgument("secret must be an odd prime > 2")
        self.party_id = party_id
        self.secret = secret
        self.width = width
        self.sieve = sieve if sieve is not None else PrimeSieve(DEFAULT_MAX_KEY)
        self.use_nonce = use_nonce
        self._randbytes = randbytes
        self.nonce: bytes | None = None
        self.session_id: bytes | None = None
        self.session_key: int | None = None

    def _fresh_nonce(self):
        self.nonce = self._randbytes(NONCE_SIZE) if self.use_nonce else None
        return self.nonce

    def request(self, peer, session_id: bytes | None = None) -> Request:
        """Step 1."""
        if isinstance(peer, str):
            peer = peer.encode()
        self.session_id = session_id if session_id is not None else self._randbytes(SESSION_ID_SIZE)
        return Request(self.session_id, self.party_id, peer, self._fresh_nonce())

    def agree(self, peer) -> Agree:
        """Step 2."""
        if isinstance(peer, str):
            peer = peer.encode()
        return Agree(bytes(SESSION_ID_SIZE), self.party_id, peer, self._fresh_nonce())

    def accept(self, msg) -> int:
        """Steps 4/5: recover p from the CA's key share."""
        if isinstance(msg, Error):
            raise AuthenticationError(f"CA refused the session (code {msg.code}): {msg.message}")
        if not isinstance(msg, KeyShare):
            raise FrameError(f"expected KEYSHARE, got {msg.type.name}")
        if msg.width != self.width:
            raise IntegrityFailure(f"key share width {msg.width} != expected {self.width}")
        if msg.nonce != self.nonce:
            raise IntegrityFailure("key share does not echo our nonce (possible replay)")
        p = party_recover(MaskedKey(msg.masked), self.secret, self.sieve, self.nonce)
        self.session_id = msg.session_id
        self.session_key = p
        return p

    def fingerprint(self) -> bytes:
        return keystream_fingerprint(self._key())

    def confirm(self, peer_fingerprint: bytes) -> None:
        """Step 6 key confirmation: both sides must derive the same keystream."""
        if not hmac.compare_digest(self.fingerprint(), peer_fingerprint):
            raise IntegrityFailure("keystream fingerprints differ; session keys disagree")

    def _key(self) -> int:
        if self.session_key is None:
            raise InvalidArgument("no session key established yet")
        return self.session_key

    def xor(self, payload: bytes, offset_bits: int = 0) -> bytes:
        """Encrypt or decrypt ``payload`` with the d-sequence of p."""
        ds = d_sequence(self._key(), 8 * len(payload), start=1 + offset_bits)
        return keystream_xor(payload, ds)
