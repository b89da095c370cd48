"""Certification Authority: registry, partition choice, audit log and the
per-session state machine shared by every transport."""

from __future__ import annotations

import datetime as _dt
import json
import random
import threading
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

from gbx.errors import (
    AuthenticationError,
    FrameError,
    InvalidArgument,
    NoAlternativePartition,
)
from gbx.primes import PrimeSieve
from gbx.protocol import codec
from gbx.protocol.codec import Agree, Error, ErrorCode, KeyShare, Request
from gbx.protocol.keys import WIDTH, hash_mask, mask
from gbx.sequences import partition_lows

MAX_ID_LEN = codec.MAX_ID_LEN


def _as_id(pid) -> bytes:
    if isinstance(pid, str):
        pid = pid.encode()
    if not 1 <= len(pid) <= MAX_ID_LEN:
        raise InvalidArgument(f"party id must be 1..{MAX_ID_LEN} bytes")
    return bytes(pid)


class Registry:
    """party_id -> secret prime. Read-only once the CA is serving."""

    def __init__(self, secrets: dict | None = None):
        self._secrets: dict[bytes, int] = {}
        for pid, prime in (secrets or {}).items():
            self.add(pid, prime)

    def add(self, pid, prime: int) -> None:
        pid = _as_id(pid)
        if pid in self._secrets:
            raise InvalidArgument(f"duplicate party id {pid!r}")
        if prime < 3 or prime % 2 == 0:
            raise InvalidArgument(f"secret for {pid!r} must be an odd prime > 2")
        self._secrets[pid] = int(prime)

    def secret(self, pid) -> int:
        try:
            return self._secrets[_as_id(pid)]
        except KeyError:
            raise AuthenticationError(f"unknown party {pid!r}") from None

    def __contains__(self, pid):
        return _as_id(pid) in self._secrets

    def __len__(self):
        return len(self._secrets)

    def max_secret(self) -> int:
        return max(self._secrets.values(), default=3)

    def validate(self, sieve: PrimeSieve) -> None:
        for pid, prime in self._secrets.items():
            if not sieve.is_prime(prime):
                raise InvalidArgument(f"secret for {pid!r} is not prime")

    @classmethod
    def load(cls, path) -> "Registry":
        """Read ``id,prime`` lines; blank lines and ``#`` comments are skipped."""
        reg = cls()
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            pid, sep, prime = line.rpartition(",")
            if not sep:
                raise InvalidArgument(f"{path}:{lineno}: expected 'id,prime'")
            try:
                reg.add(pid.strip(), int(prime))
            except ValueError as exc:
                raise InvalidArgument(f"{path}:{lineno}: {exc}") from None
        return reg

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            for pid, prime in self._secrets.items():
                fh.write(f"{pid.decode()},{prime}\n")


@dataclass(frozen=True)
class SessionRecord:
    session_id: str
    id_a: str
    id_b: str
    n: int
    p: int
    q: int
    created_at: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "SessionRecord":
        return cls(**json.loads(line))


class AuditLog:
    """Append-only record store; writes are serialized and flushed
    before :meth:`append` returns."""

    def __init__(self, path=None):
        self.path = Path(path) if path is not None else None
        self.records: list[SessionRecord] = []
        self._lock = threading.Lock()

    def append(self, record: SessionRecord) -> None:
        with self._lock:
            if self.path is not None:
                with open(self.path, "a") as fh:
                    fh.write(record.to_json() + "\n")
                    fh.flush()
            self.records.append(record)

    def __len__(self):
        return len(self.records)

    @staticmethod
    def read(path) -> list[SessionRecord]:
        return [SessionRecord.from_json(line)
                for line in Path(path).read_text().splitlines() if line.strip()]


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _admissible_lows(sieve, a, b):
    lows = partition_lows(sieve, a + b)
    return lows[lows != min(a, b)]


def admissible_partitions(sieve: PrimeSieve, a: int, b: int) -> list[tuple[int, int]]:
    return [(int(p), a + b - int(p)) for p in _admissible_lows(sieve, a, b)]


def choose_session_partition(sieve: PrimeSieve, a: int, b: int, rng_seed=None) -> tuple[int, int]:
    """Pick ``(p, q)`` uniformly among partitions of a + b other than {a, b}.

    ``p <= q``; p is the session key and q the audit key. ``rng_seed`` is a
    seed or a :class:`random.Random` instance.
    """
    for s in (a, b):
        if s < 3 or s % 2 == 0 or not sieve.is_prime(s):
            raise InvalidArgument(f"secret {s} is not an odd prime")
    lows = _admissible_lows(sieve, a, b)
    if not len(lows):
        raise NoAlternativePartition(f"{a} + {b} = {a + b} has no other Goldbach partition")
    p = int(lows[_rng(rng_seed).randrange(len(lows))])
    return p, a + b - p


def _utc_now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="microseconds")


class CertificationAuthority:
    """Brokers sessions; transport-agnostic.

    :meth:`receive` consumes one decoded message and returns the messages to
    send as ``(recipient_id, message)`` pairs. Transports only route.
    """

    def __init__(self, registry: Registry, sieve: PrimeSieve | None = None, audit: AuditLog | None = None,
                 seed=None, width: int = WIDTH, clock: Callable[[], str] = _utc_now):
        if sieve is None:
            sieve = PrimeSieve(2 * registry.max_secret())
        registry.validate(sieve)
        self.registry = registry
        self.sieve = sieve
        self.audit = audit if audit is not None else AuditLog()
        self.width = width
        self.clock = clock
        self._rng = _rng(seed)
        self._lock = threading.Lock()
        # (initiator, responder) -> Request
        self._pending: dict[tuple[bytes, bytes], Request] = {}

    def establish(self, id_a, id_b, session_id: bytes | None = None,
                  nonce_a: bytes | None = None, nonce_b: bytes | None = None):
        """Step 3: choose (p, q), log the record, return it with both shares."""
        a = self.registry.secret(id_a)
        b = self.registry.secret(id_b)
        with self._lock:
            if session_id is None:
                session_id = self._rng.randbytes(codec.SESSION_ID_SIZE)
            p, q = choose_session_partition(self.sieve, a, b, self._rng)
            record = SessionRecord(session_id.hex(), _as_id(id_a).decode(errors="replace"),
                                   _as_id(id_b).decode(errors="replace"), a + b, p, q, self.clock())
        self.audit.append(record)
        masked_a = mask(p, hash_mask(a, self.width, nonce_a))
        masked_b = mask(p, hash_mask(b, self.width, nonce_b))
        return record, masked_a, masked_b

    def receive(self, msg) -> list[tuple[bytes, object]]:
        if isinstance(msg, Request):
            return self._on_request(msg)
        if isinstance(msg, Agree):
            return self._on_agree(msg)
        sender = getattr(msg, "sender", b"")
        return [(sender, Error(msg.session_id, ErrorCode.MALFORMED,
                               f"CA does not accept {msg.type.name} frames"))]

    def receive_frame(self, frame: bytes) -> list[tuple[bytes, bytes]]:
        try:
            msg = codec.decode(frame)
        except FrameError as exc:
            return [(b"", codec.encode(Error(bytes(16), ErrorCode.MALFORMED, str(exc))))]
        return [(to, codec.encode(m)) for to, m in self.receive(msg)]

    def _on_request(self, msg: Request):
        for pid in (msg.sender, msg.peer):
            if pid not in self.registry:
                return [(msg.sender, Error(msg.session_id, ErrorCode.UNKNOWN_PARTY,
                                           f"unknown party {pid.decode(errors='replace')}"))]
        with self._lock:
            self._pending[(msg.sender, msg.peer)] = msg
        return []

    def _on_agree(self, msg: Agree):
        sid = msg.session_id
        if msg.sender not in self.registry:
            return [(msg.sender, Error(sid, ErrorCode.UNKNOWN_PARTY,
                                       f"unknown party {msg.sender.decode(errors='replace')}"))]
        with self._lock:
            req = self._pending.pop((msg.peer, msg.sender), None)
        if req is None:
            return [(msg.sender, Error(sid, ErrorCode.NO_PENDING_REQUEST,
                                       "no pending request from that peer"))]
        sid = req.session_id
        try:
            _, masked_a, masked_b = self.establish(req.sender, msg.sender, sid, req.nonce, msg.nonce)
        except NoAlternativePartition as exc:
            err = Error(sid, ErrorCode.NO_ALTERNATIVE_PARTITION, str(exc))
            return [(req.sender, err), (msg.sender, err)]
        return [(req.sender, KeyShare(sid, masked_a.data, req.nonce)),
                (msg.sender, KeyShare(sid, masked_b.data, msg.nonce))]

