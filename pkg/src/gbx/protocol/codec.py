"""Length-prefixed binary frames for the session-key protocol.

Frame layout (all integers big-endian)::

    u32 total_length | u8 type | 16-byte session_id | payload

``total_length`` counts the whole frame, prefix included.

Payloads:

* REQUEST / AGREE: ``u8 len, sender id, u8 len, peer id [, 16-byte nonce]``
* KEYSHARE: ``u8 width, masked key [, 16-byte echoed nonce]``
* ERROR: ``u16 code, utf-8 message``
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

from gbx.errors import FrameError

HEADER = struct.Struct(">IB16s")
HEADER_SIZE = HEADER.size
SESSION_ID_SIZE = 16
NONCE_SIZE = 16
MAX_ID_LEN = 64
MAX_FRAME_SIZE = 64 * 1024


class MessageType(enum.IntEnum):
    REQUEST = 0x01
    AGREE = 0x02
    KEYSHARE = 0x03
    ERROR = 0x04


class ErrorCode(enum.IntEnum):
    UNKNOWN_PARTY = 1
    NO_ALTERNATIVE_PARTITION = 2
    NO_PENDING_REQUEST = 3
    MALFORMED = 4
    TIMEOUT = 5
    INTERNAL = 6


def _check_sid(sid):
    if len(sid) != SESSION_ID_SIZE:
        raise FrameError(f"session id must be {SESSION_ID_SIZE} bytes, got {len(sid)}")


def _check_id(pid):
    if not 1 <= len(pid) <= MAX_ID_LEN:
        raise FrameError(f"party id must be 1..{MAX_ID_LEN} bytes, got {len(pid)}")


def _check_nonce(nonce):
    if nonce is not None and len(nonce) != NONCE_SIZE:
        raise FrameError(f"nonce must be {NONCE_SIZE} bytes, got {len(nonce)}")


@dataclass(frozen=True)
class _Handshake:
    session_id: bytes
    sender: bytes
    peer: bytes
    nonce: bytes | None = None

    def __post_init__(self):
        _check_sid(self.session_id)
        _check_id(self.sender)
        _check_id(self.peer)
        _check_nonce(self.nonce)

    def payload(self) -> bytes:
        out = bytes([len(self.sender)]) + self.sender + bytes([len(self.peer)]) + self.peer
        return out + (self.nonce or b"")

    @classmethod
    def from_payload(cls, sid, payload):
        pos = 0
        ids = []
        for _ in range(2):
            if pos >= len(payload):
                raise FrameError("payload truncated before party id")
            n = payload[pos]
            pid = payload[pos + 1 : pos + 1 + n]
            if len(pid) != n:
                raise FrameError("party id runs past end of payload")
            ids.append(pid)
            pos += 1 + n
        rest = payload[pos:]
        if len(rest) not in (0, NONCE_SIZE):
            raise FrameError(f"{len(rest)} trailing bytes after party ids")
        return cls(sid, ids[0], ids[1], rest or None)


class Request(_Handshake):
    """Step 1: the initiator asks the CA for a key shared with ``peer``."""

    type = MessageType.REQUEST


class Agree(_Handshake):
    """Step 2: ``sender`` agrees to a session with initiator ``peer``.

    The CA pairs it with the pending request by party ids; the session id
    of an AGREE frame is not interpreted and may be all zeros.
    """

    type = MessageType.AGREE


@dataclass(frozen=True)
class KeyShare:
    session_id: bytes
    masked: bytes
    nonce: bytes | None = None
    type = MessageType.KEYSHARE

    def __post_init__(self):
        _check_sid(self.session_id)
        _check_nonce(self.nonce)
        if not 1 <= len(self.masked) <= 32:
            raise FrameError(f"masked key width must be 1..32, got {len(self.masked)}")

    @property
    def width(self) -> int:
        return len(self.masked)

    def payload(self) -> bytes:
        return bytes([self.width]) + self.masked + (self.nonce or b"")

    @classmethod
    def from_payload(cls, sid, payload):
        if not payload:
            raise FrameError("KEYSHARE payload is empty")
        width = payload[0]
        masked = payload[1 : 1 + width]
        if len(masked) != width:
            raise FrameError("masked key runs past end of payload")
        rest = payload[1 + width :]
        if len(rest) not in (0, NONCE_SIZE):
            raise FrameError(f"{len(rest)} trailing bytes after masked key")
        return cls(sid, masked, rest or None)


@dataclass(frozen=True)
class Error:
    session_id: bytes
    code: int
    message: str = ""
    type = MessageType.ERROR

    def __post_init__(self):
        _check_sid(self.session_id)
        if not 0 <= self.code <= 0xFFFF:
            raise FrameError(f"error code {self.code} does not fit in u16")

    def payload(self) -> bytes:
        return struct.pack(">H", self.code) + self.message.encode()

    @classmethod
    def from_payload(cls, sid, payload):
        if len(payload) < 2:
            raise FrameError("ERROR payload shorter than its code field")
        (code,) = struct.unpack(">H", payload[:2])
        try:
            message = payload[2:].decode()
        except UnicodeDecodeError as exc:
            raise FrameError(f"ERROR message is not utf-8: {exc}") from None
        return cls(sid, code, message)


Message = Request | Agree | KeyShare | Error

_CLASSES = {
    MessageType.REQUEST: Request,
    MessageType.AGREE: Agree,
    MessageType.KEYSHARE: KeyShare,
    MessageType.ERROR: Error,
}


def encode(msg: Message) -> bytes:
    payload = msg.payload()
    total = HEADER_SIZE + len(payload)
    if total > MAX_FRAME_SIZE:
        raise FrameError(f"frame of {total} bytes exceeds {MAX_FRAME_SIZE}")
    return HEADER.pack(total, int(msg.type), msg.session_id) + payload


def decode(frame: bytes) -> Message:
    if len(frame) < HEADER_SIZE:
        raise FrameError(f"frame shorter than the {HEADER_SIZE}-byte header")
    total, tag, sid = HEADER.unpack_from(frame)
    if total != len(frame):
        raise FrameError(f"length prefix says {total} bytes, frame has {len(frame)}")
    try:
        cls = _CLASSES[MessageType(tag)]
    except ValueError:
        raise FrameError(f"unknown message type 0x{tag:02x}") from None
    return cls.from_payload(sid, frame[HEADER_SIZE:])


def _read_exactly(read, n: int) -> bytes:
    buf = b""
    while len(buf) < n:
        chunk = read(n - len(buf))
        if not chunk:
            raise FrameError(f"stream closed after {len(buf)} of {n} bytes")
        buf += chunk
    return buf


def read_frame(read) -> bytes:
    """Read one frame using ``read(n)`` (e.g. ``sock.recv`` or ``file.read``)."""
    prefix = _read_exactly(read, 4)
    (total,) = struct.unpack(">I", prefix)
    if not HEADER_SIZE <= total <= MAX_FRAME_SIZE:
        raise FrameError(f"implausible frame length {total}")
    return prefix + _read_exactly(read, total - 4)
