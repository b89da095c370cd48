"""Transports for the CA state machine: in-process loopback and TCP."""

from __future__ import annotations

import logging
import queue
import socket
import socketserver
import threading
from dataclasses import dataclass, field

from gbx.errors import FrameError, InvalidArgument
from gbx.protocol import codec
from gbx.protocol.ca import CertificationAuthority
from gbx.protocol.codec import Error, ErrorCode
from gbx.protocol.party import Party

log = logging.getLogger(__name__)


@dataclass
class Transcript:
    """Frames exchanged during one handshake, in order: (step, route, frame)."""

    frames: list[tuple[int, str, bytes]] = field(default_factory=list)

    def add(self, step, route, frame):
        self.frames.append((step, route, frame))


class Loopback:
    """Routes frames between the CA and in-process parties."""

    def __init__(self, ca: CertificationAuthority):
        self.ca = ca
        self.inboxes: dict[bytes, list[bytes]] = {}

    def send(self, frame: bytes) -> list[tuple[bytes, bytes]]:
        out = self.ca.receive_frame(frame)
        for to, reply in out:
            self.inboxes.setdefault(to, []).append(reply)
        return out

    def pop(self, pid: bytes) -> bytes:
        return self.inboxes[pid].pop(0)


def run_handshake(ca: CertificationAuthority, alice: Party, bob: Party,
                  session_id: bytes | None = None) -> tuple[int, int, Transcript]:
    """Run all six steps in process; returns the two recovered keys and the frames.

    Raises whatever the parties raise on refusal or integrity failure.
    """
    link = Loopback(ca)
    t = Transcript()
    a_name = alice.party_id.decode(errors="replace")
    b_name = bob.party_id.decode(errors="replace")

    f1 = codec.encode(alice.request(bob.party_id, session_id))
    t.add(1, f"{a_name} -> CA", f1)
    link.send(f1)

    f2 = codec.encode(bob.agree(alice.party_id))
    t.add(2, f"{b_name} -> CA", f2)
    link.send(f2)

    fa, fb = link.pop(alice.party_id), link.pop(bob.party_id)
    t.add(3, f"CA -> {a_name}", fa)
    t.add(3, f"CA -> {b_name}", fb)
    pa = alice.accept(codec.decode(fa))
    pb = bob.accept(codec.decode(fb))

    alice.confirm(bob.fingerprint())
    bob.confirm(alice.fingerprint())
    return pa, pb, t


class _Handler(socketserver.BaseRequestHandler):
    server: "CAServer"

    def handle(self):
        sock = self.request
        try:
            frame = codec.read_frame(sock.recv)
            msg = codec.decode(frame)
        except FrameError as exc:
            self._send(codec.encode(Error(bytes(16), ErrorCode.MALFORMED, str(exc))))
            return
        sender = getattr(msg, "sender", b"")
        inbox: queue.Queue = queue.Queue()
        self.server.register(sender, inbox)
        try:
            for to, reply in self.server.ca.receive(msg):
                self.server.route(to, codec.encode(reply))
            try:
                reply = inbox.get(timeout=self.server.wait_timeout)
            except queue.Empty:
                reply = codec.encode(Error(msg.session_id, ErrorCode.TIMEOUT,
                                           "peer did not join in time"))
            self._send(reply)
        except Exception:  # keep serving other sessions
            log.exception("session handler failed")
            self._send(codec.encode(Error(msg.session_id, ErrorCode.INTERNAL, "internal error")))
        finally:
            self.server.unregister(sender, inbox)

    def _send(self, data):
        try:
            self.request.sendall(data)
        except OSError:
            pass


class CAServer(socketserver.ThreadingTCPServer):
    """Threaded TCP front end. Each connection sends one REQUEST or AGREE
    and receives one KEYSHARE or ERROR."""

    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, addr, ca: CertificationAuthority, wait_timeout: float = 30.0):
        super().__init__(addr, _Handler)
        self.ca = ca
        self.wait_timeout = wait_timeout
        self._routes: dict[bytes, queue.Queue] = {}
        self._lock = threading.Lock()

    def register(self, pid, inbox):
        with self._lock:
            self._routes[pid] = inbox

    def unregister(self, pid, inbox):
        with self._lock:
            if self._routes.get(pid) is inbox:
                del self._routes[pid]

    def route(self, pid, frame):
        with self._lock:
            inbox = self._routes.get(pid)
        if inbox is not None:
            inbox.put(frame)


def parse_addr(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep:
        raise InvalidArgument(f"expected HOST:PORT, got {text!r}")
    try:
        return host or "127.0.0.1", int(port)
    except ValueError:
        raise InvalidArgument(f"bad port in {text!r}") from None


def exchange(addr, frame: bytes, timeout: float = 60.0) -> bytes:
    """Send one frame to the CA and wait for its single reply."""
    with socket.create_connection(addr, timeout=timeout) as sock:
        sock.sendall(frame)
        return codec.read_frame(sock.recv)


def request_key(party: Party, peer, addr, *, initiate: bool = True,
                session_id: bytes | None = None, timeout: float = 60.0) -> int:
    msg = party.request(peer, session_id) if initiate else party.agree(peer)
    reply = exchange(addr, codec.encode(msg), timeout)
    return party.accept(codec.decode(reply))
