import struct

import pytest
from hypothesis import given, strategies as st

from gbx import FrameError
from gbx.protocol.codec import (
    Agree,
    Error,
    KeyShare,
    MessageType,
    Request,
    decode,
    encode,
    read_frame,
)

sids = st.binary(min_size=16, max_size=16)
ids = st.binary(min_size=1, max_size=64)
nonces = st.one_of(st.none(), st.binary(min_size=16, max_size=16))
messages = st.one_of(
    st.builds(Request, sids, ids, ids, nonces),
    st.builds(Agree, sids, ids, ids, nonces),
    st.builds(KeyShare, sids, st.binary(min_size=1, max_size=32), nonces),
    st.builds(Error, sids, st.integers(0, 0xFFFF), st.text(max_size=100)),
)


def test_request_layout():
    sid = bytes(range(16))
    frame = encode(Request(sid, b"alice", b"bob"))
    assert frame == struct.pack(">IB", 31, 1) + sid + b"\x05alice\x03bob"


def test_keyshare_layout():
    frame = encode(KeyShare(bytes(16), bytes(8)))
    assert frame[4] == MessageType.KEYSHARE
    assert frame[21:] == b"\x08" + bytes(8)
    assert struct.unpack(">I", frame[:4])[0] == len(frame) == 30


def test_error_layout():
    frame = encode(Error(bytes(16), 2, "no"))
    assert frame[4] == 0x04 and frame[21:] == b"\x00\x02no"


@given(messages)
def test_round_trip(msg):
    frame = encode(msg)
    assert decode(frame) == msg
    assert read_frame(iter_reader(frame)) == frame


def iter_reader(data, chunk=3):
    pos = [0]

    def read(n):
        n = min(n, chunk)
        out = data[pos[0]:pos[0] + n]
        pos[0] += n
        return out
    return read


@given(messages, st.data())
def test_truncated_rejected(msg, data):
    frame = encode(msg)
    cut = data.draw(st.integers(0, len(frame) - 1))
    with pytest.raises(FrameError):
        decode(frame[:cut])
    with pytest.raises(FrameError):
        read_frame(iter_reader(frame[:cut]))


@given(messages, st.integers(-1000, 1000).filter(lambda d: d != 0))
def test_length_corruption_rejected(msg, delta):
    frame = encode(msg)
    total = max(0, len(frame) + delta)
    bad = struct.pack(">I", total) + frame[4:]
    with pytest.raises(FrameError):
        decode(bad)


def test_request_and_agree_are_distinct():
    a = Request(bytes(16), b"a", b"b")
    assert decode(encode(a)) != Agree(bytes(16), b"a", b"b")


@pytest.mark.parametrize("payload", [
    b"",                      # no id
    b"\x05ab",                # id runs past end
    b"\x01a",                 # second id missing
    b"\x01a\x01b\x00",        # stray byte
])
def test_bad_handshake_payload(payload):
    frame = struct.pack(">IB", 21 + len(payload), 1) + bytes(16) + payload
    with pytest.raises(FrameError):
        decode(frame)


def test_unknown_type():
    with pytest.raises(FrameError):
        decode(struct.pack(">IB", 21, 9) + bytes(16))


def test_bad_keyshare_and_error_payloads():
    with pytest.raises(FrameError):
        decode(struct.pack(">IB", 23, 3) + bytes(16) + b"\x08\x00")
    with pytest.raises(FrameError):
        decode(struct.pack(">IB", 22, 4) + bytes(16) + b"\x00")
    with pytest.raises(FrameError):
        decode(struct.pack(">IB", 24, 4) + bytes(16) + b"\x00\x01\xff")


def test_constructor_validation():
    with pytest.raises(FrameError):
        Request(bytes(15), b"a", b"b")
    with pytest.raises(FrameError):
        Request(bytes(16), b"", b"b")
    with pytest.raises(FrameError):
        Request(bytes(16), b"a" * 65, b"b")


def test_implausible_length_prefix():
    with pytest.raises(FrameError):
        read_frame(iter_reader(struct.pack(">I", 10**9) + bytes(40)))
