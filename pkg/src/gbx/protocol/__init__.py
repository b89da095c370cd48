"""Session-key establishment through an alternative Goldbach partition of a + b.

The CA knows every party's secret prime. For parties with secrets a and b it
picks another partition p + q = a + b, logs (p, q) for audit, and sends
``p XOR h(a)`` to one side and ``p XOR h(b)`` to the other. Each side
unmasks p with its own secret and uses it to seed a d-sequence keystream.
"""

from gbx.protocol.ca import (
    AuditLog,
    CertificationAuthority,
    Registry,
    SessionRecord,
    admissible_partitions,
    choose_session_partition,
)
from gbx.protocol.codec import (
    Agree,
    Error,
    ErrorCode,
    KeyShare,
    MessageType,
    Request,
    decode,
    encode,
    read_frame,
)
from gbx.protocol.dsequence import (
    DSequence,
    d_sequence,
    keystream_fingerprint,
    keystream_xor,
    multiplicative_order,
)
from gbx.protocol.keys import (
    WIDTH,
    MaskedKey,
    decode_int,
    encode_int,
    hash_mask,
    mask,
    party_recover,
    unmask,
)
from gbx.protocol.party import Party
