"""Exit criteria. Each test records one PASS/FAIL line, printed at the end of
the run by the hook in conftest.py."""

import random
import struct
import subprocess
import sys
import time

import pytest

from conftest import ACCEPTANCE
from gbx import (
    FrameError,
    IntegrityFailure,
    NoAlternativePartition,
    autocorrelation,
    build_sieve,
    circle_with_radius,
    count_windows,
    ellipse_m,
    m_sequence,
    parity_sequence,
    required_limit,
    to_b_sequence,
)
from gbx import compare
from gbx import reference as ref
from gbx.protocol import codec
from gbx.protocol.ca import AuditLog, CertificationAuthority, Registry
from gbx.protocol.codec import Agree, Error, KeyShare, Request
from gbx.protocol.dsequence import d_sequence, multiplicative_order
from gbx.protocol.party import Party
from gbx.protocol.transport import run_handshake
from oracles import double_loop_autocorr, long_division_bits, minimal_period


def check(name, ok, detail=""):
    ACCEPTANCE.append((name, bool(ok), detail))
    assert ok, f"{name}: {detail}"


def test_1_table1_reproduction():
    t0 = time.perf_counter()
    ms = m_sequence(build_sieve(required_limit(5, 42)), 5, 6, 42)
    published = [r[0] for r in ref.TABLE1]
    rows = [e.row() for e in ms.restrict(published)]
    rep = compare.compare_table1()
    elapsed = time.perf_counter() - t0
    extras = sorted(set(ms.centers) - set(published))
    ok = (rows == list(ref.TABLE1) and ms.restrict(published).values == list(ref.TABLE1_M)
          and extras == [16, 28] and rep.mismatches == 0
          and sum("absent in paper" in l for l in rep.lines) == 2 and elapsed < 1.0)
    check("1 Table 1 reproduction", ok,
          f"13/13 rows exact, extra centers {extras} reported as omissions, {elapsed:.3f}s")


def test_2_exclusion_law():
    sieve = build_sieve(required_limit(7, 2000))
    violations = []
    for k in (3, 5, 7):
        for c in range(6, 2001, 2):
            if c % k == 0 and ellipse_m(sieve, c, k) is not None:
                violations.append((k, c))
        violations += [(k, e.two_n) for e in m_sequence(sieve, k, 6, 2000) if e.two_n % k == 0]
    check("2 exclusion law", not violations, f"k in {{3,5,7}}, centers <= 2000, "
          f"{len(violations)} violations")


def test_3_parity_sequence():
    t0 = time.perf_counter()
    n = len(ref.PARITY_PREFIX)
    top = 4 + 2 * (n - 1)
    got = parity_sequence(build_sieve(top), top).bits
    elapsed = time.perf_counter() - t0
    bad = [i for i, (a, b) in enumerate(zip(ref.PARITY_PREFIX, got)) if a != b]
    check("3 parity sequence", got == ref.PARITY_PREFIX and elapsed < 1.0,
          f"36 bits, mismatch indices {bad}, {elapsed:.3f}s")


def test_4_circle_sequence():
    got = circle_with_radius(build_sieve(20), 3, 8, 14)
    check("4 circle radius 3", got == list(ref.CIRCLE_R3), f"{[tuple(p) for p in got]}")


def _generated_sequences():
    """Every b-sequence the acceptance checks run over."""
    sieve = build_sieve(required_limit(7, 4000))
    seqs = {}
    for k in (1, 3, 5, 7):
        for top in (2000, 4000):
            seqs[f"k={k} centers<={top}"] = to_b_sequence(m_sequence(sieve, k, 6, top))
    seqs["parity n<=4000"] = parity_sequence(sieve, 4000)
    return seqs


@pytest.fixture(scope="module")
def sequences():
    return _generated_sequences()


def test_5_autocorrelation(sequences):
    lag0 = all(autocorrelation(b, 0, mode).values[0] == 1
               for b in sequences.values() for mode in ("circular", "linear"))
    b = sequences["k=5 centers<=4000"]
    c = autocorrelation(b, 100, "circular")
    off = c.off_peak()
    oracle_err = 0.0
    for mode in ("circular", "linear"):
        got = autocorrelation(b, 100, mode).values
        want = double_loop_autocorr(b.symbols, 100, mode)
        oracle_err = max(oracle_err, max(abs(x - y) for x, y in zip(got, want)))
    ok = lag0 and off.max() < 0.2 and off.mean() < 0.05 and oracle_err <= 1e-12
    check("5 autocorrelation", ok,
          f"C(0)=1 on {len(sequences)} sequences; k=5 L={len(b)}: max|C|={off.max():.4f} "
          f"(<0.2), mean|C|={off.mean():.4f} (<0.05), oracle err {oracle_err:.1e}")


def test_6_window_statistics(sequences):
    rng = random.Random(6)
    failures = []
    for name, b in sequences.items():
        bits = b.bits
        L = len(bits)
        cache = {w: count_windows(bits, w) for w in range(1, 22)}
        for w in range(1, 21):
            if cache[w].total != L - w + 1:
                failures.append((name, "total", w))
        if abs(cache[2]["01"] - cache[2]["10"]) > 1:
            failures.append((name, "transition"))
        for _ in range(100):
            w = rng.randint(1, 20)
            x = "".join(rng.choice("01") for _ in range(w))
            lhs = cache[w][x]
            rhs = cache[w + 1][x + "0"] + cache[w + 1][x + "1"] + int(bits.endswith(x))
            if lhs != rhs:
                failures.append((name, "extension", x))
    proc = subprocess.run([sys.executable, "-m", "gbx", "compare-table2"],
                          capture_output=True, text=True)
    diag_ok = proc.returncode == 0 and "violate |count(01) - count(10)|" in proc.stdout
    check("6 window statistics", not failures and diag_ok,
          f"{len(sequences)} sequences x w in [1,20], {len(failures)} identity failures; "
          f"compare-table2 exit {proc.returncode}")


def test_7_protocol_round_trip():
    t0 = time.perf_counter()
    rng = random.Random(7)
    sieve = build_sieve(2 * 10**6)
    primes = [int(p) for p in sieve.primes(10**6 - 1)[1:]]
    ca = CertificationAuthority(Registry(), sieve, AuditLog(), seed=7)
    ok_sessions = refused = bad = 0
    for i in range(1000):
        a, b = rng.choice(primes), rng.choice(primes)
        ida, idb = f"a{i}".encode(), f"b{i}".encode()
        ca.registry.add(ida, a)
        ca.registry.add(idb, b)
        alice = Party(ida, a, sieve=sieve, randbytes=rng.randbytes)
        bob = Party(idb, b, sieve=sieve, randbytes=rng.randbytes)
        try:
            pa, pb, _ = run_handshake(ca, alice, bob)
        except Exception as exc:
            if "no other Goldbach partition" in str(exc):
                refused += 1
                continue
            raise
        rec = ca.audit.records[-1]
        if not (pa == pb == rec.p and rec.p + rec.q == a + b
                and (rec.p, rec.q) != (min(a, b), max(a, b))):
            bad += 1
        ok_sessions += 1
    audit_ok = (len(ca.audit) == ok_sessions
                and len({r.session_id for r in ca.audit.records}) == ok_sessions)
    elapsed = time.perf_counter() - t0
    n_records = len(ca.audit)

    detected = by_primality = 0
    for i in range(1000):
        ida, idb = f"a{i}".encode(), f"b{i}".encode()
        a, b = ca.registry.secret(ida), ca.registry.secret(idb)
        try:
            _, ma, mb = ca.establish(ida, idb)
        except NoAlternativePartition:
            continue
        data = bytearray(ma.data)
        data[rng.randrange(len(data))] ^= rng.randint(1, 255)
        alice = Party(ida, a, sieve=sieve)
        bob = Party(idb, b, sieve=sieve)
        bob.accept(KeyShare(bytes(16), mb.data))
        try:
            alice.accept(KeyShare(bytes(16), bytes(data)))
        except IntegrityFailure:
            detected += 1
            by_primality += 1
            continue
        try:
            alice.confirm(bob.fingerprint())
        except IntegrityFailure:
            detected += 1

    ok = bad == 0 and audit_ok and ok_sessions + refused == 1000 and elapsed < 10 and detected >= 999
    check("7 protocol round trip", ok,
          f"{ok_sessions} ok / {refused} refused, {bad} bad, {n_records} audit records, "
          f"{elapsed:.2f}s; tamper detected {detected}/1000 "
          f"({by_primality} by primality check)")


def _random_message(rng):
    sid = rng.randbytes(16)
    pid = lambda: rng.randbytes(rng.randint(1, 64))
    nonce = rng.randbytes(16) if rng.random() < 0.5 else None
    kind = rng.randrange(4)
    if kind == 0:
        return Request(sid, pid(), pid(), nonce)
    if kind == 1:
        return Agree(sid, pid(), pid(), nonce)
    if kind == 2:
        return KeyShare(sid, rng.randbytes(rng.randint(1, 32)), nonce)
    text = "".join(chr(rng.randint(32, 0x2FFF)) for _ in range(rng.randint(0, 40)))
    return Error(sid, rng.randint(0, 0xFFFF), text)


def test_8_codec():
    rng = random.Random(8)
    round_trip = truncated = corrupted = 0
    for _ in range(10_000):
        msg = _random_message(rng)
        frame = codec.encode(msg)
        round_trip += codec.decode(frame) == msg
        try:
            codec.decode(frame[: rng.randrange(len(frame))])
        except FrameError:
            truncated += 1
        delta = rng.choice([-1, 1]) * rng.randint(1, 300)
        try:
            codec.decode(struct.pack(">I", max(0, len(frame) + delta)) + frame[4:])
        except FrameError:
            corrupted += 1
    ok = round_trip == truncated == corrupted == 10_000
    check("8 codec", ok, f"round-trip {round_trip}, truncated rejected {truncated}, "
          f"length-corrupted rejected {corrupted} of 10000")


def test_9_d_sequence():
    first = d_sequence(7, 9).bitstring
    mismatched = [int(p) for p in build_sieve(1000).primes()[1:]
                  if list(d_sequence(int(p), 200).bits) != long_division_bits(int(p), 200)]
    period = minimal_period(d_sequence(13, 120).bits)
    ok = first == "001001001" and not mismatched and period == 12 == multiplicative_order(2, 13)
    check("9 d-sequence", ok, f"p=7 -> {first}; {len(mismatched)} mismatches for p<1000; "
          f"period(13)={period}")


CLI_RUNS = [
    ["sieve", "--limit", "2000", "--list"],
    ["partitions", "34"],
    ["parity", "--max", "2000"],
    ["circle", "--radius", "3", "--max", "2000"],
    ["mseq", "--k", "5", "--max", "2000", "--format", "json"],
    ["mseq", "--k", "5", "--max", "42", "--format", "table"],
    ["autocorr", "--k", "5", "--max", "2000", "--center-bound", "4n", "--max-lag", "100"],
    ["autocorr", "--source", "parity", "--max", "2000", "--mode", "linear", "--format", "json"],
    ["windows", "--k", "5", "--max", "2000", "--w-min", "2", "--w-max", "20"],
    ["windows", "--k", "1", "--max", "2000", "--unique"],
    ["locate", "--k", "5", "--max", "2000", "--pattern", "1101101"],
    ["compare-table2"],
    ["compare-tables"],
    ["demo-handshake", "--a", "11", "--b", "23"],
    ["demo-handshake", "--a", "1009", "--b", "2003", "--nonce"],
]


def _gbx(argv, **kw):
    return subprocess.run([sys.executable, "-m", "gbx", *argv], capture_output=True, **kw)


def _network_session(tmp_path, tag):
    reg = tmp_path / "registry.txt"
    reg.write_text("alice,1009\nbob,2003\n")
    server = subprocess.Popen(
        [sys.executable, "-m", "gbx", "ca", "serve", "--registry", str(reg),
         "--addr", "127.0.0.1:0", "--audit", str(tmp_path / f"audit{tag}.jsonl"),
         "--seed", "11", "--timeout", "20"],
        stdout=subprocess.PIPE, text=True)
    try:
        addr = server.stdout.readline().split()[3]
        common = ["--ca", addr, "--seed", "4", "--nonce"]
        req = subprocess.Popen([sys.executable, "-m", "gbx", "party", "request", "--id", "alice",
                                "--peer", "bob", "--secret", "1009", *common],
                               stdout=subprocess.PIPE)
        for _ in range(50):
            time.sleep(0.2)
            agree = _gbx(["party", "agree", "--id", "bob", "--peer", "alice",
                          "--secret", "2003", *common])
            if agree.returncode == 0:
                break
        a_out, _ = req.communicate(timeout=30)
        return a_out + b"|" + agree.stdout
    finally:
        server.terminate()
        server.wait(10)


def test_10_determinism(tmp_path):
    differing = []
    for argv in CLI_RUNS:
        argv = argv + ["--seed", "42"]
        r1, r2 = _gbx(argv), _gbx(argv)
        if r1.returncode != 0 or r1.stdout != r2.stdout or not r1.stdout:
            differing.append(argv[0])
    n1 = _network_session(tmp_path, 1)
    n2 = _network_session(tmp_path, 2)
    a, b = n1.split(b"|")
    key_a = [l for l in a.splitlines() if l.startswith(b"session_key=")]
    key_b = [l for l in b.splitlines() if l.startswith(b"session_key=")]
    if n1 != n2 or not key_a or key_a != key_b:
        differing.append("ca serve/party")
    check("10 determinism", not differing,
          f"{len(CLI_RUNS)} local invocations + ca/party network session, "
          f"differing: {differing or 'none'}")
