"""``gbx`` command line interface.

Exit status: 0 on success, 1 on invalid arguments, 2 on runtime errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys

from gbx import compare
from gbx.analysis import autocorrelation, count_windows, locate, unique_window_stats
from gbx.errors import GbxError, InvalidArgument
from gbx.export import export_series
from gbx.primes import PrimeSieve
from gbx.protocol.ca import AuditLog, CertificationAuthority, Registry
from gbx.protocol.dsequence import d_sequence
from gbx.protocol.party import DEFAULT_MAX_KEY, Party
from gbx.sequences import (
    BSequence,
    circle_with_radius,
    m_sequence,
    parity_sequence,
    partitions,
    required_limit,
    to_b_sequence,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _odd_k(text):
    k = int(text)
    if k < 1 or k % 2 == 0:
        raise argparse.ArgumentTypeError(f"k must be an odd integer >= 1, got {text}")
    return k


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _bits_arg(text):
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError("expected a nonempty string of 0/1")
    return text


# -- sequence sources -------------------------------------------------------

def _top(args) -> int:
    top = compare.max_center(args.max, args.center_bound)
    if top < 6:
        raise InvalidArgument(f"--max must give centers >= 6, got {top}")
    return top


def _mseq(args):
    top = _top(args)
    return m_sequence(PrimeSieve(required_limit(args.k, top)), args.k, 6, top)


def _bseq(args) -> BSequence:
    if getattr(args, "bits", None):
        return BSequence.from_bits(args.bits, "command line")
    if args.source == "parity":
        top = max(args.max - args.max % 2, 4)
        return parity_sequence(PrimeSieve(top), top)
    return to_b_sequence(_mseq(args))


def _add_source(p, bits=False):
    p.add_argument("--k", type=_odd_k, default=5, help="ellipse parameter (odd, default 5)")
    p.add_argument("--max", type=int, default=2000, help="range bound N (default 2000)")
    p.add_argument("--center-bound", choices=compare.CENTER_BOUNDS, default="2n",
                   help="read N as 2n <= N ('2n', default) or n <= N, i.e. 2n <= 2N ('4n')")
    p.add_argument("--source", choices=("mseq", "parity"), default="mseq",
                   help="b-sequence from the k-ellipse m-sequence or from partition parity")
    if bits:
        p.add_argument("--bits", type=_bits_arg, help="analyse this bit string instead")


# -- subcommands ------------------------------------------------------------

def cmd_sieve(args):
    sieve = PrimeSieve(args.limit)
    if args.list:
        return "".join(f"{p}\n" for p in sieve.primes())
    return f"{sieve.count()}\n"


def cmd_partitions(args):
    n = args.n
    if n % 2 or n < 4:
        raise InvalidArgument(f"n must be an even integer >= 4, got {n}")
    parts = partitions(PrimeSieve(n), n)
    if args.format == "json":
        return _json_text({"n": n, "count": len(parts), "partitions": [[p, q] for _, p, q in parts]})
    if args.format == "table":
        return "".join(f"{n} = {p} + {q}\n" for _, p, q in parts) + f"count: {len(parts)}\n"
    return _csv_text(("n", "p", "q"), parts)


def cmd_parity(args):
    if args.max < 4:
        raise InvalidArgument(f"--max must be >= 4, got {args.max}")
    top = args.max - args.max % 2
    sieve = PrimeSieve(top)
    b = parity_sequence(sieve, top)
    if args.format == "bits":
        return b.bits + "\n"
    rows = [(4 + 2 * i, bit) for i, bit in enumerate(b.bits)]
    if args.format == "json":
        return _json_text({"n_max": top, "bits": b.bits})
    return _csv_text(("n", "bit"), rows)


def cmd_circle(args):
    lo = args.min + args.min % 2
    hi = args.max - args.max % 2
    pts = circle_with_radius(PrimeSieve(max(hi + args.radius, 2)), args.radius, lo, hi)
    if args.format == "json":
        return _json_text({"radius": args.radius, "points": [list(p) for p in pts]})
    if args.format == "table":
        return "".join(f"{c}: ({a},{b})\n" for c, a, b in pts)
    return _csv_text(("two_n", "lower", "upper"), pts)


def cmd_mseq(args):
    ms = _mseq(args)
    if args.format == "table":
        lines = [f"{'2n':>6} {'2n-m':>6} {'2n+km':>7} {'m':>4} {'4n+(k-1)m':>10}"]
        lines += [f"{a:>6} {b:>6} {c:>7} {d:>4} {e:>10}" for a, b, c, d, e in (x.row() for x in ms)]
        return "\n".join(lines) + "\n"
    return export_series(ms, args.format).decode()


def cmd_autocorr(args):
    b = _bseq(args)
    max_lag = args.max_lag if args.max_lag is not None else min(100, len(b) - 1)
    return export_series(autocorrelation(b, max_lag, args.mode), args.format).decode()


def cmd_windows(args):
    bits = _bseq(args).bits
    if args.w_min < 1 or args.w_min > args.w_max:
        raise InvalidArgument("need 1 <= --w-min <= --w-max")
    if args.unique:
        header = "# interpretive: windows whose pattern occurs exactly once\n" \
            if args.format == "csv" else ""
        stats = unique_window_stats(bits, args.w_min, args.w_max)
        return header + export_series(stats, args.format).decode()
    wmax = min(args.w_max, len(bits))
    return export_series([count_windows(bits, w) for w in range(args.w_min, wmax + 1)],
                         args.format).decode()


def cmd_locate(args):
    bits = _bseq(args).bits
    pos = locate(bits, args.pattern)
    if args.format == "json":
        return _json_text({"pattern": args.pattern, "length": len(bits),
                           "positions": pos, "unique": len(pos) == 1})
    return _csv_text(("pattern", "position"), [(args.pattern, i) for i in pos])


def cmd_compare_table2(args):
    return compare.compare_table2(args.bound).render()


def cmd_compare_tables(args):
    return compare.compare_tables(args.bound)


def _seeded(seed):
    """randbytes callable: deterministic under a seed, os.urandom otherwise."""
    if seed is None:
        return os.urandom
    return random.Random(seed).randbytes


def cmd_ca_serve(args):
    from gbx.protocol.transport import CAServer, parse_addr

    registry = Registry.load(args.registry)
    ca = CertificationAuthority(registry, audit=AuditLog(args.audit), seed=args.seed)
    addr = parse_addr(args.addr)
    with CAServer(addr, ca, wait_timeout=args.timeout) as server:
        host, port = server.server_address[:2]
        print(f"CA listening on {host}:{port} with {len(registry)} parties", flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
    return ""


def cmd_party(args):
    from gbx.protocol.transport import parse_addr, request_key

    party = Party(args.id, args.secret, sieve=PrimeSieve(args.max_key),
                  use_nonce=args.nonce, randbytes=_seeded(args.seed))
    sid = bytes.fromhex(args.session_id) if args.session_id else None
    p = request_key(party, args.peer, parse_addr(args.ca),
                    initiate=args.party_cmd == "request", session_id=sid, timeout=args.timeout)
    return (f"session_id={party.session_id.hex()}\n"
            f"session_key={p}\n"
            f"fingerprint={party.fingerprint().hex()}\n")


def cmd_demo_handshake(args):
    from gbx.protocol.transport import run_handshake

    rng = random.Random(args.seed) if args.seed is not None else None
    seed_for = (lambda: rng.getrandbits(64)) if rng else (lambda: None)
    registry = Registry({"alice": args.a, "bob": args.b})
    sieve = PrimeSieve(max(2 * max(args.a, args.b), 16))
    ca = CertificationAuthority(registry, sieve, seed=seed_for(), clock=lambda: "")
    key_sieve = PrimeSieve(max(args.a + args.b, 16))
    alice = Party("alice", args.a, sieve=key_sieve, use_nonce=args.nonce,
                  randbytes=_seeded(seed_for()))
    bob = Party("bob", args.b, sieve=key_sieve, use_nonce=args.nonce,
                randbytes=_seeded(seed_for()))
    out = [f"secrets: a={args.a} b={args.b} n={args.a + args.b}"]
    steps = {1: "request", 2: "agree", 3: "keyshare"}
    pa, pb, transcript = run_handshake(ca, alice, bob)
    for step, route, frame in transcript.frames:
        out.append(f"step {step} {steps[step]:<8} {route:<12} {frame.hex()}")
    rec = ca.audit.records[-1]
    out.append(f"step 4 alice recovers p={pa}")
    out.append(f"step 5 bob recovers p={pb}")
    out.append(f"audit: session={rec.session_id} n={rec.n} p={rec.p} q={rec.q}")
    ct = alice.xor(args.message.encode())
    out.append(f"step 6 keystream d-sequence(1/{pa}) first 32 bits "
               f"{d_sequence(pa, 32).bitstring}")
    out.append(f"step 6 alice -> bob ciphertext {ct.hex()}")
    out.append(f"step 6 bob decrypts {bob.xor(ct).decode(errors='replace')!r}")
    return "\n".join(out) + "\n"


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to FILE instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="seed for any randomness")

    parser = _Parser(prog="gbx", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, func, help_, formats=None, default=None):
        p = sub.add_parser(name, help=help_, description=help_, parents=[common])
        p.set_defaults(func=func)
        if formats:
            p.add_argument("--format", choices=formats, default=default or formats[0])
        return p

    p = add("sieve", cmd_sieve, "count or list primes up to a limit")
    p.add_argument("--limit", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--count", action="store_true", help="print the prime count (default)")
    g.add_argument("--list", action="store_true", help="print the primes, one per line")

    p = add("partitions", cmd_partitions, "Goldbach partitions of an even number",
            ("csv", "json", "table"))
    p.add_argument("n", type=int)

    p = add("parity", cmd_parity, "partition-count parity bits for even n = 4..MAX",
            ("bits", "csv", "json"))
    p.add_argument("--max", type=int, required=True)

    p = add("circle", cmd_circle, "Goldbach circle of a given radius", ("csv", "json", "table"))
    p.add_argument("--radius", type=_positive, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--min", type=int, default=4)

    p = add("mseq", cmd_mseq, "(1,k) ellipse m-sequence in Table 1 layout",
            ("csv", "json", "table"))
    p.add_argument("--k", type=_odd_k, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--center-bound", choices=compare.CENTER_BOUNDS, default="2n")

    p = add("autocorr", cmd_autocorr, "autocorrelation C(i) of a b-sequence", ("csv", "json"))
    _add_source(p, bits=True)
    p.add_argument("--max-lag", type=int, default=None, help="default min(100, L-1)")
    p.add_argument("--mode", choices=("circular", "linear"), default="circular")

    p = add("windows", cmd_windows, "sliding-window substring counts", ("csv", "json"))
    _add_source(p, bits=True)
    p.add_argument("--w-min", type=int, default=2)
    p.add_argument("--w-max", type=int, default=20)
    p.add_argument("--unique", action="store_true",
                   help="emit w,unique_count (interpretive reading of count-per-length tables)")

    p = add("locate", cmd_locate, "positions of a bit pattern in a b-sequence", ("csv", "json"))
    _add_source(p, bits=True)
    p.add_argument("--pattern", type=_bits_arg, required=True)

    p = add("compare-table2", cmd_compare_table2,
            "diagnose the published substring counts against computed ones")
    p.add_argument("--bound", type=int, default=2000)

    p = add("compare-tables", cmd_compare_tables,
            "compare every published table with the computed values")
    p.add_argument("--bound", type=int, default=2000)

    ca = sub.add_parser("ca", help="certification authority")
    ca_sub = ca.add_subparsers(dest="ca_cmd", required=True, parser_class=_Parser)
    p = ca_sub.add_parser("serve", help="serve key requests over TCP", parents=[common])
    p.set_defaults(func=cmd_ca_serve)
    p.add_argument("--registry", required=True, help="file of 'id,prime' lines")
    p.add_argument("--addr", default="127.0.0.1:7700", help="HOST:PORT (port 0 picks one)")
    p.add_argument("--audit", required=True, help="append-only JSON-lines audit file")
    p.add_argument("--timeout", type=float, default=30.0, help="seconds to wait for the peer")

    party = sub.add_parser("party", help="party side of the key protocol")
    party_sub = party.add_subparsers(dest="party_cmd", required=True, parser_class=_Parser)
    for name, help_ in (("request", "initiate a session with PEER"),
                        ("agree", "agree to a session requested by PEER")):
        p = party_sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=cmd_party)
        p.add_argument("--id", required=True)
        p.add_argument("--peer", required=True)
        p.add_argument("--secret", type=int, required=True)
        p.add_argument("--ca", required=True, help="HOST:PORT")
        p.add_argument("--nonce", action="store_true", help="send a fresh anti-replay nonce")
        p.add_argument("--session-id", help="32 hex digits (request only)")
        p.add_argument("--max-key", type=int, default=DEFAULT_MAX_KEY,
                       help="largest plausible session key")
        p.add_argument("--timeout", type=float, default=60.0)

    p = add("demo-handshake", cmd_demo_handshake, "run all six protocol steps in process")
    p.add_argument("--a", type=int, default=11, help="Alice's secret prime")
    p.add_argument("--b", type=int, default=23, help="Bob's secret prime")
    p.add_argument("--nonce", action="store_true")
    p.add_argument("--message", default="hello bob")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        text = args.func(args)
    except InvalidArgument as exc:
        print(f"gbx: error: {exc}", file=sys.stderr)
        return 1
    except (GbxError, OSError) as exc:
        print(f"gbx: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
