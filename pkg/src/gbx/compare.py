"""Side-by-side comparison of computed sequences with the published tables."""

from __future__ import annotations

from dataclasses import dataclass, field

from gbx import reference as ref
from gbx.analysis import count_windows, unique_window_count
from gbx.primes import PrimeSieve
from gbx.sequences import m_sequence, parity_sequence, required_limit, to_b_sequence

CENTER_BOUNDS = ("2n", "4n")


def max_center(bound: int, reading: str) -> int:
    """Largest even center for a range bound N.

    ``"2n"`` reads the bound as 2n <= N; ``"4n"`` reads it as n <= N, that is
    2n <= 2N.
    """
    if reading not in CENTER_BOUNDS:
        raise ValueError(f"center bound reading must be one of {CENTER_BOUNDS}")
    top = bound if reading == "2n" else 2 * bound
    return top - top % 2


def b_bits(k: int, top: int, sieve: PrimeSieve | None = None) -> str:
    if sieve is None or sieve.limit < required_limit(k, top):
        sieve = PrimeSieve(required_limit(k, top))
    return to_b_sequence(m_sequence(sieve, k, 6, top)).bits


@dataclass
class Report:
    title: str
    lines: list[str] = field(default_factory=list)
    mismatches: int = 0
    notes: list[str] = field(default_factory=list)

    def add(self, line: str = ""):
        self.lines.append(line)

    def render(self) -> str:
        out = [f"== {self.title} =="] + self.lines
        if self.notes:
            out.append("notes:")
            out += [f"  - {n}" for n in self.notes]
        return "\n".join(out) + "\n"


def compare_table1() -> Report:
    rep = Report("Table 1: k=5 ellipse rows")
    k = ref.TABLE1_K
    top = ref.TABLE1[-1][0]
    ms = m_sequence(PrimeSieve(required_limit(k, top)), k, 6, top)
    computed = {e.two_n: e.row() for e in ms}
    rep.add(f"{'two_n':>6} {'lower':>6} {'upper':>6} {'m':>3} {'span':>5}  status")
    published_centers = set()
    for row in ref.TABLE1:
        published_centers.add(row[0])
        got = computed.get(row[0])
        if got == row:
            status = "match"
        else:
            rep.mismatches += 1
            status = f"MISMATCH computed={got}"
        rep.add(f"{row[0]:>6} {row[1]:>6} {row[2]:>6} {row[3]:>3} {row[4]:>5}  {status}")
    for c in sorted(set(computed) - published_centers):
        r = computed[c]
        rep.add(f"{r[0]:>6} {r[1]:>6} {r[2]:>6} {r[3]:>3} {r[4]:>5}  "
                "present in computation, absent in paper")
        rep.notes.append(f"center {c} has a minimal-odd-m ellipse (m={r[3]}) but is not listed")
    m_pub = [ms.restrict(published_centers).values]
    rep.add(f"m-sequence over published centers: {','.join(map(str, m_pub[0]))}")
    rep.add(f"summary: {len(ref.TABLE1) - rep.mismatches}/{len(ref.TABLE1)} published rows match")
    return rep


def compare_parity() -> Report:
    rep = Report("Partition-parity sequence prefix")
    n = len(ref.PARITY_PREFIX)
    top = 4 + 2 * (n - 1)
    got = parity_sequence(PrimeSieve(top), top).bits
    rep.add(f"published: {ref.PARITY_PREFIX}")
    rep.add(f"computed:  {got}")
    for i, (a, b) in enumerate(zip(ref.PARITY_PREFIX, got)):
        if a != b:
            rep.mismatches += 1
            rep.add(f"mismatch at index {i} (n={4 + 2 * i}): published {a}, computed {b}")
    rep.add(f"summary: {n - rep.mismatches}/{n} bits match")
    return rep


def compare_table2(bound: int = ref.PUBLISHED_BOUND) -> Report:
    """Substring counts under both range readings, plus internal-consistency checks."""
    rep = Report("Table 2: substring counts, k=5 (diagnostic)")
    k = ref.TABLE2_K
    readings = {r: b_bits(k, max_center(bound, r)) for r in CENTER_BOUNDS}
    counts = {r: {w: count_windows(bits, w) for w in (2, 3)} for r, bits in readings.items()}
    for r, bits in readings.items():
        rep.add(f"reading {r}: centers <= {max_center(bound, r)}, {len(bits)} symbols")
    rep.add(f"{'pattern':>8} {'published':>9} {'2n':>6} {'4n':>6}  same count under (4n)")
    for pat, pub in ref.TABLE2.items():
        got = {r: counts[r][len(pat)][pat] for r in CENTER_BOUNDS}
        flags = "" if pub in got.values() else "  MISMATCH"
        if flags:
            rep.mismatches += 1
        twins = [p for p, c in counts["4n"][len(pat)].counts.items() if c == pub]
        rep.add(f"{pat:>8} {pub:>9} {got['2n']:>6} {got['4n']:>6}  "
                f"{','.join(twins) or '-'}{flags}")
    d = abs(ref.TABLE2["01"] - ref.TABLE2["10"])
    if d > 1:
        rep.notes.append(
            f"published counts violate |count(01) - count(10)| <= 1 "
            f"({ref.TABLE2['10']} vs {ref.TABLE2['01']}, difference {d}); no single "
            "binary string with overlapping windows can produce them")
    for r in CENTER_BOUNDS:
        c2 = counts[r][2]
        rep.notes.append(f"computed ({r}): count(01)={c2['01']}, count(10)={c2['10']}, "
                         f"difference {abs(c2['01'] - c2['10'])}")
    two = sum(v for p, v in ref.TABLE2.items() if len(p) == 2)
    rep.notes.append(f"published length-2 counts sum to {two}; computed window totals are "
                     + ", ".join(f"{r}: {counts[r][2].total}" for r in CENTER_BOUNDS))
    rep.add(f"summary: {len(ref.TABLE2) - rep.mismatches}/{len(ref.TABLE2)} published counts "
            "occur under their own label in some reading")
    return rep


def _length_table(title, k, published, bound) -> Report:
    rep = Report(title)
    readings = {r: b_bits(k, max_center(bound, r)) for r in CENTER_BOUNDS}
    for r, bits in readings.items():
        rep.add(f"reading {r}: centers <= {max_center(bound, r)}, {len(bits)} symbols")
    rep.add("interpretive: computed column = windows whose pattern occurs exactly once")
    rep.add(f"{'w':>3} {'published':>9} {'unique 2n':>9} {'delta':>6} {'unique 4n':>9} {'delta':>6}")
    for w, pub in published.items():
        u = {r: unique_window_count(bits, w) for r, bits in readings.items()}
        rep.add(f"{w:>3} {pub:>9} {u['2n']:>9} {u['2n'] - pub:>+6} {u['4n']:>9} {u['4n'] - pub:>+6}")
    for r, bits in readings.items():
        too_big = [w for w, pub in published.items() if pub > len(bits) - w + 1]
        if too_big:
            rep.notes.append(f"reading {r}: published counts exceed the number of windows "
                             f"L-w+1 at w={too_big}")
    rep.notes.append("no pass/fail is asserted; the counting rule is not recoverable")
    return rep


def compare_table3(bound: int = ref.PUBLISHED_BOUND) -> Report:
    return _length_table("Table 3: count per string length, k=5 (interpretive)",
                         ref.TABLE3_K, ref.TABLE3, bound)


def compare_table4(bound: int = ref.PUBLISHED_BOUND) -> Report:
    return _length_table("Table 4: count per string length, k=1 (interpretive)",
                         ref.TABLE4_K, ref.TABLE4, bound)


def compare_tables(bound: int = ref.PUBLISHED_BOUND) -> str:
    reports = [compare_table1(), compare_parity(), compare_table2(bound),
               compare_table3(bound), compare_table4(bound)]
    return "\n".join(r.render() for r in reports)
