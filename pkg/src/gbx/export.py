"""CSV/JSON serialization of sequences and statistics.

CSV schemas:

* correlation: ``lag,value``
* window counts: ``w,pattern,count`` (several window lengths may share a file)
* unique-window statistics: ``w,unique_count``
* m-sequence: ``two_n,lower,upper,m,span_sum``

Output is deterministic; floats are written with ``repr`` so parsing gives
back the identical value.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence

from gbx.analysis import CorrelationSeries, UniqueWindowStats, WindowCounts
from gbx.errors import InvalidArgument
from gbx.sequences import EllipseEntry, MSequence

FORMATS = ("csv", "json")


def format_number(v) -> str:
    if isinstance(v, int):
        return str(v)
    v = float(v)
    if v.is_integer():
        return str(int(v))
    return repr(v)


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(x) if not isinstance(x, str) else x for x in row])
    return buf.getvalue().encode()


def _json(obj) -> bytes:
    return (json.dumps(obj, indent=2) + "\n").encode()


def _as_window_list(obj) -> list[WindowCounts] | None:
    if isinstance(obj, WindowCounts):
        return [obj]
    if isinstance(obj, (list, tuple)) and obj and all(isinstance(x, WindowCounts) for x in obj):
        return list(obj)
    return None


def export_series(obj, fmt: str = "csv") -> bytes:
    """Serialize a correlation series, window counts (one or a list),
    unique-window statistics, or an m-sequence."""
    if fmt not in FORMATS:
        raise InvalidArgument(f"format must be one of {FORMATS}, got {fmt!r}")
    windows = _as_window_list(obj)
    if isinstance(obj, CorrelationSeries):
        if fmt == "csv":
            return _csv(("lag", "value"), enumerate(obj.values))
        return _json({"kind": "correlation", "mode": obj.mode, "values": list(obj.values)})
    if windows is not None:
        if fmt == "csv":
            rows = [(wc.w, pat, n) for wc in windows for pat, n in wc.counts.items()]
            return _csv(("w", "pattern", "count"), rows)
        return _json({"kind": "windows", "windows": [
            {"w": wc.w, "length": wc.length, "counts": wc.counts} for wc in windows]})
    if isinstance(obj, UniqueWindowStats):
        if fmt == "csv":
            return _csv(("w", "unique_count"), obj.counts.items())
        return _json({"kind": "unique", "length": obj.length,
                      "counts": {str(w): n for w, n in obj.counts.items()}})
    if isinstance(obj, MSequence):
        if fmt == "csv":
            return _csv(("two_n", "lower", "upper", "m", "span_sum"), (e.row() for e in obj))
        return _json({"kind": "mseq", "k": obj.k, "range": [obj.range_start, obj.range_end],
                      "entries": [dict(zip(("two_n", "lower", "upper", "m", "span_sum"), e.row()))
                                  for e in obj]})
    raise InvalidArgument(f"cannot export {type(obj).__name__}")


def write_series(obj, path, fmt: str = "csv") -> None:
    with open(path, "wb") as fh:
        fh.write(export_series(obj, fmt))


def _rows(data: bytes) -> tuple[list[str], list[list[str]]]:
    rows = list(csv.reader(io.StringIO(data.decode())))
    if not rows:
        raise InvalidArgument("empty CSV document")
    return rows[0], rows[1:]


def parse_series(data: bytes, fmt: str = "csv", *, mode: str = "circular", length: int = 0):
    """Inverse of :func:`export_series`.

    CSV does not carry the correlation mode or the unique-stats sequence
    length, so those come from the keyword arguments. A window-count
    sequence length is recovered from ``sum(counts) = L - w + 1``.
    """
    if fmt == "json":
        return _parse_json(json.loads(data))
    if fmt != "csv":
        raise InvalidArgument(f"format must be one of {FORMATS}, got {fmt!r}")
    header, rows = _rows(data)
    if header == ["lag", "value"]:
        return CorrelationSeries(mode, tuple(float(v) for _, v in rows))
    if header == ["w", "pattern", "count"]:
        grouped: dict[int, dict[str, int]] = {}
        for w, pat, n in rows:
            grouped.setdefault(int(w), {})[pat] = int(n)
        out = [WindowCounts(w, sum(c.values()) + w - 1, c) for w, c in grouped.items()]
        return out[0] if len(out) == 1 else out
    if header == ["w", "unique_count"]:
        return UniqueWindowStats(length, {int(w): int(n) for w, n in rows})
    if header == ["two_n", "lower", "upper", "m", "span_sum"]:
        entries = []
        for two_n, lower, upper, m, _ in rows:
            two_n, lower, upper, m = int(two_n), int(lower), int(upper), int(m)
            k = (upper - two_n) // m
            entries.append(EllipseEntry(two_n, k, m, lower, upper))
        if not entries:
            raise InvalidArgument("m-sequence CSV has no rows; k is unrecoverable")
        return MSequence(entries[0].k, entries[0].two_n, entries[-1].two_n, tuple(entries))
    raise InvalidArgument(f"unrecognized CSV header {header}")


def _parse_json(doc):
    kind = doc.get("kind")
    if kind == "correlation":
        return CorrelationSeries(doc["mode"], tuple(float(v) for v in doc["values"]))
    if kind == "windows":
        out = [WindowCounts(d["w"], d["length"], dict(d["counts"])) for d in doc["windows"]]
        return out[0] if len(out) == 1 else out
    if kind == "unique":
        return UniqueWindowStats(doc["length"], {int(w): n for w, n in doc["counts"].items()})
    if kind == "mseq":
        k = doc["k"]
        entries = tuple(EllipseEntry(e["two_n"], k, e["m"], e["lower"], e["upper"])
                        for e in doc["entries"])
        return MSequence(k, doc["range"][0], doc["range"][1], entries)
    raise InvalidArgument(f"unrecognized JSON document kind {kind!r}")
