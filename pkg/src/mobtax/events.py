"""Edge-event streams: parsing, normalisation and summary statistics.

An event stream is a list of undirected edge events ``(u, v, t)`` sorted by
timestamp.  Node labels from the source file are interned to dense integer
ids in order of first appearance (after sorting), so downstream code works
on integer arrays.  Timestamps may be non-negative integers or fixed-point
decimals; decimals are scaled to a common integer grid so that all window
arithmetic stays exact.

Events that share a timestamp belong to the same *iteration*: iteration
indices start at 0 and increase by exactly 1 between distinct timestamps.
Iterations are the default axis for windowing, which makes streams recorded
with per-step timestamps and streams recorded in batches behave alike.
"""

from __future__ import annotations

import gzip
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

_INT64_MAX = 2**63 - 1


class ParseError(ValueError):
    """Malformed input file or an inconsistent column layout."""


@dataclass(frozen=True)
class FormatSpec:
    """Column layout of an edge-list file.

    ``columns`` names each column; it must contain ``src``, ``dst`` and
    ``time`` exactly once (extra names are parsed and ignored).  A ``None``
    delimiter splits on arbitrary whitespace.  Lines starting with the
    comment prefix, and blank lines, are skipped.
    """

    columns: tuple[str, ...] = ("src", "dst", "time")
    delimiter: str | None = None
    comment: str | None = "#"
    has_header: bool = False

    def field_indexes(self) -> tuple[int, int, int]:
        for name in ("src", "dst", "time"):
            if self.columns.count(name) != 1:
                raise ParseError(f"format must name column {name!r} exactly once, got {self.columns!r}")
        return (self.columns.index("src"), self.columns.index("dst"), self.columns.index("time"))


class EdgeEvent(NamedTuple):
    u: int
    v: int
    time: int | Fraction
    iteration: int


@dataclass(frozen=True)
class StreamStats:
    n_nodes: int
    n_events: int
    n_iterations: int
    t_min: int | Fraction
    t_max: int | Fraction
    self_loops_dropped: int
    duplicate_events: int


def _parse_timestamp(tok: str, lineno: int) -> tuple[int, int]:
    """Return (value, decimals) for an integer or fixed-point decimal token."""
    tok = tok.strip()
    if not tok:
        raise ParseError(f"line {lineno}: empty timestamp")
    if tok[0] == "-":
        raise ParseError(f"line {lineno}: negative timestamp {tok!r}")
    if "e" in tok or "E" in tok:
        raise ParseError(f"line {lineno}: timestamp {tok!r} uses exponent notation; only fixed-point decimals are accepted")
    if "." not in tok:
        try:
            return int(tok), 0
        except ValueError:
            raise ParseError(f"line {lineno}: timestamp {tok!r} is not a number") from None
    ip, _, fp = tok.partition(".")
    fp = fp.rstrip("0")
    try:
        whole = int(ip) if ip else 0
        frac = int(fp) if fp else 0
    except ValueError:
        raise ParseError(f"line {lineno}: timestamp {tok!r} is not a number") from None
    return whole * 10 ** len(fp) + frac, len(fp)


class EventStream:
    """Normalised edge-event stream.

    Events are stored as parallel numpy arrays sorted by timestamp, with
    each event's endpoints canonicalised so ``u < v``.  ``time_decimals``
    records the fixed-point scaling applied to timestamps: the stored
    integer timestamps equal the original values times ``10**time_decimals``.
    """

    __slots__ = ("u", "v", "t", "iteration", "labels", "_label_ids", "time_decimals", "self_loops_dropped")

    def __init__(self, u, v, t, iteration, labels, time_decimals=0, self_loops_dropped=0):
        self.u = u
        self.v = v
        self.t = t
        self.iteration = iteration
        self.labels = labels
        self._label_ids = {lab: i for i, lab in enumerate(labels)}
        self.time_decimals = time_decimals
        self.self_loops_dropped = self_loops_dropped

    # -- construction ---------------------------------------------------

    @classmethod
    def from_rows(cls, src_labels, dst_labels, timestamps, decimals=0, self_loops_dropped=0) -> "EventStream":
        """Build a stream from unsorted label/timestamp rows.

        Rows are stably sorted by timestamp, labels interned in order of
        first appearance in the sorted sequence, endpoints canonicalised,
        and iteration indices assigned per distinct timestamp.  The result
        is therefore invariant under permutations of input rows as long as
        timestamps are distinct (ties keep input order).
        """
        n = len(timestamps)
        if n == 0:
            raise ParseError("stream contains no events")
        if len(src_labels) != n or len(dst_labels) != n:
            raise ValueError("endpoint and timestamp row counts differ")
        t_raw = np.empty(n, dtype=np.int64)
        for i, val in enumerate(timestamps):
            if val > _INT64_MAX:
                raise ParseError(f"timestamp {val} exceeds the supported 64-bit range after decimal scaling")
            t_raw[i] = val
        order = np.argsort(t_raw, kind="stable")

        ids: dict = {}
        u = np.empty(n, dtype=np.int64)
        v = np.empty(n, dtype=np.int64)
        for pos, row in enumerate(order.tolist()):
            a = ids.setdefault(src_labels[row], len(ids))
            b = ids.setdefault(dst_labels[row], len(ids))
            if a <= b:
                u[pos], v[pos] = a, b
            else:
                u[pos], v[pos] = b, a
        t = t_raw[order]
        iteration = np.zeros(n, dtype=np.int64)
        if n > 1:
            np.cumsum(np.diff(t) != 0, out=iteration[1:])
        labels = [None] * len(ids)
        for lab, i in ids.items():
            labels[i] = lab
        return cls(u, v, t, iteration, labels, decimals, self_loops_dropped)

    @classmethod
    def from_events(cls, events: Iterable[tuple]) -> "EventStream":
        """Build a stream from ``(u, v, t)`` triples with integer or decimal-string timestamps."""
        srcs, dsts, raw = [], [], []
        for u, v, t in events:
            srcs.append(u)
            dsts.append(v)
            raw.append(t)
        ts, decimals, dropped = [], 0, 0
        keep_src, keep_dst = [], []
        for i, (a, b, t) in enumerate(zip(srcs, dsts, raw)):
            if a == b:
                dropped += 1
                continue
            if isinstance(t, str):
                val, dec = _parse_timestamp(t, i + 1)
            elif isinstance(t, (int, np.integer)):
                if t < 0:
                    raise ParseError(f"event {i}: negative timestamp {t}")
                val, dec = int(t), 0
            else:
                raise TypeError(f"timestamp must be int or decimal string, got {type(t).__name__}")
            if dec > decimals:
                factor = 10 ** (dec - decimals)
                ts = [x * factor for x in ts]
                decimals = dec
            elif dec < decimals:
                val *= 10 ** (decimals - dec)
            ts.append(val)
            keep_src.append(a)
            keep_dst.append(b)
        return cls.from_rows(keep_src, keep_dst, ts, decimals, dropped)

    # -- access ----------------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_events(self) -> int:
        return len(self.t)

    @property
    def n_iterations(self) -> int:
        return int(self.iteration[-1]) + 1 if len(self.iteration) else 0

    def resolve(self, node_id: int):
        """Original label for an interned node id."""
        return self.labels[node_id]

    def node_id(self, label) -> int:
        return self._label_ids[label]

    def _display_time(self, scaled: int) -> int | Fraction:
        if self.time_decimals == 0:
            return int(scaled)
        return Fraction(int(scaled), 10**self.time_decimals)

    def __len__(self) -> int:
        return len(self.t)

    def __iter__(self) -> Iterator[EdgeEvent]:
        for i in range(len(self.t)):
            yield EdgeEvent(int(self.u[i]), int(self.v[i]), self._display_time(self.t[i]), int(self.iteration[i]))

    def __getitem__(self, i: int) -> EdgeEvent:
        return EdgeEvent(int(self.u[i]), int(self.v[i]), self._display_time(self.t[i]), int(self.iteration[i]))


def parse_edge_list(lines: Iterable[str], fmt: FormatSpec = FormatSpec()) -> EventStream:
    """Parse text lines into an :class:`EventStream`.

    Raises :class:`ParseError` with a line number for malformed rows
    (missing fields, bad timestamps).  Self-loops are dropped and counted
    on ``self_loops_dropped``; duplicate edges are kept as distinct events.
    """
    i_src, i_dst, i_time = fmt.field_indexes()
    need = max(i_src, i_dst, i_time) + 1
    srcs: list[str] = []
    dsts: list[str] = []
    ts: list[int] = []
    decimals = 0
    dropped = 0
    header_pending = fmt.has_header
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        if fmt.comment and line.startswith(fmt.comment):
            continue
        if header_pending:
            header_pending = False
            continue
        fields = line.split(fmt.delimiter)
        if len(fields) < need:
            raise ParseError(f"line {lineno}: expected at least {need} fields, got {len(fields)}")
        a, b = fields[i_src], fields[i_dst]
        val, dec = _parse_timestamp(fields[i_time], lineno)
        if a == b:
            dropped += 1
            continue
        if dec > decimals:
            factor = 10 ** (dec - decimals)
            ts = [x * factor for x in ts]
            decimals = dec
        elif dec < decimals:
            val *= 10 ** (decimals - dec)
        srcs.append(a)
        dsts.append(b)
        ts.append(val)
    return EventStream.from_rows(srcs, dsts, ts, decimals, dropped)


def load_edge_list(path: str, fmt: FormatSpec = FormatSpec()) -> EventStream:
    """Read an edge-list file (gzip detected by magic bytes) into a stream."""
    raw = io.BufferedReader(open(path, "rb"))
    if raw.peek(2)[:2] == b"\x1f\x8b":
        handle = io.TextIOWrapper(gzip.GzipFile(fileobj=raw), encoding="utf-8")
    else:
        handle = io.TextIOWrapper(raw, encoding="utf-8")
    with handle:
        return parse_edge_list(handle, fmt)


def stream_stats(s: EventStream) -> StreamStats:
    """Summary counts for a stream (nodes, events, iterations, time range, drops)."""
    pair_keys = s.u * np.int64(s.n_nodes) + s.v
    distinct = len(np.unique(pair_keys))
    return StreamStats(
        n_nodes=s.n_nodes,
        n_events=s.n_events,
        n_iterations=s.n_iterations,
        t_min=s._display_time(s.t[0]),
        t_max=s._display_time(s.t[-1]),
        self_loops_dropped=s.self_loops_dropped,
        duplicate_events=s.n_events - distinct,
    )
