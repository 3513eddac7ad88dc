"""The mobility taxonomy: six windowed degree correlations.

For a pair of adjacent windows, take the nodes active in the first window
(the *consistent* nodes) and, for each, four quantities:

- ``k1``: degree in the first window,
- ``k2``: degree in the second window (0 if the node does not reappear;
  edges to nodes outside the consistent set still count),
- ``l1``: mean first-window degree over its first-window neighbours,
- ``l2``: mean second-window degree over its *first-window* neighbours.

Neighbourhoods are frozen from the first window throughout, so ``l2``
tracks what happened to a node's original circle, not to whoever it met
later.  The taxonomy is the Pearson correlation of six pairings:

======================  ===========  =============================================
statistic               correlates   reads as
======================  ===========  =============================================
mobility                k1 vs k2     do the popular stay popular?
assortativity           k1 vs l1     are the popular connected to the popular?
philanthropy            k1 vs l2     do the popular lift their neighbours?
community               l1 vs k2     does a popular circle lift the node?
consistent_assortativity k2 vs l2    assortativity persisting into window two
neighbour_mobility      l1 vs l2     do popular circles stay popular?
======================  ===========  =============================================

A correlation is *degenerate* (reported as ``None`` and flagged) when either
side has zero variance, e.g. when no consistent node reappears.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .windows import TimeAxis, WindowSchedule, WindowSnapshot, snapshot

STATISTIC_NAMES = (
    "mobility",
    "neighbour_mobility",
    "philanthropy",
    "community",
    "assortativity",
    "consistent_assortativity",
)


class DegreeMode(Enum):
    """How repeated events on one edge count toward degree.

    ``BINARY`` counts each distinct neighbour once; ``MULTIPLICITY`` counts
    every event, so a node hammering one contact keeps gaining degree.
    """

    BINARY = "binary"
    MULTIPLICITY = "multiplicity"


def pearson(x: np.ndarray, y: np.ndarray) -> float | None:
    """Pearson correlation, or ``None`` when either side has zero variance.

    Two-pass formulation for numerical stability; the result is clamped to
    ``[-1, 1]`` so downstream consumers never see 1 + 1e-16.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pearson needs two equal-length 1-d vectors")
    if len(x) < 2:
        raise ValueError("pearson needs at least 2 observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        return None
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class ConsistentFrame:
    """Aligned per-node quantity vectors for one window pair.

    ``nodes`` holds the consistent node ids (sorted); ``k1``, ``k2``, ``l1``
    and ``l2`` are aligned to it.  The first-window edge arrays are kept so
    the frozen neighbourhoods can be reconstructed on demand.
    """

    nodes: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    l1: np.ndarray
    l2: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray

    @property
    def n_consistent(self) -> int:
        return len(self.nodes)

    def neighbourhoods(self) -> dict[int, set[int]]:
        """Frozen first-window neighbour sets keyed by node id."""
        adj: dict[int, set[int]] = {int(n): set() for n in self.nodes}
        for a, b in zip(self.edge_u.tolist(), self.edge_v.tolist()):
            adj[a].add(b)
            adj[b].add(a)
        return adj


def build_frame(snap1: WindowSnapshot, snap2: WindowSnapshot, mode: DegreeMode = DegreeMode.BINARY) -> ConsistentFrame:
    """Assemble the consistent-node quantity vectors from two snapshots.

    The consistent set and all neighbourhoods come from ``snap1``; only the
    degree values ``k2`` read ``snap2``.  ``snap1`` must be non-empty.
    """
    if snap1.is_empty:
        raise ValueError("first window has no events; consistent set undefined")
    if snap1.n_universe != snap2.n_universe:
        raise ValueError("snapshots come from different node universes")
    w1 = snap1.multiplicity.astype(np.float64) if mode is DegreeMode.MULTIPLICITY else None
    w2 = snap2.multiplicity.astype(np.float64) if mode is DegreeMode.MULTIPLICITY else None
    deg1 = snap1.degree_vector(w1)
    deg2 = snap2.degree_vector(w2)

    vc = snap1.active
    # Every consistent node has >= 1 first-window neighbour, so the means
    # below never divide by zero.
    src = np.concatenate([snap1.edge_u, snap1.edge_v])
    dst = np.concatenate([snap1.edge_v, snap1.edge_u])
    nbr_count = np.bincount(src, minlength=snap1.n_universe)
    sum_l1 = np.bincount(src, weights=deg1[dst], minlength=snap1.n_universe)
    sum_l2 = np.bincount(src, weights=deg2[dst], minlength=snap1.n_universe)

    return ConsistentFrame(
        nodes=vc,
        k1=deg1[vc],
        k2=deg2[vc],
        l1=sum_l1[vc] / nbr_count[vc],
        l2=sum_l2[vc] / nbr_count[vc],
        edge_u=snap1.edge_u,
        edge_v=snap1.edge_v,
    )


@dataclass(frozen=True)
class TaxonomyRecord:
    """Taxonomy values for one window pair, plus provenance and flags.

    Degenerate statistics are ``None`` and carry a ``degenerate:<name>``
    flag; structural conditions add ``empty_window_1`` / ``empty_window_2``.
    """

    pair_index: int
    q: Fraction
    r: Fraction
    s: Fraction
    n_consistent: int
    mobility: float | None
    neighbour_mobility: float | None
    philanthropy: float | None
    community: float | None
    assortativity: float | None
    consistent_assortativity: float | None
    flags: tuple[str, ...]

    def value(self, statistic: str) -> float | None:
        if statistic not in STATISTIC_NAMES:
            raise ValueError(f"unknown statistic {statistic!r}")
        return getattr(self, statistic)


def taxonomy_record(frame: ConsistentFrame, pair_index: int = 0, q=0, r=0, s=0, extra_flags: tuple[str, ...] = ()) -> TaxonomyRecord:
    """Compute the six correlations over a frame."""
    flags = list(extra_flags)
    if frame.n_consistent < 2:
        values = {name: None for name in STATISTIC_NAMES}
        flags.append("too_few_consistent_nodes")
    else:
        values = {
            "mobility": pearson(frame.k1, frame.k2),
            "assortativity": pearson(frame.k1, frame.l1),
            "philanthropy": pearson(frame.k1, frame.l2),
            "community": pearson(frame.l1, frame.k2),
            "consistent_assortativity": pearson(frame.k2, frame.l2),
            "neighbour_mobility": pearson(frame.l1, frame.l2),
        }
    for name in STATISTIC_NAMES:
        if values[name] is None and "too_few_consistent_nodes" not in flags:
            flags.append(f"degenerate:{name}")
    return TaxonomyRecord(
        pair_index=pair_index,
        q=Fraction(q),
        r=Fraction(r),
        s=Fraction(s),
        n_consistent=frame.n_consistent,
        flags=tuple(flags),
        **values,
    )


def _empty_record(pair_index: int, q, r, s, flags: tuple[str, ...]) -> TaxonomyRecord:
    return TaxonomyRecord(
        pair_index=pair_index,
        q=Fraction(q),
        r=Fraction(r),
        s=Fraction(s),
        n_consistent=0,
        mobility=None,
        neighbour_mobility=None,
        philanthropy=None,
        community=None,
        assortativity=None,
        consistent_assortativity=None,
        flags=flags,
    )


def run_schedule(stream, schedule: WindowSchedule, mode: DegreeMode = DegreeMode.BINARY) -> list[TaxonomyRecord]:
    """Taxonomy records for every window pair of a schedule.

    An empty first window yields an all-degenerate record flagged
    ``empty_window_1`` rather than an error, so sparse streams still produce
    one record per pair.
    """
    records = []
    for i, pair in enumerate(schedule.pairs):
        snap1 = snapshot(stream, pair.first, schedule.axis)
        snap2 = snapshot(stream, pair.second, schedule.axis)
        if snap1.is_empty:
            flags = ("empty_window_1",) + (("empty_window_2",) if snap2.is_empty else ())
            records.append(_empty_record(i, pair.q, pair.r, pair.s, flags))
            continue
        frame = build_frame(snap1, snap2, mode)
        extra = ("empty_window_2",) if snap2.is_empty else ()
        records.append(taxonomy_record(frame, i, pair.q, pair.r, pair.s, extra))
    return records


def _fmt_boundary(x: Fraction) -> str:
    return str(int(x)) if x.denominator == 1 else str(x)


def _fmt_stat(x: float | None) -> str:
    return "" if x is None else repr(x)


CSV_COLUMNS = ("pair_index", "q", "r", "s", "n_consistent") + STATISTIC_NAMES + ("flags",)


def records_to_dicts(records) -> list[dict]:
    """Records as JSON-friendly dicts (Fractions stringified, None kept)."""
    out = []
    for rec in records:
        row = {
            "pair_index": rec.pair_index,
            "q": _fmt_boundary(rec.q),
            "r": _fmt_boundary(rec.r),
            "s": _fmt_boundary(rec.s),
            "n_consistent": rec.n_consistent,
            "flags": list(rec.flags),
        }
        for name in STATISTIC_NAMES:
            row[name] = getattr(rec, name)
        out.append(row)
    return out


def records_to_csv(records, handle) -> None:
    """Write records as CSV: one row per pair, stats empty when degenerate."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        row = [rec.pair_index, _fmt_boundary(rec.q), _fmt_boundary(rec.r), _fmt_boundary(rec.s), rec.n_consistent]
        row += [_fmt_stat(getattr(rec, name)) for name in STATISTIC_NAMES]
        row.append(";".join(rec.flags))
        writer.writerow(row)


def parse_records_csv(handle) -> list[TaxonomyRecord]:
    """Read back a records CSV produced by :func:`records_to_csv`."""
    reader = csv.DictReader(handle)
    records = []
    for row in reader:
        stats = {name: (float(row[name]) if row[name] else None) for name in STATISTIC_NAMES}
        records.append(
            TaxonomyRecord(
                pair_index=int(row["pair_index"]),
                q=Fraction(row["q"]),
                r=Fraction(row["r"]),
                s=Fraction(row["s"]),
                n_consistent=int(row["n_consistent"]),
                flags=tuple(f for f in row["flags"].split(";") if f),
                **stats,
            )
        )
    return records
