"""Observation windows over an event stream and aggregated window graphs.

The default schedule splits the stream's span into five equal windows, halves
each window, and slides the half-window pairs by half a window, yielding nine
overlapping pairs of adjacent, equal-length sub-windows.  Window boundaries
are exact rationals over an integer axis (iteration index by default, or the
scaled timestamp grid), so membership never depends on floating-point
rounding: an event with axis value ``x`` belongs to ``[lo, hi)`` iff
``ceil(lo) <= x < ceil(hi)``.

A :class:`WindowSnapshot` aggregates one window into a static graph: the
distinct edges seen in the window, each with its event multiplicity, plus
the set of active nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .events import EventStream


class TimeAxis(Enum):
    """Axis used for window placement.

    ``EVENTS`` windows over iteration indices, so simultaneous events always
    land in the same window; ``TIME`` windows over the (scaled) timestamp
    grid, so gaps in recording time count toward window width.
    """

    EVENTS = "events"
    TIME = "time"


def _ceil(f: Fraction) -> int:
    return -((-f.numerator) // f.denominator)


@dataclass(frozen=True)
class Window:
    """Half-open interval ``[lo, hi)`` on the window axis."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not lo < hi:
            raise ValueError(f"window [{lo}, {hi}) is empty")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def int_range(self) -> tuple[int, int]:
        """Integer axis values covered: ``range(*int_range())``."""
        return _ceil(self.lo), _ceil(self.hi)


@dataclass(frozen=True)
class WindowPair:
    """Two adjacent equal-length windows: ``[q, r)`` then ``[r, s)``."""

    first: Window
    second: Window

    def __post_init__(self):
        if self.first.hi != self.second.lo:
            raise ValueError("second window must start where the first ends")
        if self.first.width != self.second.width:
            raise ValueError("paired windows must have equal length")

    @property
    def q(self) -> Fraction:
        return self.first.lo

    @property
    def r(self) -> Fraction:
        return self.first.hi

    @property
    def s(self) -> Fraction:
        return self.second.hi


@dataclass(frozen=True)
class WindowSchedule:
    axis: TimeAxis
    pairs: tuple[WindowPair, ...]


def axis_values(stream: EventStream, axis: TimeAxis) -> np.ndarray:
    """Per-event axis values (sorted ascending by construction)."""
    return stream.iteration if axis is TimeAxis.EVENTS else stream.t


def axis_domain(stream: EventStream, axis: TimeAxis) -> tuple[int, int]:
    """Half-open integer span ``[lo, hi)`` containing every event."""
    if axis is TimeAxis.EVENTS:
        return 0, stream.n_iterations
    return int(stream.t[0]), int(stream.t[-1]) + 1


def default_schedule(stream: EventStream, axis: TimeAxis = TimeAxis.EVENTS) -> WindowSchedule:
    """Nine half-window pairs sliding by half a window across the span.

    With span ``D`` and window width ``W = D/5``, pair ``k`` (0..8) covers
    ``[k*W/2, k*W/2 + W)`` split at its midpoint.  Requires ``D >= 10`` so
    that every sub-window spans at least one integer axis value.
    """
    lo, hi = axis_domain(stream, axis)
    span = hi - lo
    if span < 10:
        raise ValueError(f"axis span {span} too small for the default schedule (need >= 10)")
    w = Fraction(span, 5)
    pairs = []
    for k in range(9):
        a = lo + k * w / 2
        m = a + w / 2
        b = a + w
        pairs.append(WindowPair(Window(a, m), Window(m, b)))
    return WindowSchedule(axis, tuple(pairs))


def custom_schedule(triples, axis: TimeAxis = TimeAxis.EVENTS) -> WindowSchedule:
    """Schedule from explicit ``(q, r, s)`` boundary triples."""
    pairs = tuple(WindowPair(Window(Fraction(q), Fraction(r)), Window(Fraction(r), Fraction(s))) for q, r, s in triples)
    if not pairs:
        raise ValueError("schedule needs at least one window pair")
    return WindowSchedule(axis, pairs)


@dataclass(frozen=True)
class WindowSnapshot:
    """Static graph aggregated from the events inside one window.

    ``edge_u``/``edge_v`` list the distinct canonical edges in lexicographic
    order, ``multiplicity`` the event count per edge, ``active`` the sorted
    node ids incident to at least one window event.  ``n_universe`` is the
    size of the ambient node-id space, so degree vectors from different
    snapshots of the same stream align.
    """

    n_universe: int
    edge_u: np.ndarray
    edge_v: np.ndarray
    multiplicity: np.ndarray
    active: np.ndarray

    @property
    def n_active(self) -> int:
        return len(self.active)

    @property
    def n_edges(self) -> int:
        return len(self.edge_u)

    @property
    def n_events(self) -> int:
        return int(self.multiplicity.sum())

    @property
    def is_empty(self) -> bool:
        return len(self.edge_u) == 0

    def degree_vector(self, weights: np.ndarray | None = None) -> np.ndarray:
        """Degrees over the whole node universe (binary when ``weights`` is None)."""
        w = np.ones(len(self.edge_u)) if weights is None else weights
        return np.bincount(self.edge_u, weights=w, minlength=self.n_universe) + np.bincount(
            self.edge_v, weights=w, minlength=self.n_universe
        )

    def neighbor_sets(self) -> dict[int, set[int]]:
        """Adjacency as plain sets, for small graphs and cross-checks."""
        adj: dict[int, set[int]] = {int(n): set() for n in self.active}
        for a, b in zip(self.edge_u.tolist(), self.edge_v.tolist()):
            adj[a].add(b)
            adj[b].add(a)
        return adj


def snapshot_from_events(u: np.ndarray, v: np.ndarray, n_universe: int) -> WindowSnapshot:
    """Aggregate raw event endpoint arrays (already canonical ``u < v``)."""
    if len(u) == 0:
        return WindowSnapshot(n_universe, np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.int64))
    keys = u.astype(np.int64) * np.int64(n_universe) + v
    distinct, counts = np.unique(keys, return_counts=True)
    eu = distinct // n_universe
    ev = distinct % n_universe
    active = np.unique(np.concatenate([eu, ev]))
    return WindowSnapshot(n_universe, eu, ev, counts.astype(np.int64), active)


def snapshot(stream: EventStream, window: Window, axis: TimeAxis = TimeAxis.EVENTS) -> WindowSnapshot:
    """Aggregate the events whose axis value falls in ``window``."""
    vals = axis_values(stream, axis)
    lo, hi = window.int_range()
    a = int(np.searchsorted(vals, lo, side="left"))
    b = int(np.searchsorted(vals, hi, side="left"))
    return snapshot_from_events(stream.u[a:b], stream.v[a:b], stream.n_nodes)
