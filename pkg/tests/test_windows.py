from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from mobtax.events import EventStream
from mobtax.windows import (
    TimeAxis,
    Window,
    WindowPair,
    axis_domain,
    custom_schedule,
    default_schedule,
    snapshot,
    snapshot_from_events,
)

from oracles import random_events, window_members


def stream_of(n_events, seed=0, n_nodes=12, t_max=None):
    rng = np.random.default_rng(seed)
    return EventStream.from_events(random_events(rng, n_nodes, n_events, t_max))


def test_default_schedule_has_nine_pairs():
    s = stream_of(80)
    sched = default_schedule(s)
    assert len(sched.pairs) == 9


def test_default_schedule_geometry_span_ten():
    s = EventStream.from_events([("a", "b", t) for t in range(10)])
    sched = default_schedule(s)
    for k, pair in enumerate(sched.pairs):
        assert pair.q == k
        assert pair.r == k + 1
        assert pair.s == k + 2
    assert sched.pairs[0].q == 0
    assert sched.pairs[-1].s == 10


def test_default_schedule_fractional_boundaries_exact():
    # span 45: window width 9, half-window 9/2 -- boundaries stay rational
    s = EventStream.from_events([("a", "b", t) for t in range(45)])
    sched = default_schedule(s)
    assert sched.pairs[1].q == Fraction(9, 2)
    assert sched.pairs[1].r == Fraction(9, 2) + Fraction(9, 2)
    assert all(p.first.width == p.second.width == Fraction(9, 2) for p in sched.pairs)
    assert sched.pairs[-1].s == 45


def test_default_schedule_rejects_tiny_span():
    s = EventStream.from_events([("a", "b", 0), ("b", "c", 1), ("a", "c", 2)])
    with pytest.raises(ValueError, match="span"):
        default_schedule(s)


def test_window_validation():
    with pytest.raises(ValueError, match="empty"):
        Window(Fraction(3), Fraction(3))
    with pytest.raises(ValueError, match="start where"):
        WindowPair(Window(0, 2), Window(3, 5))
    with pytest.raises(ValueError, match="equal length"):
        WindowPair(Window(0, 2), Window(2, 5))


def test_custom_schedule_round_trip():
    sched = custom_schedule([(0, 5, 10), ("3/2", 3, "9/2")], TimeAxis.TIME)
    assert sched.axis is TimeAxis.TIME
    assert sched.pairs[1].q == Fraction(3, 2)
    with pytest.raises(ValueError, match="at least one"):
        custom_schedule([])


def edge_counter(events):
    return Counter((min(u, v, key=str), max(u, v, key=str)) for u, v, _ in events)


def snapshot_counter(s, snap):
    return Counter(
        {(min(su, sv, key=str), max(su, sv, key=str)): int(c)
         for a, b, c in zip(snap.edge_u.tolist(), snap.edge_v.tolist(), snap.multiplicity.tolist())
         for su, sv in [(s.resolve(a), s.resolve(b))]}
    )


@pytest.mark.parametrize("axis,oracle_axis", [(TimeAxis.EVENTS, "events"), (TimeAxis.TIME, "time")])
@pytest.mark.parametrize("seed", range(5))
def test_snapshot_matches_membership_oracle(axis, oracle_axis, seed):
    rng = np.random.default_rng(seed)
    events = random_events(rng, 10, 60, t_max=40)
    s = EventStream.from_events(events)
    sched = default_schedule(s, axis)
    for pair in sched.pairs:
        for win in (pair.first, pair.second):
            snap = snapshot(s, win, axis)
            expect = edge_counter(window_members(events, win.lo, win.hi, oracle_axis))
            assert snapshot_counter(s, snap) == expect


def test_pairs_tile_the_domain():
    s = stream_of(200, seed=3, t_max=77)
    for axis in TimeAxis:
        lo, hi = axis_domain(s, axis)
        sched = default_schedule(s, axis)
        assert sched.pairs[0].q == lo
        assert sched.pairs[-1].s == hi
        # the even-indexed pairs tile the span, so their windows see every event once
        total = sum(
            snapshot(s, w, axis).n_events for p in sched.pairs[::2] for w in (p.first, p.second)
        )
        assert total == s.n_events


def test_time_axis_includes_final_timestamp():
    s = EventStream.from_events([("a", "b", 0), ("b", "c", 10)])
    lo, hi = axis_domain(s, TimeAxis.TIME)
    assert (lo, hi) == (0, 11)
    snap = snapshot(s, Window(Fraction(10), Fraction(11)), TimeAxis.TIME)
    assert snap.n_events == 1


def test_event_axis_groups_simultaneous_events():
    # all three events share one timestamp: one iteration, indivisible
    s = EventStream.from_events([("a", "b", 5), ("b", "c", 5), ("c", "d", 5), ("d", "e", 6)])
    snap = snapshot(s, Window(0, 1), TimeAxis.EVENTS)
    assert snap.n_events == 3


def test_snapshot_window_additivity():
    s = stream_of(150, seed=9, t_max=50)
    whole = snapshot(s, Window(0, 30), TimeAxis.EVENTS)
    left = snapshot(s, Window(0, 11), TimeAxis.EVENTS)
    right = snapshot(s, Window(11, 30), TimeAxis.EVENTS)
    merged = Counter(snapshot_counter(s, left))
    merged.update(snapshot_counter(s, right))
    assert merged == snapshot_counter(s, whole)
    assert left.n_events + right.n_events == whole.n_events


def test_empty_snapshot():
    s = EventStream.from_events([("a", "b", 0), ("b", "c", 100)])
    snap = snapshot(s, Window(5, 10), TimeAxis.TIME)
    assert snap.is_empty
    assert snap.n_active == 0
    assert snap.degree_vector().tolist() == [0.0, 0.0, 0.0]


def test_snapshot_from_events_dedup():
    u = np.array([0, 0, 1, 0], dtype=np.int64)
    v = np.array([1, 1, 2, 2], dtype=np.int64)
    snap = snapshot_from_events(u, v, 4)
    assert snap.edge_u.tolist() == [0, 0, 1]
    assert snap.edge_v.tolist() == [1, 2, 2]
    assert snap.multiplicity.tolist() == [2, 1, 1]
    assert snap.active.tolist() == [0, 1, 2]
    assert snap.n_events == 4


def test_degree_vector_modes():
    u = np.array([0, 0], dtype=np.int64)
    v = np.array([1, 1], dtype=np.int64)
    snap = snapshot_from_events(u, v, 3)
    assert snap.degree_vector().tolist() == [1.0, 1.0, 0.0]
    assert snap.degree_vector(snap.multiplicity.astype(float)).tolist() == [2.0, 2.0, 0.0]


def test_neighbor_sets():
    u = np.array([0, 1], dtype=np.int64)
    v = np.array([1, 2], dtype=np.int64)
    snap = snapshot_from_events(u, v, 3)
    assert snap.neighbor_sets() == {0: {1}, 1: {0, 2}, 2: {1}}


@given(st.integers(0, 2**31 - 1), st.integers(30, 120))
@settings(max_examples=20, deadline=None)
def test_schedule_windows_cover_every_event_exactly_once_per_layer(seed, n_events):
    # the five even-indexed pairs partition the span between them
    rng = np.random.default_rng(seed)
    s = EventStream.from_events(random_events(rng, 8, n_events, t_max=4 * n_events))
    assume(s.n_iterations >= 10)
    sched = default_schedule(s, TimeAxis.EVENTS)
    windows = [w for p in sched.pairs[::2] for w in (p.first, p.second)]
    counts = sum(snapshot(s, w, TimeAxis.EVENTS).n_events for w in windows)
    assert counts == s.n_events
