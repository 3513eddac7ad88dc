"""Growth models for artificial temporal networks.

A growth run starts from a 4-clique kernel and adds one node per iteration;
the newcomer links to 3 distinct existing nodes sampled without replacement,
with probabilities set by the model:

====================================  ================================================
model                                 attachment weight of existing node
====================================  ================================================
random                                1
preferential_attachment               degree
preferential_neighbour_attachment     two-stage: degree-pick a node, then degree-pick
                                      one of its neighbours
equality                              1 / degree
sum_neighbour_degree                  sum of neighbour degrees
average_neighbour_degree              mean neighbour degree
inverse_average_neighbour_degree      1 / mean neighbour degree
cluster                               local clustering coefficient (uniform fallback
                                      when the graph is triangle-free)
eigen                                 eigenvector centrality
fitness                               gamma-distributed fitness, fixed at birth
gamma                                 gamma fitness, all values redrawn periodically
gamma_individual                      gamma fitness, one node redrawn periodically
====================================  ================================================

Every event appended by one growth iteration shares that iteration's
timestamp, so the trace doubles as an edge-event stream.  All randomness
flows through a single ``numpy.random.Generator``, which makes whole runs
reproducible from one seed.

Implementation note: model-specific structures (adjacency, neighbour-degree
sums, triangle counts, the centrality vector) are built lazily per
``grow_slice`` call and updated incrementally per step, which keeps
slice-scale growth roughly O(1) per step for most models.  The centrality
vector is fully converged when a slice starts and then tracked with a few
power-iteration refinements per step; ``attachment_weights`` always reports
the fully converged vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

LINKS_PER_NODE = 3
KERNEL_SIZE = 4


class ModelKind(IntEnum):
    """The twelve growth models, in canonical (tie-breaking) order."""

    RANDOM = 0
    PREFERENTIAL_ATTACHMENT = 1
    PREFERENTIAL_NEIGHBOUR_ATTACHMENT = 2
    EQUALITY = 3
    SUM_NEIGHBOUR_DEGREE = 4
    AVERAGE_NEIGHBOUR_DEGREE = 5
    INVERSE_AVERAGE_NEIGHBOUR_DEGREE = 6
    CLUSTER = 7
    EIGEN = 8
    FITNESS = 9
    GAMMA = 10
    GAMMA_INDIVIDUAL = 11

    @property
    def cli_name(self) -> str:
        return self.name.lower()

    @classmethod
    def from_name(cls, name: str) -> "ModelKind":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown growth model {name!r}; choose from: " + ", ".join(k.cli_name for k in cls)) from None


_FITNESS_FAMILY = frozenset({ModelKind.FITNESS, ModelKind.GAMMA, ModelKind.GAMMA_INDIVIDUAL})
_NEIGHBOUR_SUM_FAMILY = frozenset(
    {ModelKind.SUM_NEIGHBOUR_DEGREE, ModelKind.AVERAGE_NEIGHBOUR_DEGREE, ModelKind.INVERSE_AVERAGE_NEIGHBOUR_DEGREE}
)


@dataclass(frozen=True)
class GrowthParams:
    """Tunables shared by the growth models.

    ``eigen_track_steps`` controls how many power-iteration refinements keep
    the centrality vector current after each node insertion during slice
    growth; the public weight query always converges fully.
    """

    gamma_shape: float = 2.0
    gamma_scale: float = 1.0
    resample_interval: int = 100
    resample_lowest: bool = False
    eigen_tol: float = 1e-10
    eigen_max_iter: int = 10000
    eigen_track_steps: int = 3


DEFAULT_PARAMS = GrowthParams()


class GrowthState:
    """A growing simple graph plus the event trace that built it.

    Edges are stored chronologically in preallocated arrays (``u < v``
    canonically; a newcomer's id always exceeds its targets').  The edge
    list *is* the trace: ``timestamps[i]`` is the iteration at which edge
    ``i`` appeared, with the kernel at iteration 0.
    """

    __slots__ = ("n", "m", "iteration", "_eu", "_ev", "_et", "_deg", "_fitness")

    def __init__(self):
        self.n = 0
        self.m = 0
        self.iteration = 0
        self._eu = np.empty(4096, np.int64)
        self._ev = np.empty(4096, np.int64)
        self._et = np.empty(4096, np.int64)
        self._deg = np.zeros(1024, np.float64)
        self._fitness: np.ndarray | None = None

    # -- construction -----------------------------------------------------

    @classmethod
    def kernel(cls) -> "GrowthState":
        """Complete graph on 4 nodes, all edges at iteration 0."""
        state = cls()
        state.n = KERNEL_SIZE
        for a in range(KERNEL_SIZE):
            for b in range(a + 1, KERNEL_SIZE):
                state._eu[state.m] = a
                state._ev[state.m] = b
                state._et[state.m] = 0
                state.m += 1
        state._deg[:KERNEL_SIZE] = KERNEL_SIZE - 1
        return state

    @classmethod
    def from_edges(cls, n_nodes: int, edges) -> "GrowthState":
        """State over an explicit simple graph (mainly for tests and API use)."""
        state = cls()
        state._ensure_node_capacity(n_nodes)
        state.n = n_nodes
        seen = set()
        for a, b in edges:
            if a == b:
                raise ValueError("self-loops are not allowed")
            if not (0 <= a < n_nodes and 0 <= b < n_nodes):
                raise ValueError("edge endpoint out of range")
            a, b = (a, b) if a < b else (b, a)
            if (a, b) in seen:
                raise ValueError("duplicate edge")
            seen.add((a, b))
            state._ensure_edge_capacity(state.m + 1)
            state._eu[state.m] = a
            state._ev[state.m] = b
            state._et[state.m] = 0
            state.m += 1
            state._deg[a] += 1
            state._deg[b] += 1
        return state

    def clone(self) -> "GrowthState":
        other = GrowthState.__new__(GrowthState)
        other.n = self.n
        other.m = self.m
        other.iteration = self.iteration
        other._eu = self._eu.copy()
        other._ev = self._ev.copy()
        other._et = self._et.copy()
        other._deg = self._deg.copy()
        other._fitness = None if self._fitness is None else self._fitness.copy()
        return other

    # -- views ------------------------------------------------------------

    @property
    def edges_u(self) -> np.ndarray:
        return self._eu[: self.m]

    @property
    def edges_v(self) -> np.ndarray:
        return self._ev[: self.m]

    @property
    def timestamps(self) -> np.ndarray:
        return self._et[: self.m]

    @property
    def degrees(self) -> np.ndarray:
        return self._deg[: self.n]

    @property
    def fitness(self) -> np.ndarray | None:
        return None if self._fitness is None else self._fitness[: self.n]

    def trace_since(self, m_start: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Copies of the (u, v, t) event arrays appended after ``m_start``."""
        return (
            self._eu[m_start : self.m].copy(),
            self._ev[m_start : self.m].copy(),
            self._et[m_start : self.m].copy(),
        )

    # -- internals ---------------------------------------------------------

    def _ensure_edge_capacity(self, need: int) -> None:
        cap = len(self._eu)
        if need <= cap:
            return
        while cap < need:
            cap *= 2
        for name in ("_eu", "_ev", "_et"):
            old = getattr(self, name)
            new = np.empty(cap, np.int64)
            new[: self.m] = old[: self.m]
            setattr(self, name, new)

    def _ensure_node_capacity(self, need: int) -> None:
        cap = len(self._deg)
        if need <= cap:
            return
        while cap < need:
            cap *= 2
        new = np.zeros(cap, np.float64)
        new[: self.n] = self._deg[: self.n]
        self._deg = new
        if self._fitness is not None:
            newf = np.zeros(cap, np.float64)
            newf[: self.n] = self._fitness[: self.n]
            self._fitness = newf

    def ensure_fitness(self, rng: np.random.Generator, params: GrowthParams = DEFAULT_PARAMS) -> None:
        """Draw gamma fitness for every node that does not have one yet."""
        if self._fitness is None:
            self._fitness = np.zeros(len(self._deg), np.float64)
            self._fitness[: self.n] = rng.gamma(params.gamma_shape, params.gamma_scale, self.n)

    def _add_node(self, targets: np.ndarray) -> int:
        w = self.n
        self._ensure_node_capacity(w + 1)
        self._ensure_edge_capacity(self.m + LINKS_PER_NODE)
        self.iteration += 1
        t = self.iteration
        m = self.m
        for x in targets:
            self._eu[m] = x
            self._ev[m] = w
            self._et[m] = t
            m += 1
        self.m = m
        self._deg[targets] += 1.0
        self._deg[w] = float(LINKS_PER_NODE)
        self.n = w + 1
        return w


# -- sampling -------------------------------------------------------------


def _pick(cumulative: np.ndarray, rng: np.random.Generator) -> int:
    x = rng.random() * cumulative[-1]
    j = int(np.searchsorted(cumulative, x, side="right"))
    return min(j, len(cumulative) - 1)


def _sample_distinct(weights: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Sample ``k`` distinct indexes with probability proportional to weight.

    Weights must be finite and non-negative with a positive sum.  If the
    remaining weight mass hits zero mid-draw (fewer than ``k`` positive
    entries), the rest is drawn uniformly from the unchosen indexes.
    """
    w = np.asarray(weights, dtype=np.float64).copy()
    if len(w) < k:
        raise ValueError(f"need at least {k} candidate nodes, have {len(w)}")
    if not np.isfinite(w).all() or (w < 0).any():
        raise ValueError("attachment weights must be finite and non-negative")
    out = np.empty(k, np.int64)
    for i in range(k):
        c = np.cumsum(w)
        if c[-1] > 0.0:
            j = _pick(c, rng)
        else:
            if i == 0:
                raise ValueError("attachment weights sum to zero")
            unchosen = np.setdiff1d(np.arange(len(w), dtype=np.int64), out[:i])
            j = int(unchosen[rng.integers(len(unchosen))])
        out[i] = j
        w[j] = 0.0
    return out


# -- eigenvector centrality -------------------------------------------------


def _matvec(eu: np.ndarray, ev: np.ndarray, x: np.ndarray, n: int) -> np.ndarray:
    return np.bincount(eu, weights=x[ev], minlength=n) + np.bincount(ev, weights=x[eu], minlength=n)


def _power_iteration(eu, ev, n, x0=None, tol=1e-10, max_iter=10000) -> tuple[np.ndarray, float]:
    """Dominant adjacency eigenvector by shifted power iteration, max-normalised.

    Iterating ``(A + I) x`` instead of ``A x`` keeps the dominant eigenvalue
    strictly separated even on bipartite graphs, where the plain iteration
    oscillates forever.  The returned ``lam`` is the shifted eigenvalue
    (dominant eigenvalue plus one).  If the iteration stalls it restarts once
    from a fixed-seed random positive vector before giving up.
    """
    if len(eu) == 0:
        raise ValueError("eigen weights need a graph with at least one edge")
    x = np.full(n, 1.0 / n) if x0 is None else x0 / np.abs(x0).max()
    for attempt in range(2):
        for _ in range(max_iter):
            y = _matvec(eu, ev, x, n)
            y += x
            lam = float(np.abs(y).max())
            y /= lam
            done = float(np.abs(y - x).max()) < tol
            x = y
            if done:
                return x, lam
        x = np.random.default_rng(0).random(n) + 0.5
        x /= x.max()
    return x, lam


# -- per-slice model context -------------------------------------------------


class _SliceCtx:
    """Lazily built auxiliary structures for one model growing one state."""

    __slots__ = ("adj", "snd", "tri", "evec", "lam")

    def __init__(self):
        self.adj = None
        self.snd = None
        self.tri = None
        self.evec = None
        self.lam = 0.0


def _adjacency(state: GrowthState, n_final: int, as_sets: bool):
    adj = [set() if as_sets else [] for _ in range(n_final)]
    add = set.add if as_sets else list.append
    for a, b in zip(state.edges_u.tolist(), state.edges_v.tolist()):
        add(adj[a], b)
        add(adj[b], a)
    return adj


def _make_ctx(state: GrowthState, kind: ModelKind, params: GrowthParams, rng, n_final: int) -> _SliceCtx:
    ctx = _SliceCtx()
    n = state.n
    if kind is ModelKind.PREFERENTIAL_NEIGHBOUR_ATTACHMENT:
        ctx.adj = _adjacency(state, n_final, as_sets=False)
    elif kind in _NEIGHBOUR_SUM_FAMILY:
        ctx.adj = _adjacency(state, n_final, as_sets=False)
        deg = state.degrees
        snd = np.zeros(n_final, np.float64)
        snd[:n] = _matvec(state.edges_u, state.edges_v, deg, n)
        ctx.snd = snd
    elif kind is ModelKind.CLUSTER:
        ctx.adj = _adjacency(state, n_final, as_sets=True)
        tri = np.zeros(n_final, np.float64)
        for a, b in zip(state.edges_u.tolist(), state.edges_v.tolist()):
            for x in ctx.adj[a] & ctx.adj[b]:
                if x > b:
                    tri[a] += 1.0
                    tri[b] += 1.0
                    tri[x] += 1.0
        ctx.tri = tri
    elif kind is ModelKind.EIGEN:
        vec, lam = _power_iteration(state.edges_u, state.edges_v, n, None, params.eigen_tol, params.eigen_max_iter)
        evec = np.zeros(n_final, np.float64)
        evec[:n] = vec
        ctx.evec = evec
        ctx.lam = lam
    elif kind in _FITNESS_FAMILY:
        # fitness draws happen before any step draws, so slice growth and
        # repeated single steps consume the generator identically
        state.ensure_fitness(rng, params)
    return ctx


def _weights(state: GrowthState, kind: ModelKind, ctx: _SliceCtx, params: GrowthParams) -> np.ndarray:
    n = state.n
    deg = state.degrees
    if kind is ModelKind.RANDOM:
        return np.ones(n)
    if kind is ModelKind.PREFERENTIAL_ATTACHMENT:
        return deg
    if kind is ModelKind.EQUALITY:
        with np.errstate(divide="ignore"):
            return 1.0 / deg
    if kind is ModelKind.SUM_NEIGHBOUR_DEGREE:
        return ctx.snd[:n]
    if kind is ModelKind.AVERAGE_NEIGHBOUR_DEGREE:
        with np.errstate(divide="ignore", invalid="ignore"):
            return ctx.snd[:n] / deg
    if kind is ModelKind.INVERSE_AVERAGE_NEIGHBOUR_DEGREE:
        with np.errstate(divide="ignore", invalid="ignore"):
            return deg / ctx.snd[:n]
    if kind is ModelKind.CLUSTER:
        denom = deg * (deg - 1.0)
        coef = np.where(denom > 0.0, 2.0 * ctx.tri[:n] / np.maximum(denom, 1.0), 0.0)
        if not coef.any():
            return np.ones(n)  # triangle-free graph: fall back to uniform
        return coef
    if kind is ModelKind.EIGEN:
        return ctx.evec[:n]
    if kind in _FITNESS_FAMILY:
        return state.fitness
    raise ValueError(f"no weight vector for {kind!r}")


def attachment_weights(state: GrowthState, kind: ModelKind, params: GrowthParams = DEFAULT_PARAMS) -> np.ndarray:
    """Current attachment weight of every node under ``kind``.

    The two-stage neighbour model has no per-node weight vector and raises;
    fitness-family weights require initialised fitness (grow a step first or
    call :meth:`GrowthState.ensure_fitness`).
    """
    kind = ModelKind(kind)
    if kind is ModelKind.PREFERENTIAL_NEIGHBOUR_ATTACHMENT:
        raise ValueError("preferential_neighbour_attachment samples in two stages and has no single weight vector")
    if kind in _FITNESS_FAMILY and state.fitness is None:
        raise ValueError("fitness values not initialised; grow a step first or call ensure_fitness")
    if kind is ModelKind.EIGEN:
        vec, _ = _power_iteration(state.edges_u, state.edges_v, state.n, None, params.eigen_tol, params.eigen_max_iter)
        norm = math.sqrt(float(np.dot(vec, vec)))
        return vec / norm
    ctx = _make_ctx(state, kind, params, None, state.n)
    return np.asarray(_weights(state, kind, ctx, params), dtype=np.float64).copy()


def _pna_targets(state: GrowthState, ctx: _SliceCtx, rng: np.random.Generator) -> np.ndarray:
    """Two-stage pick: degree-weighted node, then degree-weighted neighbour.

    Duplicate picks are resampled (both stages) up to 100 times, then the
    remaining links fall back to uniform choice among unchosen nodes.
    """
    n = state.n
    deg = state.degrees
    cum = np.cumsum(deg)
    out = np.empty(LINKS_PER_NODE, np.int64)
    chosen: set[int] = set()
    for i in range(LINKS_PER_NODE):
        cand = -1
        for _ in range(100):
            mid = _pick(cum, rng)
            nbrs = ctx.adj[mid]
            c2 = np.cumsum(deg[nbrs])
            cand = nbrs[_pick(c2, rng)]
            if cand not in chosen:
                break
        else:
            pool = np.setdiff1d(np.arange(n, dtype=np.int64), out[:i])
            cand = int(pool[rng.integers(len(pool))])
        out[i] = cand
        chosen.add(cand)
    return out


def _grow_one(state: GrowthState, kind: ModelKind, rng, params: GrowthParams, ctx: _SliceCtx) -> None:
    n = state.n
    if kind is ModelKind.GAMMA or kind is ModelKind.GAMMA_INDIVIDUAL:
        it = state.iteration
        if it > 0 and it % params.resample_interval == 0:
            if kind is ModelKind.GAMMA:
                state._fitness[:n] = rng.gamma(params.gamma_shape, params.gamma_scale, n)
            else:
                idx = int(np.argmin(state._fitness[:n])) if params.resample_lowest else int(rng.integers(n))
                state._fitness[idx] = rng.gamma(params.gamma_shape, params.gamma_scale)

    if kind is ModelKind.PREFERENTIAL_NEIGHBOUR_ATTACHMENT:
        targets = _pna_targets(state, ctx, rng)
    else:
        targets = _sample_distinct(_weights(state, kind, ctx, params), LINKS_PER_NODE, rng)

    w = state._add_node(targets)
    if kind in _FITNESS_FAMILY:
        state._fitness[w] = rng.gamma(params.gamma_shape, params.gamma_scale)

    # incremental upkeep of the per-slice structures
    if ctx.snd is not None:
        adj = ctx.adj
        snd = ctx.snd
        tl = targets.tolist()
        for x in tl:
            for nb in adj[x]:
                snd[nb] += 1.0
        snd[w] = float(state._deg[targets].sum())
        snd[targets] += float(LINKS_PER_NODE)
        for x in tl:
            adj[x].append(w)
        adj[w] = tl
    elif ctx.tri is not None:
        adj = ctx.adj
        tri = ctx.tri
        tl = targets.tolist()
        cnt_w = 0
        for i in range(LINKS_PER_NODE):
            for j in range(i + 1, LINKS_PER_NODE):
                if tl[j] in adj[tl[i]]:
                    tri[tl[i]] += 1.0
                    tri[tl[j]] += 1.0
                    cnt_w += 1
        tri[w] = float(cnt_w)
        for x in tl:
            adj[x].add(w)
        adj[w] = set(tl)
    elif ctx.evec is not None:
        ctx.evec[w] = float(ctx.evec[targets].sum()) / max(ctx.lam, 1e-12)
        nn = state.n
        eu, ev = state.edges_u, state.edges_v
        x = ctx.evec[:nn]
        for _ in range(params.eigen_track_steps):
            y = _matvec(eu, ev, x, nn)
            y += x  # same shifted iteration as the full solve
            ctx.lam = float(np.abs(y).max())
            y /= ctx.lam
            x = y
        ctx.evec[:nn] = x
    elif ctx.adj is not None:  # plain adjacency (two-stage model)
        adj = ctx.adj
        tl = targets.tolist()
        for x in tl:
            adj[x].append(w)
        adj[w] = tl


def grow_slice(
    state: GrowthState,
    kind: ModelKind,
    n_nodes: int,
    rng: np.random.Generator,
    params: GrowthParams = DEFAULT_PARAMS,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Grow ``n_nodes`` nodes in place; returns the appended (u, v, t) trace."""
    kind = ModelKind(kind)
    if n_nodes < 0:
        raise ValueError("n_nodes must be non-negative")
    if state.n < LINKS_PER_NODE:
        raise ValueError(f"growth needs at least {LINKS_PER_NODE} existing nodes")
    m_start = state.m
    ctx = _make_ctx(state, kind, params, rng, state.n + n_nodes)
    for _ in range(n_nodes):
        _grow_one(state, kind, rng, params, ctx)
    return state.trace_since(m_start)


def grow_step(state: GrowthState, kind: ModelKind, rng: np.random.Generator, params: GrowthParams = DEFAULT_PARAMS):
    """Add a single node (equivalent to a one-node slice)."""
    return grow_slice(state, kind, 1, rng, params)


def init_seed(n_seed: int, rng: np.random.Generator, params: GrowthParams = DEFAULT_PARAMS) -> GrowthState:
    """Kernel plus preferential attachment up to ``n_seed`` nodes."""
    if n_seed < KERNEL_SIZE:
        raise ValueError(f"seed needs at least {KERNEL_SIZE} nodes")
    state = GrowthState.kernel()
    grow_slice(state, ModelKind.PREFERENTIAL_ATTACHMENT, n_seed - KERNEL_SIZE, rng, params)
    return state
