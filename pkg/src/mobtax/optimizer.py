"""Greedy per-slice optimization of a taxonomy statistic.

A run grows a preferential-attachment seed network, then repeatedly extends
it one slice at a time.  At each slice the current state is cloned once per
candidate growth model, every clone grows a full slice, and the objective
statistic is measured between the previous slice's events and each
candidate's events (consistent nodes taken from the previous slice, as the
taxonomy prescribes).  The directionally best candidate becomes the canonical
continuation; its trace is the "previous slice" for the next round.

Degenerate statistic values rank below every finite value when maximising
and above every finite value when minimising, i.e. they always lose; ties
between finite values go to the lowest canonical model index.  Candidate
growth uses an RNG stream derived from (run seed, slice index, model index),
so results do not shift when the candidate set changes.

The candidate growths within a slice are independent and could run in
parallel; this implementation keeps them serial, which profiling shows is
dominated by the slice growth itself.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .growth import DEFAULT_PARAMS, GrowthParams, ModelKind, grow_slice, init_seed
from .taxonomy import STATISTIC_NAMES, DegreeMode, TaxonomyRecord, build_frame, taxonomy_record
from .windows import snapshot_from_events

DIRECTIONS = ("max", "min")


class OptimizerAbort(RuntimeError):
    """Raised when every candidate at a slice yields a degenerate objective."""


@dataclass(frozen=True)
class Objective:
    """A taxonomy statistic and the direction to push it."""

    statistic: str
    direction: str

    def __post_init__(self):
        if self.statistic not in STATISTIC_NAMES:
            raise ValueError(f"unknown statistic {self.statistic!r}; choose from {', '.join(STATISTIC_NAMES)}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be 'max' or 'min', got {self.direction!r}")

    @property
    def maximise(self) -> bool:
        return self.direction == "max"


@dataclass(frozen=True)
class OptimizerConfig:
    seed_nodes: int = 3000
    n_slices: int = 10
    slice_nodes: int = 1000
    candidates: tuple[ModelKind, ...] = tuple(ModelKind)
    params: GrowthParams = DEFAULT_PARAMS
    degree_mode: DegreeMode = DegreeMode.MULTIPLICITY

    def __post_init__(self):
        # the kernel alone has no trace slice to compare the first candidates
        # against, so at least one seed growth iteration is required
        if self.seed_nodes < 5:
            raise ValueError("seed_nodes must be at least 5")
        if self.n_slices < 1 or self.slice_nodes < 1:
            raise ValueError("need at least one slice of at least one node")
        if not self.candidates:
            raise ValueError("candidate set must not be empty")


@dataclass(frozen=True)
class SliceChoice:
    """Outcome of one greedy round."""

    slice_index: int  # 1-based
    chosen: ModelKind
    candidate_values: tuple  # objective value per candidate, None = degenerate
    record: TaxonomyRecord  # full taxonomy of the adopted candidate


@dataclass
class OptimizerTrace:
    objective: Objective
    seed: int
    config: OptimizerConfig
    choices: list[SliceChoice]
    events_u: np.ndarray  # the adopted trajectory: kernel + seed + all slices
    events_v: np.ndarray
    events_t: np.ndarray
    n_nodes: int

    def chosen_models(self) -> list[ModelKind]:
        return [c.chosen for c in self.choices]

    def alternations(self) -> int:
        """How often consecutive slices picked different models."""
        kinds = self.chosen_models()
        return sum(1 for a, b in zip(kinds, kinds[1:]) if a != b)


def _rank_key(value, maximise: bool):
    # degenerate candidates always lose: sort key is (defined, value)
    if value is None:
        return (0, 0.0)
    return (1, value if maximise else -value)


def optimize_run(objective: Objective, cfg: OptimizerConfig = OptimizerConfig(), seed: int = 0) -> OptimizerTrace:
    """One greedy trajectory; deterministic in (objective, cfg, seed)."""
    rng_seed = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed])))
    state = init_seed(cfg.seed_nodes, rng_seed, cfg.params)

    # the first comparison window: the seed's trailing slice_nodes iterations
    tail = 3 * min(cfg.slice_nodes, state.iteration)
    prev_trace = (state.edges_u[state.m - tail :].copy(), state.edges_v[state.m - tail :].copy())
    prev_start_iter = state.iteration - tail // 3

    choices: list[SliceChoice] = []
    for slice_index in range(1, cfg.n_slices + 1):
        n_final = state.n + cfg.slice_nodes
        boundary_iter = state.iteration
        best = None
        best_key = None
        results = []
        for pos, kind in enumerate(cfg.candidates):
            clone = state.clone()
            rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, slice_index, int(kind)])))
            trace = grow_slice(clone, kind, cfg.slice_nodes, rng, cfg.params)
            snap1 = snapshot_from_events(prev_trace[0], prev_trace[1], n_final)
            snap2 = snapshot_from_events(trace[0], trace[1], n_final)
            record = taxonomy_record(
                build_frame(snap1, snap2, cfg.degree_mode),
                pair_index=slice_index - 1,
                q=prev_start_iter,
                r=boundary_iter,
                s=clone.iteration,
            )
            value = record.value(objective.statistic)
            results.append(value)
            key = _rank_key(value, objective.maximise)
            if best_key is None or key > best_key:  # strict: ties keep the earlier (lower) model
                best_key = key
                best = (kind, clone, trace, record)
        if best_key[0] == 0:
            raise OptimizerAbort(
                f"slice {slice_index}: all {len(cfg.candidates)} candidates degenerate for {objective.statistic}"
            )
        kind, state, trace, record = best
        prev_trace = (trace[0], trace[1])
        prev_start_iter = boundary_iter
        choices.append(SliceChoice(slice_index, kind, tuple(results), record))

    return OptimizerTrace(
        objective=objective,
        seed=seed,
        config=cfg,
        choices=choices,
        events_u=state.edges_u.copy(),
        events_v=state.edges_v.copy(),
        events_t=state.timestamps.copy(),
        n_nodes=state.n,
    )


@dataclass(frozen=True)
class SliceStat:
    mean: float | None
    std: float | None
    n_finite: int


@dataclass
class EnsembleSummary:
    """Per-slice statistics of the chosen candidates across an ensemble.

    Means and population standard deviations are taken over the runs whose
    value was finite; ``n_finite`` records the support.  ``model_counts``
    histograms the chosen model per slice.
    """

    objective: Objective
    base_seed: int
    n_runs: int
    n_slices: int
    stats: list[dict[str, SliceStat]]  # index: slice-1
    model_counts: list[Counter] = field(default_factory=list)

    def slice_means(self, statistic: str) -> list[float | None]:
        return [s[statistic].mean for s in self.stats]


def summarise(objective: Objective, base_seed: int, traces: list[OptimizerTrace]) -> EnsembleSummary:
    n_slices = len(traces[0].choices)
    stats = []
    counts = []
    for i in range(n_slices):
        per_stat = {}
        for name in STATISTIC_NAMES:
            vals = [t.choices[i].record.value(name) for t in traces]
            finite = [v for v in vals if v is not None]
            if finite:
                mean = sum(finite) / len(finite)
                var = sum((v - mean) ** 2 for v in finite) / len(finite)
                per_stat[name] = SliceStat(mean, sqrt(var), len(finite))
            else:
                per_stat[name] = SliceStat(None, None, 0)
        stats.append(per_stat)
        counts.append(Counter(t.choices[i].chosen.cli_name for t in traces))
    return EnsembleSummary(objective, base_seed, len(traces), n_slices, stats, counts)


def optimize_ensemble(
    objective: Objective,
    cfg: OptimizerConfig = OptimizerConfig(),
    n_runs: int = 10,
    base_seed: int = 0,
) -> tuple[EnsembleSummary, list[OptimizerTrace]]:
    """Independent greedy runs with seeds base, base+1, ...; plus their summary."""
    if n_runs < 1:
        raise ValueError("n_runs must be at least 1")
    traces = [optimize_run(objective, cfg, base_seed + k) for k in range(n_runs)]
    return summarise(objective, base_seed, traces), traces


def effective_ranges(summaries: dict[tuple[str, str], EnsembleSummary]) -> dict[str, tuple[float, float]]:
    """Observed (low, high) per statistic from minimise/maximise ensemble pairs.

    ``summaries`` maps (statistic, direction) to an ensemble summary; the low
    end is the smallest slice mean the minimise ensemble reached, the high
    end the largest slice mean of the maximise ensemble.
    """
    out = {}
    stats = {s for s, _ in summaries}
    for stat in sorted(stats):
        lo_summary = summaries.get((stat, "min"))
        hi_summary = summaries.get((stat, "max"))
        if lo_summary is None or hi_summary is None:
            raise ValueError(f"need both directions for {stat!r}")
        lows = [m for m in lo_summary.slice_means(stat) if m is not None]
        highs = [m for m in hi_summary.slice_means(stat) if m is not None]
        if not lows or not highs:
            raise ValueError(f"no finite slice means for {stat!r}")
        out[stat] = (min(lows), max(highs))
    return out


# -- serialisation -------------------------------------------------------------


def _fmt(value) -> str:
    return "" if value is None else repr(value)


def write_trace_csv(trace: OptimizerTrace, handle) -> None:
    """Per-slice table: chosen model, all candidate values, chosen taxonomy."""
    names = [k.cli_name for k in trace.config.candidates]
    header = ["slice", "chosen_model"] + [f"cand_{n}" for n in names] + ["n_consistent"] + list(STATISTIC_NAMES) + ["flags"]
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(header)
    for c in trace.choices:
        row = [c.slice_index, c.chosen.cli_name]
        row += [_fmt(v) for v in c.candidate_values]
        row.append(c.record.n_consistent)
        row += [_fmt(c.record.value(n)) for n in STATISTIC_NAMES]
        row.append(";".join(c.record.flags))
        writer.writerow(row)


def write_summary_csv(summary: EnsembleSummary, handle) -> None:
    """Per-slice ensemble means/stds for all six statistics plus model histogram."""
    header = ["slice"]
    for name in STATISTIC_NAMES:
        header += [f"{name}_mean", f"{name}_std", f"{name}_n"]
    header.append("chosen_models")
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(header)
    for i, per_stat in enumerate(summary.stats):
        row = [i + 1]
        for name in STATISTIC_NAMES:
            s = per_stat[name]
            row += [_fmt(s.mean), _fmt(s.std), s.n_finite]
        hist = ";".join(f"{model}:{count}" for model, count in sorted(summary.model_counts[i].items()))
        row.append(hist)
        writer.writerow(row)


def trace_events_csv(trace: OptimizerTrace, handle) -> None:
    """The adopted trajectory as a comma-separated src,dst,time edge list."""
    for a, b, t in zip(trace.events_u.tolist(), trace.events_v.tolist(), trace.events_t.tolist()):
        handle.write(f"{a},{b},{t}\n")


def summary_to_dict(summary: EnsembleSummary) -> dict:
    return {
        "statistic": summary.objective.statistic,
        "direction": summary.objective.direction,
        "base_seed": summary.base_seed,
        "n_runs": summary.n_runs,
        "slices": [
            {
                "slice": i + 1,
                "stats": {
                    name: {"mean": s.mean, "std": s.std, "n": s.n_finite}
                    for name, s in per_stat.items()
                },
                "chosen_models": dict(sorted(summary.model_counts[i].items())),
            }
            for i, per_stat in enumerate(summary.stats)
        ],
    }
