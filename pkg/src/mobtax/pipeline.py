"""Batch runs over collections of edge-list files.

A run is described by a flat ``key = value`` config file (``#`` comments,
blank lines ignored)::

    # one network per input line; paths are relative to the config file
    input = data/calls.csv
    input = data/messages.csv.gz
    format = src,dst,time       # column order of the edge lists
    delimiter = ,               # literal, or the words: whitespace, tab
    comment = hash              # line-comment prefix ('hash' means '#'), or: none
    has_header = false
    axis = events               # events | time
    degree = binary             # binary | multiplicity
    schedule = default          # default | custom
    # windows = 0:5:10; 5:10:15   (custom only; q:r:s boundary triples)
    out_dir = results
    # groups = groups.csv         (columns: network, group [, link_type])
    workers = 1
    # rng_seed = 7                (echoed into the manifest)

Each network yields one CSV of windowed correlation records plus a Gini
value per window; per-group aggregates (mean and standard error over finite
values) and a JSON manifest describing every produced file round out the
run.  Failures are isolated per network so one bad file cannot sink a
batch.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import partial

import numpy as np

from .analysis import gini
from .events import EventStream, FormatSpec, ParseError, StreamStats, load_edge_list, stream_stats
from .taxonomy import (
    CSV_COLUMNS,
    STATISTIC_NAMES,
    DegreeMode,
    TaxonomyRecord,
    _fmt_boundary,
    _fmt_stat,
    run_schedule,
)
from .windows import TimeAxis, Window, WindowSchedule, custom_schedule, default_schedule, snapshot


class ConfigError(ValueError):
    """A config file or config value is malformed."""


@dataclass(frozen=True)
class RunConfig:
    """Normalised description of one batch run."""

    inputs: tuple[str, ...] = ()
    columns: tuple[str, ...] = ("src", "dst", "time")
    delimiter: str | None = None
    comment: str | None = "#"
    has_header: bool = False
    axis: TimeAxis = TimeAxis.EVENTS
    degree: DegreeMode = DegreeMode.BINARY
    schedule: str = "default"
    windows: tuple[tuple[Fraction, Fraction, Fraction], ...] = ()
    out_dir: str = "mobtax_out"
    groups: str | None = None
    workers: int = 1
    rng_seed: int | None = None

    def format_spec(self) -> FormatSpec:
        return FormatSpec(
            columns=self.columns,
            delimiter=self.delimiter,
            comment=self.comment,
            has_header=self.has_header,
        )


_CONFIG_KEYS = frozenset(
    {
        "input",
        "format",
        "delimiter",
        "comment",
        "has_header",
        "axis",
        "degree",
        "schedule",
        "windows",
        "out_dir",
        "groups",
        "workers",
        "rng_seed",
    }
)


def _parse_bool(value: str, key: str) -> bool:
    low = value.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ConfigError(f"{key} must be true or false, got {value!r}")


def parse_window_triples(text: str) -> tuple[tuple[Fraction, Fraction, Fraction], ...]:
    """Parse ``q:r:s`` boundary triples separated by semicolons."""
    triples = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        pieces = part.split(":")
        if len(pieces) != 3:
            raise ConfigError(f"window triple must be q:r:s, got {part!r}")
        try:
            q, r, s = (Fraction(p.strip()) for p in pieces)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad window boundary in {part!r}: {exc}") from None
        triples.append((q, r, s))
    if not triples:
        raise ConfigError("windows must hold at least one q:r:s triple")
    return tuple(triples)


def format_window_triples(triples) -> str:
    return "; ".join(f"{q}:{r}:{s}" for q, r, s in triples)


def parse_config(text: str, base_dir: str = ".") -> RunConfig:
    """Parse config text into an (unvalidated) :class:`RunConfig`.

    Relative paths are resolved against ``base_dir``.
    """
    values: dict[str, str] = {}
    inputs: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        if key == "input":
            inputs.append(os.path.join(base_dir, value))
            continue
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value

    cfg = RunConfig(inputs=tuple(inputs))
    if "format" in values:
        cfg = replace(cfg, columns=tuple(p.strip() for p in values["format"].split(",")))
    if "delimiter" in values:
        word = values["delimiter"]
        cfg = replace(cfg, delimiter={"whitespace": None, "tab": "\t"}.get(word, word))
    if "comment" in values:
        word = values["comment"]
        cfg = replace(cfg, comment={"none": None, "hash": "#"}.get(word.lower(), word))
    if "has_header" in values:
        cfg = replace(cfg, has_header=_parse_bool(values["has_header"], "has_header"))
    if "axis" in values:
        cfg = replace(cfg, axis=values["axis"])  # normalised in validate_config
    if "degree" in values:
        cfg = replace(cfg, degree=values["degree"])
    if "schedule" in values:
        cfg = replace(cfg, schedule=values["schedule"])
    if "windows" in values:
        cfg = replace(cfg, windows=parse_window_triples(values["windows"]))
    if "out_dir" in values:
        cfg = replace(cfg, out_dir=os.path.join(base_dir, values["out_dir"]))
    if "groups" in values:
        cfg = replace(cfg, groups=os.path.join(base_dir, values["groups"]))
    if "workers" in values:
        try:
            cfg = replace(cfg, workers=int(values["workers"]))
        except ValueError:
            raise ConfigError(f"workers must be an integer, got {values['workers']!r}") from None
    if "rng_seed" in values:
        try:
            cfg = replace(cfg, rng_seed=int(values["rng_seed"]))
        except ValueError:
            raise ConfigError(f"rng_seed must be an integer, got {values['rng_seed']!r}") from None
    return cfg


def _coerce_enum(value, enum_cls, key: str):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls[str(value).strip().upper()]
    except KeyError:
        options = ", ".join(m.name.lower() for m in enum_cls)
        raise ConfigError(f"{key} must be one of: {options}; got {value!r}") from None


def network_id_for(path: str) -> str:
    """Network identifier from a file name: base name minus .gz and one extension."""
    name = os.path.basename(path)
    if name.endswith(".gz"):
        name = name[:-3]
    stem, _, _ = name.rpartition(".")
    return stem or name


def validate_config(cfg: RunConfig) -> RunConfig:
    """Fill defaults, normalise enums and paths, and reject contradictions."""
    if not cfg.inputs:
        raise ConfigError("config needs at least one input")
    axis = _coerce_enum(cfg.axis, TimeAxis, "axis")
    degree = _coerce_enum(cfg.degree, DegreeMode, "degree")
    schedule = str(cfg.schedule).strip().lower()
    if schedule not in ("default", "custom"):
        raise ConfigError(f"schedule must be default or custom, got {cfg.schedule!r}")
    if schedule == "custom" and not cfg.windows:
        raise ConfigError("schedule = custom requires windows")
    if schedule == "default" and cfg.windows:
        raise ConfigError("windows given but schedule is default")
    if cfg.workers < 1:
        raise ConfigError(f"workers must be at least 1, got {cfg.workers}")
    if cfg.delimiter == "":
        raise ConfigError("delimiter must not be empty")
    try:
        FormatSpec(columns=cfg.columns).field_indexes()
    except ParseError as exc:
        raise ConfigError(str(exc)) from None
    inputs = tuple(os.path.abspath(p) for p in cfg.inputs)
    for path in inputs:
        if not os.path.isfile(path):
            raise ConfigError(f"input does not exist: {path}")
    ids = [network_id_for(p) for p in inputs]
    dup = {i for i in ids if ids.count(i) > 1}
    if dup:
        raise ConfigError(f"duplicate network ids from inputs: {sorted(dup)}")
    groups = None
    if cfg.groups is not None:
        groups = os.path.abspath(cfg.groups)
        if not os.path.isfile(groups):
            raise ConfigError(f"groups file does not exist: {groups}")
    windows = tuple((Fraction(q), Fraction(r), Fraction(s)) for q, r, s in cfg.windows)
    return replace(
        cfg,
        inputs=inputs,
        axis=axis,
        degree=degree,
        schedule=schedule,
        windows=windows,
        out_dir=os.path.abspath(cfg.out_dir),
        groups=groups,
    )


def format_config(cfg: RunConfig) -> str:
    """Canonical config text; ``parse_config`` + ``validate_config`` invert it."""
    lines = []
    for path in cfg.inputs:
        lines.append(f"input = {path}")
    lines.append(f"format = {','.join(cfg.columns)}")
    delim = {None: "whitespace", "\t": "tab"}.get(cfg.delimiter, cfg.delimiter)
    lines.append(f"delimiter = {delim}")
    comment = {None: "none", "#": "hash"}.get(cfg.comment, cfg.comment)
    lines.append(f"comment = {comment}")
    lines.append(f"has_header = {str(cfg.has_header).lower()}")
    axis = cfg.axis.name.lower() if isinstance(cfg.axis, TimeAxis) else cfg.axis
    degree = cfg.degree.name.lower() if isinstance(cfg.degree, DegreeMode) else cfg.degree
    lines.append(f"axis = {axis}")
    lines.append(f"degree = {degree}")
    lines.append(f"schedule = {cfg.schedule}")
    if cfg.windows:
        lines.append(f"windows = {format_window_triples(cfg.windows)}")
    lines.append(f"out_dir = {cfg.out_dir}")
    if cfg.groups is not None:
        lines.append(f"groups = {cfg.groups}")
    lines.append(f"workers = {cfg.workers}")
    if cfg.rng_seed is not None:
        lines.append(f"rng_seed = {cfg.rng_seed}")
    return "\n".join(lines) + "\n"


def load_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    return validate_config(parse_config(text, base_dir=os.path.dirname(os.path.abspath(path))))


def config_to_dict(cfg: RunConfig) -> dict:
    """JSON-safe mirror of a config, for manifests."""
    return {
        "inputs": list(cfg.inputs),
        "format": ",".join(cfg.columns),
        "delimiter": {None: "whitespace", "\t": "tab"}.get(cfg.delimiter, cfg.delimiter),
        "comment": {None: "none", "#": "hash"}.get(cfg.comment, cfg.comment),
        "has_header": cfg.has_header,
        "axis": cfg.axis.name.lower() if isinstance(cfg.axis, TimeAxis) else str(cfg.axis),
        "degree": cfg.degree.name.lower() if isinstance(cfg.degree, DegreeMode) else str(cfg.degree),
        "schedule": cfg.schedule,
        "windows": format_window_triples(cfg.windows) if cfg.windows else None,
        "out_dir": cfg.out_dir,
        "groups": cfg.groups,
        "workers": cfg.workers,
        "rng_seed": cfg.rng_seed,
    }


# -- group metadata -------------------------------------------------------------


def read_group_map(path: str) -> dict[str, dict[str, str]]:
    """Read a network-metadata CSV: columns ``network``, ``group`` (or
    ``collection``), optional ``link_type``."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise ConfigError(f"groups file is empty: {path}")
        fields = [f.strip().lower() for f in reader.fieldnames]
        if "network" not in fields:
            raise ConfigError(f"groups file needs a 'network' column: {path}")
        if "group" in fields:
            group_col = "group"
        elif "collection" in fields:
            group_col = "collection"
        else:
            raise ConfigError(f"groups file needs a 'group' or 'collection' column: {path}")
        out: dict[str, dict[str, str]] = {}
        for row in reader:
            row = {(k or "").strip().lower(): (v or "").strip() for k, v in row.items()}
            name = row.get("network", "")
            if not name:
                continue
            info = {"group": row.get(group_col, "") or "ungrouped"}
            if row.get("link_type"):
                info["link_type"] = row["link_type"]
            out[name] = info
    return out


# -- per-network processing -----------------------------------------------------


@dataclass(frozen=True)
class NetworkResult:
    """One network's windowed records, per-window Gini values, and stream summary."""

    network_id: str
    records: tuple[TaxonomyRecord, ...]
    gini_per_window: tuple[float | None, ...]
    stats: StreamStats


@dataclass(frozen=True)
class NetworkFailure:
    network_id: str
    stage: str
    message: str


def build_schedule(stream: EventStream, cfg: RunConfig) -> WindowSchedule:
    """The run's window schedule for one stream (custom boundaries are given in
    raw axis units and scaled onto the stream's fixed-point time grid)."""
    if cfg.schedule == "custom":
        factor = 10**stream.time_decimals if cfg.axis is TimeAxis.TIME else 1
        return custom_schedule([(q * factor, r * factor, s * factor) for q, r, s in cfg.windows], cfg.axis)
    return default_schedule(stream, cfg.axis)


def active_degrees(snap, degree: DegreeMode) -> np.ndarray:
    """Degrees of a snapshot's active nodes under the chosen counting mode."""
    weights = snap.multiplicity.astype(np.float64) if degree is DegreeMode.MULTIPLICITY else None
    return snap.degree_vector(weights)[snap.active]


def window_gini(stream: EventStream, window: Window, axis: TimeAxis, degree: DegreeMode) -> float | None:
    """Gini of the window snapshot's active-node degrees; None when empty."""
    snap = snapshot(stream, window, axis)
    if snap.is_empty:
        return None
    return gini(active_degrees(snap, degree))


def analyse_stream(stream: EventStream, cfg: RunConfig, network_id: str) -> NetworkResult:
    schedule = build_schedule(stream, cfg)
    records = run_schedule(stream, schedule, cfg.degree)
    ginis = tuple(
        window_gini(stream, Window(pair.q, pair.s), cfg.axis, cfg.degree) for pair in schedule.pairs
    )
    return NetworkResult(
        network_id=network_id,
        records=tuple(records),
        gini_per_window=ginis,
        stats=stream_stats(stream),
    )


def _run_network(cfg: RunConfig, path: str) -> NetworkResult | NetworkFailure:
    network_id = network_id_for(path)
    try:
        stream = load_edge_list(path, cfg.format_spec())
    except ParseError as exc:
        return NetworkFailure(network_id, "parse", str(exc))
    except OSError as exc:
        return NetworkFailure(network_id, "read", str(exc))
    try:
        return analyse_stream(stream, cfg, network_id)
    except ValueError as exc:
        return NetworkFailure(network_id, "analyse", str(exc))


# -- aggregation ----------------------------------------------------------------


@dataclass(frozen=True)
class GroupCell:
    """Mean and standard error of one statistic in one window across a group."""

    mean: float | None
    sem: float | None
    n: int


@dataclass(frozen=True)
class CorpusResult:
    results: tuple[NetworkResult, ...]
    failures: tuple[NetworkFailure, ...]
    group_of: dict[str, str]
    # aggregates[group][pair_index][statistic]
    aggregates: dict[str, list[dict[str, GroupCell]]] = field(default_factory=dict)


def _aggregate(values: list[float]) -> GroupCell:
    if not values:
        return GroupCell(mean=None, sem=None, n=0)
    n = len(values)
    mean = float(np.mean(values))
    sem = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return GroupCell(mean=mean, sem=sem, n=n)


def aggregate_groups(
    results, group_of: dict[str, str]
) -> dict[str, list[dict[str, GroupCell]]]:
    """Per-group, per-window, per-statistic mean and standard error.

    Degenerate (None/non-finite) statistic values are dropped; the per-cell
    count records how many networks actually contributed.
    """
    n_pairs = max((len(r.records) for r in results), default=0)
    buckets: dict[str, list[dict[str, list[float]]]] = {}
    for res in results:
        group = group_of.get(res.network_id, "ungrouped")
        per_pair = buckets.setdefault(
            group, [{name: [] for name in STATISTIC_NAMES} for _ in range(n_pairs)]
        )
        for i, rec in enumerate(res.records):
            for name in STATISTIC_NAMES:
                value = rec.value(name)
                if value is not None and math.isfinite(value):
                    per_pair[i][name].append(value)
    return {
        group: [
            {name: _aggregate(values) for name, values in per_pair.items()}
            for per_pair in pairs
        ]
        for group, pairs in buckets.items()
    }


def run_corpus(cfg: RunConfig) -> CorpusResult:
    """Process every input network (optionally in parallel) and aggregate by group."""
    if not cfg.inputs:
        raise ConfigError("config needs at least one input")
    worker = partial(_run_network, cfg)
    if cfg.workers > 1 and len(cfg.inputs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(worker, cfg.inputs))
    else:
        outcomes = [worker(path) for path in cfg.inputs]
    results = tuple(o for o in outcomes if isinstance(o, NetworkResult))
    failures = tuple(o for o in outcomes if isinstance(o, NetworkFailure))
    group_map = read_group_map(cfg.groups) if cfg.groups else {}
    group_of = {r.network_id: group_map.get(r.network_id, {}).get("group", "ungrouped") for r in results}
    aggregates = aggregate_groups(results, group_of)
    return CorpusResult(results=results, failures=failures, group_of=group_of, aggregates=aggregates)


# -- output files ----------------------------------------------------------------


def write_network_csv(result: NetworkResult, handle) -> None:
    """Taxonomy-record CSV with a trailing per-window ``gini`` column."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CSV_COLUMNS + ("gini",))
    for rec, g in zip(result.records, result.gini_per_window):
        row = [rec.pair_index, _fmt_boundary(rec.q), _fmt_boundary(rec.r), _fmt_boundary(rec.s), rec.n_consistent]
        row += [_fmt_stat(getattr(rec, name)) for name in STATISTIC_NAMES]
        row.append(";".join(rec.flags))
        row.append(_fmt_stat(g))
        writer.writerow(row)


def write_group_csv(group: str, cells: list[dict[str, GroupCell]], handle) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(("group", "pair_index", "statistic", "mean", "sem", "n"))
    for pair_index, per_stat in enumerate(cells):
        for name in STATISTIC_NAMES:
            cell = per_stat[name]
            writer.writerow(
                (
                    group,
                    pair_index,
                    name,
                    "" if cell.mean is None else repr(cell.mean),
                    "" if cell.sem is None else repr(cell.sem),
                    cell.n,
                )
            )


def _safe_label(label: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in label) or "group"


def _stats_dict(stats: StreamStats) -> dict:
    return {
        "n_nodes": stats.n_nodes,
        "n_events": stats.n_events,
        "n_iterations": stats.n_iterations,
        "t_min": str(stats.t_min),
        "t_max": str(stats.t_max),
        "self_loops_dropped": stats.self_loops_dropped,
        "duplicate_events": stats.duplicate_events,
    }


def write_corpus_outputs(cfg: RunConfig, result: CorpusResult, version: str) -> dict:
    """Write per-network CSVs, per-group aggregate CSVs, and the JSON manifest.

    Returns the manifest dict (also stored as ``manifest.json`` in the
    output directory).
    """
    os.makedirs(cfg.out_dir, exist_ok=True)
    files = []
    for res in result.results:
        name = f"{_safe_label(res.network_id)}_taxonomy.csv"
        with open(os.path.join(cfg.out_dir, name), "w", encoding="utf-8") as handle:
            write_network_csv(res, handle)
        files.append({"role": "network_records", "network": res.network_id, "file": name})
    for group in sorted(result.aggregates):
        name = f"group_{_safe_label(group)}_aggregate.csv"
        with open(os.path.join(cfg.out_dir, name), "w", encoding="utf-8") as handle:
            write_group_csv(group, result.aggregates[group], handle)
        files.append({"role": "group_aggregate", "group": group, "file": name})
    manifest = {
        "tool": "mobtax",
        "version": version,
        "command": "corpus",
        "config": config_to_dict(cfg),
        "networks": [
            {
                "network": res.network_id,
                "group": result.group_of.get(res.network_id, "ungrouped"),
                "n_records": len(res.records),
                "stream": _stats_dict(res.stats),
            }
            for res in result.results
        ],
        "failures": [
            {"network": f.network_id, "stage": f.stage, "message": f.message}
            for f in result.failures
        ],
        "files": files,
    }
    with open(os.path.join(cfg.out_dir, "manifest.json"), "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=False)
        handle.write("\n")
    return manifest
