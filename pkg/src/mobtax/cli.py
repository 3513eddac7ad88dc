"""Command-line entry point.

Subcommands::

    taxonomy   windowed correlation records for one edge-list file
    generate   grow a synthetic network with one attachment rule
    optimize   greedy per-slice model search for a statistic extreme
    gini       degree-concentration (Gini) per window or for the full stream
    pca        project record files onto their two leading components
    corpus     batch-process many edge lists from a config file

Exit codes: 0 success, 1 usage error, 2 unreadable/unparseable input,
3 degenerate or aborted computation.  ``--json`` switches stdout to a single
JSON document; output files are written either way.  ``MOBTAX_OUT_DIR`` and
``MOBTAX_WORKERS`` stand in for ``--out-dir``/``--workers`` when the flag is
absent.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .analysis import fit_group_ellipse, gini, pca_fit, pca_project
from .events import FormatSpec, ParseError, load_edge_list, stream_stats
from .growth import GrowthParams, GrowthState, ModelKind, grow_slice
from .optimizer import (
    Objective,
    OptimizerAbort,
    OptimizerConfig,
    optimize_ensemble,
    summary_to_dict,
    trace_events_csv,
    write_summary_csv,
    write_trace_csv,
)
from .pipeline import (
    ConfigError,
    active_degrees,
    config_to_dict,
    load_config,
    network_id_for,
    parse_window_triples,
    read_group_map,
    run_corpus,
    write_corpus_outputs,
)
from .taxonomy import (
    STATISTIC_NAMES,
    DegreeMode,
    parse_records_csv,
    records_to_csv,
    records_to_dicts,
    run_schedule,
)
from .windows import TimeAxis, Window, custom_schedule, default_schedule, snapshot, snapshot_from_events


class _UsageError(Exception):
    """A flag combination or value the grammar cannot express (exit code 1)."""


class _InputError(Exception):
    """Unreadable or unusable input (exit code 2)."""


class _DegenerateError(Exception):
    """The computation had nothing usable to work on (exit code 3)."""


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _columns_arg(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(","))


def _triples_arg(text: str):
    try:
        return parse_window_triples(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_format_options(parser) -> None:
    parser.add_argument("--format", type=_columns_arg, default=("src", "dst", "time"), metavar="COLS", help="column order, e.g. src,dst,time (extra names are skipped)")
    parser.add_argument("--delimiter", default=None, metavar="CHAR", help="field separator (default: any whitespace)")
    parser.add_argument("--comment", default="#", metavar="PREFIX", help="line-comment prefix (default '#')")
    parser.add_argument("--has-header", action="store_true", help="skip the first non-comment line")


def _add_window_options(parser) -> None:
    parser.add_argument("--axis", choices=("events", "time"), default="events", help="window over event iterations or raw timestamps")
    parser.add_argument("--windows", choices=("default", "custom"), default="default", help="five-span sliding scheme, or explicit boundaries")
    parser.add_argument("--custom-windows", type=_triples_arg, default=None, metavar="Q:R:S;...", help="semicolon-separated q:r:s boundary triples (with --windows custom)")


def _add_growth_options(parser) -> None:
    parser.add_argument("--gamma-shape", type=float, default=2.0, help="fitness distribution shape (default 2.0)")
    parser.add_argument("--gamma-scale", type=float, default=1.0, help="fitness distribution scale (default 1.0)")
    parser.add_argument("--resample-interval", type=int, default=100, help="iterations between fitness resamples (default 100)")
    parser.add_argument("--resample-lowest", action="store_true", help="resample the lowest-fitness node instead of a random one")


def build_parser() -> _Parser:
    parser = _Parser(prog="mobtax", description="Mobility-taxonomy toolkit for temporal networks.")
    parser.add_argument("--version", action="version", version=f"mobtax {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("taxonomy", help="windowed correlation records for one edge list")
    p.add_argument("--input", required=True, help="edge-list file (.gz accepted)")
    _add_format_options(p)
    _add_window_options(p)
    p.add_argument("--degree", choices=("binary", "multiplicity"), default="binary", help="neighbour-count or event-count degrees")
    p.add_argument("--out", default=None, metavar="FILE", help="records CSV destination (default: stdout)")
    p.add_argument("--json", action="store_true", help="print one JSON document instead of text")
    p.set_defaults(func=cmd_taxonomy)

    p = sub.add_parser("generate", help="grow a synthetic network with one attachment rule")
    p.add_argument("--model", required=True, choices=[k.cli_name for k in ModelKind], help="attachment rule")
    p.add_argument("--seed-nodes", type=int, default=3000, help="nodes grown before the slices (default 3000)")
    p.add_argument("--slices", type=int, default=10, help="number of growth slices (default 10)")
    p.add_argument("--slice-nodes", type=int, default=1000, help="nodes per slice (default 1000)")
    p.add_argument("--rng-seed", type=int, default=0, help="random seed (default 0)")
    _add_growth_options(p)
    p.add_argument("--out", default="trace.csv", metavar="FILE", help="event-trace destination (default trace.csv)")
    p.add_argument("--json", action="store_true", help="print one JSON document instead of text")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("optimize", help="greedy per-slice model search for a statistic extreme")
    p.add_argument("--statistic", required=True, choices=STATISTIC_NAMES, help="objective statistic")
    p.add_argument("--direction", required=True, choices=("max", "min"), help="push the statistic up or down")
    p.add_argument("--runs", type=int, default=10, help="ensemble size (default 10)")
    p.add_argument("--rng-seed", type=int, default=0, help="base seed; run k uses base+k (default 0)")
    p.add_argument("--seed-nodes", type=int, default=3000, help="seed-graph size (default 3000)")
    p.add_argument("--slices", type=int, default=10, help="slices per run (default 10)")
    p.add_argument("--slice-nodes", type=int, default=1000, help="nodes per slice (default 1000)")
    p.add_argument("--degree", choices=("binary", "multiplicity"), default="multiplicity", help="degree counting for slice measurement (default multiplicity)")
    _add_growth_options(p)
    p.add_argument("--out-dir", default=None, metavar="DIR", help="output directory (default optimize_out, or MOBTAX_OUT_DIR)")
    p.add_argument("--json", action="store_true", help="print one JSON document instead of text")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("gini", help="degree concentration per window or overall")
    p.add_argument("--input", required=True, help="edge-list file (.gz accepted)")
    _add_format_options(p)
    _add_window_options(p)
    p.add_argument("--degree", choices=("binary", "multiplicity"), default="binary", help="neighbour-count or event-count degrees")
    p.add_argument("--scope", choices=("windows", "full"), default="windows", help="per-window values plus their mean, or one whole-stream value")
    p.add_argument("--out", default=None, metavar="FILE", help="CSV destination (default: stdout)")
    p.add_argument("--json", action="store_true", help="print one JSON document instead of text")
    p.set_defaults(func=cmd_gini)

    p = sub.add_parser("pca", help="project record files onto their two leading components")
    p.add_argument("--records", required=True, nargs="+", metavar="CSV", help="taxonomy record CSVs, one per network")
    p.add_argument("--meta", default=None, help="metadata CSV: network, group/collection [, link_type]")
    p.add_argument("--group-by", choices=("collection", "link_type"), default="collection", help="metadata column used for ellipse groups")
    p.add_argument("--n-sigma", type=float, default=2.0, help="ellipse contour level (default 2.0)")
    p.add_argument("--out-dir", default=None, metavar="DIR", help="output directory (default pca_out, or MOBTAX_OUT_DIR)")
    p.add_argument("--json", action="store_true", help="print one JSON document instead of text")
    p.set_defaults(func=cmd_pca)

    p = sub.add_parser("corpus", help="batch-process many edge lists from a config file")
    p.add_argument("--config", required=True, help="key = value run description")
    p.add_argument("--out-dir", default=None, metavar="DIR", help="override the config's output directory (or MOBTAX_OUT_DIR)")
    p.add_argument("--workers", type=int, default=None, help="override the config's worker count (or MOBTAX_WORKERS)")
    p.add_argument("--json", action="store_true", help="print one JSON document instead of text")
    p.set_defaults(func=cmd_corpus)

    return parser


# -- shared helpers --------------------------------------------------------------


def _format_spec(args) -> FormatSpec:
    return FormatSpec(columns=args.format, delimiter=args.delimiter, comment=args.comment, has_header=args.has_header)


def _load_stream(args):
    return load_edge_list(args.input, _format_spec(args))


def _schedule(stream, args):
    axis = TimeAxis[args.axis.upper()]
    if args.windows == "custom":
        if args.custom_windows is None:
            raise _UsageError("--windows custom requires --custom-windows")
        factor = 10**stream.time_decimals if axis is TimeAxis.TIME else 1
        try:
            return custom_schedule([(q * factor, r * factor, s * factor) for q, r, s in args.custom_windows], axis), axis
        except ValueError as exc:
            raise _InputError(str(exc)) from None
    try:
        return default_schedule(stream, axis), axis
    except ValueError as exc:
        raise _InputError(str(exc)) from None


def _out_dir(args, default: str) -> str:
    if args.out_dir is not None:
        return args.out_dir
    return os.environ.get("MOBTAX_OUT_DIR") or default


def _doc(command: str, config: dict) -> dict:
    return {"tool": "mobtax", "version": __version__, "command": command, "config": config}


def _emit(args, doc: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        for line in lines:
            print(line)


def _stats_json(stats) -> dict:
    return {
        "n_nodes": stats.n_nodes,
        "n_events": stats.n_events,
        "n_iterations": stats.n_iterations,
        "t_min": str(stats.t_min),
        "t_max": str(stats.t_max),
        "self_loops_dropped": stats.self_loops_dropped,
        "duplicate_events": stats.duplicate_events,
    }


def _write_manifest(out_dir: str, doc: dict) -> None:
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2)
        handle.write("\n")


# -- subcommands -----------------------------------------------------------------


def cmd_taxonomy(args) -> int:
    stream = _load_stream(args)
    schedule, _ = _schedule(stream, args)
    mode = DegreeMode[args.degree.upper()]
    records = run_schedule(stream, schedule, mode)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            records_to_csv(records, handle)
    doc = _doc(
        "taxonomy",
        {
            "input": args.input,
            "axis": args.axis,
            "windows": args.windows,
            "degree": args.degree,
            "out": args.out,
        },
    )
    doc["stream"] = _stats_json(stream_stats(stream))
    doc["records"] = records_to_dicts(records)
    lines = []
    if not args.out and not args.json:
        buffer = io.StringIO()
        records_to_csv(records, buffer)
        lines = buffer.getvalue().splitlines()
    elif args.out:
        lines = [f"wrote {args.out}: {len(records)} records"]
    _emit(args, doc, lines)
    return 0


def cmd_generate(args) -> int:
    if args.seed_nodes < 4:
        raise _UsageError("--seed-nodes must be at least 4 (the starting clique)")
    if args.slices < 0 or args.slice_nodes < 0:
        raise _UsageError("--slices and --slice-nodes must be non-negative")
    if args.seed_nodes - 4 + args.slices * args.slice_nodes <= 0:
        raise _UsageError("nothing to grow: increase --seed-nodes or the slice sizes")
    kind = ModelKind.from_name(args.model)
    params = GrowthParams(
        gamma_shape=args.gamma_shape,
        gamma_scale=args.gamma_scale,
        resample_interval=args.resample_interval,
        resample_lowest=args.resample_lowest,
    )
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([args.rng_seed])))
    state = GrowthState.kernel()
    total = args.seed_nodes - 4 + args.slices * args.slice_nodes
    grow_slice(state, kind, total, rng, params)
    u, v, t = state.trace_since(0)
    with open(args.out, "w", encoding="utf-8") as handle:
        for a, b, ts in zip(u.tolist(), v.tolist(), t.tolist()):
            handle.write(f"{a},{b},{ts}\n")
    doc = _doc(
        "generate",
        {
            "model": args.model,
            "seed_nodes": args.seed_nodes,
            "slices": args.slices,
            "slice_nodes": args.slice_nodes,
            "rng_seed": args.rng_seed,
            "gamma_shape": args.gamma_shape,
            "gamma_scale": args.gamma_scale,
            "resample_interval": args.resample_interval,
            "resample_lowest": args.resample_lowest,
            "out": args.out,
        },
    )
    doc["n_nodes"] = state.n
    doc["n_events"] = int(len(u))
    _emit(args, doc, [f"wrote {args.out}: {state.n} nodes, {len(u)} events"])
    return 0


def cmd_optimize(args) -> int:
    objective = Objective(args.statistic, args.direction)
    params = GrowthParams(
        gamma_shape=args.gamma_shape,
        gamma_scale=args.gamma_scale,
        resample_interval=args.resample_interval,
        resample_lowest=args.resample_lowest,
    )
    cfg = OptimizerConfig(
        seed_nodes=args.seed_nodes,
        n_slices=args.slices,
        slice_nodes=args.slice_nodes,
        params=params,
        degree_mode=DegreeMode[args.degree.upper()],
    )
    summary, traces = optimize_ensemble(objective, cfg, n_runs=args.runs, base_seed=args.rng_seed)
    out_dir = _out_dir(args, "optimize_out")
    os.makedirs(out_dir, exist_ok=True)
    files = []
    for k, trace in enumerate(traces, start=1):
        name = f"run_{k:02d}_trace.csv"
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as handle:
            write_trace_csv(trace, handle)
        files.append(name)
        name = f"run_{k:02d}_events.csv"
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as handle:
            trace_events_csv(trace, handle)
        files.append(name)
    with open(os.path.join(out_dir, "summary.csv"), "w", encoding="utf-8") as handle:
        write_summary_csv(summary, handle)
    files.append("summary.csv")
    doc = _doc(
        "optimize",
        {
            "statistic": args.statistic,
            "direction": args.direction,
            "runs": args.runs,
            "rng_seed": args.rng_seed,
            "seed_nodes": args.seed_nodes,
            "slices": args.slices,
            "slice_nodes": args.slice_nodes,
            "degree": args.degree,
            "gamma_shape": args.gamma_shape,
            "gamma_scale": args.gamma_scale,
            "resample_interval": args.resample_interval,
            "resample_lowest": args.resample_lowest,
            "out_dir": out_dir,
        },
    )
    doc["summary"] = summary_to_dict(summary)
    doc["files"] = files + ["manifest.json"]
    _write_manifest(out_dir, doc)
    final = summary.stats[-1][args.statistic]
    mean = "degenerate" if final.mean is None else f"{final.mean:.4f}"
    _emit(
        args,
        doc,
        [
            f"{args.statistic} ({args.direction}), {args.runs} runs: final-slice mean {mean} (n={final.n_finite})",
            f"wrote {out_dir}",
        ],
    )
    return 0


def cmd_gini(args) -> int:
    stream = _load_stream(args)
    if stream.n_events == 0:
        raise _InputError(f"{args.input}: no events to analyse")
    mode = DegreeMode[args.degree.upper()]
    rows = []
    if args.scope == "full":
        snap = snapshot_from_events(stream.u, stream.v, stream.n_nodes)
        rows.append(("full", "", "", snap.n_active, gini(active_degrees(snap, mode))))
    else:
        schedule, axis = _schedule(stream, args)
        for i, pair in enumerate(schedule.pairs):
            window = Window(pair.q, pair.s)
            snap = snapshot(stream, window, axis)
            value = None if snap.is_empty else gini(active_degrees(snap, mode))
            rows.append((i, str(pair.q), str(pair.s), snap.n_active, value))
    finite = [r[4] for r in rows if r[4] is not None]
    mean = sum(finite) / len(finite) if finite else None
    if mean is None:
        raise _DegenerateError("every window was empty; no Gini value could be computed")
    out_lines = []
    header = ("window", "lo", "hi", "n_nodes", "gini")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow(row[:4] + ("" if row[4] is None else repr(row[4]),))
        out_lines.append(f"wrote {args.out}: {len(rows)} rows")
    else:
        out_lines.append(",".join(header))
        for row in rows:
            value = "" if row[4] is None else repr(row[4])
            out_lines.append(f"{row[0]},{row[1]},{row[2]},{row[3]},{value}")
    out_lines.append(f"mean gini: {mean!r}")
    doc = _doc(
        "gini",
        {
            "input": args.input,
            "axis": args.axis,
            "windows": args.windows,
            "degree": args.degree,
            "scope": args.scope,
            "out": args.out,
        },
    )
    doc["rows"] = [
        {"window": r[0], "lo": r[1], "hi": r[2], "n_nodes": r[3], "gini": r[4]} for r in rows
    ]
    doc["mean"] = mean
    _emit(args, doc, out_lines)
    return 0


def cmd_pca(args) -> int:
    networks = []
    for path in args.records:
        try:
            with open(path, encoding="utf-8", newline="") as handle:
                records = parse_records_csv(handle)
        except (KeyError, ValueError, TypeError, csv.Error) as exc:
            raise _InputError(f"{path}: not a records CSV ({exc})") from None
        if not records:
            raise _InputError(f"{path}: no records")
        networks.append((network_id_for(path), records))

    group_of = {}
    if args.meta:
        meta = read_group_map(args.meta)
        for network_id, _ in networks:
            info = meta.get(network_id, {})
            if args.group_by == "link_type":
                group_of[network_id] = info.get("link_type", "ungrouped")
            else:
                group_of[network_id] = info.get("group", "ungrouped")
    else:
        group_of = {network_id: "all" for network_id, _ in networks}

    def as_row(record):
        return [
            np.nan if record.value(name) is None else record.value(name)
            for name in STATISTIC_NAMES
        ]

    fit_rows = [as_row(r) for _, records in networks for r in records if r.pair_index == 0]
    if not fit_rows:
        raise _DegenerateError("no first-window records to fit")
    try:
        model = pca_fit(fit_rows)
    except ValueError as exc:
        raise _DegenerateError(str(exc)) from None

    projections = []
    points_by_group: dict[str, list] = {}
    for network_id, records in networks:
        group = group_of[network_id]
        for record in records:
            point = pca_project(model, as_row(record))
            if point is None:
                projections.append((network_id, group, record.pair_index, None, None, True))
            else:
                x, y = float(point[0]), float(point[1])
                projections.append((network_id, group, record.pair_index, x, y, False))
                points_by_group.setdefault(group, []).append((x, y))

    ellipses, skipped_groups = [], []
    for group in sorted(points_by_group):
        points = points_by_group[group]
        if len(points) < 3:
            skipped_groups.append({"group": group, "n_points": len(points)})
            continue
        ellipses.append(fit_group_ellipse(points, n_sigma=args.n_sigma, label=group))

    out_dir = _out_dir(args, "pca_out")
    os.makedirs(out_dir, exist_ok=True)
    files = []

    with open(os.path.join(out_dir, "components.csv"), "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("component", "eigenvalue") + STATISTIC_NAMES)
        for i in range(len(STATISTIC_NAMES)):
            writer.writerow(
                [i + 1, repr(float(model.eigenvalues[i]))]
                + [repr(float(x)) for x in model.components[i]]
            )
    files.append("components.csv")

    with open(os.path.join(out_dir, "projections.csv"), "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("network", "group", "pair_index", "x", "y", "degenerate"))
        for network_id, group, pair_index, x, y, degenerate in projections:
            writer.writerow(
                (
                    network_id,
                    group,
                    pair_index,
                    "" if x is None else repr(x),
                    "" if y is None else repr(y),
                    "true" if degenerate else "false",
                )
            )
    files.append("projections.csv")

    with open(os.path.join(out_dir, "ellipses.csv"), "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            (
                "group",
                "n_points",
                "mean_x",
                "mean_y",
                "cov_xx",
                "cov_xy",
                "cov_yy",
                "semi_major",
                "semi_minor",
                "angle_rad",
                "n_sigma",
                "degenerate",
            )
        )
        for ell in ellipses:
            writer.writerow(
                (
                    ell.label,
                    ell.n_points,
                    repr(float(ell.mean[0])),
                    repr(float(ell.mean[1])),
                    repr(float(ell.covariance[0, 0])),
                    repr(float(ell.covariance[0, 1])),
                    repr(float(ell.covariance[1, 1])),
                    repr(float(ell.semi_axes[0])),
                    repr(float(ell.semi_axes[1])),
                    repr(ell.angle),
                    repr(ell.n_sigma),
                    "true" if ell.degenerate else "false",
                )
            )
    files.append("ellipses.csv")

    doc = _doc(
        "pca",
        {
            "records": list(args.records),
            "meta": args.meta,
            "group_by": args.group_by,
            "n_sigma": args.n_sigma,
            "out_dir": out_dir,
        },
    )
    doc["model"] = {
        "mean": [float(x) for x in model.mean],
        "eigenvalues": [float(x) for x in model.eigenvalues],
        "components": [[float(x) for x in row] for row in model.components],
        "n_used": model.n_used,
        "n_excluded": model.n_excluded,
    }
    doc["ellipses"] = [
        {
            "group": ell.label,
            "n_points": ell.n_points,
            "mean": [float(ell.mean[0]), float(ell.mean[1])],
            "semi_axes": [float(ell.semi_axes[0]), float(ell.semi_axes[1])],
            "angle_rad": ell.angle,
            "n_sigma": ell.n_sigma,
            "degenerate": ell.degenerate,
        }
        for ell in ellipses
    ]
    doc["skipped_groups"] = skipped_groups
    doc["files"] = files + ["manifest.json"]
    _write_manifest(out_dir, doc)
    n_skipped = sum(1 for p in projections if p[5])
    _emit(
        args,
        doc,
        [
            f"fitted on {model.n_used} first-window records ({model.n_excluded} degenerate excluded)",
            f"projected {len(projections) - n_skipped} records ({n_skipped} degenerate skipped), "
            f"{len(ellipses)} group ellipses",
            f"wrote {out_dir}",
        ],
    )
    return 0


def cmd_corpus(args) -> int:
    cfg = load_config(args.config)
    out_dir = args.out_dir or os.environ.get("MOBTAX_OUT_DIR")
    if out_dir:
        cfg = replace(cfg, out_dir=os.path.abspath(out_dir))
    workers = args.workers
    if workers is None and os.environ.get("MOBTAX_WORKERS"):
        try:
            workers = int(os.environ["MOBTAX_WORKERS"])
        except ValueError:
            raise _InputError(f"MOBTAX_WORKERS must be an integer, got {os.environ['MOBTAX_WORKERS']!r}") from None
    if workers is not None:
        if workers < 1:
            raise _InputError(f"workers must be at least 1, got {workers}")
        cfg = replace(cfg, workers=workers)
    result = run_corpus(cfg)
    lines = []
    for res in result.results:
        lines.append(f"{res.network_id}: {len(res.records)} records, {res.stats.n_events} events")
    for failure in result.failures:
        lines.append(f"FAILED {failure.network_id} ({failure.stage}): {failure.message}")
    if not result.results:
        for line in lines:
            print(line, file=sys.stderr)
        raise _InputError("every network failed; nothing to aggregate")
    manifest = write_corpus_outputs(cfg, result, __version__)
    lines.append(f"wrote {cfg.out_dir}")
    doc = _doc("corpus", config_to_dict(cfg))
    doc["manifest"] = manifest
    _emit(args, doc, lines)
    return 0


# -- dispatch ----------------------------------------------------------------------


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"mobtax {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, ConfigError, _InputError, OSError) as exc:
        print(f"mobtax {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OptimizerAbort as exc:
        print(f"mobtax {args.command}: aborted: {exc}", file=sys.stderr)
        return 3
    except _DegenerateError as exc:
        print(f"mobtax {args.command}: degenerate: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
