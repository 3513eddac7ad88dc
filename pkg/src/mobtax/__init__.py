"""Mobility taxonomy of temporal networks.

A temporal network is a sequence of timestamped edge events.  This package
splits such a stream into paired observation windows, aggregates each window
into a graph, and correlates per-node degree quantities between the two
windows of a pair.  The six resulting correlations (the "taxonomy") describe
how nodes move through the network's social strata over time.

The package also ships twelve growth models for artificial temporal networks
and a greedy optimizer that steers growth toward extremes of any taxonomy
statistic, plus Gini and PCA summaries used to analyse taxonomy output.
"""

__version__ = "0.1.0"

from .events import EdgeEvent, EventStream, FormatSpec, ParseError, parse_edge_list, load_edge_list, stream_stats
from .windows import TimeAxis, Window, WindowPair, WindowSchedule, WindowSnapshot, default_schedule, custom_schedule, snapshot, snapshot_from_events
from .taxonomy import (
    DegreeMode,
    ConsistentFrame,
    TaxonomyRecord,
    STATISTIC_NAMES,
    pearson,
    build_frame,
    taxonomy_record,
    run_schedule,
    records_to_csv,
    records_to_dicts,
    parse_records_csv,
)
from .growth import GrowthParams, GrowthState, ModelKind, attachment_weights, grow_slice, grow_step, init_seed
from .optimizer import (
    EnsembleSummary,
    Objective,
    OptimizerAbort,
    OptimizerConfig,
    OptimizerTrace,
    SliceChoice,
    effective_ranges,
    optimize_ensemble,
    optimize_run,
)
from .analysis import GroupEllipse, PcaModel, fit_group_ellipse, gini, jacobi_eigh, pca_fit, pca_project, pca_project_rows
from .pipeline import (
    ConfigError,
    CorpusResult,
    NetworkFailure,
    NetworkResult,
    RunConfig,
    format_config,
    load_config,
    parse_config,
    run_corpus,
    validate_config,
    write_corpus_outputs,
)
