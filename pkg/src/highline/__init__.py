"""highline: detect system-level congestion behavior in process event logs.

The pipeline evaluates congestion features (executions, workload, queueing,
segment traffic, delay) over time windows of an event log, captures outlier
measurements as high-level events, correlates them into cascades via
control-flow-derived component links, and emits a new high-level event log
plus summary and directly-follows-graph exports.
"""

from .errors import ConfigError, DataError, HighlineError
from .events import (
    ColumnMapping,
    Component,
    ComponentKind,
    Event,
    EventLog,
    Provenance,
    Segment,
    Step,
    component_sets,
    compute_steps,
    ingest_csv,
    restrict,
    write_event_csv,
)
from .features import (
    EvaluationMatrix,
    FeatureId,
    HighLevelEvent,
    ThresholdTable,
    View,
    compute_thresholds,
    eval_delay,
    eval_do,
    eval_enter,
    eval_exec,
    eval_exit,
    eval_progr,
    eval_todo,
    eval_wl,
    evaluate,
    generate_hles,
    nearest_rank,
)
from .framing import Framing, WindowSet, default_origin, parse_duration, window_set
from .generator import ScenarioConfig, WeekSpec, generate, weekly_event_counts
from .hlelog import (
    FlattenOrder,
    HighLevelLogEntry,
    SummaryTable,
    build_hlel,
    export_dfg,
    flatten,
    read_hlel_csv,
    summarize,
    write_hlel_csv,
    write_summary_csv,
)
from .linkage import (
    CascadeAssignment,
    LinkTable,
    build_link_table,
    cascades,
    link_activity_pair,
    link_activity_resource,
    link_activity_segment,
    link_resource_pair,
    link_resource_segment,
    link_segment_pair,
    propagation_edges,
    proximity,
)
from .pipeline import AnalysisResult, analyze_log

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "CascadeAssignment",
    "ColumnMapping",
    "Component",
    "ComponentKind",
    "ConfigError",
    "DataError",
    "EvaluationMatrix",
    "Event",
    "EventLog",
    "FeatureId",
    "FlattenOrder",
    "Framing",
    "HighLevelEvent",
    "HighLevelLogEntry",
    "HighlineError",
    "LinkTable",
    "Provenance",
    "ScenarioConfig",
    "Segment",
    "Step",
    "SummaryTable",
    "ThresholdTable",
    "View",
    "WeekSpec",
    "WindowSet",
    "analyze_log",
    "build_hlel",
    "build_link_table",
    "cascades",
    "component_sets",
    "compute_steps",
    "compute_thresholds",
    "default_origin",
    "eval_delay",
    "eval_do",
    "eval_enter",
    "eval_exec",
    "eval_exit",
    "eval_progr",
    "eval_todo",
    "eval_wl",
    "evaluate",
    "export_dfg",
    "flatten",
    "generate",
    "generate_hles",
    "ingest_csv",
    "link_activity_pair",
    "link_activity_resource",
    "link_activity_segment",
    "link_resource_pair",
    "link_resource_segment",
    "link_segment_pair",
    "nearest_rank",
    "parse_duration",
    "propagation_edges",
    "proximity",
    "read_hlel_csv",
    "restrict",
    "summarize",
    "weekly_event_counts",
    "window_set",
    "write_event_csv",
    "write_hlel_csv",
    "write_summary_csv",
]
