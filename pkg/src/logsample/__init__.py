"""Variant-aware training-set reduction for predictive process monitoring.

The library reduces an event log to a strategically sampled subset of its
cases before model training, then quantifies what the reduction cost (or
bought) through relative quality, size, and speed metrics computed under
case-level cross-validation.
"""

from .errors import (
    EmptyInput,
    EmptyLog,
    EmptySample,
    IoError,
    LogSampleError,
    MappingError,
    MissingMandatoryField,
    MissingOutcomeLabel,
    ParseError,
    SchemaMismatch,
    TaskMismatch,
    TooFewCases,
    UnknownAttribute,
    WrongAttributeKind,
    ZeroDenominator,
)
from .model import (
    CASE_SCOPE,
    CATEGORICAL,
    EVENT_SCOPE,
    MISSING,
    NUMERIC,
    TIMESTAMP,
    AttributeSpec,
    Case,
    Event,
    EventLog,
    SimpleLog,
    build_event_log,
    to_simple_log,
)
from .log_io import (
    CsvColumnMapping,
    read_csv,
    read_fold_csv,
    read_schema_file,
    read_xes,
    write_fold_csv,
    write_log_csv,
    write_schema_file,
)
from .variants import NumericSummary, VariantGroup, VariantIndex, build_index
from .sampling import (
    SamplingPlan,
    SelectionStrategy,
    SortStrategy,
    prioritize,
    quota,
    sample,
    size_reduction,
)
from .folds import FoldAssignment, assign_folds, materialize_fold
from .features import (
    END,
    NEXT_ACTIVITY,
    OUTCOME,
    PAD,
    REMAINING_TIME,
    UNK,
    FeatureConfig,
    FeatureRow,
    FeatureSchema,
    FeatureTable,
    OutcomePredicate,
    build_schema,
    decode_window,
    extract,
    read_feature_csv,
    read_schema_json,
    write_feature_csv,
    write_schema_json,
)
from .metrics import (
    AbsoluteMetrics,
    MetricsReport,
    ReportRow,
    classification_metrics,
    format_report_table,
    mean_metrics,
    read_report_csv,
    regression_metrics,
    relative_report,
    write_report_csv,
)
from .baselines import (
    NgramModel,
    PrefixStatModel,
    predict,
    read_model,
    train_next_activity,
    train_outcome,
    train_remaining_time,
    write_model,
)
from .pipeline import (
    ExperimentConfig,
    config_from_mapping,
    parse_config_text,
    parse_outcome,
    parse_selection,
    parse_sort,
    run_pipeline,
)
from .synthetic import generate_skewed_log

__version__ = "0.1.0"

__all__ = [
    "AbsoluteMetrics",
    "AttributeSpec",
    "CASE_SCOPE",
    "CATEGORICAL",
    "Case",
    "CsvColumnMapping",
    "EVENT_SCOPE",
    "EmptyInput",
    "EmptyLog",
    "EmptySample",
    "END",
    "Event",
    "EventLog",
    "ExperimentConfig",
    "FeatureConfig",
    "FeatureRow",
    "FeatureSchema",
    "FeatureTable",
    "FoldAssignment",
    "IoError",
    "LogSampleError",
    "MappingError",
    "MetricsReport",
    "MISSING",
    "MissingMandatoryField",
    "MissingOutcomeLabel",
    "NEXT_ACTIVITY",
    "NgramModel",
    "NUMERIC",
    "NumericSummary",
    "OUTCOME",
    "OutcomePredicate",
    "PAD",
    "ParseError",
    "PrefixStatModel",
    "REMAINING_TIME",
    "ReportRow",
    "SamplingPlan",
    "SchemaMismatch",
    "SelectionStrategy",
    "SimpleLog",
    "SortStrategy",
    "TaskMismatch",
    "TIMESTAMP",
    "TooFewCases",
    "UNK",
    "UnknownAttribute",
    "VariantGroup",
    "VariantIndex",
    "WrongAttributeKind",
    "ZeroDenominator",
    "assign_folds",
    "build_event_log",
    "build_index",
    "build_schema",
    "classification_metrics",
    "config_from_mapping",
    "decode_window",
    "extract",
    "format_report_table",
    "generate_skewed_log",
    "materialize_fold",
    "mean_metrics",
    "parse_config_text",
    "parse_outcome",
    "parse_selection",
    "parse_sort",
    "predict",
    "prioritize",
    "quota",
    "read_csv",
    "read_feature_csv",
    "read_fold_csv",
    "read_model",
    "read_report_csv",
    "read_schema_file",
    "read_schema_json",
    "read_xes",
    "regression_metrics",
    "relative_report",
    "run_pipeline",
    "sample",
    "size_reduction",
    "to_simple_log",
    "train_next_activity",
    "train_outcome",
    "train_remaining_time",
    "write_feature_csv",
    "write_fold_csv",
    "write_log_csv",
    "write_model",
    "write_report_csv",
    "write_schema_file",
    "write_schema_json",
]
