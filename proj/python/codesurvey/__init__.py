"""Commit survey toolkit: git history mining, closed-vocabulary commit
surveys, consistency validation, and evolution analyses.

The full pipeline (ingest, survey, validate, analyze, report) is reachable
through run_cli(); the remaining functions expose the underlying operations
directly. Schema, Dataset, and TimelineSeries are opaque handles; everything
else crosses the boundary as plain dicts and lists.
"""

from ._core import (
    Dataset,
    Schema,
    TimelineSeries,
    __version__,
    check_merge_consistency,
    check_unrelated_consistency,
    clean_for_timeline,
    component_lifecycle,
    cumulative_features,
    distribution,
    extract_commits,
    feature_component_matrix,
    load_corpus,
    load_feature_table,
    load_schema,
    merge,
    monthly_series,
    pearson,
    read_dataset,
    review_sample_csv,
    row_logic_checks,
    run_cli,
    run_scripted_survey,
    sample_indices,
    smooth,
    top_buggy,
    verifier_instruction_correlation,
)

__all__ = [
    "Dataset",
    "Schema",
    "TimelineSeries",
    "__version__",
    "check_merge_consistency",
    "check_unrelated_consistency",
    "clean_for_timeline",
    "component_lifecycle",
    "cumulative_features",
    "distribution",
    "extract_commits",
    "feature_component_matrix",
    "load_corpus",
    "load_feature_table",
    "load_schema",
    "merge",
    "monthly_series",
    "pearson",
    "read_dataset",
    "review_sample_csv",
    "row_logic_checks",
    "run_cli",
    "run_scripted_survey",
    "sample_indices",
    "smooth",
    "top_buggy",
    "verifier_instruction_correlation",
]
