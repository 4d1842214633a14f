"""Balanced evaluation metrics."""

from .report import (
    EvalReport,
    EvaluationError,
    balanced_accuracy,
    cumulative_fp_curve,
    evaluate,
    geometric_mean_recall,
    major_minor_split,
    predict,
    report_from_confusion,
    write_report,
)

__all__ = [
    "EvalReport",
    "EvaluationError",
    "evaluate",
    "predict",
    "report_from_confusion",
    "balanced_accuracy",
    "geometric_mean_recall",
    "major_minor_split",
    "cumulative_fp_curve",
    "write_report",
]
