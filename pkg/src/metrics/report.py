"""
Balanced Evaluation
===================
Confusion matrix, per-class recall, balanced accuracy (bACC), geometric-mean
recall (GM), majority/minority splits and cumulative false-positive curves.

Predictions take the argmax of the logits; ties go to the lower class index.

Usage:
    from metrics import evaluate

    report = evaluate(net, splits.test, train_class_counts=splits.train.class_counts)
    print(report.bacc, report.gm)
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.stats import gmean
from sklearn.metrics import confusion_matrix

from longtail import LabeledDataset

# Only used for log-scale plots; reported GM is never smoothed.
GM_PLOT_EPSILON = 1e-3
_TOLERANCE = 1e-9


class EvaluationError(ValueError):
    """Raised when a test set or report breaks the evaluation invariants."""


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------


def balanced_accuracy(recall) -> float:
    return float(np.mean(recall))


def geometric_mean_recall(recall) -> float:
    """Exactly 0 when any class has zero recall, else exp(mean(log recall))."""
    recall = np.asarray(recall, dtype=np.float64)
    if np.any(recall <= 0):
        return 0.0
    return float(gmean(recall))


def major_minor_split(class_counts) -> tuple:
    """
    Majority = smallest prefix of classes whose count sum strictly exceeds half the total.

    Returns:
        (major class indices, minor class indices) as int arrays
    """
    counts = np.asarray(class_counts, dtype=np.float64)
    cumulative = np.cumsum(counts)
    boundary = int(np.argmax(cumulative > counts.sum() / 2.0)) + 1
    indices = np.arange(counts.size)
    return indices[:boundary], indices[boundary:]


def cumulative_fp_curve(confusion) -> np.ndarray:
    """Running sum of per-class false positives (column sum minus diagonal)."""
    confusion = np.asarray(confusion)
    if confusion.ndim != 2 or confusion.shape[0] != confusion.shape[1]:
        raise EvaluationError(f"Confusion matrix must be square, got {confusion.shape}")
    false_positives = confusion.sum(axis=0) - np.diag(confusion)
    return np.cumsum(false_positives)


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EvalReport:
    confusion: np.ndarray
    recall: np.ndarray
    accuracy: float
    bacc: float
    gm: float
    major: np.ndarray
    minor: np.ndarray
    cumulative_fp: np.ndarray

    @property
    def major_recall(self) -> float:
        return float(self.recall[self.major].mean()) if self.major.size else float("nan")

    @property
    def minor_recall(self) -> float:
        return float(self.recall[self.minor].mean()) if self.minor.size else float("nan")

    def check(self):
        """Raise EvaluationError unless every report invariant holds."""
        errors = []
        if not 0 <= self.bacc <= 1 + _TOLERANCE or not 0 <= self.gm <= 1 + _TOLERANCE:
            errors.append(f"bACC {self.bacc} / GM {self.gm} outside [0, 1]")
        if self.gm > self.bacc + _TOLERANCE:
            errors.append(f"GM {self.gm} exceeds bACC {self.bacc}")
        row_sums = self.confusion.sum(axis=1)
        if np.any(row_sums < 1):
            errors.append("a test class has no samples")
        total_errors = self.confusion.sum() - np.trace(self.confusion)
        if self.cumulative_fp.size and self.cumulative_fp[-1] != total_errors:
            errors.append("cumulative FP curve does not end at the total error count")
        if np.any(np.diff(self.cumulative_fp) < 0):
            errors.append("cumulative FP curve decreases")
        if errors:
            raise EvaluationError("; ".join(errors))
        return self

    def to_dict(self, smoothed_gm: bool = False) -> dict:
        data = {
            "accuracy": self.accuracy,
            "bacc": self.bacc,
            "gm": self.gm,
            "major_recall": self.major_recall,
            "minor_recall": self.minor_recall,
            "recall": self.recall.tolist(),
            "major": self.major.tolist(),
            "minor": self.minor.tolist(),
            "confusion": self.confusion.tolist(),
            "cumulative_fp": self.cumulative_fp.tolist(),
        }
        if smoothed_gm:
            data["gm_smoothed"] = float(gmean(np.maximum(self.recall, GM_PLOT_EPSILON)))
        return data


def report_from_confusion(confusion, train_class_counts=None) -> EvalReport:
    """
    Build an EvalReport from a K x K confusion matrix (rows = true class).

    Args:
        confusion: Integer confusion matrix
        train_class_counts: Training counts used for the majority/minority
            split; the test row sums are used when omitted
    """
    confusion = np.asarray(confusion, dtype=np.int64)
    curve = cumulative_fp_curve(confusion)
    row_sums = confusion.sum(axis=1)
    if np.any(row_sums == 0):
        empty = np.flatnonzero(row_sums == 0).tolist()
        raise EvaluationError(f"Test classes {empty} have no samples")

    recall = np.diag(confusion) / row_sums
    counts = row_sums if train_class_counts is None else train_class_counts
    major, minor = major_minor_split(counts)
    return EvalReport(
        confusion=confusion,
        recall=recall,
        accuracy=float(np.trace(confusion) / confusion.sum()),
        bacc=balanced_accuracy(recall),
        gm=geometric_mean_recall(recall),
        major=major,
        minor=minor,
        cumulative_fp=curve,
    )


def predict(net, inputs) -> np.ndarray:
    """Argmax of the logits; np.argmax returns the first maximum, i.e. the lower index."""
    return np.argmax(net.forward(inputs), axis=1)


def evaluate(net, test: LabeledDataset, train_class_counts=None) -> EvalReport:
    """Evaluate a network on a (balanced) test split."""
    predictions = predict(net, test.inputs)
    confusion = confusion_matrix(test.labels, predictions, labels=np.arange(test.num_classes))
    return report_from_confusion(confusion, train_class_counts)


def write_report(report: EvalReport, directory, smoothed_gm: bool = False) -> Path:
    """Write report.json and fp_curve.csv into `directory`."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = directory / "report.json"
    out.write_text(json.dumps(report.to_dict(smoothed_gm), indent=2, sort_keys=True))
    curve = np.column_stack([np.arange(report.cumulative_fp.size), report.cumulative_fp])
    np.savetxt(
        directory / "fp_curve.csv",
        curve,
        delimiter=",",
        header="class,cumulative_fp",
        comments="",
        fmt="%d",
    )
    return out
