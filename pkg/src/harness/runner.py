"""Experiment Orchestration."""

import json
import logging
from pathlib import Path

import numpy as np
import yaml

from longtail import build_splits, save_csv
from m2m import OutcomeLog, fit_m2m
from metrics import evaluate, write_report
from netcore import save_checkpoint
from rebalance import train_classifier

from .config import ExperimentConfig, GenDataConfig, StrategyRun, config_to_dict

logger = logging.getLogger(__name__)

METRICS = ("bacc", "gm", "major_recall", "minor_recall")
_HEADERS = {
    "bacc": "bACC (%)",
    "gm": "GM (%)",
    "major_recall": "Major (%)",
    "minor_recall": "Minor (%)",
}


def _write_history(history, path: Path):
    table = np.column_stack([np.arange(len(history)), np.asarray(history, dtype=np.float64)])
    np.savetxt(path, table, delimiter=",", header="epoch,loss", comments="", fmt=["%d", "%.17g"])


def run_single(
    config: ExperimentConfig, run: StrategyRun, seed: int, splits, output_dir: Path
) -> dict:
    """
    Train one strategy with one seed, evaluate it and write its artifacts.

    Artifacts under output_dir/<label>/seed-<seed>/:
        config.yaml, f.ckpt, history.csv, report.json, fp_curve.csv, row.json
        and, for m2m strategies, generation.jsonl + generation_summary.json

    Returns:
        Result row (strategy, seed, status, metrics)
    """
    run_dir = output_dir / run.label / f"seed-{seed}"
    run_dir.mkdir(parents=True, exist_ok=True)
    snapshot = config_to_dict(config)
    snapshot["seeds"] = [seed]
    snapshot["strategies"] = [
        entry
        for other, entry in zip(config.strategies, snapshot["strategies"], strict=True)
        if other.label == run.label
    ]
    (run_dir / "config.yaml").write_text(yaml.safe_dump(snapshot, sort_keys=True))

    hidden = config.network.hidden
    generation = None
    if run.spec.kind == "m2m":
        log_path = run_dir / "generation.jsonl" if config.report.write_logs else None
        cache_dir = output_dir / "cache" if config.report.cache_g else None
        with OutcomeLog(log_path) as log:
            result = fit_m2m(
                splits.train,
                config.train,
                run.m2m,
                seed,
                hidden,
                run.spec,
                cache_dir=cache_dir,
                log=log,
            )
        generation = log.summary()
        summary_text = json.dumps(generation, indent=2, sort_keys=True)
        (run_dir / "generation_summary.json").write_text(summary_text)
    else:
        result = train_classifier(splits.train, run.spec, config.train, hidden, seed)

    save_checkpoint(result.net, run_dir / "f.ckpt")
    _write_history(result.history, run_dir / "history.csv")

    report = evaluate(result.net, splits.test, splits.train.class_counts).check()
    write_report(report, run_dir, config.report.gm_smoothing)

    row = {
        "strategy": run.label,
        "seed": seed,
        "status": "ok",
        "bacc": report.bacc,
        "gm": report.gm,
        "major_recall": report.major_recall,
        "minor_recall": report.minor_recall,
    }
    if splits.val is not None:
        row["val_bacc"] = evaluate(result.net, splits.val, splits.train.class_counts).bacc
    if generation is not None:
        row["generation"] = generation
    return _write_row(row, output_dir)


def _write_row(row: dict, output_dir: Path) -> dict:
    run_dir = output_dir / row["strategy"] / f"seed-{row['seed']}"
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "row.json").write_text(json.dumps(row, indent=2, sort_keys=True))
    return row


def _failure_row(label: str, seed: int, error: Exception, output_dir: Path) -> dict:
    row = {
        "strategy": label,
        "seed": seed,
        "status": "failed",
        "error": f"{type(error).__name__}: {error}",
    }
    return _write_row(row, output_dir)


def run(config: ExperimentConfig) -> list:
    """
    Run every (strategy, seed) pair, then write results.json and results.md.

    A pair that raises is recorded as a failed row (and its row.json) and the
    experiment continues. Rows come back ordered by strategy (config order),
    then seed.
    """
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    print(f"📊 Experiment: {len(config.strategies)} strategies x {len(config.seeds)} seeds")
    print(f"   Output: {output_dir}")

    rows = {}
    for seed in config.seeds:
        print(f"\n🎲 Seed {seed}")
        try:
            splits = build_splits(config.dataset, config.imbalance, seed)
        except Exception as e:
            print(f"   ❌ Error building data: {e}")
            for run_ in config.strategies:
                rows[(run_.label, seed)] = _failure_row(run_.label, seed, e, output_dir)
            continue
        print(f"   Train counts: {splits.train.class_counts.tolist()}")

        for run_ in config.strategies:
            print(f"   🏋️  Training {run_.label}")
            try:
                row = run_single(config, run_, seed, splits, output_dir)
                print(
                    f"   ✅ {run_.label}: bACC {100 * row['bacc']:.2f}%  GM {100 * row['gm']:.2f}%"
                )
            except Exception as e:
                logger.debug("Run %s seed %d failed", run_.label, seed, exc_info=True)
                print(f"   ❌ Error: {e}")
                row = _failure_row(run_.label, seed, e, output_dir)
            rows[(run_.label, seed)] = row

    ordered = [rows[(run_.label, seed)] for run_ in config.strategies for seed in config.seeds]
    write_results(ordered, output_dir)
    print(f"\n✨ Results written to {output_dir / 'results.md'}")
    return ordered


# ---------------------------------------------------------------------------
# Aggregation and tables
# ---------------------------------------------------------------------------


def aggregate(rows) -> list:
    """
    Mean and sample standard deviation (ddof=1) per strategy over successful seeds.

    A strategy with a single successful seed reports std 0; one with none
    reports NaN metrics. Strategies keep their first-appearance order.
    """
    order, grouped = [], {}
    for row in rows:
        name = row["strategy"]
        if name not in grouped:
            order.append(name)
            grouped[name] = []
        grouped[name].append(row)

    summary = []
    for name in order:
        group = grouped[name]
        ok = [row for row in group if row.get("status") == "ok"]
        entry = {"strategy": name, "seeds": len(ok), "failures": len(group) - len(ok)}
        for metric in METRICS:
            values = np.array([row[metric] for row in ok], dtype=np.float64)
            if values.size == 0:
                mean = std = float("nan")
            else:
                mean = float(values.mean())
                std = float(values.std(ddof=1)) if values.size > 1 else 0.0
            entry[f"{metric}_mean"] = mean
            entry[f"{metric}_std"] = std
        summary.append(entry)
    return summary


def _cell(mean: float, std: float) -> str:
    if np.isnan(mean):
        return "n/a"
    return f"{100 * mean:.2f} ± {100 * std:.2f}"


def render_table(summary) -> str:
    """Markdown table of 'mean ± std' cells in percent, two decimals."""
    header = ["Strategy"] + [_HEADERS[m] for m in METRICS] + ["Seeds"]
    show_failures = any(entry["failures"] for entry in summary)
    if show_failures:
        header.append("Failed")

    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for entry in summary:
        cells = [entry["strategy"]]
        cells += [_cell(entry[f"{m}_mean"], entry[f"{m}_std"]) for m in METRICS]
        cells.append(str(entry["seeds"]))
        if show_failures:
            cells.append(str(entry["failures"]))
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def write_results(rows, output_dir) -> Path:
    """Write results.json (rows + summary) and results.md."""
    output_dir = Path(output_dir)
    summary = aggregate(rows)
    payload = {"rows": rows, "summary": summary}
    (output_dir / "results.json").write_text(json.dumps(payload, indent=2, sort_keys=True))
    out = output_dir / "results.md"
    out.write_text(render_table(summary))
    return out


def collect_reports(directory) -> list:
    """
    Rebuild result rows from the row.json files of a finished run.

    Strategies keep the order of an existing results.json; strategies it does
    not list (or every strategy, when there is none) follow by name. Within a
    strategy rows are ordered by seed.
    """
    directory = Path(directory)
    paths = list(directory.glob("*/seed-*/row.json"))
    if not paths:
        raise FileNotFoundError(f"No run reports found under {directory}")
    rows = [json.loads(path.read_text()) for path in paths]

    order = {}
    results = directory / "results.json"
    if results.exists():
        for row in json.loads(results.read_text()).get("rows", []):
            order.setdefault(row["strategy"], len(order))
    return sorted(
        rows, key=lambda row: (order.get(row["strategy"], len(order)), row["strategy"], row["seed"])
    )


def rerender(directory) -> Path:
    rows = collect_reports(directory)
    out = write_results(rows, directory)
    print(f"📄 Re-rendered {len(rows)} runs into {out}")
    return out


# ---------------------------------------------------------------------------
# Dataset export
# ---------------------------------------------------------------------------


def gen_data(config: GenDataConfig) -> dict:
    """Build the splits and write train.csv, val.csv (if any) and test.csv."""
    output_dir = Path(config.output_dir)
    splits = build_splits(config.dataset, config.imbalance, config.seed)
    print(f"📦 Exporting {config.dataset.kind} dataset to {output_dir}")
    print(f"   Train counts: {splits.train.class_counts.tolist()}")

    written = {}
    for name in ("train", "val", "test"):
        dataset = getattr(splits, name)
        if dataset is None:
            continue
        written[name] = save_csv(dataset, output_dir / f"{name}.csv")
        print(f"   ✓ {name}: {len(dataset)} samples")
    return written
