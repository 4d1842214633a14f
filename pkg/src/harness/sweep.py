"""Grid search over the generation hyper-parameters (lam, beta, gamma)."""

import itertools
import json
import logging
from dataclasses import replace
from pathlib import Path

import numpy as np
import yaml

from longtail import build_splits
from m2m import fit_m2m
from metrics import evaluate

from .config import ConfigError, ExperimentConfig, StrategyRun, SweepGrid, config_to_dict

logger = logging.getLogger(__name__)


def _target_run(config: ExperimentConfig, grid: SweepGrid) -> StrategyRun:
    candidates = [run for run in config.strategies if run.spec.kind == "m2m"]
    if grid.strategy is not None:
        candidates = [run for run in candidates if run.label == grid.strategy]
    if not candidates:
        wanted = f"named '{grid.strategy}'" if grid.strategy else "of kind 'm2m'"
        raise ConfigError(f"Sweep needs a strategy {wanted}")
    return candidates[0]


def sweep(config: ExperimentConfig, grid: SweepGrid | None = None) -> dict:
    """
    Pick (lam, beta, gamma) by mean validation bACC over the configured seeds.

    Candidates are visited in ascending (lam, beta, gamma) order and a later
    candidate only wins with a strictly higher score, so ties go to the smaller
    lam, then the smaller beta, then the smaller gamma. The test split is never
    touched.

    Writes sweep.json (every candidate) and best.yaml (the experiment config
    with the winning values) into config.output_dir.

    Returns:
        {"best": {...}, "candidates": [...]}
    """
    grid = grid or config.sweep
    target = _target_run(config, grid)
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    cache_dir = output_dir / "cache" if config.report.cache_g else None

    splits = {}
    for seed in config.seeds:
        splits[seed] = build_splits(config.dataset, config.imbalance, seed)
        if splits[seed].val is None:
            raise ConfigError("Sweep needs a validation split (dataset.val_fraction > 0)")

    grid_points = sorted(itertools.product(grid.lam, grid.beta, grid.gamma))
    print(
        f"🔍 Sweeping {len(grid_points)} candidates for {target.label} "
        f"over seeds {list(config.seeds)}"
    )

    candidates, best = [], None
    for lam, beta, gamma in grid_points:
        m2m_config = replace(target.m2m, lam=lam, beta=beta, gamma=gamma)
        scores = []
        for seed, seed_splits in splits.items():
            result = fit_m2m(
                seed_splits.train,
                config.train,
                m2m_config,
                seed,
                config.network.hidden,
                target.spec,
                cache_dir=cache_dir,
            )
            report = evaluate(result.net, seed_splits.val, seed_splits.train.class_counts)
            scores.append(report.bacc)
        candidate = {"lam": lam, "beta": beta, "gamma": gamma, "val_bacc": float(np.mean(scores))}
        candidates.append(candidate)
        print(
            f"   lam={lam:g} beta={beta:g} gamma={gamma:g}: "
            f"val bACC {100 * candidate['val_bacc']:.2f}%"
        )
        if best is None or candidate["val_bacc"] > best["val_bacc"]:
            best = candidate

    print(f"   🏆 Best: lam={best['lam']:g} beta={best['beta']:g} gamma={best['gamma']:g}")
    result = {"strategy": target.label, "best": best, "candidates": candidates}
    (output_dir / "sweep.json").write_text(json.dumps(result, indent=2, sort_keys=True))

    tuned = config_to_dict(config)
    tuned["m2m"].update(lam=best["lam"], beta=best["beta"], gamma=best["gamma"])
    for entry, run in zip(tuned["strategies"], config.strategies, strict=True):
        if run.label == target.label:
            entry["m2m"].update(lam=best["lam"], beta=best["beta"], gamma=best["gamma"])
    (output_dir / "best.yaml").write_text(yaml.safe_dump(tuned, sort_keys=True))
    return result
