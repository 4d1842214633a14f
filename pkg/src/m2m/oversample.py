"""Batch-wise and offline over-sampling built on translate()."""

import json
import logging
from collections import Counter
from pathlib import Path

import numpy as np

from longtail import LabeledDataset
from netcore import seed_sequence

from .config import M2mConfig
from .generation import (
    GenerationOutcome,
    GenerationStatus,
    decide,
    reject_probability,
    seed_class_distribution,
    translate_many,
)

logger = logging.getLogger(__name__)


def make_seed_pool(dataset: LabeledDataset, size: int, seed=None) -> list:
    """Fixed per-class subsets of dataset indices that seeds may be drawn from."""
    rng = np.random.default_rng(seed)
    pool = []
    for label in range(dataset.num_classes):
        idx = dataset.indices_of(label)
        pool.append(np.sort(rng.choice(idx, size=min(size, idx.size), replace=False)))
    return pool


def _random_real(dataset: LabeledDataset, label: int, rng) -> np.ndarray:
    return dataset.inputs[rng.choice(dataset.indices_of(label))]


def _random_other_label(num_classes: int, seed_class: int, target: int, rng) -> int:
    choices = [c for c in range(num_classes) if c not in (seed_class, target)]
    if not choices:
        return target
    return int(rng.choice(choices))


def generate_for_batch(
    f, g, x, y, dataset: LabeledDataset, config: M2mConfig, seed, seed_pool=None
):
    """
    Replace minority entries of a class-balanced batch with translated samples.

    For each index i (with its own random stream derived from `seed`), generate
    with probability generation_scale * (1 - N_{y_i} / N_1): draw k0 ~ Q(. | y_i)
    until k0 occurs in the batch (at most seed_retries draws), translate a
    random in-batch seed of class k0 towards y_i and keep the result only if it
    passes the loss threshold and the Bernoulli rejection. A rejected attempt
    is replaced by a random real sample of class y_i from the full dataset.

    Args:
        f: Classifier being trained (its seed-class logit is penalised)
        g: Pre-trained classifier or list of classifiers
        x: Batch inputs (m, d)
        y: Batch labels (m,)
        dataset: Full training set (class counts, real replacements, seed pools)
        config: Generation settings
        seed: int or SeedSequence for this batch
        seed_pool: Optional per-class index pools; seeds then come from the pool

    Returns:
        (new inputs, new labels, list of GenerationOutcome)
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    out_x, out_y = x.copy(), y.copy()
    counts = dataset.class_counts
    largest = float(counts[0])
    rngs = [np.random.default_rng(seed_sequence(seed, i)) for i in range(y.size)]

    outcomes = []
    jobs = []  # (index, seed class, seed input, noise)
    for i, target in enumerate(y.tolist()):
        rng = rngs[i]
        if rng.random() >= config.generation_scale * (1.0 - counts[target] / largest):
            continue

        q = seed_class_distribution(counts, target, config.beta)
        if q is None:
            out_x[i] = _random_real(dataset, target, rng)
            outcomes.append(
                GenerationOutcome(
                    out_x[i], None, target, target, None, GenerationStatus.REPLACED_REAL
                )
            )
            continue

        if seed_pool is not None:
            seed_class = int(rng.choice(q.size, p=q))
            x0 = dataset.inputs[rng.choice(seed_pool[seed_class])]
        else:
            seed_class = None
            for _ in range(config.seed_retries):
                candidate = int(rng.choice(q.size, p=q))
                if np.any(y == candidate):
                    seed_class = candidate
                    break
            if seed_class is None:
                logger.debug(
                    "No in-batch seed for target %d after %d draws", target, config.seed_retries
                )
                outcomes.append(
                    GenerationOutcome(None, None, target, target, None, GenerationStatus.SKIPPED)
                )
                continue
            x0 = x[rng.choice(np.flatnonzero(y == seed_class))]

        noise = rng.uniform(-config.noise_scale, config.noise_scale, size=x0.shape)
        jobs.append((i, seed_class, x0, noise))

    if not jobs:
        return out_x, out_y, outcomes

    index = [job[0] for job in jobs]
    seed_classes = np.array([job[1] for job in jobs])
    seeds = np.stack([job[2] for job in jobs])
    x_star, losses = translate_many(
        g, f, seeds, seed_classes, y[index], config, np.stack([job[3] for job in jobs])
    )
    reject = reject_probability(counts[seed_classes], counts[y[index]], config.beta)

    for j, i in enumerate(index):
        rng, target, seed_class = rngs[i], int(y[i]), int(seed_classes[j])
        status = decide(float(losses[j]), float(reject[j]), config, rng)
        label = target
        if status is GenerationStatus.ACCEPTED:
            sample = seeds[j] if config.clean_seed else x_star[j]
            if config.random_target_label:
                label = _random_other_label(dataset.num_classes, seed_class, target, rng)
        else:
            sample = _random_real(dataset, target, rng)
        out_x[i], out_y[i] = sample, label
        outcomes.append(
            GenerationOutcome(sample, seed_class, target, label, float(losses[j]), status)
        )

    return out_x, out_y, outcomes


def build_balanced_dataset(
    dataset: LabeledDataset, f, g, config: M2mConfig, seed=None, seed_pool=None
):
    """
    Offline over-sampling: add N_1 - N_k samples to every class k.

    Each addition is an accepted synthetic translated from a seed drawn with
    Q(k0 | k), or a random real sample of class k when the synthetic is
    rejected. The random-label ablation does not apply here, so every class of
    the result holds exactly N_1 samples.

    Returns:
        (class-balanced LabeledDataset, list of GenerationOutcome)
    """
    rng = np.random.default_rng(seed)
    counts = dataset.class_counts
    inputs, labels, outcomes = [dataset.inputs], [dataset.labels], []

    for target in range(1, dataset.num_classes):
        delta = int(counts[0] - counts[target])
        if delta <= 0:
            continue
        q = seed_class_distribution(counts, target, config.beta)
        seed_classes = rng.choice(q.size, size=delta, p=q)
        if seed_pool is not None:
            seed_idx = [rng.choice(seed_pool[k0]) for k0 in seed_classes]
        else:
            seed_idx = [rng.choice(dataset.indices_of(k0)) for k0 in seed_classes]
        seeds = dataset.inputs[np.array(seed_idx, dtype=np.int64)]
        noise = rng.uniform(-config.noise_scale, config.noise_scale, size=seeds.shape)

        x_star, losses = translate_many(
            g, f, seeds, seed_classes, np.full(delta, target), config, noise
        )
        reject = reject_probability(counts[seed_classes], counts[target], config.beta)

        added = np.empty_like(seeds)
        for j in range(delta):
            status = decide(float(losses[j]), float(reject[j]), config, rng)
            if status is GenerationStatus.ACCEPTED:
                added[j] = seeds[j] if config.clean_seed else x_star[j]
            else:
                added[j] = _random_real(dataset, target, rng)
            outcomes.append(
                GenerationOutcome(
                    added[j], int(seed_classes[j]), target, target, float(losses[j]), status
                )
            )
        inputs.append(added)
        labels.append(np.full(delta, target, dtype=np.int64))

    balanced = LabeledDataset(np.vstack(inputs), np.concatenate(labels), dataset.num_classes)
    return balanced, outcomes


class OutcomeLog:
    """
    Per-status counters plus an optional JSON-lines stream of every attempt.

    Usage:
        with OutcomeLog(run_dir / "generation.jsonl") as log:
            log.record(outcomes)
        print(log.summary())
    """

    def __init__(self, path=None):
        self.path = Path(path) if path else None
        self.counts = Counter()
        self._fh = None

    def record(self, outcomes):
        for outcome in outcomes:
            self.counts[str(outcome.status)] += 1
            if self.path is not None:
                if self._fh is None:
                    self.path.parent.mkdir(parents=True, exist_ok=True)
                    self._fh = self.path.open("w")
                self._fh.write(json.dumps(outcome.to_record()) + "\n")

    def summary(self) -> dict:
        attempts = sum(self.counts.values())
        summary = {str(status): self.counts.get(str(status), 0) for status in GenerationStatus}
        summary["attempts"] = attempts
        summary["acceptance_rate"] = (
            self.counts.get(str(GenerationStatus.ACCEPTED), 0) / attempts if attempts else 0.0
        )
        return summary

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
