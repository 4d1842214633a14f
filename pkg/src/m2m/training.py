"""Two-phase M2m training: pre-train g by ERM, then train f with generation."""

import hashlib
import json
import logging
from dataclasses import asdict
from pathlib import Path

import numpy as np

from longtail import DatasetSplits, LabeledDataset
from metrics import evaluate
from netcore import load_checkpoint, save_checkpoint, seed_sequence
from rebalance import StrategySpec, TrainConfig, TrainResult, train_classifier

from .config import M2mConfig
from .oversample import OutcomeLog, generate_for_batch, make_seed_pool

logger = logging.getLogger(__name__)

# Child stream keys under the master seed; 0-3 belong to the training loop.
G_STREAM, POOL_STREAM = 4, 5


def _cache_key(train: LabeledDataset, config: TrainConfig, hidden, seed, member: int) -> str:
    seed_seq = seed_sequence(seed)
    payload = json.dumps(
        {
            "dataset": train.content_hash(),
            "train": asdict(config),
            "hidden": list(hidden),
            "seed": [str(seed_seq.entropy), list(seed_seq.spawn_key)],
            "member": member,
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def pretrain_g(
    train: LabeledDataset, config: TrainConfig, hidden=(64, 64), seed=0, cache_dir=None, member=0
):
    """
    Train the generation classifier g with plain ERM.

    Results are cached as checkpoints under `cache_dir`, keyed by the dataset
    content, the training configuration, the seed and the ensemble member.
    """
    path = None
    if cache_dir is not None:
        key = _cache_key(train, config, hidden, seed, member)
        path = Path(cache_dir) / f"g-{key[:16]}.ckpt"
        if path.exists():
            logger.info("Reusing cached g from %s", path)
            return load_checkpoint(path)

    result = train_classifier(
        train, StrategySpec("erm"), config, hidden, seed_sequence(seed, G_STREAM, member)
    )
    if path is not None:
        save_checkpoint(result.net, path)
        logger.info("Cached g at %s", path)
    return result.net


class BatchGenerator:
    """Batch hook for train_classifier() that runs generate_for_batch()."""

    def __init__(
        self, g_nets, dataset: LabeledDataset, config: M2mConfig, seed_pool=None, log=None
    ):
        self.g_nets = list(g_nets)
        self.dataset = dataset
        self.config = config
        self.seed_pool = seed_pool
        self.log = log if log is not None else OutcomeLog()

    def __call__(self, net, x, y, seed):
        g = [net] if self.config.use_self_as_g else self.g_nets
        x, y, outcomes = generate_for_batch(
            net, g, x, y, self.dataset, self.config, seed, self.seed_pool
        )
        self.log.record(outcomes)
        return x, y


def fit_m2m(
    train: LabeledDataset,
    train_config: TrainConfig,
    m2m_config: M2mConfig,
    seed=0,
    hidden=(64, 64),
    spec: StrategySpec | None = None,
    g=None,
    cache_dir=None,
    log: OutcomeLog | None = None,
) -> TrainResult:
    """
    Phase 1 (unless g is given or M2m-Self): pre-train g. Phase 2: train f.

    f follows the strategy's deferred schedule: ERM until defer_epoch, then
    class-balanced batches passed through generate_for_batch().
    """
    spec = spec or StrategySpec("m2m", deferred=True)
    if spec.kind != "m2m":
        raise ValueError(f"fit_m2m needs an m2m strategy, got '{spec.kind}'")

    if m2m_config.use_self_as_g:
        g_nets = []
    elif g is not None:
        g_nets = list(g) if isinstance(g, list | tuple) else [g]
    else:
        g_nets = [
            pretrain_g(train, train_config, hidden, seed, cache_dir, member)
            for member in range(m2m_config.ensemble_size)
        ]

    seed_pool = None
    if m2m_config.seed_pool_size is not None:
        pool_rng = np.random.default_rng(seed_sequence(seed, POOL_STREAM))
        seed_pool = make_seed_pool(train, m2m_config.seed_pool_size, pool_rng)

    hook = BatchGenerator(g_nets, train, m2m_config, seed_pool, log)
    return train_classifier(train, spec, train_config, hidden, seed, batch_hook=hook)


def train_m2m(
    splits: DatasetSplits, train_config: TrainConfig, m2m_config: M2mConfig, seed=0, **kwargs
):
    """
    Train f with M2m on splits.train and evaluate it on the balanced test split.

    Keyword arguments are forwarded to fit_m2m().

    Returns:
        (trained f, EvalReport on splits.test)
    """
    result = fit_m2m(splits.train, train_config, m2m_config, seed, **kwargs)
    report = evaluate(result.net, splits.test, splits.train.class_counts)
    return result.net, report
