"""
Major-to-minor Translation
==========================
Seed-class sampling, the rejection rule and the input-space optimisation that
turns a majority seed x0 into a synthetic sample of a minority class k.

The translation minimises L(g; x, k) + lam * f_k0(x) starting from x0 plus a
small noise, with T normalized gradient steps of length eta.

Usage:
    from m2m.generation import translate

    x_star, loss = translate(g, f, x0, seed_class, target_class, config, seed=0)
"""

import logging
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from netcore import DifferentiableNet, input_gradient, per_sample_cross_entropy

from .config import M2mConfig

logger = logging.getLogger(__name__)


class GenerationStatus(StrEnum):
    ACCEPTED = "accepted"
    REJECTED_BERNOULLI = "rejected_bernoulli"
    REJECTED_GAMMA = "rejected_gamma"
    REPLACED_REAL = "replaced_real"
    SKIPPED = "skipped"


@dataclass(frozen=True, eq=False)
class GenerationOutcome:
    """One generation attempt and what became of it."""

    sample: np.ndarray | None
    seed_class: int | None
    target_class: int
    label: int
    loss: float | None
    status: GenerationStatus

    def to_record(self) -> dict:
        return {
            "seed_class": self.seed_class,
            "target_class": self.target_class,
            "label": self.label,
            "status": str(self.status),
            "loss": self.loss,
        }


# ---------------------------------------------------------------------------
# Rejection and seed-class distribution
# ---------------------------------------------------------------------------


def reject_probability(n_seed, n_target, beta: float):
    """beta ** max(N_k0 - N_k, 0); scalars or arrays."""
    if not 0 <= beta < 1:
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    gap = np.maximum(np.asarray(n_seed, dtype=np.float64) - np.asarray(n_target), 0.0)
    probability = np.power(beta, gap)
    return float(probability) if probability.ndim == 0 else probability


def acceptance_probabilities(class_counts, target: int, beta: float) -> np.ndarray:
    """1 - beta^(N_k0 - N_k)+ for every candidate seed class k0."""
    counts = np.asarray(class_counts, dtype=np.float64)
    return 1.0 - reject_probability(counts, counts[target], beta)


def seed_class_distribution(class_counts, target: int, beta: float) -> np.ndarray | None:
    """
    Q(k0 | k) proportional to 1 - beta^(N_k0 - N_k)+.

    Classes no larger than the target get probability 0. Returns None when no
    class is larger than the target (nothing to translate from); callers then
    fall back to duplicating a real sample.
    """
    accept = acceptance_probabilities(class_counts, target, beta)
    total = accept.sum()
    if total <= 0:
        return None
    return accept / total


# ---------------------------------------------------------------------------
# Translation
# ---------------------------------------------------------------------------


def _members(g) -> list:
    members = [g] if isinstance(g, DifferentiableNet) else list(g)
    if not members:
        raise ValueError("Translation needs at least one classifier g")
    return members


def generation_loss(g, x, targets) -> np.ndarray:
    """Per-row L(g; x, k), averaged over ensemble members."""
    members = _members(g)
    x = np.atleast_2d(x)
    targets = np.broadcast_to(targets, (x.shape[0],))
    losses = [per_sample_cross_entropy(member.forward(x), targets) for member in members]
    return np.mean(losses, axis=0)


def _objective_gradient(members, f, x, seed_classes, targets, lam) -> np.ndarray:
    grad = np.zeros_like(x)
    for member in members:
        grad += input_gradient(member, x, target=targets)
    grad /= len(members)
    if f is not None and lam != 0:
        grad += input_gradient(f, x, logit=seed_classes, logit_weight=lam)
    return grad


def translate_many(g, f, x0, seed_classes, targets, config: M2mConfig, noise=None) -> tuple:
    """
    Translate a stack of seeds, one row per generation.

    Rows are independent: row i descends L(g; x_i, targets[i]) +
    lam * f_{seed_classes[i]}(x_i). A row whose gradient vanishes does not move
    for that step.

    Args:
        g: Classifier (or list of classifiers) the synthetic must convince
        f: Classifier whose seed-class logit is penalised; None drops the term
        x0: Seeds of shape (n, d)
        seed_classes: Seed classes k0, shape (n,)
        targets: Target classes k, shape (n,)
        config: M2mConfig (lam, eta, steps are used)
        noise: Initial perturbation added to x0; zeros when omitted

    Returns:
        (x_star of shape (n, d), final generation losses of shape (n,))
    """
    members = _members(g)
    x = np.array(x0, dtype=np.float64, copy=True)
    if noise is not None:
        x += noise
    seed_classes = np.asarray(seed_classes, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.int64)
    if x.shape[0] == 0:
        return x, np.zeros(0)

    for step in range(config.steps):
        grad = _objective_gradient(members, f, x, seed_classes, targets, config.lam)
        norms = np.linalg.norm(grad, axis=1)
        moving = norms > 0
        if not moving.all():
            logger.debug("Step %d: %d stationary rows skipped", step, int((~moving).sum()))
        x[moving] -= config.eta * grad[moving] / norms[moving, None]

    return x, generation_loss(members, x, targets)


def translate(g, f, x0, seed_class: int, target: int, config: M2mConfig, seed=None) -> tuple:
    """
    Translate a single seed x0 of class k0 towards class k.

    The initial noise is uniform in [-noise_scale, noise_scale]^d.

    Returns:
        (x_star, final generation loss)
    """
    if seed_class == target:
        raise ValueError("Seed class and target class must differ")
    x0 = np.asarray(x0, dtype=np.float64)
    if not np.all(np.isfinite(x0)):
        raise ValueError("Seed contains non-finite entries")
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-config.noise_scale, config.noise_scale, size=x0.shape)
    x_star, losses = translate_many(
        g, f, x0[None, :], [seed_class], [target], config, noise[None, :]
    )
    return x_star[0], float(losses[0])


def decide(loss: float, reject_prob: float, config: M2mConfig, rng) -> GenerationStatus:
    """
    Accept or reject a finished translation.

    Always consumes exactly one uniform draw for the Bernoulli rejection. The
    loss threshold is checked first, so a synthetic that misses gamma is
    reported as rejected_gamma whatever the Bernoulli draw says.
    """
    bernoulli_fired = rng.random() < reject_prob
    if loss > config.acceptance_threshold:
        return GenerationStatus.REJECTED_GAMMA
    if bernoulli_fired and not config.disable_reject:
        return GenerationStatus.REJECTED_BERNOULLI
    return GenerationStatus.ACCEPTED
