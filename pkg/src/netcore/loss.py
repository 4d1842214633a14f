"""Cross-entropy loss and its gradients with respect to logits, parameters and inputs."""

import numpy as np
from scipy.special import log_softmax, softmax

from .network import DifferentiableNet, ShapeError


def _check_labels(logits: np.ndarray, labels) -> np.ndarray:
    labels = np.asarray(labels)
    if logits.ndim != 2 or labels.shape != (logits.shape[0],):
        raise ShapeError(f"Logits {logits.shape} and labels {labels.shape} do not match")
    labels = labels.astype(np.int64)
    num_classes = logits.shape[1]
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise ValueError(f"Labels must lie in 0..{num_classes - 1}")
    return labels


def per_sample_cross_entropy(logits, labels) -> np.ndarray:
    """-log softmax(logits)[label] for every row."""
    logits = np.asarray(logits, dtype=np.float64)
    labels = _check_labels(logits, labels)
    rows = np.arange(logits.shape[0])
    return -log_softmax(logits, axis=1)[rows, labels]


def cross_entropy(logits, labels, sample_weights=None) -> tuple:
    """
    Mean (optionally weighted) cross-entropy and its gradient.

    Args:
        logits: Array of shape (m, K)
        labels: Integer labels in 0..K-1, shape (m,)
        sample_weights: Optional per-row weights; the loss is mean(w_i * CE_i)

    Returns:
        (loss, gradient w.r.t. logits of shape (m, K))
    """
    logits = np.asarray(logits, dtype=np.float64)
    labels = _check_labels(logits, labels)
    m = logits.shape[0]
    if m == 0:
        return 0.0, np.zeros_like(logits)

    rows = np.arange(m)
    losses = -log_softmax(logits, axis=1)[rows, labels]
    grad = softmax(logits, axis=1)
    grad[rows, labels] -= 1.0

    if sample_weights is not None:
        weights = np.asarray(sample_weights, dtype=np.float64)
        losses = losses * weights
        grad = grad * weights[:, None]

    return float(losses.mean()), grad / m


def loss_and_gradients(net: DifferentiableNet, x, y, sample_weights=None) -> tuple:
    """Weighted cross-entropy of a network on a batch plus parameter gradients."""
    logits, cache = net.forward_with_cache(x)
    loss, grad_logits = cross_entropy(logits, y, sample_weights)
    param_grads, _ = net.backward(cache, grad_logits)
    return loss, param_grads


def input_gradient(net: DifferentiableNet, x, target=None, logit=None, logit_weight=1.0):
    """
    Gradient of a per-sample objective with respect to the inputs.

    The objective for each row is CE(net(x), target) + logit_weight * net(x)[logit];
    either term may be omitted by passing None. Rows are independent, so a batch
    of inputs yields one gradient per row.

    Args:
        net: Network to differentiate
        x: Input vector (d,) or batch (m, d)
        target: Class (or per-row classes) for the cross-entropy term
        logit: Class (or per-row classes) whose raw logit is added
        logit_weight: Coefficient on the logit term

    Returns:
        Gradient with the same shape as x
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = x[None, :] if single else x
    m = batch.shape[0]

    logits, cache = net.forward_with_cache(batch)
    grad_logits = np.zeros_like(logits)
    rows = np.arange(m)

    if target is not None:
        targets = _check_labels(logits, np.broadcast_to(target, (m,)))
        grad_logits += softmax(logits, axis=1)
        grad_logits[rows, targets] -= 1.0

    if logit is not None:
        selected = _check_labels(logits, np.broadcast_to(logit, (m,)))
        grad_logits[rows, selected] += logit_weight

    _, grad = net.backward(cache, grad_logits, need_params=False)
    return grad[0] if single else grad
