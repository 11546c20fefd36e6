"""Learned linear channel projection and its desk-scale fitting routines.

The projection is the trainable analogue of the fixed geometric maps: a
C_t x C_s weight matrix with optional bias, normally trained jointly
with a downstream model. Here it is fit either in closed form against
reference signals (lsq_fit) or by full-batch gradient descent on the
reconstruction objective (sgd_train); reconstruction_gradient exposes
the exact gradient so an external trainer can plug in any outer loss.

Everything is seed-deterministic: the same inputs, seed and settings
produce bitwise-identical results on one platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError
from .pipeline import AdaptationMatrix, compose

__all__ = [
    "LearnedProjection",
    "init_projection",
    "lsq_fit",
    "reconstruction_gradient",
    "reconstruction_loss",
    "sgd_train",
    "compose_bridge",
    "projection_to_matrix",
]

_DIVERGENCE_LOSS = 1e12


@dataclass(frozen=True)
class LearnedProjection:
    """Weights (C_t x C_s), optional bias (C_t), and the seed that made them."""

    weights: np.ndarray
    bias: np.ndarray | None
    seed: int

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2:
            raise DomainError(f"weights must be 2-D, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise NumericalError("weights contain non-finite entries")
        b = self.bias
        if b is not None:
            b = np.asarray(b, dtype=float)
            if b.shape != (w.shape[0],):
                raise DomainError(f"bias shape {b.shape} != ({w.shape[0]},)")
            if not np.all(np.isfinite(b)):
                raise NumericalError("bias contains non-finite entries")
            b = b.copy()
            b.setflags(write=False)
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)

    @property
    def c_s(self) -> int:
        return self.weights.shape[1]

    @property
    def c_t(self) -> int:
        return self.weights.shape[0]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        out = self.weights @ x
        if self.bias is not None:
            out = out + self.bias[:, None]
        return out


def init_projection(c_s: int, c_t: int, with_bias: bool = True,
                    seed: int = 0) -> LearnedProjection:
    """Fan-in uniform init: weights ~ U(-k, k) with k = 1/sqrt(c_s), bias zero."""
    if c_s < 1 or c_t < 1:
        raise DomainError(f"channel counts must be >= 1, got c_s={c_s}, c_t={c_t}")
    k = 1.0 / np.sqrt(c_s)
    rng = np.random.default_rng(seed)
    weights = rng.uniform(-k, k, size=(c_t, c_s))
    bias = np.zeros(c_t) if with_bias else None
    return LearnedProjection(weights, bias, seed)


def lsq_fit(x_s: np.ndarray, x_t: np.ndarray, ridge: float = 0.0,
            with_bias: bool = True, seed: int = 0) -> LearnedProjection:
    """Closed-form minimizer of ||W x_s + b 1^T - x_t||_F^2 + ridge ||W||_F^2.

    The bias is not penalized. With ridge = 0 the normal equations must
    be full rank (T >= C_s, plus one for the bias row).
    """
    x_s = np.asarray(x_s, dtype=float)
    x_t = np.asarray(x_t, dtype=float)
    if x_s.ndim != 2 or x_t.ndim != 2:
        raise DomainError("lsq_fit expects 2-D (C x T) arrays")
    if x_s.shape[1] != x_t.shape[1]:
        raise DomainError(
            f"sample counts differ: source T={x_s.shape[1]}, target T={x_t.shape[1]}")
    if ridge < 0:
        raise DomainError(f"ridge must be >= 0, got {ridge}")
    c_s, t = x_s.shape
    if with_bias:
        aug = np.vstack([x_s, np.ones((1, t))])
    else:
        aug = x_s
    gram = aug @ aug.T
    if ridge > 0:
        penalty = np.full(aug.shape[0], ridge)
        if with_bias:
            penalty[-1] = 0.0
        gram = gram + np.diag(penalty)
    else:
        rank = np.linalg.matrix_rank(gram)
        if rank < gram.shape[0]:
            raise NumericalError(
                f"rank-deficient normal equations (rank {rank} < {gram.shape[0]}) "
                "with ridge = 0")
    w_aug = np.linalg.solve(gram, aug @ x_t.T).T
    if with_bias:
        return LearnedProjection(w_aug[:, :c_s], w_aug[:, c_s], seed)
    return LearnedProjection(w_aug, None, seed)


def reconstruction_loss(p: LearnedProjection, x_s: np.ndarray, x_t: np.ndarray) -> float:
    """(1/T) ||p(x_s) - x_t||_F^2."""
    residual = p(np.asarray(x_s, dtype=float)) - np.asarray(x_t, dtype=float)
    return float(np.sum(residual**2) / residual.shape[1])


def reconstruction_gradient(p: LearnedProjection, x_s: np.ndarray,
                            x_t: np.ndarray) -> tuple[np.ndarray, np.ndarray | None]:
    """Gradient of the reconstruction loss w.r.t. weights and bias.

    grad_W = (2/T) R x_s^T and grad_b = (2/T) R 1 with residual
    R = p(x_s) - x_t; grad_b is None for bias-free projections.
    """
    x_s = np.asarray(x_s, dtype=float)
    x_t = np.asarray(x_t, dtype=float)
    if x_s.shape != (p.c_s, x_t.shape[1]) or x_t.shape[0] != p.c_t:
        raise DomainError(
            f"shape mismatch: projection {p.c_t}x{p.c_s}, "
            f"x_s {x_s.shape}, x_t {x_t.shape}")
    t = x_s.shape[1]
    residual = p(x_s) - x_t
    grad_w = 2.0 / t * residual @ x_s.T
    grad_b = 2.0 / t * residual.sum(axis=1) if p.bias is not None else None
    return grad_w, grad_b


def sgd_train(p: LearnedProjection, x_s: np.ndarray, x_t: np.ndarray,
              lr: float, epochs: int) -> tuple[LearnedProjection, list[float]]:
    """Deterministic full-batch gradient descent on the reconstruction loss.

    Returns the trained projection and the loss trace (one entry per
    epoch, evaluated before each step, plus the final loss).
    """
    if lr < 0:
        raise DomainError(f"lr must be >= 0, got {lr}")
    if epochs < 0:
        raise DomainError(f"epochs must be >= 0, got {epochs}")
    x_s = np.asarray(x_s, dtype=float)
    x_t = np.asarray(x_t, dtype=float)
    weights = p.weights.copy()
    bias = None if p.bias is None else p.bias.copy()
    t = x_s.shape[1]
    trace = []
    for _ in range(epochs):
        residual = weights @ x_s - x_t
        if bias is not None:
            residual += bias[:, None]
        loss = float(np.sum(residual**2) / t)
        trace.append(loss)
        if loss > _DIVERGENCE_LOSS:
            raise NumericalError(f"training diverged (loss {loss:.3g})")
        weights -= lr * (2.0 / t) * residual @ x_s.T
        if bias is not None:
            bias -= lr * (2.0 / t) * residual.sum(axis=1)
    out = LearnedProjection(weights, bias, p.seed)
    trace.append(reconstruction_loss(out, x_s, x_t))
    return out, trace


def projection_to_matrix(p: LearnedProjection, source_labels, target_labels,
                         extra_metadata: dict[str, str] | None = None) -> AdaptationMatrix:
    """Package a projection as a conv1d-style adaptation matrix."""
    metadata = {"seed": str(p.seed), "bias": "yes" if p.bias is not None else "no"}
    if extra_metadata:
        metadata.update(extra_metadata)
    return AdaptationMatrix(
        matrix=p.weights,
        method="conv1d",
        source_labels=source_labels,
        target_descriptor=target_labels,
        metadata=metadata,
        bias=p.bias,
    )


def compose_bridge(fixed: AdaptationMatrix, bridge: LearnedProjection,
                   target_labels=None) -> AdaptationMatrix:
    """Learned bridge stacked on a fixed map: (bridge.W @ fixed), bias retained.

    Used when a fixed construction lands near, but not exactly on, the
    channel layout a downstream model expects.
    """
    if bridge.c_s != fixed.shape[0]:
        raise DomainError(
            f"bridge expects {bridge.c_s} inputs but fixed map produces {fixed.shape[0]}")
    if target_labels is None:
        target_labels = [f"b{i}" for i in range(bridge.c_t)]
    bridge_matrix = projection_to_matrix(
        bridge, fixed.target_descriptor, target_labels,
        {"construction": "fixed preprocessing + learned bridge"})
    return compose(bridge_matrix, fixed)
