"""Per-subject whitening on the manifold of SPD covariance matrices.

The re-centering matrix for a subject is Gbar^{-1/2} composed with a base
map (typically spline interpolation): epochs are sent through the base,
per-epoch shrunk covariances are averaged in the affine-invariant
(Karcher / geometric-mean) sense, and the inverse matrix square root of
that mean whitens the subject. By congruence equivariance, the geometric
mean of the re-centered covariances is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, NumericalError
from .pipeline import AdaptationMatrix, EpochSet, Signal, apply, compose

__all__ = [
    "SpdMatrix",
    "RiemannianConfig",
    "ledoit_wolf_shrinkage",
    "epoch_covariance",
    "geometric_mean",
    "inv_sqrt",
    "recenter_matrix",
]

_SYM_TOL = 1e-10
_MIN_EIG = 1e-12


@dataclass(frozen=True)
class SpdMatrix:
    """Symmetric matrix with a certified positive minimum eigenvalue."""

    values: np.ndarray
    min_eigenvalue: float

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, values: np.ndarray) -> "SpdMatrix":
        v = np.asarray(values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise DomainError(f"SPD matrix must be square, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise NumericalError("SPD candidate contains non-finite entries")
        asym = float(np.max(np.abs(v - v.T))) if v.size else 0.0
        if asym > _SYM_TOL:
            raise NumericalError(f"matrix is not symmetric (max asymmetry {asym:.3g})")
        v = 0.5 * (v + v.T)
        min_eig = float(np.linalg.eigvalsh(v)[0])
        if min_eig <= 0:
            raise NumericalError(f"matrix is not positive definite (min eigenvalue {min_eig:.3g})")
        return cls(v, min_eig)

    @property
    def dim(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class RiemannianConfig:
    """Shrinkage choice and Karcher-mean iteration controls.

    ``shrinkage`` is "auto" for the Ledoit-Wolf coefficient or a fixed
    value in [0, 1].
    """

    shrinkage: str | float = "auto"
    mean_tol: float = 1e-8
    mean_max_iter: int = 50

    def __post_init__(self) -> None:
        if isinstance(self.shrinkage, str):
            if self.shrinkage != "auto":
                raise DomainError(f"shrinkage must be 'auto' or a float, got {self.shrinkage!r}")
        else:
            a = float(self.shrinkage)
            if not 0.0 <= a <= 1.0:
                raise DomainError(f"fixed shrinkage must be in [0, 1], got {a}")
            object.__setattr__(self, "shrinkage", a)
        if not self.mean_tol > 0:
            raise DomainError(f"mean_tol must be > 0, got {self.mean_tol}")
        if self.mean_max_iter < 1:
            raise DomainError(f"mean_max_iter must be >= 1, got {self.mean_max_iter}")


def ledoit_wolf_shrinkage(centered: np.ndarray) -> float:
    """Ledoit-Wolf coefficient for row-mean-centered data (C x T), in [0, 1].

    Shrinks the sample covariance toward (trace/C) I; the optimal
    coefficient is the ratio of the estimation-noise term b^2 to the
    dispersion d^2 of the sample covariance around the target.
    """
    c, t = centered.shape
    sample = centered @ centered.T / t
    mu = float(np.trace(sample)) / c
    d2 = float(np.sum((sample - mu * np.eye(c)) ** 2)) / c
    if d2 == 0.0:
        return 0.0
    sq = centered * centered
    b2 = float(np.sum(sq @ sq.T / t - sample**2)) / (c * t)
    b2 = min(b2, d2)
    return b2 / d2


def epoch_covariance(x: Signal | np.ndarray,
                     cfg: RiemannianConfig = RiemannianConfig()) -> SpdMatrix:
    """Shrunk sample covariance of one epoch, certified SPD.

    The epoch is row-mean-centered; the 1/T covariance is shrunk toward
    (trace/C) I with the configured coefficient.
    """
    data = x.data if isinstance(x, Signal) else np.asarray(x, dtype=float)
    if data.ndim != 2:
        raise DomainError(f"epoch must be 2-D (C x T), got shape {data.shape}")
    c, t = data.shape
    if t < 2:
        raise DomainError(f"covariance needs T >= 2 samples, got {t}")
    if not np.all(np.isfinite(data)):
        raise NumericalError("epoch contains non-finite samples")
    centered = data - data.mean(axis=1, keepdims=True)
    sample = centered @ centered.T / t
    alpha = ledoit_wolf_shrinkage(centered) if cfg.shrinkage == "auto" else float(cfg.shrinkage)
    if not np.isfinite(alpha):
        raise NumericalError("non-finite shrinkage coefficient")
    mu = float(np.trace(sample)) / c
    shrunk = (1.0 - alpha) * sample + alpha * mu * np.eye(c)
    return SpdMatrix.from_values(shrunk)


def _eig_fn(values: np.ndarray, fn) -> np.ndarray:
    w, v = np.linalg.eigh(values)
    return (v * fn(w)) @ v.T


def _logm(values: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(values)
    if w[0] <= 0:
        raise NumericalError(f"log of a non-SPD matrix (min eigenvalue {w[0]:.3g})")
    return (v * np.log(w)) @ v.T


def _karcher(stack: np.ndarray, cfg: RiemannianConfig) -> tuple[np.ndarray, int]:
    """Fixed-point Karcher iteration from the arithmetic mean.

    Returns the mean and the number of iterations run; raises if the
    averaged-log residual stays above 10x tolerance at the iteration cap.
    """
    g = stack.mean(axis=0)
    residual = np.inf
    iterations = 0
    for _ in range(cfg.mean_max_iter):
        w, v = np.linalg.eigh(g)
        if w[0] <= 0:
            raise NumericalError("geometric-mean iterate lost positive definiteness")
        g_sqrt = (v * np.sqrt(w)) @ v.T
        g_isqrt = (v / np.sqrt(w)) @ v.T
        logs = np.array([_logm(g_isqrt @ c @ g_isqrt) for c in stack])
        avg = logs.mean(axis=0)
        avg = 0.5 * (avg + avg.T)
        residual = float(np.linalg.norm(avg, "fro"))
        iterations += 1
        if residual < cfg.mean_tol:
            break
        g = g_sqrt @ _eig_fn(avg, np.exp) @ g_sqrt
        g = 0.5 * (g + g.T)
    if residual > 10.0 * cfg.mean_tol:
        raise NumericalError(
            f"Karcher mean did not converge in {cfg.mean_max_iter} iterations "
            f"(residual {residual:.3g}, tol {cfg.mean_tol:.3g})")
    return g, iterations


def geometric_mean(covs: Sequence[SpdMatrix],
                   cfg: RiemannianConfig = RiemannianConfig()) -> SpdMatrix:
    """Karcher mean of SPD matrices under the affine-invariant metric.

    Fixed-point iteration G <- G^{1/2} exp(mean_i log(G^{-1/2} C_i
    G^{-1/2})) G^{1/2}, initialized at the arithmetic mean, stopping when
    the Frobenius norm of the averaged log drops below ``mean_tol``. A
    single input is returned unchanged.
    """
    if not covs:
        raise DomainError("geometric_mean of an empty collection")
    dims = {c.dim for c in covs}
    if len(dims) != 1:
        raise DomainError(f"mixed covariance dimensions: {sorted(dims)}")
    if len(covs) == 1:
        return covs[0]
    g, _ = _karcher(np.array([c.values for c in covs]), cfg)
    return SpdMatrix.from_values(g)


def inv_sqrt(c: SpdMatrix) -> np.ndarray:
    """Inverse matrix square root via symmetric eigendecomposition."""
    w, v = np.linalg.eigh(c.values)
    if w[0] < _MIN_EIG:
        raise NumericalError(
            f"inv_sqrt: eigenvalue {w[0]:.3g} below conditioning floor {_MIN_EIG:.0e}")
    out = (v / np.sqrt(w)) @ v.T
    return 0.5 * (out + out.T)


def recenter_matrix(epochs: EpochSet, base: AdaptationMatrix,
                    cfg: RiemannianConfig = RiemannianConfig()) -> AdaptationMatrix:
    """Per-subject whitening composed after ``base``.

    All epochs must come from a single subject. Each epoch is mapped
    through ``base``; the whitener is the inverse square root of the
    geometric mean of the mapped epochs' covariances.
    """
    subjects = epochs.subjects
    if len(subjects) != 1:
        raise DomainError(f"re-centering is per-subject; got subjects {subjects}")
    mapped = [apply(base, e) for e in epochs.epochs]
    alphas = []
    covs = []
    for e in mapped:
        centered = e.data - e.data.mean(axis=1, keepdims=True)
        alphas.append(ledoit_wolf_shrinkage(centered) if cfg.shrinkage == "auto"
                      else float(cfg.shrinkage))
        covs.append(epoch_covariance(e, cfg))
    if len(covs) == 1:
        mean, iterations = covs[0], 0
    else:
        g, iterations = _karcher(np.array([c.values for c in covs]), cfg)
        mean = SpdMatrix.from_values(g)
    whitener = AdaptationMatrix(
        matrix=inv_sqrt(mean),
        method="riemannian",
        source_labels=base.target_descriptor,
        target_descriptor=base.target_descriptor,
        metadata={},
    )
    composed = compose(whitener, base)
    return AdaptationMatrix(
        matrix=composed.matrix,
        method="riemannian",
        source_labels=composed.source_labels,
        target_descriptor=composed.target_descriptor,
        metadata={
            "subject": subjects[0],
            "n_epochs": str(len(epochs)),
            "shrinkage": "auto" if cfg.shrinkage == "auto" else repr(float(cfg.shrinkage)),
            "shrinkage_alpha_mean": repr(float(np.mean(alphas))),
            "mean_iterations": str(iterations),
            "base_method": base.method,
            "covariance_input": "signals as fed to the adapter (no prior normalization)",
        },
        bias=composed.bias,
    )
