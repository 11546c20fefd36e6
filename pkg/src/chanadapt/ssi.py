"""Spherical spline interpolation between montages.

Builds the fixed matrix mapping C_s source channels to C_t target
channels from electrode geometry alone. Potentials are modeled as

    v(p) = c0 + sum_j c_j g(cos angle(p, s_j))

with the Legendre-series kernel

    g(x) = (1 / 4 pi) sum_{n=1}^{N} (2n+1) / (n (n+1))^m P_n(x)

and coefficients obtained from the bordered linear system

    [[G + lambda I, 1], [1^T, 0]] [c; c0] = [v; 0].

Because (c, c0) depend linearly on v, evaluating the model at the target
electrodes collapses to a single C_t x C_s matrix. The c0 border makes
every row of that matrix sum to 1: constant fields are reproduced
exactly.

Signals are interpolated exactly as given; no re-referencing is applied
first, and a matrix built for average-referenced data is a different
matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg

from .basis import legendre_all
from .errors import DomainError, NumericalError
from .geometry import Montage
from .pipeline import AdaptationMatrix

__all__ = ["SplineConfig", "g_kernel", "ssi_matrix"]

_COINCIDENT_COS = 1.0 - 1e-12


@dataclass(frozen=True)
class SplineConfig:
    """Spline parameters: stiffness m, Legendre terms, diagonal regularization."""

    stiffness: int = 4
    n_terms: int = 50
    reg_lambda: float = 1e-7

    def __post_init__(self) -> None:
        if self.stiffness < 2:
            raise DomainError(f"stiffness must be >= 2, got {self.stiffness}")
        if self.n_terms < 1:
            raise DomainError(f"n_terms must be >= 1, got {self.n_terms}")
        if self.reg_lambda < 0:
            raise DomainError(f"reg_lambda must be >= 0, got {self.reg_lambda}")


def _series_coeffs(cfg: SplineConfig) -> np.ndarray:
    n = np.arange(1, cfg.n_terms + 1, dtype=float)
    return (2.0 * n + 1.0) / (n * (n + 1.0)) ** cfg.stiffness


def g_kernel(x: float, cfg: SplineConfig = SplineConfig()) -> float:
    """Spline kernel g(x) for a cosine-angle x in [-1, 1]."""
    p = legendre_all(cfg.n_terms, x)  # validates |x| <= 1
    return float(np.dot(_series_coeffs(cfg), p[1:]) / (4.0 * np.pi))


def _g_matrix(cos_angles: np.ndarray, cfg: SplineConfig) -> np.ndarray:
    """g evaluated elementwise on a matrix of cosine angles (legval is the
    same three-term recurrence, vectorized)."""
    coeffs = np.concatenate([[0.0], _series_coeffs(cfg)])
    return npleg.legval(cos_angles, coeffs) / (4.0 * np.pi)


def ssi_matrix(source: Montage, target: Montage,
               cfg: SplineConfig = SplineConfig()) -> AdaptationMatrix:
    """Fixed C_t x C_s spherical-spline interpolation matrix."""
    c_s = len(source)
    if c_s < 3:
        raise NumericalError(f"spline system needs >= 3 source electrodes, got {c_s}")
    # solve in canonical (sorted-label) order so electrode order never
    # reaches the factorization: column permutation equivariance is exact
    order = np.array(sorted(range(c_s), key=lambda i: source.keys[i]))
    positions = source.positions[order]
    cos_ss = np.clip(positions @ positions.T, -1.0, 1.0)
    off_diag = cos_ss - 2.0 * np.eye(c_s)
    if np.any(off_diag > _COINCIDENT_COS):
        i, j = np.unravel_index(int(np.argmax(off_diag)), off_diag.shape)
        raise NumericalError(
            f"coincident source electrodes {source.labels[order[i]]!r} "
            f"and {source.labels[order[j]]!r}")

    bordered = np.zeros((c_s + 1, c_s + 1))
    bordered[:c_s, :c_s] = _g_matrix(cos_ss, cfg) + cfg.reg_lambda * np.eye(c_s)
    bordered[:c_s, c_s] = 1.0
    bordered[c_s, :c_s] = 1.0
    rhs = np.vstack([np.eye(c_s), np.zeros((1, c_s))])
    try:
        solve = np.linalg.solve(bordered, rhs)  # maps v -> [c; c0]
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular spline system: {exc}") from None

    cos_ts = np.clip(target.positions @ positions.T, -1.0, 1.0)
    g_ts = _g_matrix(cos_ts, cfg)
    sorted_matrix = np.hstack([g_ts, np.ones((len(target), 1))]) @ solve
    inverse = np.empty(c_s, dtype=int)
    inverse[order] = np.arange(c_s)
    matrix = sorted_matrix[:, inverse]
    return AdaptationMatrix(
        matrix=matrix,
        method="ssi",
        source_labels=source.labels,
        target_descriptor=target.labels,
        metadata={
            "stiffness": str(cfg.stiffness),
            "n_terms": str(cfg.n_terms),
            "reg_lambda": repr(cfg.reg_lambda),
            "source_montage": source.name,
            "target_montage": target.name,
        },
    )
