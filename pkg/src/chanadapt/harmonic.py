"""Source-space decomposition onto real spherical harmonics.

Projects a C_s-channel signal onto the (l_max+1)^2 = 25 (for l_max=4)
harmonic coefficients, a topology-agnostic representation whose size
does not depend on C_s.

Two constructions are shipped. ``evaluate`` uses the basis matrix B
itself (rows evaluate Y_{lm} at the source electrodes) as the map;
``least_squares`` uses the ridge-regularized coefficient estimator
(B B^T + ridge I)^{-1} B, which recovers the generating coefficients of
a synthesized field and serves as the verification oracle for the
evaluate construction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .basis import sh_basis_matrix, sh_indices
from .errors import DomainError, NumericalError
from .geometry import Montage
from .pipeline import AdaptationMatrix

__all__ = ["HarmonicConfig", "harmonic_matrix", "harmonic_band_power", "harmonic_row_names"]

MODES = ("evaluate", "least_squares")


@dataclass(frozen=True)
class HarmonicConfig:
    l_max: int = 4
    mode: str = "evaluate"
    ridge: float = 1e-8  # least_squares only; guards rank-deficient montages

    def __post_init__(self) -> None:
        if self.l_max < 0:
            raise DomainError(f"l_max must be >= 0, got {self.l_max}")
        if self.mode not in MODES:
            raise DomainError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.ridge < 0:
            raise DomainError(f"ridge must be >= 0, got {self.ridge}")

    @property
    def n_coeffs(self) -> int:
        return (self.l_max + 1) ** 2


def harmonic_row_names(l_max: int) -> list[str]:
    """Row names "Y{l}{+m}" in flat (l*l + l + m) order."""
    return [f"Y{ix.l}{ix.m:+d}" for ix in sh_indices(l_max)]


def harmonic_matrix(source: Montage, cfg: HarmonicConfig = HarmonicConfig()) -> AdaptationMatrix:
    """Fixed (l_max+1)^2 x C_s harmonic projection matrix."""
    basis = sh_basis_matrix(source, cfg.l_max)
    if cfg.mode == "evaluate":
        matrix = basis
    else:
        if len(source) < cfg.n_coeffs:
            warnings.warn(
                f"least_squares with {len(source)} channels for {cfg.n_coeffs} "
                "coefficients is underdetermined", stacklevel=2)
        gram = basis @ basis.T + cfg.ridge * np.eye(cfg.n_coeffs)
        try:
            matrix = np.linalg.solve(gram, basis)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"singular harmonic system: {exc}") from None
    return AdaptationMatrix(
        matrix=matrix,
        method="harmonic",
        source_labels=source.labels,
        target_descriptor=harmonic_row_names(cfg.l_max),
        metadata={
            "l_max": str(cfg.l_max),
            "mode": cfg.mode,
            "ridge": repr(cfg.ridge),
            "source_montage": source.name,
            "coefficient_scaling": "none",
        },
    )


def harmonic_band_power(coeffs: np.ndarray) -> np.ndarray:
    """Energy per harmonic degree of a coefficient matrix.

    ``coeffs`` has (l_max+1)^2 rows in flat order; returns the length
    l_max+1 vector of summed squares over orders m and time.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim == 1:
        coeffs = coeffs[:, None]
    if coeffs.ndim != 2:
        raise DomainError(f"coeffs must be 1-D or 2-D, got shape {coeffs.shape}")
    n_rows = coeffs.shape[0]
    l_max = int(round(np.sqrt(n_rows))) - 1
    if (l_max + 1) ** 2 != n_rows:
        raise DomainError(f"{n_rows} rows is not a full set of harmonic coefficients")
    return np.array([
        float(np.sum(coeffs[l * l:(l + 1) * (l + 1)] ** 2)) for l in range(l_max + 1)
    ])
