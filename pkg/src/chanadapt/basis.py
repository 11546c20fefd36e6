"""Legendre polynomials and real spherical harmonics.

This is the shared kernel of the spline and harmonic adapters. The
harmonics are orthonormal over the sphere and real-valued:

    Y_{l,0}  = N_{l0} P_l(cos theta)
    Y_{l,m}  = sqrt(2) N_{lm} P_l^m(cos theta) cos(m phi)     (m > 0)
    Y_{l,-m} = sqrt(2) N_{lm} P_l^m(cos theta) sin(m phi)     (m > 0)

with N_{lm} = sqrt((2l+1)(l-m)! / (4 pi (l+m)!)) and the Condon-Shortley
phase excluded (coefficient signs depend on this; the spanned space does
not). The normalized associated Legendre values are computed by upward
recurrence in l with the normalization folded in, so no factorials are
formed explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import Montage, spherical_coords_array

__all__ = [
    "ShIndex",
    "sh_indices",
    "legendre_all",
    "norm_assoc_legendre_all",
    "real_sph_harm",
    "sh_basis_matrix",
]

_X_TOL = 1e-12


@dataclass(frozen=True)
class ShIndex:
    """Spherical-harmonic index (l, m) with the flat ordering l*l + l + m."""

    l: int
    m: int

    def __post_init__(self) -> None:
        if self.l < 0 or abs(self.m) > self.l:
            raise DomainError(f"invalid harmonic index (l={self.l}, m={self.m})")

    @property
    def flat(self) -> int:
        return self.l * self.l + self.l + self.m

    @classmethod
    def from_flat(cls, flat: int) -> "ShIndex":
        if flat < 0:
            raise DomainError(f"flat index must be >= 0, got {flat}")
        l = int(math.isqrt(flat))
        return cls(l, flat - l * l - l)


def sh_indices(l_max: int) -> list[ShIndex]:
    """All (l, m) pairs with l <= l_max in flat order; (l_max+1)^2 entries."""
    if l_max < 0:
        raise DomainError(f"l_max must be >= 0, got {l_max}")
    return [ShIndex(l, m) for l in range(l_max + 1) for m in range(-l, l + 1)]


def legendre_all(n_max: int, x) -> np.ndarray:
    """P_0(x) .. P_nmax(x) by the three-term recurrence.

    (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}, P_0 = 1, P_1 = x.
    x may be a scalar or an array; the degree axis comes first.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + _X_TOL):
        raise DomainError("legendre_all: |x| must be <= 1")
    x = np.clip(x, -1.0, 1.0)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for n in range(1, n_max):
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    return out


def norm_assoc_legendre_all(l_max: int, m: int, x) -> np.ndarray:
    """N_{lm} P_l^m(x) for l = m..l_max (zeros below l = m), degree axis first.

    Upward recurrence in l at fixed m, seeded on the diagonal; stable for
    the small degrees used here and free of factorial overflow.
    """
    if m < 0:
        raise DomainError("norm_assoc_legendre_all expects m >= 0")
    if m > l_max:
        raise DomainError(f"|m| = {m} exceeds l_max = {l_max}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + _X_TOL):
        raise DomainError("norm_assoc_legendre_all: |x| must be <= 1")
    x = np.clip(x, -1.0, 1.0)
    s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    out = np.zeros((l_max + 1,) + x.shape)
    pmm = np.full(x.shape, math.sqrt(1.0 / (4.0 * math.pi)))
    for k in range(1, m + 1):
        pmm = pmm * math.sqrt((2 * k + 1) / (2.0 * k)) * s
    out[m] = pmm
    if m + 1 <= l_max:
        out[m + 1] = math.sqrt(2.0 * m + 3.0) * x * pmm
    for l in range(m + 2, l_max + 1):
        a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
        b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
        out[l] = a * (x * out[l - 1] - b * out[l - 2])
    return out


def real_sph_harm(l: int, m: int, theta: float, phi: float) -> float:
    """Orthonormal real spherical harmonic Y_{lm}(theta, phi)."""
    if abs(m) > l:
        raise DomainError(f"|m| = {abs(m)} exceeds l = {l}")
    p = float(norm_assoc_legendre_all(l, abs(m), math.cos(theta))[l])
    if m == 0:
        return p
    if m > 0:
        return math.sqrt(2.0) * p * math.cos(m * phi)
    return math.sqrt(2.0) * p * math.sin(-m * phi)


def sh_basis_matrix(montage: Montage, l_max: int) -> np.ndarray:
    """Basis matrix B of shape ((l_max+1)^2, C): B[flat(l,m), i] = Y_{lm}(theta_i, phi_i)."""
    if l_max < 0:
        raise DomainError(f"l_max must be >= 0, got {l_max}")
    theta, phi = spherical_coords_array(montage.positions)
    x = np.cos(theta)
    n_rows = (l_max + 1) ** 2
    out = np.empty((n_rows, len(montage)))
    sqrt2 = math.sqrt(2.0)
    for m in range(l_max + 1):
        p = norm_assoc_legendre_all(l_max, m, x)
        if m == 0:
            for l in range(l_max + 1):
                out[l * l + l] = p[l]
        else:
            cos_m = np.cos(m * phi)
            sin_m = np.sin(m * phi)
            for l in range(m, l_max + 1):
                out[l * l + l + m] = sqrt2 * p[l] * cos_m
                out[l * l + l - m] = sqrt2 * p[l] * sin_m
    return out
