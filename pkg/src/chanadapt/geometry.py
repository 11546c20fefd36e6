"""Electrode and montage geometry.

A montage is an ordered set of labeled electrodes on the unit sphere; the
order defines row/column order of every adaptation matrix built from it.
Coordinate frame: +x toward the right preauricular point, +y toward the
nasion, +z toward the vertex; the polar angle theta is measured from +z
and the azimuth phi from +x.

The shipped standard layouts (see ``data/``) use idealized proportional
10-20/10-10 placement on the sphere with the outer Fpz-T7-Oz-T8 ring on
the equator. They are best-effort stand-ins for the hardware layouts of
public corpora and are documented as such in the README.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

import numpy as np

from .errors import MontageError, UsageError

__all__ = [
    "Electrode",
    "Montage",
    "load_montage",
    "parse_montage_csv",
    "builtin_montage",
    "builtin_montage_names",
    "cosine_angle",
    "spherical_coords",
]

BUILTIN_MONTAGES = ("ten_twenty_19", "ten_ten_64", "bci2a_22", "tuev_21")

_POLE_EPS = 1e-12


@dataclass(frozen=True)
class Electrode:
    """A labeled electrode with a unit-norm 3D position."""

    label: str
    position: np.ndarray

    def __post_init__(self) -> None:
        label = self.label.strip()
        if not label:
            raise MontageError("electrode label must be non-empty")
        pos = np.asarray(self.position, dtype=float)
        if pos.shape != (3,):
            raise MontageError(f"electrode {label!r}: position must be a 3-vector")
        if not np.all(np.isfinite(pos)):
            raise MontageError(f"electrode {label!r}: non-finite position")
        norm = float(np.linalg.norm(pos))
        if norm == 0.0:
            raise MontageError(f"electrode {label!r}: zero-length position vector")
        if abs(norm - 1.0) > 1e-12:  # idempotent: unit vectors round-trip bitwise
            pos = pos / norm
        pos.setflags(write=False)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "position", pos)

    @property
    def key(self) -> str:
        """Canonical case-insensitive form used for matching ("CZ" == "Cz")."""
        return self.label.upper()


@dataclass(frozen=True)
class Montage:
    """Ordered electrode set; order is significant."""

    electrodes: tuple[Electrode, ...]
    name: str = ""
    positions: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        electrodes = tuple(self.electrodes)
        if not electrodes:
            raise MontageError("montage must contain at least one electrode")
        seen: set[str] = set()
        for e in electrodes:
            if e.key in seen:
                raise MontageError(f"duplicate electrode label {e.label!r}")
            seen.add(e.key)
        pos = np.array([e.position for e in electrodes])
        pos.setflags(write=False)
        object.__setattr__(self, "electrodes", electrodes)
        object.__setattr__(self, "positions", pos)

    def __len__(self) -> int:
        return len(self.electrodes)

    @property
    def labels(self) -> list[str]:
        return [e.label for e in self.electrodes]

    @property
    def keys(self) -> list[str]:
        return [e.key for e in self.electrodes]

    def subset(self, labels: Iterable[str], name: str = "") -> "Montage":
        """New montage restricted to ``labels``, in the given order."""
        by_key = {e.key: e for e in self.electrodes}
        picked = []
        for lab in labels:
            e = by_key.get(lab.strip().upper())
            if e is None:
                raise MontageError(f"label {lab!r} not in montage {self.name!r}")
            picked.append(e)
        return Montage(tuple(picked), name or f"{self.name}_subset")


def from_arrays(labels: Iterable[str], positions: np.ndarray, name: str = "") -> Montage:
    """Build a montage from parallel label / (C, 3) position arrays."""
    positions = np.asarray(positions, dtype=float)
    labels = list(labels)
    if positions.ndim != 2 or positions.shape[1] != 3:
        raise MontageError(f"positions must have shape (C, 3), got {positions.shape}")
    if len(labels) != positions.shape[0]:
        raise MontageError("labels and positions disagree in length")
    return Montage(tuple(Electrode(lab, pos) for lab, pos in zip(labels, positions)), name)


def parse_montage_csv(text: str, name: str = "") -> Montage:
    """Parse montage CSV: header ``label,x,y,z``, ``#`` comments, UTF-8.

    Positions may be non-unit in the file; they are normalized here.
    """
    electrodes = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if [f.strip().lower() for f in line.split(",")] != ["label", "x", "y", "z"]:
                raise MontageError(f"line {lineno}: expected header 'label,x,y,z', got {line!r}")
            header_seen = True
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 4:
            raise MontageError(f"line {lineno}: expected 4 fields, got {len(fields)}")
        label = fields[0]
        try:
            xyz = [float(v) for v in fields[1:]]
        except ValueError as exc:
            raise MontageError(f"line {lineno}: malformed coordinate: {exc}") from None
        electrodes.append(Electrode(label, np.array(xyz)))
    if not header_seen:
        raise MontageError("empty montage file")
    if not electrodes:
        raise MontageError("montage file contains no electrodes")
    return Montage(tuple(electrodes), name)


def load_montage(path: str) -> Montage:
    """Load a montage from a CSV file (see parse_montage_csv)."""
    import os

    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(path))[0]
    return parse_montage_csv(text, name)


def builtin_montage(name: str) -> Montage:
    """One of the shipped standard layouts: ten_twenty_19, ten_ten_64, bci2a_22, tuev_21."""
    if name not in BUILTIN_MONTAGES:
        raise UsageError(
            f"unknown montage {name!r}; available: {', '.join(BUILTIN_MONTAGES)}")
    text = resources.files("chanadapt.data").joinpath(name + ".csv").read_text("utf-8")
    return parse_montage_csv(text, name)


def builtin_montage_names() -> tuple[str, ...]:
    return BUILTIN_MONTAGES


def cosine_angle(a: Electrode, b: Electrode) -> float:
    """Cosine of the central angle between two electrodes, clamped to [-1, 1]."""
    return float(np.clip(np.dot(a.position, b.position), -1.0, 1.0))


def spherical_coords(e: Electrode) -> tuple[float, float]:
    """(theta, phi) with theta = arccos(z) in [0, pi], phi = atan2(y, x) in (-pi, pi].

    phi is returned as 0 at the poles (sin theta < 1e-12), where the
    azimuth is undefined.
    """
    x, y, z = (float(v) for v in e.position)
    theta = math.acos(min(1.0, max(-1.0, z)))
    if math.sin(theta) < _POLE_EPS:
        return theta, 0.0
    return theta, math.atan2(y, x)


def spherical_coords_array(positions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized spherical_coords for an (C, 3) array of unit positions."""
    positions = np.asarray(positions, dtype=float)
    theta = np.arccos(np.clip(positions[:, 2], -1.0, 1.0))
    phi = np.arctan2(positions[:, 1], positions[:, 0])
    phi = np.where(np.sin(theta) < _POLE_EPS, 0.0, phi)
    return theta, phi
