"""Synthetic spherical-field generator.

Ground truth for verifying the fixed adapters: fields are synthesized
from known harmonic coefficients (data = B^T A + noise), so any adapter
output can be compared against direct evaluation at the target
electrodes or against the generating coefficients. Subject structure for
the re-centering pipeline comes from per-subject SPD channel mixings.

Output is fully determined by the spec's seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import sh_basis_matrix
from .errors import DomainError
from .geometry import Montage
from .pipeline import EpochSet, Signal

__all__ = ["SynthSpec", "synth_coeffs", "synth_field", "synth_epochs", "synth_epochs_with_coeffs"]

MIXINGS = ("none", "random_spd")

_MIXING_EPS = 0.5
_DEFAULT_DEGREE_AMPLITUDES = (1.0, 0.8, 0.6, 0.4, 0.2)


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a synthetic recording.

    Coefficient timecourses are either given explicitly
    (``coeff_timecourses``, shape 25 x T for l_max = 4) or drawn as white
    Gaussian series with per-degree RMS ``degree_amplitudes``. Two-class
    labels are generated by adding +/- ``label_offset`` to the mean of
    the ``label_coeff``-th coefficient, alternating classes so counts are
    balanced within one epoch.
    """

    montage: Montage
    n_samples: int = 128
    sfreq: float = 128.0
    coeff_timecourses: np.ndarray | None = None
    degree_amplitudes: tuple[float, ...] = _DEFAULT_DEGREE_AMPLITUDES
    noise_sigma: float = 0.0
    n_subjects: int = 1
    n_epochs_per_subject: int = 1
    subject_mixing: str = "none"
    label_coeff: int | None = None
    label_offset: float = 1.0
    seed: int = 0
    l_max: int = field(init=False, default=0)

    def __post_init__(self) -> None:
        if self.n_samples < 1:
            raise DomainError(f"n_samples must be >= 1, got {self.n_samples}")
        if not self.sfreq > 0:
            raise DomainError(f"sfreq must be > 0, got {self.sfreq}")
        if self.noise_sigma < 0:
            raise DomainError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.n_subjects < 1 or self.n_epochs_per_subject < 1:
            raise DomainError("n_subjects and n_epochs_per_subject must be >= 1")
        if self.subject_mixing not in MIXINGS:
            raise DomainError(
                f"unknown subject_mixing {self.subject_mixing!r}; expected one of {MIXINGS}")
        if self.coeff_timecourses is not None:
            a = np.asarray(self.coeff_timecourses, dtype=float)
            l_max = int(round(np.sqrt(a.shape[0]))) - 1
            if a.ndim != 2 or (l_max + 1) ** 2 != a.shape[0]:
                raise DomainError(
                    f"coeff_timecourses must be ((l_max+1)^2, T), got shape {a.shape}")
            if a.shape[1] != self.n_samples:
                raise DomainError(
                    f"coeff_timecourses has T={a.shape[1]} but n_samples={self.n_samples}")
            object.__setattr__(self, "coeff_timecourses", a)
        else:
            amps = tuple(float(v) for v in self.degree_amplitudes)
            if not amps:
                raise DomainError("degree_amplitudes must be non-empty")
            object.__setattr__(self, "degree_amplitudes", amps)
            l_max = len(amps) - 1
        object.__setattr__(self, "l_max", l_max)
        n_coeffs = (l_max + 1) ** 2
        if self.label_coeff is not None and not 0 <= self.label_coeff < n_coeffs:
            raise DomainError(
                f"label_coeff must be in [0, {n_coeffs}), got {self.label_coeff}")

    @property
    def n_coeffs(self) -> int:
        return (self.l_max + 1) ** 2


def _rng(spec: SynthSpec, *key: int) -> np.random.Generator:
    return np.random.default_rng([spec.seed, *key])


def synth_coeffs(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    """One epoch's coefficient timecourses (n_coeffs x T)."""
    if spec.coeff_timecourses is not None:
        return spec.coeff_timecourses.copy()
    out = rng.standard_normal((spec.n_coeffs, spec.n_samples))
    for l, amp in enumerate(spec.degree_amplitudes):
        out[l * l:(l + 1) * (l + 1)] *= amp
    return out


def synth_field(spec: SynthSpec) -> Signal:
    """Single synthetic signal on the spec's montage: B^T A + noise."""
    rng = _rng(spec, 0)
    coeffs = synth_coeffs(spec, rng)
    basis = sh_basis_matrix(spec.montage, spec.l_max)
    data = basis.T @ coeffs
    if spec.noise_sigma > 0:
        data = data + spec.noise_sigma * rng.standard_normal(data.shape)
    return Signal(data, spec.sfreq, spec.montage.labels)


def _subject_mixing(spec: SynthSpec, subject_index: int) -> np.ndarray:
    """SPD channel mixing I + eps L L^T with L ~ N(0, 1/C) entries."""
    c = len(spec.montage)
    if spec.subject_mixing == "none":
        return np.eye(c)
    rng = _rng(spec, 1, subject_index)
    low = rng.standard_normal((c, c)) / np.sqrt(c)
    return np.eye(c) + _MIXING_EPS * (low @ low.T)


def synth_epochs_with_coeffs(spec: SynthSpec) -> tuple[EpochSet, np.ndarray]:
    """Epochs plus the generating coefficients (n_epochs x n_coeffs x T).

    Noise and subject mixing apply to the emitted signals only; the
    returned coefficients are the clean ground truth.
    """
    basis = sh_basis_matrix(spec.montage, spec.l_max)
    epochs = []
    subject_ids = []
    class_labels = [] if spec.label_coeff is not None else None
    all_coeffs = []
    for j in range(spec.n_subjects):
        mixing = _subject_mixing(spec, j)
        for e in range(spec.n_epochs_per_subject):
            rng = _rng(spec, 2, j, e)
            coeffs = synth_coeffs(spec, rng)
            if spec.label_coeff is not None:
                label = e % 2
                coeffs[spec.label_coeff] += spec.label_offset if label else -spec.label_offset
                class_labels.append(label)
            data = mixing @ (basis.T @ coeffs)
            if spec.noise_sigma > 0:
                data = data + spec.noise_sigma * rng.standard_normal(data.shape)
            epochs.append(Signal(data, spec.sfreq, spec.montage.labels))
            subject_ids.append(f"s{j}")
            all_coeffs.append(coeffs)
    return EpochSet(epochs, subject_ids, class_labels), np.array(all_coeffs)


def synth_epochs(spec: SynthSpec) -> EpochSet:
    """Subject-tagged synthetic epochs (see synth_epochs_with_coeffs)."""
    return synth_epochs_with_coeffs(spec)[0]
