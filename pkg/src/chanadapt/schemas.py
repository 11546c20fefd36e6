"""Pydantic request/response models for the HTTP service and the CLI.

Arrays travel as nested JSON lists of float64; both the Python JSON
encoder and pydantic's serializer emit shortest round-trip decimal, so
values survive the wire bit-exactly.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

__all__ = [
    "MontageIn",
    "MontageOut",
    "MontageListOut",
    "MatrixPayload",
    "SignalPayload",
    "EpochSetPayload",
    "SplineConfigIn",
    "HarmonicConfigIn",
    "RiemannianConfigIn",
    "SsiRequest",
    "HarmonicRequest",
    "LsqRequest",
    "RiemannianRequest",
    "IdentityRequest",
    "ApplyRequest",
    "ResampleRequest",
    "NormalizeRequest",
    "SynthFieldRequest",
    "SynthEpochsRequest",
    "BenchRequest",
    "BenchRow",
    "PairReportOut",
    "StatsReportOut",
    "BenchResponse",
    "StatsRequest",
    "HealthOut",
    "ErrorOut",
]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MontageIn(_Strict):
    """A builtin montage by name, or explicit labels + unit-sphere positions."""

    name: str | None = None
    labels: list[str] | None = None
    positions: list[list[float]] | None = None

    @model_validator(mode="after")
    def _one_of(self) -> "MontageIn":
        explicit = self.labels is not None or self.positions is not None
        if self.name is not None and explicit:
            raise ValueError("give either 'name' or 'labels'+'positions', not both")
        if self.name is None:
            if self.labels is None or self.positions is None:
                raise ValueError("montage needs 'name' or both 'labels' and 'positions'")
        return self


class MontageOut(_Strict):
    name: str
    labels: list[str]
    positions: list[list[float]]


class MontageListOut(_Strict):
    montages: list[MontageOut] | None = None
    names: list[str]
    n_channels: list[int]


class MatrixPayload(_Strict):
    matrix: list[list[float]]
    method: str
    source_labels: list[str]
    target: list[str]
    metadata: dict[str, str] = Field(default_factory=dict)
    bias: list[float] | None = None


class SignalPayload(_Strict):
    data: list[list[float]]
    sfreq: float
    labels: list[str]


class EpochSetPayload(_Strict):
    epochs: list[list[list[float]]]
    sfreq: float
    labels: list[str]
    subject_ids: list[str]
    class_labels: list[int] | None = None


class SplineConfigIn(_Strict):
    stiffness: int = 4
    n_terms: int = 50
    reg_lambda: float = 1e-7


class HarmonicConfigIn(_Strict):
    l_max: int = 4
    mode: str = "evaluate"
    ridge: float = 1e-8


class RiemannianConfigIn(_Strict):
    shrinkage: str | float = "auto"
    mean_tol: float = 1e-8
    mean_max_iter: int = 50


class SsiRequest(_Strict):
    source: MontageIn
    target: MontageIn
    config: SplineConfigIn = Field(default_factory=SplineConfigIn)


class HarmonicRequest(_Strict):
    source: MontageIn
    config: HarmonicConfigIn = Field(default_factory=HarmonicConfigIn)


class LsqRequest(_Strict):
    source_data: list[list[float]]
    target_data: list[list[float]]
    ridge: float = 0.0
    with_bias: bool = True
    source_labels: list[str] | None = None
    target_labels: list[str] | None = None


class RiemannianRequest(_Strict):
    epochs: EpochSetPayload
    base: MatrixPayload | None = None  # defaults to the identity on the epochs' channels
    config: RiemannianConfigIn = Field(default_factory=RiemannianConfigIn)


class IdentityRequest(_Strict):
    source_labels: list[str]
    target_labels: list[str] | None = None


class ApplyRequest(_Strict):
    matrix: MatrixPayload
    signal: SignalPayload


class ResampleRequest(_Strict):
    signal: SignalPayload
    sfreq: float


class NormalizeRequest(_Strict):
    signal: SignalPayload
    mode: str


class SynthFieldRequest(_Strict):
    montage: MontageIn
    n_samples: int = 128
    sfreq: float = 128.0
    degree_amplitudes: list[float] = Field(default_factory=lambda: [1.0, 0.8, 0.6, 0.4, 0.2])
    coeff_timecourses: list[list[float]] | None = None
    noise_sigma: float = 0.0
    seed: int = 0


class SynthEpochsRequest(SynthFieldRequest):
    n_subjects: int = 1
    n_epochs_per_subject: int = 1
    subject_mixing: str = "none"
    label_coeff: int | None = None
    label_offset: float = 1.0


class BenchRequest(_Strict):
    methods: list[str] = Field(default_factory=lambda: ["ssi", "identity"])
    source_montage: str = "ten_ten_64"
    target_montage: str = "ten_twenty_19"
    exclude_target_channels: bool = True
    n_seeds: int = 10
    n_subjects: int = 6
    train_subjects: int = 4
    n_epochs_per_subject: int = 20
    n_samples: int = 128
    sfreq: float = 128.0
    noise_sigma: float = 0.5
    degree_amplitudes: list[float] = Field(default_factory=lambda: [1.0, 0.8, 0.6, 0.4])
    label_coeff: int = 0
    label_offset: float = 1.0
    subject_mixing: str = "none"
    ridge_alpha: float = 1.0
    q: float = 0.05
    seed: int = 0


class BenchRow(_Strict):
    method: str
    seed: int
    balanced_accuracy: float


class PairReportOut(_Strict):
    method_a: str
    method_b: str
    n: int
    w: float | None
    p_raw: float | None
    p_adj: float | None
    d: float | None
    reject: bool
    note: str = ""


class StatsReportOut(_Strict):
    pairs: list[PairReportOut]
    friedman_chi2: float | None
    friedman_p: float | None
    within_1pp: float
    q: float


class BenchResponse(_Strict):
    rows: list[BenchRow]
    failures: list[str]
    report: StatsReportOut


class StatsRequest(_Strict):
    rows: list[BenchRow]
    q: float = 0.05


class HealthOut(_Strict):
    status: str
    version: str


class ErrorOut(_Strict):
    error: str
    kind: str
