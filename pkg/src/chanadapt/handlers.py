"""Service layer: pydantic models in, pydantic models out.

The FastAPI routes in ``service`` and the CLI in ``cli`` are both thin
clients of these functions, so every consumer goes through the same
validation and the same numerics.
"""

from __future__ import annotations

import numpy as np

from . import __version__
from . import schemas as sc
from .bench import BenchConfig, BenchResult, run_benchmark, stats_report
from .errors import UsageError
from .geometry import Montage, builtin_montage, builtin_montage_names, from_arrays
from .harmonic import HarmonicConfig, harmonic_matrix
from .learned import lsq_fit, projection_to_matrix
from .oracle import SynthSpec, synth_epochs, synth_field
from .pipeline import (AdaptationMatrix, EpochSet, Signal, apply, identity_matrix,
                       normalize, resample)
from .riemannian import RiemannianConfig, recenter_matrix
from .ssi import SplineConfig, ssi_matrix

__all__ = [
    "health",
    "montage_list",
    "montage_show",
    "matrix_ssi",
    "matrix_harmonic",
    "matrix_lsq",
    "matrix_riemannian",
    "matrix_identity",
    "signal_apply",
    "signal_resample",
    "signal_normalize",
    "synth_field_handler",
    "synth_epochs_handler",
    "bench_run",
    "stats_from_rows",
]


# ---- payload conversions ---------------------------------------------------

def montage_from_payload(p: sc.MontageIn) -> Montage:
    if p.name is not None:
        return builtin_montage(p.name)
    return from_arrays(p.labels, np.array(p.positions, dtype=float), "request")


def montage_to_payload(m: Montage) -> sc.MontageOut:
    return sc.MontageOut(name=m.name, labels=m.labels,
                         positions=[[float(v) for v in row] for row in m.positions])


def matrix_to_payload(m: AdaptationMatrix) -> sc.MatrixPayload:
    return sc.MatrixPayload(
        matrix=[[float(v) for v in row] for row in m.matrix],
        method=m.method,
        source_labels=list(m.source_labels),
        target=list(m.target_descriptor),
        metadata=dict(m.metadata),
        bias=None if m.bias is None else [float(v) for v in m.bias],
    )


def matrix_from_payload(p: sc.MatrixPayload) -> AdaptationMatrix:
    return AdaptationMatrix(
        matrix=np.array(p.matrix, dtype=float),
        method=p.method,
        source_labels=p.source_labels,
        target_descriptor=p.target,
        metadata=p.metadata,
        bias=None if p.bias is None else np.array(p.bias, dtype=float),
    )


def signal_to_payload(x: Signal) -> sc.SignalPayload:
    return sc.SignalPayload(data=[[float(v) for v in row] for row in x.data],
                            sfreq=x.sfreq, labels=list(x.labels))


def signal_from_payload(p: sc.SignalPayload) -> Signal:
    return Signal(np.array(p.data, dtype=float), p.sfreq, p.labels)


def epochs_from_payload(p: sc.EpochSetPayload) -> EpochSet:
    epochs = [Signal(np.array(e, dtype=float), p.sfreq, p.labels) for e in p.epochs]
    return EpochSet(epochs, p.subject_ids, p.class_labels)


def epochs_to_payload(es: EpochSet) -> sc.EpochSetPayload:
    first = es.epochs[0]
    return sc.EpochSetPayload(
        epochs=[[[float(v) for v in row] for row in e.data] for e in es.epochs],
        sfreq=first.sfreq,
        labels=list(first.labels),
        subject_ids=list(es.subject_ids),
        class_labels=None if es.class_labels is None else list(es.class_labels),
    )


# ---- handlers ----------------------------------------------------------------

def health() -> sc.HealthOut:
    return sc.HealthOut(status="ok", version=__version__)


def montage_list() -> sc.MontageListOut:
    names = list(builtin_montage_names())
    counts = [len(builtin_montage(n)) for n in names]
    return sc.MontageListOut(names=names, n_channels=counts)


def montage_show(name: str) -> sc.MontageOut:
    return montage_to_payload(builtin_montage(name))


def matrix_ssi(req: sc.SsiRequest) -> sc.MatrixPayload:
    cfg = SplineConfig(req.config.stiffness, req.config.n_terms, req.config.reg_lambda)
    return matrix_to_payload(
        ssi_matrix(montage_from_payload(req.source), montage_from_payload(req.target), cfg))


def matrix_harmonic(req: sc.HarmonicRequest) -> sc.MatrixPayload:
    cfg = HarmonicConfig(req.config.l_max, req.config.mode, req.config.ridge)
    return matrix_to_payload(harmonic_matrix(montage_from_payload(req.source), cfg))


def matrix_lsq(req: sc.LsqRequest) -> sc.MatrixPayload:
    x_s = np.array(req.source_data, dtype=float)
    x_t = np.array(req.target_data, dtype=float)
    proj = lsq_fit(x_s, x_t, req.ridge, req.with_bias)
    source_labels = req.source_labels or [f"ch{i}" for i in range(x_s.shape[0])]
    target_labels = req.target_labels or [f"out{i}" for i in range(x_t.shape[0])]
    return matrix_to_payload(projection_to_matrix(
        proj, source_labels, target_labels, {"fit": "lsq", "ridge": repr(req.ridge)}))


def matrix_riemannian(req: sc.RiemannianRequest) -> sc.MatrixPayload:
    epochs = epochs_from_payload(req.epochs)
    if req.base is not None:
        base = matrix_from_payload(req.base)
    else:
        base = identity_matrix(req.epochs.labels)
    cfg = RiemannianConfig(req.config.shrinkage, req.config.mean_tol,
                           req.config.mean_max_iter)
    return matrix_to_payload(recenter_matrix(epochs, base, cfg))


def matrix_identity(req: sc.IdentityRequest) -> sc.MatrixPayload:
    return matrix_to_payload(identity_matrix(req.source_labels, req.target_labels))


def signal_apply(req: sc.ApplyRequest) -> sc.SignalPayload:
    return signal_to_payload(
        apply(matrix_from_payload(req.matrix), signal_from_payload(req.signal)))


def signal_resample(req: sc.ResampleRequest) -> sc.SignalPayload:
    return signal_to_payload(resample(signal_from_payload(req.signal), req.sfreq))


def signal_normalize(req: sc.NormalizeRequest) -> sc.SignalPayload:
    return signal_to_payload(normalize(signal_from_payload(req.signal), req.mode))


def _spec_from_request(req: sc.SynthFieldRequest, **extra) -> SynthSpec:
    coeffs = None
    if req.coeff_timecourses is not None:
        coeffs = np.array(req.coeff_timecourses, dtype=float)
    return SynthSpec(
        montage=montage_from_payload(req.montage),
        n_samples=req.n_samples,
        sfreq=req.sfreq,
        coeff_timecourses=coeffs,
        degree_amplitudes=tuple(req.degree_amplitudes),
        noise_sigma=req.noise_sigma,
        seed=req.seed,
        **extra,
    )


def synth_field_handler(req: sc.SynthFieldRequest) -> sc.SignalPayload:
    return signal_to_payload(synth_field(_spec_from_request(req)))


def synth_epochs_handler(req: sc.SynthEpochsRequest) -> sc.EpochSetPayload:
    spec = _spec_from_request(
        req,
        n_subjects=req.n_subjects,
        n_epochs_per_subject=req.n_epochs_per_subject,
        subject_mixing=req.subject_mixing,
        label_coeff=req.label_coeff,
        label_offset=req.label_offset,
    )
    return epochs_to_payload(synth_epochs(spec))


def _report_out(result: BenchResult, q: float) -> sc.StatsReportOut:
    report = stats_report(result, q)
    return sc.StatsReportOut(
        pairs=[sc.PairReportOut(
            method_a=p.method_a, method_b=p.method_b, n=p.n, w=p.w,
            p_raw=p.p_raw, p_adj=p.p_adj, d=p.d, reject=p.reject, note=p.note)
            for p in report.pairs],
        friedman_chi2=report.friedman_chi2,
        friedman_p=report.friedman_p,
        within_1pp=report.within_1pp,
        q=report.q,
    )


def bench_run(req: sc.BenchRequest) -> sc.BenchResponse:
    config = BenchConfig(
        methods=tuple(req.methods),
        source_montage=req.source_montage,
        target_montage=req.target_montage,
        exclude_target_channels=req.exclude_target_channels,
        n_seeds=req.n_seeds,
        n_subjects=req.n_subjects,
        train_subjects=req.train_subjects,
        n_epochs_per_subject=req.n_epochs_per_subject,
        n_samples=req.n_samples,
        sfreq=req.sfreq,
        noise_sigma=req.noise_sigma,
        degree_amplitudes=tuple(req.degree_amplitudes),
        label_coeff=req.label_coeff,
        label_offset=req.label_offset,
        subject_mixing=req.subject_mixing,
        ridge_alpha=req.ridge_alpha,
        q=req.q,
        seed=req.seed,
    )
    result = run_benchmark(config)
    return sc.BenchResponse(
        rows=[sc.BenchRow(method=m, seed=s, balanced_accuracy=a)
              for m, s, a in result.rows],
        failures=[f"{m} seed {s}: {msg}" for m, s, msg in result.failures],
        report=_report_out(result, req.q),
    )


def stats_from_rows(req: sc.StatsRequest) -> sc.StatsReportOut:
    if not req.rows:
        raise UsageError("stats request contains no rows")
    result = BenchResult(tuple((r.method, r.seed, r.balanced_accuracy) for r in req.rows))
    return _report_out(result, req.q)
