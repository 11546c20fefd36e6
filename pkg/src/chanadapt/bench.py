"""Seed-replicated synthetic benchmark for adapter comparison.

Per seed: synthetic subject-tagged epochs are generated on a source
montage, each configured adapter is fit on the training subjects, a
ridge linear classifier is trained on per-channel features of the
adapted training epochs, and balanced accuracy is scored on the held-out
subjects. Scores feed the statistical battery: pairwise Wilcoxon with
Benjamini-Hochberg correction, a Friedman test across methods, Cohen's
d, and the within-1-point tie fraction.

The default task is a smooth-field montage transfer: the class label
rides on a low-order field coefficient, the source montage (by default
the 10-10 cap minus the target's electrodes) shares no labels with the
target, so the label-matching zero-pad baseline feeds the classifier
silence while geometry-aware adapters reconstruct the field.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .basis import sh_basis_matrix
from .errors import DomainError, FormatError, NumericalError, UsageError
from .geometry import Montage, builtin_montage, load_montage
from .harmonic import HarmonicConfig, harmonic_matrix
from .learned import lsq_fit, projection_to_matrix
from .oracle import SynthSpec, synth_epochs_with_coeffs
from .pipeline import AdaptationMatrix, EpochSet, Signal, apply, identity_matrix
from .riemannian import RiemannianConfig, recenter_matrix
from .ssi import SplineConfig, ssi_matrix
from . import stats

__all__ = [
    "BenchConfig",
    "BenchResult",
    "PairReport",
    "StatsReport",
    "run_benchmark",
    "stats_report",
    "parse_bench_config",
    "results_to_csv",
    "results_from_csv",
    "report_to_csv",
    "report_from_csv",
    "format_report",
]

KNOWN_METHODS = ("identity", "ssi", "harmonic", "harmonic_ls", "conv1d", "riemannian")


@dataclass(frozen=True)
class BenchConfig:
    """Benchmark recipe; see parse_bench_config for the file schema."""

    methods: tuple[str, ...] = ("ssi", "identity")
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
    degree_amplitudes: tuple[float, ...] = (1.0, 0.8, 0.6, 0.4)
    label_coeff: int = 0
    label_offset: float = 1.0
    subject_mixing: str = "none"
    ridge_alpha: float = 1.0
    q: float = 0.05
    seed: int = 0
    output: str = "bench"

    def __post_init__(self) -> None:
        if not self.methods:
            raise DomainError("benchmark needs at least one method")
        for m in self.methods:
            if m not in KNOWN_METHODS:
                raise UsageError(f"unknown method {m!r}; expected one of {KNOWN_METHODS}")
        if self.n_seeds < 1:
            raise DomainError(f"n_seeds must be >= 1, got {self.n_seeds}")
        if not 1 <= self.train_subjects < self.n_subjects:
            raise DomainError(
                f"train_subjects must be in [1, n_subjects), got "
                f"{self.train_subjects} of {self.n_subjects}")


@dataclass(frozen=True)
class BenchResult:
    """Per-seed scores plus any per-method fitting failures."""

    rows: tuple[tuple[str, int, float], ...]  # (method, seed, balanced_accuracy)
    failures: tuple[tuple[str, int, str], ...] = ()

    def scores(self, method: str) -> np.ndarray:
        return np.array([acc for m, _, acc in self.rows if m == method])

    @property
    def methods(self) -> list[str]:
        seen: dict[str, None] = {}
        for m, _, _ in self.rows:
            seen.setdefault(m)
        return list(seen)


@dataclass(frozen=True)
class PairReport:
    method_a: str
    method_b: str
    n: int
    w: float | None
    p_raw: float | None
    p_adj: float | None
    d: float | None
    reject: bool
    note: str = ""


@dataclass(frozen=True)
class StatsReport:
    pairs: tuple[PairReport, ...]
    friedman_chi2: float | None
    friedman_p: float | None
    within_1pp: float
    q: float


def _resolve_montage(spec: str) -> Montage:
    import os

    if os.path.exists(spec):
        return load_montage(spec)
    return builtin_montage(spec)


def _features(epochs: list[Signal]) -> np.ndarray:
    """Per-channel time means; the label coefficient shifts channel means."""
    return np.array([e.data.mean(axis=1) for e in epochs])


def _ridge_classifier(train_x: np.ndarray, train_y: np.ndarray,
                      alpha: float) -> np.ndarray:
    """Closed-form ridge regression on +/-1 targets with intercept."""
    aug = np.hstack([train_x, np.ones((train_x.shape[0], 1))])
    targets = np.where(train_y > 0, 1.0, -1.0)
    penalty = alpha * np.eye(aug.shape[1])
    penalty[-1, -1] = 0.0
    return np.linalg.solve(aug.T @ aug + penalty, aug.T @ targets)


def _balanced_accuracy(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    recalls = []
    for cls in np.unique(y_true):
        mask = y_true == cls
        recalls.append(float(np.mean(y_pred[mask] == cls)))
    return float(np.mean(recalls))


def _fit_adapter(method: str, source: Montage, target: Montage,
                 train: EpochSet, train_coeffs: np.ndarray,
                 target_basis: np.ndarray) -> AdaptationMatrix | None:
    """Adapter matrix for the training split; None means per-subject fitting."""
    if method == "identity":
        return identity_matrix(source.labels, target.labels)
    if method == "ssi":
        return ssi_matrix(source, target, SplineConfig())
    if method == "harmonic":
        return harmonic_matrix(source, HarmonicConfig(mode="evaluate"))
    if method == "harmonic_ls":
        return harmonic_matrix(source, HarmonicConfig(mode="least_squares"))
    if method == "conv1d":
        # closed-form fit against the oracle's clean target-montage signals
        x_s = np.hstack([e.data for e in train.epochs])
        x_t = np.hstack([target_basis.T @ c for c in train_coeffs])
        proj = lsq_fit(x_s, x_t, ridge=1e-6)
        return projection_to_matrix(proj, source.labels, target.labels,
                                    {"fit": "lsq against oracle reference"})
    if method == "riemannian":
        return None
    raise UsageError(f"unknown method {method!r}")


def _adapt_split(method: str, matrix: AdaptationMatrix | None,
                 split: EpochSet, base: AdaptationMatrix | None,
                 cfg: RiemannianConfig) -> list[Signal]:
    if method != "riemannian":
        return [apply(matrix, e) for e in split.epochs]
    # per-subject transductive whitening after the base map
    out: list[Signal] = [None] * len(split)  # type: ignore[list-item]
    for subject in split.subjects:
        idx = [i for i, s in enumerate(split.subject_ids) if s == subject]
        sub = split.for_subject(subject)
        m = recenter_matrix(sub, base, cfg)
        for i in idx:
            out[i] = apply(m, split.epochs[i])
    return out


def run_benchmark(config: BenchConfig) -> BenchResult:
    source = _resolve_montage(config.source_montage)
    target = _resolve_montage(config.target_montage)
    if config.exclude_target_channels:
        target_keys = set(target.keys)
        keep = [lab for lab, key in zip(source.labels, source.keys) if key not in target_keys]
        if len(keep) < 3:
            raise DomainError(
                "source montage has too few channels left after excluding target labels")
        source = source.subset(keep, name=source.name + "_minus_target")
    target_basis: np.ndarray | None = None
    riem_cfg = RiemannianConfig()

    rows: list[tuple[str, int, float]] = []
    failures: list[tuple[str, int, str]] = []
    for seed_idx in range(config.n_seeds):
        spec = SynthSpec(
            montage=source,
            n_samples=config.n_samples,
            sfreq=config.sfreq,
            degree_amplitudes=config.degree_amplitudes,
            noise_sigma=config.noise_sigma,
            n_subjects=config.n_subjects,
            n_epochs_per_subject=config.n_epochs_per_subject,
            subject_mixing=config.subject_mixing,
            label_coeff=config.label_coeff,
            label_offset=config.label_offset,
            seed=config.seed * 100003 + seed_idx,
        )
        epochs, coeffs = synth_epochs_with_coeffs(spec)
        if target_basis is None:
            target_basis = sh_basis_matrix(target, spec.l_max)
        train_subjects = {f"s{j}" for j in range(config.train_subjects)}
        train_idx = [i for i, s in enumerate(epochs.subject_ids) if s in train_subjects]
        test_idx = [i for i, s in enumerate(epochs.subject_ids) if s not in train_subjects]
        train = EpochSet([epochs.epochs[i] for i in train_idx],
                         [epochs.subject_ids[i] for i in train_idx],
                         [epochs.class_labels[i] for i in train_idx])
        test = EpochSet([epochs.epochs[i] for i in test_idx],
                        [epochs.subject_ids[i] for i in test_idx],
                        [epochs.class_labels[i] for i in test_idx])
        train_coeffs = coeffs[train_idx]

        ssi_base: AdaptationMatrix | None = None
        for method in config.methods:
            try:
                if method == "riemannian" and ssi_base is None:
                    ssi_base = ssi_matrix(source, target, SplineConfig())
                matrix = _fit_adapter(method, source, target, train, train_coeffs,
                                      target_basis)
                adapted_train = _adapt_split(method, matrix, train, ssi_base, riem_cfg)
                adapted_test = _adapt_split(method, matrix, test, ssi_base, riem_cfg)
                weights = _ridge_classifier(_features(adapted_train),
                                            np.array(train.class_labels),
                                            config.ridge_alpha)
                feats = np.hstack([_features(adapted_test),
                                   np.ones((len(adapted_test), 1))])
                pred = (feats @ weights >= 0).astype(int)
                acc = _balanced_accuracy(np.array(test.class_labels), pred)
                rows.append((method, seed_idx, acc))
            except (NumericalError, DomainError) as exc:
                failures.append((method, seed_idx, str(exc)))
    return BenchResult(tuple(rows), tuple(failures))


def stats_report(result: BenchResult, q: float = 0.05) -> StatsReport:
    """Pairwise Wilcoxon + BH, Friedman across methods, d, tie fraction."""
    methods = result.methods
    per_method = {m: result.scores(m) for m in methods}
    pairs: list[PairReport] = []
    testable: list[int] = []
    pvals: list[float] = []
    for i in range(len(methods)):
        for j in range(i + 1, len(methods)):
            a, b = methods[i], methods[j]
            sa, sb = per_method[a], per_method[b]
            n = min(sa.size, sb.size)
            if n == 0:
                pairs.append(PairReport(a, b, 0, None, None, None, None, False,
                                        "no shared seeds"))
                continue
            sa, sb = sa[:n], sb[:n]
            try:
                d = stats.cohens_d(sa, sb)
            except NumericalError:
                d = None
            try:
                w, p = stats.wilcoxon_signed_rank(stats.PairedSamples(sa, sb))
            except NumericalError as exc:
                pairs.append(PairReport(a, b, n, None, None, None, d, False, str(exc)))
                continue
            testable.append(len(pairs))
            pvals.append(p)
            pairs.append(PairReport(a, b, n, w, p, None, d, False))
    if pvals:
        reject, adjusted = stats.bh_correct(np.array(pvals), q)
        for k, idx in enumerate(testable):
            pr = pairs[idx]
            pairs[idx] = PairReport(pr.method_a, pr.method_b, pr.n, pr.w, pr.p_raw,
                                    float(adjusted[k]), pr.d, bool(reject[k]), pr.note)
    chi2 = p_f = None
    seeds = sorted({s for _, s, _ in result.rows})
    if len(methods) >= 2 and len(seeds) >= 2:
        table = np.full((len(seeds), len(methods)), np.nan)
        for m_i, m in enumerate(methods):
            for mm, s, acc in result.rows:
                if mm == m:
                    table[seeds.index(s), m_i] = acc
        if np.all(np.isfinite(table)):
            chi2, p_f = stats.friedman(table)
            within = stats.within_1pp_fraction(100.0 * table.T)
        else:
            within = float("nan")
    else:
        within = 1.0 if len(methods) >= 2 else 0.0
    return StatsReport(tuple(pairs), chi2, p_f, within, q)


# ---------------------------------------------------------------------------
# config file and CSV round trips

_CONFIG_KEYS = {f.name for f in BenchConfig.__dataclass_fields__.values()}  # type: ignore[attr-defined]


def parse_bench_config(text: str) -> BenchConfig:
    """Flat ``key = value`` config, ``#`` comments; keys mirror BenchConfig.

    List values (methods, degree_amplitudes) are comma-separated;
    booleans accept true/false/yes/no/1/0.
    """
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise FormatError(f"config line {lineno}: expected 'key = value'")
        key, value = body.split("=", 1)
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise FormatError(f"config line {lineno}: unknown key {key!r}")
        raw[key] = value.strip()
    kwargs: dict = {}
    for key, value in raw.items():
        if key in ("methods",):
            kwargs[key] = tuple(v.strip() for v in value.split(",") if v.strip())
        elif key == "degree_amplitudes":
            kwargs[key] = tuple(float(v) for v in value.split(","))
        elif key == "exclude_target_channels":
            low = value.lower()
            if low not in ("true", "false", "yes", "no", "1", "0"):
                raise FormatError(f"bad boolean {value!r} for {key}")
            kwargs[key] = low in ("true", "yes", "1")
        elif key in ("n_seeds", "n_subjects", "train_subjects", "n_epochs_per_subject",
                     "n_samples", "label_coeff", "seed"):
            kwargs[key] = int(value)
        elif key in ("sfreq", "noise_sigma", "label_offset", "ridge_alpha", "q"):
            kwargs[key] = float(value)
        else:
            kwargs[key] = value
    return BenchConfig(**kwargs)


def results_to_csv(result: BenchResult) -> str:
    lines = ["method,seed,balanced_accuracy"]
    for method, seed, acc in result.rows:
        lines.append(f"{method},{seed},{acc!r}")
    return "\n".join(lines) + "\n"


def results_from_csv(text: str) -> BenchResult:
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines or lines[0].strip() != "method,seed,balanced_accuracy":
        raise FormatError("benchmark CSV must start with 'method,seed,balanced_accuracy'")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 3:
            raise FormatError(f"benchmark CSV line {lineno}: expected 3 fields")
        try:
            rows.append((parts[0], int(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise FormatError(f"benchmark CSV line {lineno}: {exc}") from None
    return BenchResult(tuple(rows))


def _opt(v) -> str:
    return "" if v is None else repr(v)


def report_to_csv(report: StatsReport) -> str:
    lines = ["method_a,method_b,n,W,p_raw,p_adj,cohens_d,reject,note"]
    for p in report.pairs:
        lines.append(",".join([
            p.method_a, p.method_b, str(p.n), _opt(p.w), _opt(p.p_raw), _opt(p.p_adj),
            _opt(p.d), "1" if p.reject else "0", p.note.replace(",", ";"),
        ]))
    lines.append(f"# friedman_chi2: {_opt(report.friedman_chi2)}")
    lines.append(f"# friedman_p: {_opt(report.friedman_p)}")
    lines.append(f"# within_1pp_fraction: {report.within_1pp!r}")
    lines.append(f"# q: {report.q!r}")
    return "\n".join(lines) + "\n"


def report_from_csv(text: str) -> StatsReport:
    pairs = []
    chi2 = p_f = None
    within = float("nan")
    q = 0.05
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines or not lines[0].startswith("method_a,method_b"):
        raise FormatError("stats CSV must start with its header line")
    for line in lines[1:]:
        if line.startswith("#"):
            body = line[1:].strip()
            key, _, value = body.partition(":")
            value = value.strip()
            if key == "friedman_chi2":
                chi2 = float(value) if value else None
            elif key == "friedman_p":
                p_f = float(value) if value else None
            elif key == "within_1pp_fraction":
                within = float(value)
            elif key == "q":
                q = float(value)
            continue
        parts = line.split(",")
        if len(parts) != 9:
            raise FormatError("stats CSV row must have 9 fields")
        pairs.append(PairReport(
            parts[0], parts[1], int(parts[2]),
            float(parts[3]) if parts[3] else None,
            float(parts[4]) if parts[4] else None,
            float(parts[5]) if parts[5] else None,
            float(parts[6]) if parts[6] else None,
            parts[7] == "1", parts[8]))
    return StatsReport(tuple(pairs), chi2, p_f, within, q)


def format_report(report: StatsReport, result: BenchResult | None = None) -> str:
    """Aligned text table for terminals."""
    out = io.StringIO()
    if result is not None:
        out.write("scores (mean +/- std over seeds)\n")
        for m in result.methods:
            s = result.scores(m)
            out.write(f"  {m:<12} {s.mean():.4f} +/- {s.std():.4f}  (n={s.size})\n")
        if result.failures:
            out.write("failures\n")
            for method, seed, msg in result.failures:
                out.write(f"  {method} seed {seed}: {msg}\n")
        out.write("\n")
    header = f"{'pair':<26}{'n':>4}{'W':>8}{'p_raw':>12}{'p_adj':>12}{'d':>9}  reject"
    out.write(header + "\n")

    def fmt(value, spec):
        return "-" if value is None else format(value, spec)

    for p in report.pairs:
        pair = f"{p.method_a} vs {p.method_b}"
        tail = p.note if p.note else ("yes" if p.reject else "no")
        out.write(f"{pair:<26}{p.n:>4}{fmt(p.w, '.1f'):>8}{fmt(p.p_raw, '.5g'):>12}"
                  f"{fmt(p.p_adj, '.5g'):>12}{fmt(p.d, '.3f'):>9}  {tail}\n")
    if report.friedman_chi2 is not None:
        out.write(f"\nfriedman: chi2 = {report.friedman_chi2:.4f}, "
                  f"p = {report.friedman_p:.5g}\n")
    out.write(f"within-1pp fraction: {report.within_1pp:.3f} (q = {report.q})\n")
    return out.getvalue()
