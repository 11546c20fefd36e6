"""The unified channel-adaptation pipeline.

Everything here revolves around one artifact: the adaptation matrix M
mapping a C_s-channel signal X_s to the C_t-channel representation
X_t = M X_s. All construction methods (learned projection, spline
interpolation, harmonic decomposition, Riemannian re-centering) produce
the same AdaptationMatrix type, so composition, application and
serialization are method-agnostic.

File formats
------------
Signal binary "EEGB": magic ``EEGB``, u16 version=1, u32 n_channels,
u32 n_samples, f64 sfreq, then per channel a u16 length-prefixed UTF-8
label, then channel-major little-endian f32 samples.

Signal CSV: optional ``# sfreq: <hz>`` comment, header ``label,s0,...``,
one channel per row.

Matrix CSV: ``#``-prefixed metadata lines (method, shape, labels,
config, provenance hash) followed by the matrix rows; floats are written
with shortest round-trip repr. Matrix binary "ADMX" round-trips matrix
entries bitwise and carries a CRC32 checksum.
"""

from __future__ import annotations

import binascii
import hashlib
import io
import logging
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.signal import firwin, resample_poly

from .errors import ChannelMismatchError, DomainError, FormatError, NumericalError

__all__ = [
    "AdaptationMatrix",
    "Signal",
    "EpochSet",
    "apply",
    "compose",
    "identity_matrix",
    "resample",
    "normalize",
    "save_matrix",
    "load_matrix",
    "save_signal",
    "load_signal",
    "NORMALIZE_MODES",
]

logger = logging.getLogger(__name__)

METHODS = ("conv1d", "ssi", "harmonic", "riemannian", "composed", "identity")
NORMALIZE_MODES = ("minmax", "zscore", "uv_scale")

_RESAMPLE_KAISER_BETA = 8.6
_RESAMPLE_CUTOFF = 0.9  # fraction of the lower Nyquist
_MAX_RATIO_DENOMINATOR = 1000


def _as_readonly(a: np.ndarray, dtype=float) -> np.ndarray:
    out = np.array(a, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class AdaptationMatrix:
    """A C_t x C_s linear channel map plus provenance.

    ``source_labels`` name the expected input channels (column order);
    ``target_descriptor`` names the output rows: electrode labels for
    montage-space maps, harmonic-index names ("Y1-1", ...) for
    coefficient-space maps. ``bias`` is present only on learned maps and
    their compositions; fixed geometric constructions are bias-free.
    """

    matrix: np.ndarray
    method: str
    source_labels: Sequence[str]
    target_descriptor: Sequence[str]
    metadata: Mapping[str, str] = field(default_factory=dict)
    bias: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}; expected one of {METHODS}")
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2:
            raise DomainError(f"matrix must be 2-D, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NumericalError("matrix contains non-finite entries")
        src = tuple(str(s) for s in self.source_labels)
        tgt = tuple(str(t) for t in self.target_descriptor)
        if m.shape != (len(tgt), len(src)):
            raise DomainError(
                f"matrix shape {m.shape} does not match descriptors "
                f"({len(tgt)} targets, {len(src)} sources)")
        bias = self.bias
        if bias is not None:
            bias = np.asarray(bias, dtype=float)
            if bias.shape != (len(tgt),):
                raise DomainError(f"bias length {bias.shape} != target count {len(tgt)}")
            if not np.all(np.isfinite(bias)):
                raise NumericalError("bias contains non-finite entries")
            object.__setattr__(self, "bias", _as_readonly(bias))
        object.__setattr__(self, "matrix", _as_readonly(m))
        object.__setattr__(self, "source_labels", src)
        object.__setattr__(self, "target_descriptor", tgt)
        object.__setattr__(self, "metadata", dict(self.metadata))

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def source_keys(self) -> list[str]:
        return [s.upper() for s in self.source_labels]

    @property
    def target_keys(self) -> list[str]:
        return [t.upper() for t in self.target_descriptor]


@dataclass(frozen=True)
class Signal:
    """A C x T sample matrix with sampling rate and channel labels."""

    data: np.ndarray
    sfreq: float
    labels: Sequence[str]

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2:
            raise DomainError(f"signal data must be 2-D (C x T), got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise NumericalError("signal contains non-finite samples")
        if not self.sfreq > 0:
            raise DomainError(f"sfreq must be > 0, got {self.sfreq}")
        labels = tuple(str(l) for l in self.labels)
        if len(labels) != data.shape[0]:
            raise DomainError(
                f"{len(labels)} labels for {data.shape[0]} channels")
        keys = [l.upper() for l in labels]
        if len(set(keys)) != len(keys):
            raise DomainError("duplicate channel labels in signal")
        object.__setattr__(self, "data", _as_readonly(data))
        object.__setattr__(self, "sfreq", float(self.sfreq))
        object.__setattr__(self, "labels", labels)

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def keys(self) -> list[str]:
        return [l.upper() for l in self.labels]


@dataclass(frozen=True)
class EpochSet:
    """Equal-shape signal epochs tagged by subject, optionally labeled."""

    epochs: Sequence[Signal]
    subject_ids: Sequence[str]
    class_labels: Sequence[int] | None = None

    def __post_init__(self) -> None:
        epochs = tuple(self.epochs)
        if not epochs:
            raise DomainError("epoch set must contain at least one epoch")
        ref = epochs[0]
        for i, e in enumerate(epochs[1:], start=1):
            if e.data.shape != ref.data.shape or e.keys != ref.keys or e.sfreq != ref.sfreq:
                raise DomainError(f"epoch {i} differs in shape, labels or sfreq")
        subject_ids = tuple(str(s) for s in self.subject_ids)
        if len(subject_ids) != len(epochs):
            raise DomainError(
                f"{len(subject_ids)} subject ids for {len(epochs)} epochs")
        labels = self.class_labels
        if labels is not None:
            labels = tuple(int(v) for v in labels)
            if len(labels) != len(epochs):
                raise DomainError(f"{len(labels)} class labels for {len(epochs)} epochs")
        object.__setattr__(self, "epochs", epochs)
        object.__setattr__(self, "subject_ids", subject_ids)
        object.__setattr__(self, "class_labels", labels)

    def __len__(self) -> int:
        return len(self.epochs)

    @property
    def subjects(self) -> list[str]:
        seen: dict[str, None] = {}
        for s in self.subject_ids:
            seen.setdefault(s)
        return list(seen)

    def for_subject(self, subject: str) -> "EpochSet":
        idx = [i for i, s in enumerate(self.subject_ids) if s == subject]
        if not idx:
            raise DomainError(f"no epochs for subject {subject!r}")
        return EpochSet(
            [self.epochs[i] for i in idx],
            [subject] * len(idx),
            None if self.class_labels is None else [self.class_labels[i] for i in idx],
        )


def apply(m: AdaptationMatrix, x: Signal) -> Signal:
    """X_t = M X_s (+ bias, for learned maps).

    Channels may arrive in any order; they are matched to
    ``m.source_labels`` case-insensitively and reordered automatically.
    Missing or extra channels are an error that names the labels. The
    multiplication gathers columns and channels in sorted-label order, so
    the result is bitwise independent of both the signal's and the
    matrix's channel ordering.
    """
    src_keys = m.source_keys
    sig_keys = x.keys
    if sig_keys == src_keys:
        row_of = list(range(len(src_keys)))
    else:
        pos = {k: i for i, k in enumerate(sig_keys)}
        missing = [lab for lab, k in zip(m.source_labels, src_keys) if k not in pos]
        extra = [lab for lab, k in zip(x.labels, sig_keys) if k not in set(src_keys)]
        if missing or extra:
            parts = []
            if missing:
                parts.append("missing channels: " + ", ".join(missing))
            if extra:
                parts.append("unexpected channels: " + ", ".join(extra))
            raise ChannelMismatchError("; ".join(parts))
        row_of = [pos[k] for k in src_keys]
        logger.info("apply: reordered %d channels to match matrix source order",
                    len(row_of))
    if len(set(src_keys)) == len(src_keys):
        canonical = sorted(range(len(src_keys)), key=src_keys.__getitem__)
    else:
        canonical = list(range(len(src_keys)))
    out = m.matrix[:, canonical] @ x.data[[row_of[c] for c in canonical]]
    if m.bias is not None:
        out = out + m.bias[:, None]
    return Signal(out, x.sfreq, m.target_descriptor)


def compose(outer: AdaptationMatrix, inner: AdaptationMatrix) -> AdaptationMatrix:
    """Matrix of applying ``inner`` then ``outer``; provenance is chained."""
    if outer.source_keys != inner.target_keys:
        raise ChannelMismatchError(
            f"cannot compose: outer expects [{', '.join(outer.source_labels)}], "
            f"inner produces [{', '.join(inner.target_descriptor)}]")
    matrix = outer.matrix @ inner.matrix
    bias = None
    if inner.bias is not None:
        bias = outer.matrix @ inner.bias
    if outer.bias is not None:
        bias = outer.bias if bias is None else bias + outer.bias
    metadata = {"chain": f"{outer.method}({inner.method})"}
    for prefix, part in (("outer", outer), ("inner", inner)):
        metadata[f"{prefix}.method"] = part.method
        for k, v in part.metadata.items():
            metadata[f"{prefix}.{k}"] = v
    return AdaptationMatrix(
        matrix=matrix,
        method="composed",
        source_labels=inner.source_labels,
        target_descriptor=outer.target_descriptor,
        metadata=metadata,
        bias=bias,
    )


def identity_matrix(source_labels: Sequence[str],
                    target_labels: Sequence[str] | None = None) -> AdaptationMatrix:
    """Label-matching identity with zero rows for unmatched target channels.

    With no target this is the exact identity; otherwise target channel t
    copies the like-named source channel when present and is zero-padded
    when not (the naive cross-montage baseline).
    """
    src = [str(s) for s in source_labels]
    tgt = src if target_labels is None else [str(t) for t in target_labels]
    pos = {s.upper(): i for i, s in enumerate(src)}
    matrix = np.zeros((len(tgt), len(src)))
    matched = 0
    for r, t in enumerate(tgt):
        i = pos.get(t.upper())
        if i is not None:
            matrix[r, i] = 1.0
            matched += 1
    return AdaptationMatrix(
        matrix=matrix,
        method="identity",
        source_labels=src,
        target_descriptor=tgt,
        metadata={"matched_channels": str(matched)},
    )


def _resample_filter(up: int, down: int) -> np.ndarray:
    """Windowed-sinc anti-alias filter for polyphase resampling.

    Kaiser window beta=8.6, cutoff 0.9x the lower Nyquist. Each polyphase
    branch is normalized to unit DC gain so constant signals survive any
    ratio exactly; the result is pre-divided by ``up`` because
    resample_poly scales user filters by ``up`` internally.
    """
    max_rate = max(up, down)
    half_len = 10 * max_rate
    h = firwin(2 * half_len + 1, _RESAMPLE_CUTOFF / max_rate,
               window=("kaiser", _RESAMPLE_KAISER_BETA))
    padded = np.zeros(int(np.ceil(h.size / up)) * up)
    padded[: h.size] = h
    branches = padded.reshape(-1, up)
    branches /= branches.sum(axis=0)
    return padded[: h.size] / up


def resample(x: Signal, new_sfreq: float) -> Signal:
    """Polyphase resampling to ``new_sfreq``; per-channel independent."""
    if not new_sfreq > 0:
        raise DomainError(f"new_sfreq must be > 0, got {new_sfreq}")
    if new_sfreq == x.sfreq:
        return Signal(x.data.copy(), x.sfreq, x.labels)
    frac = Fraction(new_sfreq / x.sfreq).limit_denominator(_MAX_RATIO_DENOMINATOR)
    if abs(float(frac) - new_sfreq / x.sfreq) > 1e-9 * (new_sfreq / x.sfreq):
        raise DomainError(
            f"resampling ratio {new_sfreq}/{x.sfreq} has no rational approximation "
            f"with denominator <= {_MAX_RATIO_DENOMINATOR}")
    up, down = frac.numerator, frac.denominator
    h = _resample_filter(up, down)
    out = resample_poly(x.data, up, down, axis=1, window=h, padtype="line")
    n_out = int(round(x.n_samples * up / down))
    return Signal(out[:, :n_out], new_sfreq, x.labels)


def normalize(x: Signal, mode: str) -> Signal:
    """Per-channel min-max to [-1, 1], per-channel z-score, or division by 100."""
    if mode not in NORMALIZE_MODES:
        raise DomainError(f"unknown normalization mode {mode!r}; expected one of {NORMALIZE_MODES}")
    data = x.data
    if mode == "uv_scale":
        return Signal(data / 100.0, x.sfreq, x.labels)
    if mode == "minmax":
        lo = data.min(axis=1, keepdims=True)
        hi = data.max(axis=1, keepdims=True)
        span = hi - lo
        bad = np.nonzero(span.ravel() == 0.0)[0]
        if bad.size:
            raise NumericalError(
                "minmax: constant channel(s): " + ", ".join(x.labels[i] for i in bad))
        return Signal(2.0 * (data - lo) / span - 1.0, x.sfreq, x.labels)
    mean = data.mean(axis=1, keepdims=True)
    std = data.std(axis=1, keepdims=True)
    bad = np.nonzero(std.ravel() == 0.0)[0]
    if bad.size:
        raise NumericalError(
            "zscore: zero-variance channel(s): " + ", ".join(x.labels[i] for i in bad))
    return Signal((data - mean) / std, x.sfreq, x.labels)


# ---------------------------------------------------------------------------
# serialization

_EEGB_MAGIC = b"EEGB"
_ADMX_MAGIC = b"ADMX"
_VERSION = 1


def _matrix_digest(m: AdaptationMatrix) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(m.matrix).tobytes())
    if m.bias is not None:
        h.update(np.ascontiguousarray(m.bias).tobytes())
    return "sha256:" + h.hexdigest()


def _write_str(buf: io.BytesIO, s: str) -> None:
    raw = s.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise FormatError(f"string too long for format: {len(raw)} bytes")
    buf.write(struct.pack("<H", len(raw)))
    buf.write(raw)


class _Reader:
    def __init__(self, raw: bytes, what: str):
        self.raw = raw
        self.pos = 0
        self.what = what

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.raw):
            raise FormatError(f"truncated {self.what} file")
        out = self.raw[self.pos: self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack("<" + fmt, self.take(struct.calcsize("<" + fmt)))

    def read_str(self) -> str:
        (n,) = self.unpack("H")
        return self.take(n).decode("utf-8")


def save_matrix(m: AdaptationMatrix, path: str, fmt: str = "binary") -> None:
    """Write an adaptation matrix as ``binary`` (ADMX) or ``csv``."""
    if fmt == "binary":
        with open(path, "wb") as fh:
            fh.write(_matrix_to_admx(m))
    elif fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(matrix_to_csv(m))
    else:
        raise DomainError(f"unknown matrix format {fmt!r}; expected 'binary' or 'csv'")


def load_matrix(path: str) -> AdaptationMatrix:
    """Read a matrix saved by save_matrix; the format is sniffed."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] == _ADMX_MAGIC:
        return _matrix_from_admx(raw)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise FormatError("not an ADMX or matrix-CSV file") from None
    return matrix_from_csv(text)


def _matrix_to_admx(m: AdaptationMatrix) -> bytes:
    body = io.BytesIO()
    rows, cols = m.shape
    body.write(struct.pack("<HII", _VERSION, rows, cols))
    _write_str(body, m.method)
    for lab in m.source_labels:
        _write_str(body, lab)
    for tgt in m.target_descriptor:
        _write_str(body, tgt)
    body.write(struct.pack("<I", len(m.metadata)))
    for k, v in m.metadata.items():
        _write_str(body, k)
        _write_str(body, v)
    body.write(struct.pack("<B", 1 if m.bias is not None else 0))
    if m.bias is not None:
        body.write(np.ascontiguousarray(m.bias, dtype="<f8").tobytes())
    body.write(np.ascontiguousarray(m.matrix, dtype="<f8").tobytes())
    payload = body.getvalue()
    crc = binascii.crc32(payload) & 0xFFFFFFFF
    return _ADMX_MAGIC + payload + struct.pack("<I", crc)


def _matrix_from_admx(raw: bytes) -> AdaptationMatrix:
    if len(raw) < 8:
        raise FormatError("truncated matrix file")
    payload, (crc,) = raw[4:-4], struct.unpack("<I", raw[-4:])
    if binascii.crc32(payload) & 0xFFFFFFFF != crc:
        raise FormatError("matrix file checksum mismatch")
    r = _Reader(payload, "matrix")
    version, rows, cols = r.unpack("HII")
    if version != _VERSION:
        raise FormatError(f"unsupported matrix format version {version}")
    method = r.read_str()
    source = [r.read_str() for _ in range(cols)]
    target = [r.read_str() for _ in range(rows)]
    (n_meta,) = r.unpack("I")
    metadata = {}
    for _ in range(n_meta):
        k = r.read_str()
        metadata[k] = r.read_str()
    (has_bias,) = r.unpack("B")
    bias = None
    if has_bias:
        bias = np.frombuffer(r.take(8 * rows), dtype="<f8").copy()
    matrix = np.frombuffer(r.take(8 * rows * cols), dtype="<f8").reshape(rows, cols).copy()
    if r.pos != len(payload):
        raise FormatError("trailing bytes in matrix file")
    return AdaptationMatrix(matrix, method, source, target, metadata, bias)


def matrix_to_csv(m: AdaptationMatrix) -> str:
    rows, cols = m.shape
    lines = [
        "# chanadapt matrix v1",
        f"# method: {m.method}",
        f"# shape: {rows}x{cols}",
        "# source_labels: " + ",".join(m.source_labels),
        "# target: " + ",".join(m.target_descriptor),
    ]
    for k, v in m.metadata.items():
        lines.append(f"# meta {k}={v}")
    if m.bias is not None:
        lines.append("# bias: " + ",".join(repr(float(v)) for v in m.bias))
    lines.append(f"# provenance: {_matrix_digest(m)}")
    for row in m.matrix:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def matrix_from_csv(text: str) -> AdaptationMatrix:
    method = None
    shape = None
    source: list[str] | None = None
    target: list[str] | None = None
    metadata: dict[str, str] = {}
    bias = None
    digest = None
    rows: list[list[float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("method:"):
                method = body.split(":", 1)[1].strip()
            elif body.startswith("shape:"):
                try:
                    r, c = body.split(":", 1)[1].strip().split("x")
                    shape = (int(r), int(c))
                except ValueError:
                    raise FormatError(f"line {lineno}: malformed shape") from None
            elif body.startswith("source_labels:"):
                source = [s.strip() for s in body.split(":", 1)[1].split(",")]
            elif body.startswith("target:"):
                target = [s.strip() for s in body.split(":", 1)[1].split(",")]
            elif body.startswith("meta "):
                kv = body[5:]
                if "=" not in kv:
                    raise FormatError(f"line {lineno}: malformed metadata line")
                k, v = kv.split("=", 1)
                metadata[k.strip()] = v.strip()
            elif body.startswith("bias:"):
                bias = [float(v) for v in body.split(":", 1)[1].split(",")]
            elif body.startswith("provenance:"):
                digest = body.split(":", 1)[1].strip()
            continue
        try:
            rows.append([float(v) for v in line.split(",")])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: malformed matrix row: {exc}") from None
    if method is None or source is None or target is None:
        raise FormatError("matrix CSV is missing method/source_labels/target headers")
    if shape is not None and shape != (len(rows), len(rows[0]) if rows else 0):
        raise FormatError(
            f"matrix CSV declares shape {shape[0]}x{shape[1]} but has "
            f"{len(rows)} rows")
    matrix = np.array(rows, dtype=float) if rows else np.zeros((0, len(source)))
    out = AdaptationMatrix(matrix, method, source, target, metadata,
                           None if bias is None else np.array(bias))
    if digest is not None and _matrix_digest(out) != digest:
        raise FormatError("matrix CSV provenance hash mismatch")
    return out


def save_signal(x: Signal, path: str, fmt: str = "binary") -> None:
    """Write a signal as ``binary`` (EEGB, f32 samples) or ``csv``."""
    if fmt == "binary":
        with open(path, "wb") as fh:
            fh.write(signal_to_eegb(x))
    elif fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(signal_to_csv(x))
    else:
        raise DomainError(f"unknown signal format {fmt!r}; expected 'binary' or 'csv'")


def load_signal(path: str) -> Signal:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] == _EEGB_MAGIC:
        return signal_from_eegb(raw)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise FormatError("not an EEGB or signal-CSV file") from None
    return signal_from_csv(text)


def signal_to_eegb(x: Signal) -> bytes:
    buf = io.BytesIO()
    buf.write(_EEGB_MAGIC)
    buf.write(struct.pack("<HIId", _VERSION, x.n_channels, x.n_samples, x.sfreq))
    for lab in x.labels:
        _write_str(buf, lab)
    buf.write(np.ascontiguousarray(x.data, dtype="<f4").tobytes())
    return buf.getvalue()


def signal_from_eegb(raw: bytes) -> Signal:
    if raw[:4] != _EEGB_MAGIC:
        raise FormatError("missing EEGB magic")
    r = _Reader(raw[4:], "signal")
    version, n_channels, n_samples, sfreq = r.unpack("HIId")
    if version != _VERSION:
        raise FormatError(f"unsupported EEGB version {version}")
    labels = [r.read_str() for _ in range(n_channels)]
    data = np.frombuffer(r.take(4 * n_channels * n_samples), dtype="<f4")
    if r.pos != len(raw) - 4:
        raise FormatError("trailing bytes in EEGB file")
    return Signal(data.reshape(n_channels, n_samples).astype(float), sfreq, labels)


def signal_to_csv(x: Signal) -> str:
    lines = [f"# sfreq: {x.sfreq!r}",
             "label," + ",".join(f"s{i}" for i in range(x.n_samples))]
    for lab, row in zip(x.labels, x.data):
        lines.append(lab + "," + ",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def signal_from_csv(text: str, sfreq: float | None = None) -> Signal:
    labels = []
    rows = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("sfreq:"):
                sfreq = float(body.split(":", 1)[1])
            continue
        if not header_seen:
            if not line.lower().startswith("label,"):
                raise FormatError(f"line {lineno}: expected 'label,s0,...' header")
            header_seen = True
            continue
        fields = line.split(",")
        labels.append(fields[0].strip())
        try:
            rows.append([float(v) for v in fields[1:]])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: malformed sample: {exc}") from None
    if not header_seen or not rows:
        raise FormatError("signal CSV has no header or no channels")
    if sfreq is None:
        raise FormatError("signal CSV lacks a '# sfreq:' line and no sfreq was given")
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise FormatError("signal CSV rows have unequal sample counts")
    return Signal(np.array(rows, dtype=float), sfreq, labels)
