"""``adapt``: command-line front end.

A thin client of the service layer in ``handlers``: subcommands parse
arguments and files, build the same pydantic requests the HTTP API
accepts, and write the responses back to disk. No numerics live here.

Exit codes: 0 ok, 1 runtime error, 2 usage error. Errors are single
lines on stderr prefixed with ``error:``; stdout carries only data.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone

from . import handlers
from . import schemas as sc
from .bench import (BenchResult, PairReport, StatsReport, format_report,
                    parse_bench_config, report_to_csv, results_from_csv,
                    results_to_csv)
from .errors import ChanAdaptError, UsageError
from .pipeline import load_matrix, load_signal, save_matrix, save_signal

MATRIX_METHODS = ("conv1d", "ssi", "harmonic", "riemannian", "identity")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> "argparse.NoReturn":  # type: ignore[name-defined]
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _build_parser() -> _Parser:
    parser = _Parser(prog="adapt", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="deterministic seed")
    parser.add_argument("--quiet", action="store_true", help="suppress progress text")
    parser.add_argument("--format", choices=("csv", "binary"), default="binary",
                        help="output file format for matrices and signals")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit the created-at metadata line (byte-stable outputs)")
    sub = parser.add_subparsers(dest="command", required=True)

    montage = sub.add_parser("montage", help="inspect electrode layouts")
    montage_sub = montage.add_subparsers(dest="montage_command", required=True)
    montage_sub.add_parser("list", help="list builtin montages")
    show = montage_sub.add_parser("show", help="print a montage as CSV")
    show.add_argument("montage", help="builtin name or montage CSV path")

    matrix = sub.add_parser("matrix", help="compute an adaptation matrix")
    matrix.add_argument("--method", required=True, help="|".join(MATRIX_METHODS))
    matrix.add_argument("--source", required=True, help="source montage name or CSV path")
    matrix.add_argument("--target", help="target montage name or CSV path")
    matrix.add_argument("--cfg", action="append", default=[], metavar="K=V",
                        help="method parameter override (repeatable)")
    matrix.add_argument("--fit-signals", action="append", default=[], metavar="[SUBJ=]PATH",
                        help="fitting epochs; riemannian needs a subject prefix")
    matrix.add_argument("--fit-target", metavar="PATH",
                        help="reference signals for conv1d least-squares fitting")
    matrix.add_argument("--base", choices=("ssi", "identity"), default="ssi",
                        help="base map composed under riemannian re-centering")
    matrix.add_argument("-o", "--output", required=True)

    apply_p = sub.add_parser("apply", help="apply a matrix to a signal file")
    apply_p.add_argument("--matrix", required=True)
    apply_p.add_argument("-i", "--input", required=True)
    apply_p.add_argument("-o", "--output", required=True)

    pre = sub.add_parser("preprocess", help="resample and/or normalize a signal file")
    pre.add_argument("-i", "--input", required=True)
    pre.add_argument("-o", "--output", required=True)
    pre.add_argument("--resample", action="append", type=float, metavar="HZ", default=[])
    pre.add_argument("--normalize", action="append", metavar="MODE", default=[],
                     help="minmax|zscore|uv100")

    synth = sub.add_parser("synth", help="generate synthetic spherical-field signals")
    synth.add_argument("--montage", required=True)
    synth.add_argument("--samples", type=int, default=128)
    synth.add_argument("--sfreq", type=float, default=128.0)
    synth.add_argument("--noise", type=float, default=0.0)
    synth.add_argument("--amplitudes", default="1,0.8,0.6,0.4,0.2",
                       help="per-degree RMS amplitudes, comma separated")
    synth.add_argument("--subjects", type=int, default=0,
                       help="emit an epoch set for this many subjects (0 = single field)")
    synth.add_argument("--epochs-per-subject", type=int, default=1)
    synth.add_argument("--mixing", choices=("none", "random_spd"), default="none")
    synth.add_argument("--label-coeff", type=int, default=None)
    synth.add_argument("--label-offset", type=float, default=1.0)
    synth.add_argument("-o", "--output", required=True,
                       help="signal file, or output directory for epoch sets")

    bench = sub.add_parser("bench", help="run the synthetic adapter benchmark")
    bench_sub = bench.add_subparsers(dest="bench_command", required=True)
    bench_run = bench_sub.add_parser("run", help="run a benchmark config")
    bench_run.add_argument("config", help="flat key=value config file")

    stats_p = sub.add_parser("stats", help="significance report for a benchmark CSV")
    stats_p.add_argument("csv", help="per-seed benchmark CSV")
    stats_p.add_argument("--q", type=float, default=0.05, help="FDR level")
    stats_p.add_argument("--csv-out", metavar="PATH", help="also write the report as CSV")

    return parser


def _timestamp_meta(args) -> dict[str, str]:
    if args.no_timestamp:
        return {}
    return {"created": datetime.now(timezone.utc).isoformat()}


def _montage_payload(spec: str) -> sc.MontageIn:
    if os.path.exists(spec):
        from .geometry import load_montage

        m = load_montage(spec)
        return sc.MontageIn(labels=m.labels,
                            positions=[[float(v) for v in row] for row in m.positions])
    return sc.MontageIn(name=spec)


def _parse_cfg_pairs(pairs: list[str]) -> dict[str, str]:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise UsageError(f"--cfg expects K=V, got {pair!r}")
        k, v = pair.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _with_stamp(payload: sc.MatrixPayload, args) -> sc.MatrixPayload:
    payload.metadata.update(_timestamp_meta(args))
    return payload


def _load_fit_epochs(specs: list[str], require_subject: bool) -> sc.EpochSetPayload:
    epochs = []
    subjects = []
    sfreq = None
    labels = None
    for spec in specs:
        subject, sep, path = spec.partition("=")
        if not sep:
            if require_subject:
                raise UsageError(
                    f"--fit-signals needs SUBJECT=PATH for this method, got {spec!r}")
            subject, path = "s0", spec
        x = load_signal(path)
        if sfreq is None:
            sfreq, labels = x.sfreq, list(x.labels)
        epochs.append([[float(v) for v in row] for row in x.data])
        subjects.append(subject)
    return sc.EpochSetPayload(epochs=epochs, sfreq=sfreq, labels=labels,
                              subject_ids=subjects)


def _cmd_montage(args) -> int:
    if args.montage_command == "list":
        listing = handlers.montage_list()
        for name, count in zip(listing.names, listing.n_channels):
            print(f"{name},{count}")
        return 0
    spec = args.montage
    if os.path.exists(spec):
        from .geometry import load_montage

        m = load_montage(spec)
        payload = handlers.montage_to_payload(m)
    else:
        payload = handlers.montage_show(spec)
    print("label,x,y,z")
    for label, (x, y, z) in zip(payload.labels, payload.positions):
        print(f"{label},{x!r},{y!r},{z!r}")
    return 0


def _cmd_matrix(args) -> int:
    method = args.method
    if method not in MATRIX_METHODS:
        raise UsageError(f"unknown method {method!r}; expected one of {MATRIX_METHODS}")
    cfg = _parse_cfg_pairs(args.cfg)
    source = _montage_payload(args.source)

    if method == "ssi":
        if not args.target:
            raise UsageError("ssi needs --target")
        req = sc.SsiRequest(source=source, target=_montage_payload(args.target),
                            config=sc.SplineConfigIn(**{
                                k: (int(v) if k in ("stiffness", "n_terms") else float(v))
                                for k, v in cfg.items()}))
        payload = handlers.matrix_ssi(req)
    elif method == "harmonic":
        kwargs = {}
        if "l_max" in cfg:
            kwargs["l_max"] = int(cfg.pop("l_max"))
        if "mode" in cfg:
            kwargs["mode"] = cfg.pop("mode")
        if "ridge" in cfg:
            kwargs["ridge"] = float(cfg.pop("ridge"))
        if cfg:
            raise UsageError(f"unknown harmonic --cfg keys: {sorted(cfg)}")
        payload = handlers.matrix_harmonic(
            sc.HarmonicRequest(source=source, config=sc.HarmonicConfigIn(**kwargs)))
    elif method == "identity":
        if not args.target:
            raise UsageError("identity needs --target")
        src = handlers.montage_from_payload(source)
        tgt = handlers.montage_from_payload(_montage_payload(args.target))
        payload = handlers.matrix_identity(
            sc.IdentityRequest(source_labels=src.labels, target_labels=tgt.labels))
    elif method == "conv1d":
        src = handlers.montage_from_payload(source)
        if args.fit_signals:
            if not args.fit_target:
                raise UsageError("conv1d least-squares fitting needs --fit-target")
            fit = _load_fit_epochs(args.fit_signals, require_subject=False)
            target_sig = load_signal(args.fit_target)
            import numpy as np

            x_s = np.hstack([np.array(e) for e in fit.epochs])
            req = sc.LsqRequest(
                source_data=[[float(v) for v in row] for row in x_s],
                target_data=[[float(v) for v in row] for row in target_sig.data],
                ridge=float(cfg.get("ridge", 0.0)),
                with_bias=cfg.get("with_bias", "yes") not in ("no", "false", "0"),
                source_labels=fit.labels,
                target_labels=list(target_sig.labels),
            )
            payload = handlers.matrix_lsq(req)
        else:
            if not args.target:
                raise UsageError("conv1d random init needs --target (or --fit-signals)")
            tgt = handlers.montage_from_payload(_montage_payload(args.target))
            from .learned import init_projection, projection_to_matrix

            proj = init_projection(len(src.labels), len(tgt.labels),
                                   with_bias=cfg.get("with_bias", "yes") not in
                                   ("no", "false", "0"),
                                   seed=args.seed)
            payload = handlers.matrix_to_payload(projection_to_matrix(
                proj, src.labels, tgt.labels, {"fit": "random init"}))
    else:  # riemannian
        if not args.fit_signals:
            raise UsageError("riemannian needs --fit-signals SUBJECT=PATH")
        fit = _load_fit_epochs(args.fit_signals, require_subject=True)
        base_payload = None
        if args.base == "ssi":
            if not args.target:
                raise UsageError("riemannian with an ssi base needs --target")
            base_payload = handlers.matrix_ssi(sc.SsiRequest(
                source=source, target=_montage_payload(args.target)))
        riem_kwargs = {}
        if "shrinkage" in cfg:
            v = cfg["shrinkage"]
            riem_kwargs["shrinkage"] = v if v == "auto" else float(v)
        if "mean_tol" in cfg:
            riem_kwargs["mean_tol"] = float(cfg["mean_tol"])
        if "mean_max_iter" in cfg:
            riem_kwargs["mean_max_iter"] = int(cfg["mean_max_iter"])
        payload = handlers.matrix_riemannian(sc.RiemannianRequest(
            epochs=fit, base=base_payload, config=sc.RiemannianConfigIn(**riem_kwargs)))

    matrix = handlers.matrix_from_payload(_with_stamp(payload, args))
    save_matrix(matrix, args.output, args.format)
    if not args.quiet:
        rows, cols = matrix.shape
        print(f"wrote {args.output}: {rows}x{cols} {matrix.method} matrix", file=sys.stderr)
    return 0


def _cmd_apply(args) -> int:
    matrix = load_matrix(args.matrix)
    signal = load_signal(args.input)
    out = handlers.signal_apply(sc.ApplyRequest(
        matrix=handlers.matrix_to_payload(matrix),
        signal=handlers.signal_to_payload(signal)))
    save_signal(handlers.signal_from_payload(out), args.output, args.format)
    if not args.quiet:
        print(f"wrote {args.output}: {len(out.labels)}x{len(out.data[0])} signal", file=sys.stderr)
    return 0


def _cmd_preprocess(args, argv: list[str]) -> int:
    signal = handlers.signal_to_payload(load_signal(args.input))
    resample_vals = list(args.resample)
    normalize_vals = list(args.normalize)
    # apply operations in the order their flags appeared on the command line
    for token in argv:
        if token == "--resample":
            signal = handlers.signal_resample(
                sc.ResampleRequest(signal=signal, sfreq=resample_vals.pop(0)))
        elif token == "--normalize":
            mode = normalize_vals.pop(0)
            mode = {"uv100": "uv_scale"}.get(mode, mode)
            signal = handlers.signal_normalize(
                sc.NormalizeRequest(signal=signal, mode=mode))
    save_signal(handlers.signal_from_payload(signal), args.output, args.format)
    if not args.quiet:
        print(f"wrote {args.output}", file=sys.stderr)
    return 0


def _cmd_synth(args) -> int:
    amplitudes = [float(v) for v in args.amplitudes.split(",")]
    montage = _montage_payload(args.montage)
    if args.subjects == 0:
        payload = handlers.synth_field_handler(sc.SynthFieldRequest(
            montage=montage, n_samples=args.samples, sfreq=args.sfreq,
            degree_amplitudes=amplitudes, noise_sigma=args.noise, seed=args.seed))
        save_signal(handlers.signal_from_payload(payload), args.output, args.format)
        if not args.quiet:
            print(f"wrote {args.output}", file=sys.stderr)
        return 0
    payload = handlers.synth_epochs_handler(sc.SynthEpochsRequest(
        montage=montage, n_samples=args.samples, sfreq=args.sfreq,
        degree_amplitudes=amplitudes, noise_sigma=args.noise, seed=args.seed,
        n_subjects=args.subjects, n_epochs_per_subject=args.epochs_per_subject,
        subject_mixing=args.mixing, label_coeff=args.label_coeff,
        label_offset=args.label_offset))
    os.makedirs(args.output, exist_ok=True)
    ext = "eegb" if args.format == "binary" else "csv"
    manifest = ["file,subject,class"]
    counters: dict[str, int] = {}
    for i, subject in enumerate(payload.subject_ids):
        idx = counters.get(subject, 0)
        counters[subject] = idx + 1
        fname = f"{subject}_{idx:03d}.{ext}"
        sig = sc.SignalPayload(data=payload.epochs[i], sfreq=payload.sfreq,
                               labels=payload.labels)
        save_signal(handlers.signal_from_payload(sig),
                    os.path.join(args.output, fname), args.format)
        cls = "" if payload.class_labels is None else str(payload.class_labels[i])
        manifest.append(f"{fname},{subject},{cls}")
    with open(os.path.join(args.output, "epochs.csv"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(manifest) + "\n")
    if not args.quiet:
        print(f"wrote {len(payload.subject_ids)} epochs to {args.output}", file=sys.stderr)
    return 0


def _report_from_out(out: sc.StatsReportOut) -> StatsReport:
    return StatsReport(
        tuple(PairReport(p.method_a, p.method_b, p.n, p.w, p.p_raw, p.p_adj,
                         p.d, p.reject, p.note) for p in out.pairs),
        out.friedman_chi2, out.friedman_p, out.within_1pp, out.q)


def _cmd_bench(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = parse_bench_config(fh.read())
    req = sc.BenchRequest(
        methods=list(config.methods),
        source_montage=config.source_montage,
        target_montage=config.target_montage,
        exclude_target_channels=config.exclude_target_channels,
        n_seeds=config.n_seeds,
        n_subjects=config.n_subjects,
        train_subjects=config.train_subjects,
        n_epochs_per_subject=config.n_epochs_per_subject,
        n_samples=config.n_samples,
        sfreq=config.sfreq,
        noise_sigma=config.noise_sigma,
        degree_amplitudes=list(config.degree_amplitudes),
        label_coeff=config.label_coeff,
        label_offset=config.label_offset,
        subject_mixing=config.subject_mixing,
        ridge_alpha=config.ridge_alpha,
        q=config.q,
        seed=config.seed if config.seed else args.seed,
    )
    response = handlers.bench_run(req)
    result = BenchResult(
        tuple((r.method, r.seed, r.balanced_accuracy) for r in response.rows))
    results_path = config.output + "_results.csv"
    with open(results_path, "w", encoding="utf-8") as fh:
        fh.write(results_to_csv(result))
    report = _report_from_out(response.report)
    report_path = config.output + "_stats.csv"
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(report_to_csv(report))
    for failure in response.failures:
        print(f"warning: {failure}", file=sys.stderr)
    print(format_report(report, result), end="")
    if not args.quiet:
        print(f"wrote {results_path} and {report_path}", file=sys.stderr)
    return 0


def _cmd_stats(args) -> int:
    with open(args.csv, "r", encoding="utf-8") as fh:
        result = results_from_csv(fh.read())
    response = handlers.stats_from_rows(sc.StatsRequest(
        rows=[sc.BenchRow(method=m, seed=s, balanced_accuracy=a)
              for m, s, a in result.rows],
        q=args.q))
    report = _report_from_out(response)
    print(format_report(report, result), end="")
    if args.csv_out:
        with open(args.csv_out, "w", encoding="utf-8") as fh:
            fh.write(report_to_csv(report))
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "montage":
            return _cmd_montage(args)
        if args.command == "matrix":
            return _cmd_matrix(args)
        if args.command == "apply":
            return _cmd_apply(args)
        if args.command == "preprocess":
            return _cmd_preprocess(args, argv)
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "stats":
            return _cmd_stats(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ChanAdaptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
