import numpy as np
import pytest

from chanadapt.cli import main
from chanadapt.pipeline import Signal, load_matrix, load_signal, save_signal


def run(args, capsys=None):
    code = main(args)
    return code


@pytest.fixture()
def field_file(tmp_path):
    path = tmp_path / "field.eegb"
    code = main(["--seed", "3", "synth", "--montage", "ten_ten_64",
                 "--samples", "256", "--sfreq", "256", "--noise", "0.2",
                 "-o", str(path)])
    assert code == 0
    return path


def test_montage_list(capsys):
    assert main(["montage", "list"]) == 0
    out = capsys.readouterr().out
    assert "ten_twenty_19,19" in out
    assert "ten_ten_64,64" in out


def test_montage_show_builtin(capsys):
    assert main(["montage", "show", "bci2a_22"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "label,x,y,z"
    assert len(out) == 23


def test_montage_show_file(tmp_path, capsys):
    path = tmp_path / "m.csv"
    path.write_text("label,x,y,z\nCz,0,0,1\n")
    assert main(["montage", "show", str(path)]) == 0
    assert "Cz,0.0,0.0,1.0" in capsys.readouterr().out


def test_unknown_method_exits_2(tmp_path, capsys):
    code = main(["matrix", "--method", "mystery", "--source", "ten_ten_64",
                 "-o", str(tmp_path / "m.mtx")])
    assert code == 2
    err = capsys.readouterr().err
    assert err.startswith("error: unknown method")
    assert "\n" not in err.strip("\n") or err.count("\n") == 1


def test_matrix_ssi_and_apply(tmp_path, field_file, capsys):
    mtx = tmp_path / "ssi.mtx"
    code = main(["--no-timestamp", "matrix", "--method", "ssi",
                 "--source", "ten_ten_64", "--target", "ten_twenty_19",
                 "-o", str(mtx)])
    assert code == 0
    m = load_matrix(str(mtx))
    assert m.shape == (19, 64)
    out = tmp_path / "out.eegb"
    code = main(["apply", "--matrix", str(mtx), "-i", str(field_file),
                 "-o", str(out)])
    assert code == 0
    sig = load_signal(str(out))
    assert sig.n_channels == 19


def test_matrix_harmonic_shape(tmp_path):
    mtx = tmp_path / "h.mtx"
    sub26 = tmp_path / "sub26.csv"
    # write a 26-channel montage file from the shipped 64-channel layout
    from chanadapt.geometry import builtin_montage

    m64 = builtin_montage("ten_ten_64")
    with open(sub26, "w") as fh:
        fh.write("label,x,y,z\n")
        for e in m64.electrodes[:26]:
            x, y, z = (float(v) for v in e.position)
            fh.write(f"{e.label},{x!r},{y!r},{z!r}\n")
    code = main(["--no-timestamp", "matrix", "--method", "harmonic",
                 "--source", str(sub26), "-o", str(mtx)])
    assert code == 0
    assert load_matrix(str(mtx)).shape == (25, 26)


def test_matrix_identity_and_apply_bitwise(tmp_path, field_file):
    mtx = tmp_path / "id.mtx"
    assert main(["--no-timestamp", "matrix", "--method", "identity",
                 "--source", "ten_ten_64", "--target", "ten_ten_64",
                 "-o", str(mtx)]) == 0
    out = tmp_path / "same.eegb"
    assert main(["apply", "--matrix", str(mtx), "-i", str(field_file),
                 "-o", str(out)]) == 0
    # payload identical to the input payload
    assert out.read_bytes() == field_file.read_bytes()


def test_matrix_conv1d_random_init_deterministic(tmp_path):
    a, b = tmp_path / "a.mtx", tmp_path / "b.mtx"
    for path in (a, b):
        code = main(["--seed", "11", "--no-timestamp", "matrix", "--method", "conv1d",
                     "--source", "ten_ten_64", "--target", "ten_twenty_19",
                     "-o", str(path)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    m = load_matrix(str(a))
    assert m.shape == (19, 64)
    assert m.bias is not None


def test_matrix_conv1d_lsq_fit(tmp_path):
    rng = np.random.default_rng(0)
    mix = rng.standard_normal((3, 4))
    x_s = rng.standard_normal((4, 64))
    src = tmp_path / "src.eegb"
    tgt = tmp_path / "tgt.eegb"
    save_signal(Signal(x_s, 100.0, ["a", "b", "c", "d"]), str(src))
    x_s_stored = load_signal(str(src)).data  # f32 storage quantizes
    save_signal(Signal(mix @ x_s_stored, 100.0, ["x", "y", "z"]), str(tgt))
    mtx = tmp_path / "w.mtx"
    code = main(["--no-timestamp", "matrix", "--method", "conv1d",
                 "--source", "ten_ten_64", "--fit-signals", str(src),
                 "--fit-target", str(tgt), "-o", str(mtx)])
    assert code == 0
    m = load_matrix(str(mtx))
    assert np.max(np.abs(m.matrix - mix)) < 1e-6


def test_matrix_riemannian_requires_subjects(tmp_path, field_file):
    code = main(["matrix", "--method", "riemannian", "--source", "ten_ten_64",
                 "--target", "ten_twenty_19", "-o", str(tmp_path / "r.mtx")])
    assert code == 2


def test_matrix_riemannian_fit(tmp_path):
    rng = np.random.default_rng(1)
    paths = []
    for i in range(4):
        p = tmp_path / f"e{i}.eegb"
        save_signal(Signal(rng.standard_normal((19, 128)), 128.0,
                           [f"c{k}" for k in range(19)]), str(p))
        paths.append(p)
    args = ["--no-timestamp", "matrix", "--method", "riemannian",
            "--source", "ten_ten_64", "--base", "identity"]
    for p in paths:
        args += ["--fit-signals", f"s0={p}"]
    mtx = tmp_path / "r.mtx"
    assert main(args + ["-o", str(mtx)]) == 0
    m = load_matrix(str(mtx))
    assert m.shape == (19, 19)
    assert m.metadata["subject"] == "s0"


def test_preprocess_resample_then_normalize(tmp_path, field_file, capsys):
    out = tmp_path / "pre.eegb"
    code = main(["preprocess", "-i", str(field_file), "-o", str(out),
                 "--resample", "200", "--normalize", "minmax"])
    assert code == 0
    sig = load_signal(str(out))
    assert sig.sfreq == 200.0
    assert sig.n_samples == 200
    assert sig.data.min() >= -1.0 and sig.data.max() <= 1.0


def test_preprocess_flag_order_respected(tmp_path, field_file):
    a_out = tmp_path / "a.eegb"
    b_out = tmp_path / "b.eegb"
    assert main(["preprocess", "-i", str(field_file), "-o", str(a_out),
                 "--resample", "200", "--normalize", "zscore"]) == 0
    assert main(["preprocess", "-i", str(field_file), "-o", str(b_out),
                 "--normalize", "zscore", "--resample", "200"]) == 0
    a = load_signal(str(a_out))
    b = load_signal(str(b_out))
    # normalize-then-resample differs from resample-then-normalize
    assert not np.array_equal(a.data, b.data)
    # zscore applied last leaves unit variance; applied first it does not
    assert np.max(np.abs(a.data.std(axis=1) - 1.0)) < 1e-6


def test_preprocess_uv100_alias(tmp_path):
    src = tmp_path / "x.eegb"
    save_signal(Signal(np.array([[100.0, -50.0, 0.0]]), 10.0, ["a"]), str(src))
    out = tmp_path / "y.eegb"
    assert main(["preprocess", "-i", str(src), "-o", str(out),
                 "--normalize", "uv100"]) == 0
    assert np.array_equal(load_signal(str(out)).data, [[1.0, -0.5, 0.0]])


def test_synth_epochs_directory(tmp_path):
    out = tmp_path / "epochs"
    code = main(["--seed", "4", "synth", "--montage", "ten_twenty_19",
                 "--samples", "32", "--subjects", "2", "--epochs-per-subject", "3",
                 "--label-coeff", "0", "-o", str(out)])
    assert code == 0
    manifest = (out / "epochs.csv").read_text().strip().splitlines()
    assert manifest[0] == "file,subject,class"
    assert len(manifest) == 7
    first = manifest[1].split(",")
    sig = load_signal(str(out / first[0]))
    assert sig.n_channels == 19


def test_channel_mismatch_lists_labels(tmp_path, capsys):
    mtx = tmp_path / "ssi.mtx"
    main(["--no-timestamp", "matrix", "--method", "ssi", "--source", "ten_ten_64",
          "--target", "ten_twenty_19", "-o", str(mtx)])
    capsys.readouterr()  # discard the progress line
    bad = tmp_path / "bad.eegb"
    save_signal(Signal(np.zeros((2, 4)), 100.0, ["Cz", "Nope"]), str(bad))
    code = main(["apply", "--matrix", str(mtx), "-i", str(bad),
                 "-o", str(tmp_path / "o.eegb")])
    assert code == 1
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "missing channels" in err


def test_bench_run_and_stats(tmp_path, capsys):
    config = tmp_path / "bench.cfg"
    config.write_text(
        "methods = ssi, identity\n"
        "n_seeds = 3\n"
        "n_subjects = 3\n"
        "train_subjects = 2\n"
        "n_epochs_per_subject = 8\n"
        "n_samples = 64\n"
        f"output = {tmp_path / 'bench'}\n")
    assert main(["bench", "run", str(config)]) == 0
    out = capsys.readouterr().out
    assert "ssi vs identity" in out
    results_csv = tmp_path / "bench_results.csv"
    assert results_csv.exists()
    lines = results_csv.read_text().strip().splitlines()
    assert lines[0] == "method,seed,balanced_accuracy"
    assert len(lines) == 7
    assert main(["stats", str(results_csv), "--q", "0.05",
                 "--csv-out", str(tmp_path / "report.csv")]) == 0
    report = (tmp_path / "report.csv").read_text()
    assert report.startswith("method_a,method_b")


def test_stats_dominant_method_exact_p(tmp_path, capsys):
    # six seeds, one method strictly dominant -> exact Wilcoxon p = 2/2^6
    rows = ["method,seed,balanced_accuracy"]
    for s in range(6):
        rows.append(f"good,{s},{0.9 + 0.001 * s}")
        rows.append(f"bad,{s},{0.6 + 0.001 * s}")
    csv = tmp_path / "r.csv"
    csv.write_text("\n".join(rows) + "\n")
    assert main(["stats", str(csv)]) == 0
    out = capsys.readouterr().out
    assert "0.03125" in out


def test_stats_single_method_empty_table(tmp_path, capsys):
    csv = tmp_path / "r.csv"
    csv.write_text("method,seed,balanced_accuracy\nssi,0,0.9\nssi,1,0.8\n")
    assert main(["stats", str(csv)]) == 0
    out = capsys.readouterr().out
    assert "pair" in out  # header renders, no pair rows


def test_missing_file_is_runtime_error(tmp_path, capsys):
    code = main(["apply", "--matrix", str(tmp_path / "none.mtx"),
                 "-i", str(tmp_path / "none.eegb"), "-o", str(tmp_path / "o.eegb")])
    assert code == 1
    assert capsys.readouterr().err.startswith("error:")


def test_cli_determinism_byte_identical(tmp_path):
    outs = []
    for name in ("one", "two"):
        d = tmp_path / name
        d.mkdir()
        mtx = d / "m.mtx"
        field = d / "f.eegb"
        assert main(["--seed", "9", "--no-timestamp", "matrix", "--method", "ssi",
                     "--source", "ten_ten_64", "--target", "ten_twenty_19",
                     "--cfg", "n_terms=40", "-o", str(mtx)]) == 0
        assert main(["--seed", "9", "synth", "--montage", "ten_ten_64",
                     "--samples", "64", "--noise", "0.3", "-o", str(field)]) == 0
        applied = d / "a.eegb"
        assert main(["apply", "--matrix", str(mtx), "-i", str(field),
                     "-o", str(applied)]) == 0
        outs.append((mtx.read_bytes(), field.read_bytes(), applied.read_bytes()))
    assert outs[0] == outs[1]


def test_timestamp_present_without_flag(tmp_path):
    mtx = tmp_path / "m.mtx"
    assert main(["--format", "csv", "matrix", "--method", "ssi",
                 "--source", "ten_ten_64", "--target", "ten_twenty_19",
                 "-o", str(mtx)]) == 0
    assert "created" in load_matrix(str(mtx)).metadata
