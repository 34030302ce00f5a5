import csv
import subprocess
import sys

import numpy as np
import pytest

from spherewave.cli import build_parser, dispatch, main, random_signal
from spherewave.io import read_coeffs


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _value(out, key):
    for line in out.splitlines():
        parts = line.split()
        if parts and parts[0] == key:
            return float(parts[1])
    raise AssertionError(f"{key} not printed")


def test_verify_parseval_example(capsys):
    code, out, _ = run(capsys, "verify", "parseval", "--d", "3", "--K", "2", "--Jmax", "4", "--seed", "7")
    assert code == 0
    assert _value(out, "max_gap") < 1e-10


def test_verify_exit_code_on_tolerance(capsys):
    assert run(capsys, "verify", "addition", "--dims", "3", "--tol", "1e-30")[0] == 1
    assert run(capsys, "verify", "addition", "--dims", "3")[0] == 0


@pytest.mark.parametrize("check", ["quad-exactness", "telescope"])
def test_other_verify_checks(capsys, check):
    code, out, _ = run(capsys, "verify", check, "--N", "8")
    assert code == 0
    assert _value(out, "max_error") < 1e-10


def test_psi_grid_example(tmp_path, capsys):
    path = tmp_path / "psi.csv"
    code, out, _ = run(capsys, "psi-grid", "--d", "4", "--K", "4", "--N", "32", "--nt", "65", "--nphi", "64",
                       "--out", str(path), "--pgm", str(tmp_path / "psi.pgm"))
    assert code == 0
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "phi", "value"]
    vals = np.array([float(r[2]) for r in rows[1:]]).reshape(65, 64)
    # even K: psi(t, phi + pi) = psi(t, phi)
    assert np.max(np.abs(np.roll(vals, -32, axis=1) - vals)) < 1e-9
    assert (tmp_path / "psi.pgm").read_bytes().startswith(b"P5\n64 65\n255\n")


def test_analyze_synthesize_round_trip(tmp_path, capsys):
    sig, fc, back = tmp_path / "f.txt", tmp_path / "fc.txt", tmp_path / "back.txt"
    assert run(capsys, "random-signal", "--d", "3", "--Jmax", "3", "--seed", "5", "--out", str(sig))[0] == 0
    code, out, _ = run(capsys, "analyze", str(sig), "--K", "2", "--Jmax", "3", "--out", str(fc))
    assert code == 0
    assert abs(_value(out, "energy") - _value(out, "signal_norm_sq")) < 1e-10
    assert run(capsys, "synthesize", str(fc), "--out", str(back))[0] == 0
    f, g = read_coeffs(sig), read_coeffs(back)
    assert g.max_degree == f.max_degree
    assert g.max_abs_diff(f) < 1e-9


def test_analyze_with_frame_file(tmp_path, capsys):
    frame, sig, fc = tmp_path / "frame.txt", tmp_path / "f.txt", tmp_path / "fc.txt"
    run(capsys, "build-frame", "--d", "4", "--K", "1", "--Jmax", "2", "--out", str(frame))
    run(capsys, "random-signal", "--d", "4", "--degree", "2", "--seed", "1", "--out", str(sig))
    assert run(capsys, "analyze", str(sig), "--frame", str(frame), "--out", str(fc))[0] == 0
    assert fc.read_text().startswith("SPHEREWAVE FRAMECOEFFS 1\nd 4\nK 1\n")


def test_random_signal_is_seeded_and_normalized():
    a, b = random_signal(4, 3, 9), random_signal(4, 3, 9)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.norm() == pytest.approx(1.0)
    assert random_signal(4, 3, 10).max_abs_diff(a) > 0


def test_outputs_are_byte_identical(tmp_path, capsys):
    outs = []
    for k in range(2):
        p = tmp_path / f"fc{k}.txt"
        sig = tmp_path / f"s{k}.txt"
        run(capsys, "random-signal", "--d", "3", "--degree", "4", "--seed", "3", "--out", str(sig))
        run(capsys, "analyze", str(sig), "--K", "1", "--Jmax", "3", "--out", str(p))
        outs.append(sig.read_bytes() + p.read_bytes())
    assert outs[0] == outs[1]
    first = run(capsys, "localize", "--d", "3", "--K", "1", "--N", "16")[1]
    assert first == run(capsys, "localize", "--d", "3", "--K", "1", "--N", "16")[1]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "parseval", "--d", "three"],
        ["verify", "nonsense"],
        ["build-frame", "--filter", "box"],
        ["build-frame", "--profile", "weird"],
        ["frobnicate"],
    ],
)
def test_bad_flags_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_configuration_errors_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "build-frame", "--d", "3", "--K", "2", "--profile", "zonal")
    assert code == 2 and "error" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("SPHEREWAVE COEFFS 1\nd 3\nmax_degree 2\n1 2 1 0\n")
    code, _, err = run(capsys, "analyze", str(bad), "--out", str(tmp_path / "x.txt"))
    assert code == 2 and ":4" in err
    code, _, err = run(capsys, "build-frame", "--K", "1", "--profile", f"custom:{tmp_path / 'missing.txt'}")
    assert code == 2


def test_steer_negative_control(capsys):
    assert run(capsys, "steer", "--d", "3", "--K", "3")[0] == 0
    assert run(capsys, "steer", "--d", "3", "--K", "3", "--nodes", "5")[0] == 1


def test_autocorr_command(capsys):
    code, out, _ = run(capsys, "autocorr", "--d", "4", "--K", "2")
    assert code == 0 and _value(out, "max_diff") < 1e-9


def test_dispatch_takes_parsed_config(capsys):
    cfg = build_parser().parse_args(["verify", "telescope"])
    assert dispatch(cfg) == 0


def test_console_script_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "spherewave.cli", "verify", "parseval", "--d", "3", "--K", "2", "--Jmax", "4",
         "--seed", "7"],
        capture_output=True, text=True, cwd=tmp_path,
    )
    assert res.returncode == 0
    assert "max_gap" in res.stdout
