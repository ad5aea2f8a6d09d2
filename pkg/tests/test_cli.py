import csv
import io
import json
import math
import shutil
import subprocess

import numpy as np
import pytest

from ptwell.cli import main

QUADRUPLET = {"N=10 ell=1/2 real quadruplet", "N=10 ell=1/2 complex quadruplet"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def eigenvalues(text):
    return np.array([complex(e["re"], e["im"]) for e in json.loads(text)["eigenvalues"]])


def test_spectrum_z(capsys):
    code, out, _ = run(capsys, "spectrum", "--N", "4", "--q", "0", "--Z", "4")
    assert code == 0
    d = json.loads(out)
    assert d["xi"] == 1.0 and d["Z"] == [4.0] and d["N"] == 4
    assert np.allclose(eigenvalues(out), [-1, 0, 1], atol=1e-14)


def test_spectrum_xi(capsys):
    code, out, _ = run(capsys, "spectrum", "--N", "6", "--q", "1", "--ell", "1/2", "--xi", "0")
    assert code == 0
    assert np.allclose(eigenvalues(out), [-math.sqrt(3), -1, 0, 1, math.sqrt(3)], atol=1e-14)


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--N", "5", "--xi", "0.2", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "index,re_F,im_F,re_E,im_E,is_real"


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--N", "1", "--Z", "1"],
        ["spectrum", "--N", "4"],
        ["spectrum", "--N", "4", "--q", "1", "--Z", "1"],
        ["spectrum", "--N", "4", "--ell", "3/2", "--Z", "1"],
        ["sweep", "--N", "8", "--ell", "5/8", "--xi-from", "0", "--xi-to", "2", "--steps", "0"],
        ["sweep", "--N", "8", "--xi-from", "1", "--xi-to", "0", "--steps", "5"],
        ["critical", "--q", "0"],
        ["critical", "--N", "4", "--tol", "0"],
        ["verify", "--perturb", "no such check"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_exclusive_couplings(capsys):
    with pytest.raises(SystemExit) as info:
        main(["spectrum", "--N", "4", "--Z", "1", "--xi", "1"])
    assert info.value.code == 2


def test_sweep(capsys, tmp_path):
    argv = ["sweep", "--N", "8", "--q", "1", "--ell", "5/8", "--xi-from", "0", "--xi-to", "2", "--steps", "200"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 201 * 7
    assert {int(r["track"]) for r in rows} == set(range(7))
    counts = {}
    for r in rows:
        counts[r["xi"]] = counts.get(r["xi"], 0) + int(r["is_real"])
    seq = list(counts.values())
    assert sum(a != b for a, b in zip(seq, seq[1:])) == 1
    assert seq[0] == 7 and seq[-1] == 5
    # bit-stable output
    path = tmp_path / "s.csv"
    assert main(argv + ["--out", str(path)]) == 0
    assert path.read_text() == out


@pytest.mark.parametrize(
    "nlist,ref",
    [("4,6,8,10,12", [5.657, 4.500, 4.463, 4.461, 4.463]), ("3,5,7,9", [2.250, 3.494, 3.946, 4.148])],
)
def test_critical_table(capsys, nlist, ref):
    code, out, _ = run(capsys, "critical", "--N-list", nlist, "--q", "0")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["Z_crit"]) for r in rows] == pytest.approx(ref, abs=2e-3)
    assert all(float(r["bracket_width"]) <= 1e-9 for r in rows)


def test_critical_shifted(capsys):
    code, out, _ = run(capsys, "critical", "--N", "6", "--q", "1", "--ell", "1/2", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)["rows"]
    assert row["xi_crit"] == pytest.approx(1.224745, abs=1e-6)


def test_metric(capsys):
    code, out, _ = run(capsys, "metric", "--N", "4", "--q", "0", "--xi", "0.5")
    assert code == 0
    d = json.loads(out)
    assert d["quasi_hermiticity_residual"] <= 1e-10 and d["positive_definite"]
    assert d["model"]["N"] == 4 and d["xi"] == 0.5
    code, _, _ = run(capsys, "metric", "--N", "4", "--q", "0", "--xi", "2")
    assert code == 4
    code, out, _ = run(capsys, "metric", "--N", "4", "--q", "0", "--xi", "0", "--theta", "1,1,1")
    theta = np.array(json.loads(out)["theta"])
    assert np.allclose(theta[..., 0], np.eye(3), atol=1e-12) and np.allclose(theta[..., 1], 0, atol=1e-12)
    code, _, _ = run(capsys, "metric", "--N", "6", "--ell", "1/2", "--xi", str(math.sqrt(1.5)))
    assert code == 4
    code, _, _ = run(capsys, "metric", "--N", "4", "--xi", "0.5", "--theta", "1,-1,1")
    assert code == 2


@pytest.fixture(scope="module")
def verify_report(tmp_path_factory):
    path = tmp_path_factory.mktemp("verify") / "report.json"
    code = main(["verify", "--json", "--out", str(path)])
    return code, json.loads(path.read_text())


def test_verify(verify_report):
    code, rep = verify_report
    checks = rep["checks"]
    assert len(checks) >= 25
    for c in checks:
        if c["name"] not in QUADRUPLET:
            assert c["passed"], c
    assert (code == 0) == all(c["passed"] for c in checks)
    assert code in (0, 1)


def test_verify_negative_control(capsys):
    code, out, _ = run(capsys, "verify", "--perturb", "EP N=8 ell=3/8")
    assert code == 1
    assert "FAIL  EP N=8 ell=3/8" in out
    assert "failed: EP N=8 ell=3/8" in out


def test_console_script():
    exe = shutil.which("ptwell")
    assert exe is not None
    res = subprocess.run([exe, "spectrum", "--N", "3", "--xi", "0"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["N"] == 3
