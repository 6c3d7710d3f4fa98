import json
import math
import subprocess
import sys

import pytest

from su2ladders.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_exit_zero_and_summary(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, err = run_cli(["verify", "--spin", "1", "--nmax", "3",
                              "--out", str(out_path)], capsys)
    assert code == 0
    payload = json.loads(out_path.read_text())
    assert payload["overall_pass"] is True
    assert "checks passed" in err


def test_verify_stdout_when_no_out(capsys):
    code, out, err = run_cli(["verify", "--spin", "1", "--nmax", "2"], capsys)
    assert code == 0
    assert json.loads(out)["overall_pass"] is True


def test_verify_nonzero_exit_counts_failures(capsys):
    code, out, err = run_cli(["verify", "--spin", "1", "--nmax", "3",
                              "--tolerance-override",
                              "su2-commutators=1e-30"], capsys)
    assert code == 1


def test_verify_csv_format(capsys):
    code, out, err = run_cli(["verify", "--spin", "1", "--nmax", "2",
                              "--format", "csv"], capsys)
    assert code == 0
    header = out.splitlines()[0]
    assert header == "check,anchor,params,residual,tolerance,passed"


def test_verify_env_tolerance(capsys, monkeypatch):
    monkeypatch.setenv("SU2LADDERS_TOLERANCE", "1e-30")
    code, out, err = run_cli(["verify", "--spin", "1", "--nmax", "2"], capsys)
    assert code > 0
    # The explicit flag takes precedence over the environment.
    monkeypatch.setenv("SU2LADDERS_TOLERANCE", "1e-30")
    code, out, err = run_cli(["verify", "--spin", "1", "--nmax", "2",
                              "--tolerance", "1e-6"], capsys)
    assert code == 0


def test_verify_byte_identical_runs(tmp_path):
    # End to end through the console entry, as a subprocess.
    paths = []
    for tag in ("a", "b"):
        path = tmp_path / f"report_{tag}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "su2ladders", "verify", "--spin", "1,2",
             "--nmax", "3", "--out", str(path)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_basis_dump_matches_internal_order(capsys):
    code, out, err = run_cli(["basis", "--spin", "1", "--nmax", "2"], capsys)
    assert code == 0
    from su2ladders.fock import enumerate_sector
    expected = enumerate_sector(1, 2).to_json_list()
    assert json.loads(out) == expected


def test_basis_sector_filters(capsys):
    code, out, err = run_cli(["basis", "--spin", "1", "--nmax", "2",
                              "--n", "2", "--weight", "0"], capsys)
    assert json.loads(out) == [[0, 2, 0], [1, 0, 1]]


def test_basis_canonical(capsys):
    code, out, err = run_cli(["basis", "--spin", "1", "--nmax", "3",
                              "--canonical"], capsys)
    assert code == 0
    payload = json.loads(out)
    labels = {(v["n"], v["j"], v["jz"]) for v in payload}
    assert (0, 0, 0) in labels and (2, 2, 2) in labels
    vac = next(v for v in payload if (v["n"], v["j"], v["jz"]) == (0, 0, 0))
    assert vac["vector"] == [[[0, 0, 0], 1.0, 0.0]]


def test_basis_canonical_requires_spin_one(capsys):
    with pytest.raises(SystemExit):
        main(["basis", "--spin", "2", "--nmax", "3", "--canonical"])


def test_spectrum_csv(capsys):
    code, out, err = run_cli(["spectrum", "--spin", "1", "--nmax", "2",
                              "--sector", "2,0"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "sector_n,sector_weight,eigenvalue,j_label,multiplicity"
    labels = sorted(int(line.split(",")[3]) for line in lines[1:])
    assert labels == [0, 2]


def test_ladders_json(capsys):
    code, out, err = run_cli(["ladders", "--spin", "1"], capsys)
    payload = json.loads(out)
    assert payload["spin"] == 1
    by_theta = {rf["theta"]: rf for rf in payload["right_functions"]}
    assert by_theta[1]["poly"] == [[2, 1], [2, 1]]
    assert by_theta[-1]["poly"] == [[0, 1], [-2, 1]]
    sig = next(s for s in payload["sigmas"] if s["theta"] == 1)
    assert sig["sigma"]["0"] == [[1, 2], [1, 2]]
    assert sig["sigma"]["1"] == [[1, 1]]


def test_kernel_json(capsys):
    code, out, err = run_cli(["kernel", "--spin", "1", "--nmax", "4"], capsys)
    payload = json.loads(out)
    nodes = {(n["n"], n["j"]): n["dim"] for n in payload["nodes"]}
    assert nodes == {(0, 0): 1, (1, 1): 1, (2, 0): 1, (2, 2): 1,
                     (3, 1): 1, (3, 3): 1}
    assert any(a["annihilated"] for a in payload["arrows"])


def test_dump_op_schema(capsys):
    code, out, err = run_cli(["dump-op", "--spin", "1", "--nmax", "2",
                              "--op", "adag:0"], capsys)
    payload = json.loads(out)
    assert payload["dim"] == payload["rows"] == payload["cols"] == 10
    coords = [(e[0], e[1]) for e in payload["entries"]]
    assert coords == sorted(coords)
    amplitudes = [e[2] for e in payload["entries"]]
    assert any(abs(a - math.sqrt(2)) < 1e-12 for a in amplitudes)
    assert all(e[3] == 0.0 for e in payload["entries"])


def test_dump_op_tau(capsys):
    code, out, err = run_cli(["dump-op", "--spin", "1", "--nmax", "2",
                              "--op", "tau:1"], capsys)
    assert code == 0
    assert json.loads(out)["entries"]


def test_dump_op_unknown_name(capsys):
    with pytest.raises(SystemExit):
        main(["dump-op", "--spin", "1", "--nmax", "2", "--op", "bogus"])
