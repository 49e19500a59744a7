import json

import pytest

from liesym import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_e0tilde2(capsys):
    code, out, _ = run(capsys, "classify", "--group", "E0tilde2", "--mu", "1", "--nu", "2")
    assert code == 0 and json.loads(out)["locally_symmetric"] is True


def test_classify_su2_not_symmetric(capsys):
    code, out, _ = run(capsys, "classify", "--group", "SU2", "--lambda", "2", "--mu", "1", "--nu", "1")
    assert code == 0 and json.loads(out)["locally_symmetric"] is False


def test_classify_json_abelian(capsys, tmp_path):
    f = tmp_path / "algebra.json"
    f.write_text(json.dumps({"constants": []}))
    code, out, _ = run(capsys, "classify", "--json", str(f))
    rec = json.loads(out)
    assert code == 0 and rec["locally_symmetric"] is True and rec["residual"] == 0.0


@pytest.mark.parametrize("argv", [
    ["classify", "--group", "SU2", "--lambda", "1", "--mu", "2", "--nu", "1"],
    ["classify"],
    ["classify", "--json", "/nonexistent/x.json"],
    ["classify", "--group", "R3", "--format", "csv"],
    ["geodesic", "--nu", "1", "--step", "0"],
    ["verify-paper", "--only", "nothing"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify-paper", "--tol", "-1"])
    assert exc.value.code == 2


def test_geodesic_csv(capsys):
    code, out, err = run(capsys, "geodesic", "--nu", "1", "--v1", "1", "--v2", "2", "--v3", "3",
                         "--t-end", "1", "--every", "100")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("t,x,y,s,alpha1,alpha2,alpha3")
    last = [float(x) for x in lines[-1].split(",")]
    assert last[1:4] == pytest.approx([1, 2, 3], abs=1e-9)
    assert "max_deviation" in err


def test_geodesic_deviation_column(capsys, tmp_path):
    out = tmp_path / "g.csv"
    code, _, _ = run(capsys, "geodesic", "--nu", "4", "--v1", "1", "--v3", "1", "--t-end", "2",
                     "--out", str(out))
    rows = out.read_text().splitlines()
    assert code == 0
    assert max(float(r.split(",")[-1]) for r in rows[1:]) <= 1e-8


def test_geodesic_straight_line(capsys):
    code, out, _ = run(capsys, "geodesic", "--nu", "3", "--v1", "1", "--v2", "1", "--t-end", "1",
                       "--format", "json")
    rec = json.loads(out)
    assert all(abs(p[0] - p[1]) < 1e-12 and p[2] == 0 for p in rec["points"])


def test_curvature_command(capsys):
    code, out, _ = run(capsys, "curvature", "--group", "SU2", "--lambda", "1", "--mu", "1", "--nu", "1")
    rec = json.loads(out)
    assert code == 0 and rec["family"] == "SU2" and rec["locally_symmetric"]
    assert rec["sectional"]["e1e2"] == pytest.approx(0.25)


def test_symmetry_command(capsys):
    code, out, _ = run(capsys, "symmetry", "--nu", "2", "--point", "1", "0", "1", "--k", "1")
    rec = json.loads(out)
    assert code == 0 and rec["symmetric_space"] is False and rec["consistent_on_samples"] is False
    code, out, _ = run(capsys, "symmetry", "--nu", "0.25")
    assert json.loads(out)["consistent_on_samples"] is True


def test_verify_subset_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code, _, err = run(capsys, "verify-paper", "--only", "milnor,classification", "--out", str(a))
    run(capsys, "verify-paper", "--only", "milnor,classification", "--out", str(b))
    assert code == 0
    assert a.read_bytes() == b.read_bytes()
    ids = [c["check_id"] for c in json.loads(a.read_text())["checks"]]
    assert ids == ["AC01", "AC02", "AC03", "AC05"]
    assert err.count("PASS") == 4


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("LIESYM_SEED", "7")
    _, out, _ = run(capsys, "verify-paper", "--only", "AC05")
    assert json.loads(out)["seed"] == 7
    monkeypatch.setenv("LIESYM_SEED", "x")
    code, _, _ = run(capsys, "verify-paper", "--only", "AC05")
    assert code == 2


def test_tight_tolerance_reports_failures(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "AC05", "--tol", "1e-30")
    assert code == 1 and json.loads(out)["checks"][0]["status"] == "fail"
