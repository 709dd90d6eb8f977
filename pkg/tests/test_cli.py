import json

import pytest

from graphlift.cli import EXIT_DATA, EXIT_FAILED, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, main
from graphlift.generators import connected_gnp


@pytest.fixture
def k4_file(tmp_path):
    p = tmp_path / "k4.txt"
    p.write_text("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    return p


@pytest.fixture
def random8_file(tmp_path):
    g = connected_gnp(8, 0.35, seed=0)
    p = tmp_path / "random8.txt"
    p.write_text("".join(f"{u} {v}\n" for u, v in g.edges))
    return p


def _rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, l.split(","))) for l in lines[1:]]


def test_estimate_k4_triangle(k4_file, capsys):
    code = main(["estimate", "--graph", str(k4_file), "--k", "3", "--target", "triangle",
                 "--estimator", "unordered", "--n", "100000", "--seed", "7"])
    out, err = capsys.readouterr()
    assert code == EXIT_OK
    (row,) = _rows(out)
    assert float(row["estimate"]) == pytest.approx(4.0)
    assert row["seed"] == "7" and row["n"] == "100000"
    manifest = json.loads(err[err.index("{"):])
    assert manifest["seed"] == 7 and manifest["queries_total"] == 100 + 100000 * 6
    assert "wall_time_s" in manifest


def test_outputs_are_reproducible(random8_file, tmp_path):
    paths = []
    for i in range(2):
        out = tmp_path / f"run{i}.csv"
        assert main(["estimate", "--graph", str(random8_file), "--k", "4", "--n", "500",
                     "--seed", "3", "--out", str(out)]) == EXIT_OK
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    manifest = json.loads((tmp_path / "run0.csv.manifest.json").read_text())
    assert manifest["config"]["k"] == 4


def test_json_output(k4_file, tmp_path):
    out = tmp_path / "r.json"
    assert main(["estimate", "--graph", str(k4_file), "--k", "3", "--n", "50",
                 "--output-format", "json", "--out", str(out)]) == EXIT_OK
    payload = json.loads(out.read_text())
    assert payload["version"] == "graphlift-results v1"
    assert {r["type"] for r in payload["rows"]} == {"3-1", "3-2"}


def test_exact(k4_file, capsys):
    assert main(["exact", "--graph", str(k4_file), "--k", "3"]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert {r["name"]: r["count"] for r in rows} == {"wedge": "0", "triangle": "4"}


def test_validate(random8_file, capsys):
    assert main(["validate", "--graph", str(random8_file), "--k", "3", "--k", "4"]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert rows and all(r["status"] == "pass" for r in rows)


def test_stats(random8_file, capsys):
    assert main(["stats", "--graph", str(random8_file), "--k", "3", "--n", "400",
                 "--h", "0", "--h", "5", "--target", "wedge"]) == EXIT_OK
    out, err = capsys.readouterr()
    rows = _rows(out)
    assert [r["h"] for r in rows] == ["0", "5"]
    assert all(float(r["bound_cov"]) > 0 for r in rows)
    assert "workers=1" in err


def test_error_codes(k4_file, tmp_path, capsys):
    assert main(["estimate", "--graph", str(k4_file), "--k", "3", "--target", "4-cycle",
                 "--n", "10"]) == EXIT_USAGE
    assert main(["estimate", "--dataset", "no-such-net", "--k", "3", "--n", "10"]) == EXIT_DATA
    bad = tmp_path / "bad.txt"
    bad.write_text("a b c\n")
    assert main(["exact", "--graph", str(bad), "--k", "3"]) == EXIT_DATA
    assert main(["estimate", "--graph", str(k4_file), "--k", "3", "--budget", "50"]) == EXIT_INFEASIBLE
    assert main(["exact", "--graph", str(k4_file), "--k", "3", "--cap", "1"]) == EXIT_INFEASIBLE
    assert main(["estimate", "--graph", str(k4_file), "--k", "3"]) == EXIT_USAGE
    assert main(["estimate", "--graph", str(k4_file), "--k", "3", "--n", "5", "--budget", "9"]) == EXIT_USAGE
    assert main(["fetch", "no-such-net"]) == EXIT_DATA


def test_validation_failure_code(tmp_path, monkeypatch, capsys):
    from graphlift import cli

    def broken(*args, **kwargs):
        raise AssertionError("sums to 0.9")

    monkeypatch.setattr(cli, "enumerate_pi", broken)
    p = tmp_path / "t.txt"
    p.write_text("0 1\n1 2\n2 0\n")
    assert main(["validate", "--graph", str(p), "--k", "3"]) == EXIT_FAILED


def test_workers(random8_file, capsys):
    assert main(["estimate", "--graph", str(random8_file), "--k", "3", "--n", "300",
                 "--workers", "2", "--seed", "1"]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert rows[0]["corr_lag1"] == ""
