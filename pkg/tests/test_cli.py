import csv
import io
import json
import math

import numpy as np
import pytest

from properscore.cli import dump_json, main
from properscore.families import crps_closed, logs_closed
from properscore.sample_scores import crps_sample_edf


def write(path, text):
    path.write_text(text)
    return str(path)


def run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_parametric_crps_full_precision(tmp_path, capsys):
    f = write(tmp_path / "in.csv", "y,mean,sd\n0,0,1\n")
    code, out = run(capsys, ["score", "parametric", f, "--family", "norm"])
    assert code == 0
    r = rows(out)
    assert r[0] == ["case_id", "score", "value"]
    assert r[1] == ["1", "crps", "0.23369497725510913"]
    assert float(r[1][2]) == crps_closed("norm", 0.0)
    assert r[2][0] == "mean"


def test_recycled_columns_and_constants(tmp_path, capsys):
    f = write(tmp_path / "in.csv", "y,location,scale\n0.5,1,2\n-1,,\n3,,\n")
    code, out = run(capsys, ["score", "parametric", f, "--family", "t", "--param", "df=4",
                             "--score", "logs", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    values = [r["value"] for r in doc["results"]]
    expected = [logs_closed("t", y, df=4, location=1, scale=2) for y in (0.5, -1.0, 3.0)]
    assert values == expected
    assert doc["aggregate"] == {"n_cases": 3, "mean": math.fsum(expected) / 3}


def test_mixture_vector_columns(tmp_path, capsys):
    f = write(tmp_path / "in.csv", "y,m,s,w\n0.2,-1;1,1;0.5,0.3;0.7\n")
    code, out = run(capsys, ["score", "parametric", f, "--family", "mixnorm"])
    assert code == 0
    assert float(rows(out)[1][2]) == crps_closed("mixnorm", 0.2, m=[-1, 1], s=[1, 0.5], w=[0.3, 0.7])


def test_domain_errors_and_skipping(tmp_path, capsys):
    f = write(tmp_path / "in.csv", "y,mean,sd\n0,0,1\n0,0,-1\n")
    code, _ = run(capsys, ["score", "parametric", f, "--family", "norm"])
    assert code == 3
    code, out = run(capsys, ["score", "parametric", f, "--family", "norm", "--skip-errors"])
    assert code == 0
    r = rows(out)
    assert r[2] == ["2", "crps", ""]
    assert float(r[3][2]) == crps_closed("norm", 0.0)


@pytest.mark.parametrize("content,extra", [
    ("", []),
    ("y,mean,sd\n", []),
    ("y,mean,sd\n0,abc,1\n", []),
    ("y,mean,bogus\n0,0,1\n", []),
    ("y,mean,sd\n0,0,1\n", ["--family", "nosuch"]),
])
def test_input_errors_exit_2(tmp_path, capsys, content, extra):
    f = write(tmp_path / "in.csv", content)
    argv = ["score", "parametric", f] + (extra or ["--family", "norm"])
    assert main(argv) == 2


def test_missing_file_and_bad_flags(capsys):
    assert main(["score", "parametric", "/nonexistent.csv", "--family", "norm"]) == 2
    assert main(["score", "parametric"]) == 2
    assert main(["frobnicate"]) == 2


def test_sample_scores(tmp_path, capsys):
    obs = write(tmp_path / "obs.csv", "y\n1\n0.3\n")
    draws = write(tmp_path / "draws.csv", "d1,d2\n0,2\n2.5,2.5\n")
    code, out = run(capsys, ["score", "sample", obs, draws])
    assert code == 0
    r = rows(out)
    assert float(r[1][2]) == 0.5
    assert float(r[2][2]) == crps_sample_edf(0.3, [2.5, 2.5])
    weights = write(tmp_path / "w.csv", "w1,w2\n1,1\n1,3\n")
    code, out = run(capsys, ["score", "sample", obs, draws, "--weights", weights])
    assert code == 0 and float(rows(out)[1][2]) == 0.5
    code, out = run(capsys, ["score", "sample", obs, draws, "--score", "logs", "--bw", "1"])
    assert code == 0
    assert float(rows(out)[2][2]) == pytest.approx(logs_closed("norm", 0.3, mean=2.5), rel=1e-14)
    assert main(["score", "sample", obs, draws, "--bw", "1"]) == 2


def test_multivariate_scores(tmp_path, capsys):
    cases = write(tmp_path / "c.json", json.dumps({"cases": [
        {"y": [0, 0], "dat": [[1, -1], [0, 0]]},
        {"y": [0, 1], "dat": [[0], [3]]}]}))
    code, out = run(capsys, ["score", "mv", cases])
    assert code == 0
    assert float(rows(out)[1][2]) == 0.5
    code, out = run(capsys, ["score", "mv", cases, "--score", "vs", "--p", "1"])
    assert code == 0
    assert float(rows(out)[2][2]) == 8.0
    bad = write(tmp_path / "bad.json", json.dumps({"cases": [{"y": [0, 0, 0], "dat": [[1], [2]]}]}))
    assert main(["score", "mv", bad]) == 2
    assert main(["score", "mv", cases, "--p", "1"]) == 2


def test_one_dimensional_energy_score_matches_sample_crps(tmp_path, capsys):
    x = np.random.default_rng(3).normal(size=25)
    cases = write(tmp_path / "c.json", json.dumps({"cases": [{"y": [0.4], "dat": [x.tolist()]}]}))
    code, out = run(capsys, ["score", "mv", cases])
    assert code == 0
    assert abs(float(rows(out)[1][2]) - crps_sample_edf(0.4, x)) <= 1e-12


def test_output_is_reproducible(tmp_path, capsys):
    f = write(tmp_path / "in.csv", "y,location,scale\n0.5,1,2\n-1.25,0,0.3\n")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["score", "parametric", f, "--family", "logis", "--format", "json",
                     "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_estimate(tmp_path, capsys):
    y = np.random.default_rng(5).normal(1.0, 2.0, 200)
    f = write(tmp_path / "d.csv", "y\n" + "\n".join(repr(float(v)) for v in y) + "\n")
    code, out = run(capsys, ["estimate", f, "--family", "norm", "--score", "logs"])
    assert code == 0
    doc = json.loads(out)
    assert doc["converged"] is True
    assert doc["params"]["mean"] == pytest.approx(np.mean(y), abs=1e-6)
    assert doc["params"]["sd"] == pytest.approx(np.std(y), abs=1e-6)
    const = write(tmp_path / "c.csv", "y\n2\n2\n2\n2\n")
    code, out = run(capsys, ["estimate", const, "--family", "norm"])
    assert code == 4
    assert json.loads(out)["converged"] is False
    assert main(["estimate", const, "--family", "norm", "--allow-nonconverged"]) == 0
    assert main(["estimate", f, "--family", "mixnorm"]) == 2


def test_simulate_is_seeded(tmp_path, capsys):
    argv = ["simulate", "convergence", "--seed", "7", "--replications", "20", "--m-grid", "10,40"]
    code, first = run(capsys, argv)
    assert code == 0
    code, second = run(capsys, argv)
    assert first == second
    r = rows(first)
    assert r[0] == ["m", "lower", "median", "upper", "target"]
    assert [x[0] for x in r[1:]] == ["10", "40"]
    assert main(["simulate", "convergence"]) == 2


def test_dump_json_formatting():
    assert dump_json({"a": 0.1, "b": [1, math.inf], "c": True}) == \
        '{"a": 0.10000000000000001, "b": [1, null], "c": true}'
