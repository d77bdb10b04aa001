import json
import math

import pytest

from hardyring.cli import main, parse_theta

CYCLE4_VANISHED = ["0011", "0110", "0111", "1001", "1011", "1100", "1101", "1110", "1111"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text, value", [
    ("0.423pi", 0.423 * math.pi), ("pi", math.pi), ("pi/18", math.pi / 18), ("2pi/9", 2 * math.pi / 9),
    ("1.25", 1.25), ("0.5*pi", 0.5 * math.pi),
])
def test_parse_theta(text, value):
    assert parse_theta(text) == pytest.approx(value)


def test_set1(capsys):
    code, out, _ = run(capsys, "set1", "--theta", "0.423pi", "--spec", "cycle4", "--shots", "409600", "--seed", "7")
    rep = json.loads(out)
    assert code == 0
    assert set(rep) >= {"setting", "theta", "shots", "seed", "post_selection_rate", "counts", "analytic",
                        "p_success", "notes"}
    assert all(rep["counts"][s] == 0 for s in CYCLE4_VANISHED)
    assert rep["p_success"] is None
    assert rep["post_selection_rate"] == pytest.approx(0.620693, abs=1e-6)


def test_set2_interest(capsys):
    _, out, _ = run(capsys, "set2", "--particle", "1")
    rep = json.loads(out)
    assert rep["interest"] == ["1001", "1100", "1101"]
    assert all(rep["counts"][s] > 0 for s in rep["interest"])


def test_set3(capsys):
    _, out, _ = run(capsys, "set3")
    rep = json.loads(out)
    assert len(rep["counts"]) == 16
    assert rep["p_success"] == pytest.approx(0.09, abs=0.003)


def test_reports_are_byte_identical(capsys):
    _, a, _ = run(capsys, "set3", "--seed", "11", "--shots", "5000")
    _, b, _ = run(capsys, "set3", "--seed", "11", "--shots", "5000")
    assert a == b


def test_json_round_trip(capsys):
    _, out, _ = run(capsys, "lhv")
    assert json.dumps(json.loads(out), indent=2, sort_keys=True) + "\n" == out


def test_table_and_csv_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "set3", "--format", "table")
    assert code == 0 and "p_success (sampled)" in out
    target = tmp_path / "set1.csv"
    assert main(["set1", "--format", "csv", "--out", str(target)]) == 0
    assert target.read_text().splitlines()[0] == "state,count,sampled,analytic"


def test_sweep(capsys):
    code, out, err = run(capsys, "sweep", "--start", "0", "--end", "pi", "--step", "pi/18")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "theta_rad,theta_pi_units,p_success"
    assert len(lines) == 20
    assert "argmax" in err
    best = max(lines[1:], key=lambda r: float(r.split(",")[2]))
    assert 0.38 <= float(best.split(",")[1]) <= 0.45


def test_sampled_sweep_seeds(capsys):
    peaks = []
    for seed in ("1", "2"):
        _, out, _ = run(capsys, "sweep", "--mode", "sampled", "--start", "0.40pi", "--end", "0.45pi",
                        "--step", "0.01pi", "--seed", seed, "--shots", "409600")
        rows = [r.split(",") for r in out.strip().splitlines()[1:]]
        peaks.append(float(max(rows, key=lambda r: float(r[2]))[1]))
    assert all(0.40 <= p <= 0.45 for p in peaks)


def test_lhv_counts(capsys):
    _, out, _ = run(capsys, "lhv", "--spec", "cycle4")
    rep = json.loads(out)
    assert len(rep["paradox_states"]) == 9
    assert rep["consistent_count"] == 25
    _, out, _ = run(capsys, "lhv", "--spec", "complete4")
    assert len(json.loads(out)["paradox_states"]) == 11


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--spec-a", "cycle4", "--spec-b", "complete4", "--format", "json")
    a, b = json.loads(out)["rows"]
    assert code == 0
    assert (a["vanished"], b["vanished"]) == (9, 1)
    assert (a["paradox_states"], b["paradox_states"]) == (9, 11)
    assert 0.090 <= a["max_p_success"] <= 0.091 < b["max_p_success"]
    assert b["max_p_success"] == pytest.approx(0.125, abs=0.005)


def test_compare_identical(capsys):
    _, out, _ = run(capsys, "compare", "--spec-a", "cycle4", "--spec-b", "cycle4", "--format", "json")
    a, b = json.loads(out)["rows"]
    assert a == b


def test_compare_cycle3_complete3(capsys):
    _, out, _ = run(capsys, "compare", "--spec-a", "cycle3", "--spec-b", "complete3", "--format", "json")
    a, b = json.loads(out)["rows"]
    assert a["paradox_states"] != b["paradox_states"]
    assert 0 < a["max_p_success"] < 1 and 0 < b["max_p_success"] < 1


def test_diagnose(capsys):
    code, out, _ = run(capsys, "diagnose", "--shots", "20000")
    rep = json.loads(out)
    assert code == 0
    assert {f["family"] for f in rep["families"]} == {"qubit_count", "theta", "control"}
    _, out, _ = run(capsys, "diagnose", "--p1", "0", "--p-mc", "0", "--p-ro", "0", "--shots", "100000")
    assert all(f["ideal_vs_noisy_tvd"] < 4 / math.sqrt(100_000) for f in json.loads(out)["families"])


def test_custom_spec_file(capsys, tmp_path):
    path = tmp_path / "path3.json"
    path.write_text(json.dumps({"n": 3, "control_sets": [[1, 2], [2, 3]]}))
    code, out, _ = run(capsys, "set1", "--spec", str(path), "--shots", "1000")
    assert code == 0 and json.loads(out)["counts"]["110"] == 0


@pytest.mark.parametrize("argv, code", [
    (["sweep", "--start", "0", "--end", "0"], 2),
    (["set2", "--particle", "7"], 2),
    (["set1", "--theta", "4"], 2),
    (["set1", "--shots", "0"], 2),
    (["set1", "--spec", "nosuch"], 2),
    (["diagnose", "--p1", "2"], 2),
    (["compare", "--spec-a", "cycle3", "--spec-b", "cycle4"], 2),
    (["set1", "--theta", "pi"], 3),
])
def test_exit_codes(capsys, argv, code):
    assert main(argv) == code
    assert "error" in capsys.readouterr().err


def test_enumeration_cap_exit(capsys, tmp_path):
    path = tmp_path / "big.json"
    path.write_text(json.dumps({"n": 10, "control_sets": [[k, k % 10 + 1] for k in range(1, 11)]}))
    assert main(["lhv", "--spec", str(path)]) == 4
    assert "refusing" in capsys.readouterr().err
