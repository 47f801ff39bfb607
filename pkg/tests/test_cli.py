import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from dlbounds import cli


def run(capsys, *argv):
    status = cli.main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def run_json(capsys, *argv):
    status, out, err = run(capsys, *argv)
    assert status == 0, err
    return json.loads(out)


def test_ball_example(capsys):
    doc = run_json(capsys, "ball", "--channel", "del-trans", "--s", "1", "--t", "1", "--q", "3", "--x", "0201001")
    assert doc["size"] == 23
    assert len(doc["members"]) == 23
    assert doc["center"] == "0201001"


def test_stats_example(capsys):
    doc = run_json(capsys, "stats", "--q", "3", "--x", "0201001")
    assert (doc["r"], doc["r1_prime"], doc["r1_dprime"], doc["r1_side"], doc["r1_pair"], doc["r2_in"]) == (
        6,
        2,
        1,
        2,
        1,
        1,
    )
    assert doc["exact"] == doc["closed_form"] == 23
    assert doc["bound_applicable"]


def test_stats_shows_closed_form_gap(capsys):
    doc = run_json(capsys, "stats", "--q", "3", "--x", "0120")
    assert (doc["closed_form"], doc["exact"], doc["r3_rot"]) == (12, 11, 1)


def test_bound_example(capsys):
    doc = run_json(capsys, "bound", "--theorem", "19", "--q", "2", "--u", "4", "--eps", "0.5", "--n", "1000")
    assert doc["valid"] is True
    assert doc["threshold_n"] == 2
    assert Fraction(doc["bound"]) == Fraction(doc["coefficient"]) * 2**1000 / (1000 * 999)
    red = doc["redundancy_lower_bits"]
    assert red["lo"] <= red["value"] <= red["hi"]


def test_bound_certificate_theorems(capsys):
    doc = run_json(capsys, "bound", "--theorem", "26", "--s", "1", "--n", "10")
    assert doc["valid"] is True and doc["order"] == 1
    doc = run_json(capsys, "bound", "--theorem", "24", "--s-d", "1", "--n", "10")
    assert doc["valid"] is True and doc["order"] == 1
    doc = run_json(capsys, "bound", "--theorem", "22", "--s", "1", "--t", "1", "--b", "2", "--n", "1000000")
    assert doc["valid"] is True and doc["bound"] is None


def test_ballsize_modes(capsys):
    doc = run_json(capsys, "ballsize", "--x", "010011", "--s", "1", "--t", "2")
    assert doc["bracketed"] and doc["size"] > 0
    doc = run_json(capsys, "ballsize", "--r", "12", "--s", "2", "--t", "1")
    assert doc["size"] is None and doc["lower"] == "55"
    status, _, err = run(capsys, "ballsize", "--x", "0101", "--r", "4")
    assert status == 2 and "exactly one" in err


def test_certify(capsys):
    doc = run_json(capsys, "certify", "--scheme", "1d1t", "--s", "1", "--t", "1", "--n", "8")
    assert doc["feasible"] and doc["centers_checked"] == 256
    doc = run_json(capsys, "certify", "--scheme", "1d1t", "--n", "12", "--mode", "sample", "--samples", "20")
    assert doc["mode"] == "sample" and doc["centers_checked"] <= 20


def test_search_and_verify_round_trip(capsys, tmp_path):
    doc = run_json(capsys, "search", "--s", "1", "--t", "1", "--n", "7")
    assert doc["optimal"] and doc["size"] == 9
    path = tmp_path / "code.txt"
    path.write_text("\n".join(doc["codewords"]) + "\n")
    verdict = run_json(capsys, "verify", str(path), "--s", "1", "--t", "1")
    assert verdict["valid"] and verdict["size"] == 9


def test_ball_center_verifies_as_one_word_code(capsys, tmp_path):
    ball = run_json(capsys, "ball", "--s", "1", "--t", "1", "--x", "0110100")
    path = tmp_path / "one.txt"
    path.write_text(ball["center"] + "\n")
    verdict = run_json(capsys, "verify", str(path), "--s", "1", "--t", "1")
    assert verdict == {"n": 7, "q": 2, "size": 1, "valid": True, "witness": None}


def test_verify_reports_witness_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("0101\n1001\n"))
    verdict = run_json(capsys, "verify", "-", "--s", "1", "--t", "1")
    assert not verdict["valid"]
    w = verdict["witness"]
    assert {w["x"], w["x_prime"]} == {"0101", "1001"}


def test_exit_codes(capsys, monkeypatch):
    assert run(capsys, "bound", "--theorem", "19", "--u", "6", "--n", "1")[0] == 2
    assert run(capsys, "ball", "--x", "0120")[0] == 2
    assert run(capsys, "stats", "--x", "01", "--output", "csv")[0] == 2
    assert run(capsys, "search", "--s", "1", "--t", "1", "--n", "12", "--vertex-budget", "100")[0] == 3
    status, out, err = run(capsys, "search", "--channel", "asymmetric", "--s", "1", "--t-plus", "1", "--n", "10", "--budget-seconds", "0.2")
    assert status == 3
    assert json.loads(out)["optimal"] is False

    def boom(cfg):
        raise RuntimeError("boom")

    monkeypatch.setitem(cli.COMMANDS, "stats", boom)
    status, out, err = run(capsys, "stats", "--x", "01")
    assert status == 1 and out == "" and "boom" in err


def test_sweep_csv_columns(capsys):
    status, out, _ = run(capsys, "sweep", "--theorem", "21", "--s", "1", "--t", "1", "--u", "20", "--ns", "40,80")
    assert status == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == cli.SWEEP_COLUMNS
    assert [r["n"] for r in rows] == ["40", "80"]
    assert all(r["valid"] == "true" and r["threshold_n"] == "32" for r in rows)
    doc = run_json(capsys, "sweep", "--theorem", "19", "--u", "6", "--ns", "20", "--output", "json")
    assert doc[0]["n"] == 20


@pytest.mark.parametrize("threads", ["1", "2"])
def test_sweep_is_byte_identical_across_runs(threads):
    argv = [sys.executable, "-m", "dlbounds", "sweep", "--theorem", "20", "--t", "1", "--u", "12", "--n-min", "20", "--n-max", "60", "--threads", threads]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first.startswith(b"theorem,n,")
