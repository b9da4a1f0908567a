import csv
import io
import json
import os
from fractions import Fraction

import pytest

from mvlsync.cli import main

from conftest import GOLDEN

REGEN = os.environ.get("MVLSYNC_REGEN_GOLDEN") == "1"

CASES = [
    ("analyze", "example1", 1),
    ("analyze", "example2", 1),
    ("analyze", "example3", 0),
    ("analyze", "example4", 0),
    ("pin", "example2", 1),
]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("cmd,name,gamma", CASES)
def test_golden_reports(capsys, cmd, name, gamma):
    code, out, _ = run(capsys, cmd, f"{name}.mvln", "--gamma", str(gamma))
    assert code == 0
    report = json.loads(out)
    path = GOLDEN / f"{cmd}_{name}.json"
    if REGEN:
        path.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    assert report == json.loads(path.read_text(encoding="utf-8"))


def test_analyze_values(capsys):
    _, out, _ = run(capsys, "analyze", "example1.mvln", "--gamma", "1")
    r = json.loads(out)
    assert r["attractors"]["tau"] == 9 and r["global_sync"] and r["sast"]["global"] == 9
    _, out, _ = run(capsys, "analyze", "example3.mvln", "--gamma", "0")
    r = json.loads(out)
    assert r["attractors"]["tau"] == 11 and not r["global_sync"] and r["masb"]["size"] == 2576


def test_full_basin_and_json_file(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = run(capsys, "masb", "example2", "--full-basin", "--json", str(dest))
    assert code == 0 and out == ""
    r = json.loads(dest.read_text())
    assert r["masb"]["size"] == len(r["masb"]["members"]) == 15376


def test_report_roundtrip(capsys):
    _, out, _ = run(capsys, "analyze", "example4", "--gamma", "0")
    r = json.loads(out)
    assert json.loads(json.dumps(r)) == r


def test_analyze_garbage(capsys, tmp_path):
    bad = tmp_path / "garbage.txt"
    bad.write_text("this is not a network\n")
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "line 1" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "analyze", "nowhere.mvln")
    assert code == 2


def test_pin_not_needed(capsys):
    code, out, err = run(capsys, "pin", "example1.mvln", "--gamma", "1")
    assert code == 0 and "no pinning needed" in err
    assert json.loads(out)["pinning"] == {"needed": False, "message": "no pinning needed"}


def test_pin_seeded(capsys):
    code, out, _ = run(capsys, "pin", "example2.mvln", "--policy", "seeded", "--seed", "7")
    p = json.loads(out)["pinning"]
    assert code == 0 and p["global_sync"] and p["seed"] == 7


def test_pin_deterministic(capsys):
    outs = [run(capsys, "pin", "example2")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_simulate_example1(capsys):
    code, out, _ = run(capsys, "simulate", "example1.mvln", "--xi", "9469", "--steps", "12")
    rows = read_csv(out)
    assert code == 0 and len(rows) == 13
    for row in rows[6:]:
        assert all(Fraction(row[f"e{i}"]) <= Fraction(1, 4) for i in (1, 2, 3))
    assert any(Fraction(rows[5][f"e{i}"]) > Fraction(1, 4) for i in (1, 2, 3))


def test_simulate_example2_scalars(capsys, tmp_path):
    dest = tmp_path / "t.csv"
    code, _, _ = run(capsys, "simulate", "example2", "--x0", "2/4,2/4,0", "--z0", "1,1,2/4",
                     "--steps", "3", "--csv", str(dest))
    rows = read_csv(dest.read_text())
    assert code == 0 and rows[-1]["delta"] == "15563"
    assert [rows[-1][c] for c in ("x1", "z1")] == ["0", "1/2"]


def test_simulate_pinned_reaches_sync(capsys):
    _, out, _ = run(capsys, "simulate", "example2", "--xi", "8003", "--steps", "12", "--pinned")
    last = read_csv(out)[-1]
    assert all(Fraction(last[f"e{i}"]) <= Fraction(1, 4) for i in (1, 2, 3))


def test_simulate_zero_steps(capsys):
    _, out, _ = run(capsys, "simulate", "example4", "--xi", "5", "--steps", "0")
    assert len(read_csv(out)) == 1


@pytest.mark.parametrize("argv", [
    ["simulate", "example4", "--xi", "65"],
    ["simulate", "example4"],
    ["simulate", "example4", "--x0", "1,0,2", "--z0", "0,0,0"],
    ["simulate", "example4", "--xi", "1", "--steps", "-1"],
])
def test_simulate_bad_state(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_sast_command(capsys):
    code, out, _ = run(capsys, "sast", "example1", "--xi", "9469")
    assert code == 0 and json.loads(out)["sast"] == 6
    _, out, _ = run(capsys, "sast", "example2")
    r = json.loads(out)
    assert r["basin"] == "masb" and r["sast"] == 8


def test_sast_not_synchronous(capsys):
    assert run(capsys, "sast", "example2", "--xi", "8003")[0] == 3


def test_gamma_out_of_range(capsys):
    assert run(capsys, "analyze", "example4", "--gamma", "2")[0] == 2
