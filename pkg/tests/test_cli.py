import json
import subprocess
import sys

import pytest

from plam.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


def test_parse_text(capsys):
    code, out, _ = run(capsys, "parse", r"\x.x (+) y")
    assert code == 0
    assert out.strip() == r"\x.x (+) y"


def test_parse_json(capsys):
    code, payload, _ = run_json(capsys, "parse", r"\x.x y")
    assert code == 0
    assert payload == {"term": r"\x.x y", "size": 4, "free": ["y"], "hnf": True}


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "parse", "(a b")
    assert code == 1
    assert "error" in err


def test_eval_json(capsys):
    code, payload, _ = run_json(capsys, "eval", "Delta (T (+) F)", "--fuel", "4")
    assert code == 0
    assert payload["mass"] == "1"
    assert payload["deficit"] == "0"
    probs = {e["term"]: e["prob"] for e in payload["support"]}
    assert probs[r"\x.x"] == "1/2"
    assert sorted(probs.values()) == sorted(["1/4", "1/4", "1/2"])


def test_eval_divergent_text(capsys):
    code, out, _ = run(capsys, "eval", "Omega", "--fuel", "8")
    assert code == 0
    assert "deficit 1" in out
    assert "bottom" in out


def test_fuel_cap_exit_code(capsys):
    code, _, err = run(capsys, "eval", "I", "--fuel", "100")
    assert code == 2
    assert "cap" in err


def test_negative_fuel_rejected(capsys):
    code, _, err = run(capsys, "eval", "I", "--fuel", "-1")
    assert code == 1


def test_trace_json(capsys):
    code, payload, _ = run_json(capsys, "trace", "a (+) b", "--steps", "2")
    assert code == 0
    assert payload["tree"]["prob"] == "1"
    assert len(payload["tree"]["children"]) == 2
    assert payload["cumulative"]["mass"] == "1"


def test_trace_spine_strategy(capsys):
    code, out, _ = run(capsys, "trace", r"(\x.(\y.x) y) z", "--steps", "1",
                       "--strategy", "spine")
    assert code == 0
    assert r"(\x.x) z" in out


def test_tree_json(capsys):
    code, payload, _ = run_json(
        capsys, "tree", r"Theta (\f.y (+) y f)", "--level", "2", "--fuel", "8"
    )
    assert code == 0
    assert payload["level"] == 2
    assert payload["deficit"] == "0"
    weights = sorted(e["weight"] for e in payload["support"])
    assert weights == ["1/2", "1/2"]
    assert all(e["tree"]["head"] == "y" for e in payload["support"])


def test_compare_tree_equal(capsys):
    code, payload, _ = run_json(
        capsys, "compare-tree", "I", r"\x y.x y", "--level", "4", "--fuel", "4"
    )
    assert code == 0
    assert payload["verdict"] == "equal"


def test_compare_tree_different(capsys):
    code, payload, _ = run_json(
        capsys,
        "compare-tree",
        r"\x y z.z (x (+) y)",
        r"\x y z.(z x) (+) (z y)",
        "--level", "2", "--fuel", "8",
    )
    assert code == 0
    assert payload["verdict"] == "different"
    assert isinstance(payload["path"], list)


def test_compare_tree_unknown(capsys):
    code, payload, _ = run_json(
        capsys, "compare-tree", r"(\x.y (+) x x) (\x.y (+) x x)", "y",
        "--level", "2", "--fuel", "6",
    )
    assert code == 0
    assert payload["verdict"] == "unknown"
    assert payload["bound"] == "1/64"


def test_bisim_distinguishes(capsys):
    code, payload, _ = run_json(
        capsys,
        "bisim",
        r"\x y z.z (x (+) y)",
        r"\x y z.(z x) (+) (z y)",
        "--depth", "8", "--fuel", "6", "--pool", "Omega,I",
    )
    assert code == 0
    assert payload["verdict"] == "distinguished"
    assert payload["trace"]["kind"] == "block"


def test_bisim_inconclusive(capsys):
    code, payload, _ = run_json(
        capsys, "bisim", "I", r"\x y.x y", "--depth", "8", "--fuel", "6"
    )
    assert code == 0
    assert payload == {"verdict": "inconclusive", "trace": None}


def test_sim_witness_masses(capsys):
    code, payload, _ = run_json(
        capsys,
        "sim",
        r"\x.x (Omega (+) I)",
        r"\x.(x Omega) (+) (x I)",
        "--depth", "6", "--fuel", "6", "--pool", "I",
    )
    assert code == 0
    assert payload["verdict"] == "distinguished"
    flat = json.dumps(payload)
    assert "1/2" in flat


def test_appcmp(capsys):
    code, payload, _ = run_json(
        capsys,
        "appcmp",
        r"\x y z.z (x (+) y)",
        r"\x y z.(z x) (+) (z y)",
        "--maxlen", "2", "--pool", "Omega,I",
    )
    assert code == 0
    seqs = payload["sequences"]
    assert len(seqs) == 1 + 2 + 4
    assert seqs[0]["args"] == []
    assert all(s["verdict"] in ("LeftExceeds", "RightExceeds", "Inconclusive")
               for s in seqs)


def test_assign_roundtrip(tmp_path, capsys):
    problem = tmp_path / "problem.json"
    problem.write_text(
        json.dumps({"p": ["1/2", "1/2"], "r": {"{1,2}": "1"}}), encoding="utf-8"
    )
    code, payload, _ = run_json(capsys, "assign", "--problem", str(problem))
    assert code == 0
    assert payload["feasible"] is True
    assert all(e["share"] == "1/2" for e in payload["shares"])


def test_assign_infeasible(tmp_path, capsys):
    problem = tmp_path / "problem.json"
    problem.write_text(
        json.dumps({"p": ["3/4", "1/2"], "r": {"{1}": "1/2", "{2}": "1/2"}}),
        encoding="utf-8",
    )
    code, payload, _ = run_json(capsys, "assign", "--problem", str(problem))
    assert code == 0
    assert payload == {"feasible": False, "witness": [1]}


def test_assign_missing_file(capsys):
    code, _, err = run(capsys, "assign", "--problem", "no-such-file.json")
    assert code == 1


def test_assign_bad_json(tmp_path, capsys):
    problem = tmp_path / "problem.json"
    problem.write_text("{not json", encoding="utf-8")
    code, _, err = run(capsys, "assign", "--problem", str(problem))
    assert code == 1


def test_fixtures_all_pass(capsys):
    code, payload, _ = run_json(capsys, "fixtures")
    assert code == 0
    assert payload["failed"] == 0
    assert payload["passed"] == len(payload["results"]) >= 18


def test_proptest_clean(capsys):
    code, payload, _ = run_json(capsys, "proptest", "--seed", "7", "--cases", "60")
    assert code == 0
    assert payload["cases"] == 60
    assert payload["failures"] == []


def test_entry_point_script():
    proc = subprocess.run(
        [sys.executable, "-m", "plam.cli", "eval", "Omega (+) I", "--fuel", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "1/2" in proc.stdout
