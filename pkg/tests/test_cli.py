from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from qecforge.cli import EXIT_CONFIG, EXIT_INCOMPATIBLE, EXIT_OK, main
from qecforge.experiments import CSV_HEADER
from qecforge.floquet import FOUR_QUBIT_ISGS, IsgTrace
from qecforge.tableau import Tableau

FIXTURES = Path(__file__).parent / "fixtures"


def run(*argv):
    buf = io.StringIO()
    rc = main(list(argv), out=buf)
    return rc, buf.getvalue()


def test_info_five_qubit_lists_generators():
    rc, text = run("info", "five_qubit")
    assert rc == EXIT_OK
    for g in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"):
        assert g in text
    assert "[[5,1,3]]" in text
    assert "saturated" in text


def test_info_toric_and_bacon_shor():
    rc, text = run("info", "toric", "--L", "3", "--json")
    doc = json.loads(text)
    assert rc == 0 and (doc["n"], doc["k"], doc["distance"]) == (18, 2, 3)
    rc, text = run("info", "bacon_shor", "--M", "3", "--N", "3")
    assert rc == 0 and "[[9,1,4,3]]" in text


def test_info_lower_bound_label():
    rc, text = run("info", "rotated_surface", "--d", "5", "--distance-cap", "3")
    assert rc == 0
    assert "certified lower bound" in text


def test_info_unknown_family_is_config_error():
    rc, _ = run("info", "no_such_code")
    assert rc == EXIT_CONFIG


def test_bounds_subcommand():
    rc, text = run("bounds", "--n", "5", "--k", "1", "--d", "3", "--json")
    doc = {b["bound"]: b for b in json.loads(text)["bounds"]}
    assert doc["hamming"]["status"] == doc["singleton"]["status"] == "saturated"
    rc, text = run("bounds", "--n", "7", "--k", "1", "--d", "3", "--json")
    ham = json.loads(text)["bounds"][0]
    assert (ham["lhs"], ham["rhs"], ham["status"]) == (44, 128, "satisfied")
    rc, text = run("bounds", "--n", "1", "--k", "1", "--d", "1")
    assert rc == 0 and "violated" not in text
    assert run("bounds", "--n", "5")[0] == EXIT_CONFIG


def test_sweep_csv_reproducible(tmp_path):
    """Same seed twice gives byte-identical output once timing is disabled."""
    args = ["sweep", "--code", "rotated_surface", "--d", "3", "--decoder", "mwpm", "--p", "0.02", "0.05",
            "--shots", "3000", "--seed", "11", "--no-timing"]
    rc1, a = run(*args)
    rc2, b = run(*args)
    assert rc1 == rc2 == 0
    assert a == b
    lines = a.strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    assert lines[1].startswith("rotated_surface(d=3),mwpm,depolarizing,0.02,3000,")


def test_sweep_workers_do_not_change_output():
    base = ["sweep", "--code", "toric", "--L", "3", "--decoder", "unionfind", "--p", "0.05",
            "--shots", "4000", "--chunk", "1000", "--seed", "3", "--no-timing"]
    _, one = run(*base)
    _, many = run(*base, "--workers", "2")
    assert one == many


def test_sweep_zero_p_and_json_rule_of_three():
    rc, text = run("sweep", "--code", "steane", "--decoder", "lookup", "--p", "0", "--shots", "500", "--json")
    lines = [json.loads(l) for l in text.strip().splitlines()]
    assert rc == 0
    assert "config" in lines[0]
    assert lines[1]["failures"] == 0
    assert lines[1]["rule_of_three"] == pytest.approx(3 / 500)


def test_sweep_config_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"code": {"family": "repetition", "n": 5}, "decoder": "mwpm", "p": [0.1],
                               "shots": 100, "seed": 1, "noise": {"kind": "bitflip"}}))
    out = tmp_path / "rows.json"
    rc, _ = run("sweep", "--config", str(cfg), "--shots", "250", "--json", "--output", str(out))
    assert rc == 0
    meta, row = [json.loads(l) for l in out.read_text().splitlines()]
    assert meta["config"]["shots"] == 250
    assert meta["config"]["seed"] == 1
    assert row["shots"] == 250 and row["code"] == "repetition(n=5)"


def test_sweep_seed_from_environment(monkeypatch):
    args = ["sweep", "--code", "repetition", "--decoder", "mwpm", "--noise", "bitflip", "--p", "0.2",
            "--shots", "2000", "--no-timing"]
    monkeypatch.setenv("QECFORGE_SEED", "99")
    _, a = run(*args)
    _, b = run(*args, "--seed", "99")
    monkeypatch.setenv("QECFORGE_SEED", "100")
    _, c = run(*args)
    assert a == b
    assert a != c


def test_sweep_error_exit_codes(tmp_path):
    assert run("sweep", "--code", "five_qubit", "--decoder", "mwpm", "--p", "0.01", "--shots", "10")[0] \
        == EXIT_INCOMPATIBLE
    assert run("sweep", "--code", "bacon_shor", "--decoder", "lookup", "--p", "0.01")[0] == EXIT_INCOMPATIBLE
    assert run("sweep", "--code", "steane", "--decoder", "nope", "--p", "0.01")[0] == EXIT_CONFIG
    assert run("sweep", "--code", "steane", "--p", "1.5")[0] == EXIT_CONFIG
    assert run("sweep", "--code", "steane", "--decoder", "bp", "--option", "bogus=1", "--p", "0.1")[0] == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("sweep", "--config", str(bad))[0] == EXIT_CONFIG
    assert run("frobnicate")[0] == EXIT_CONFIG


def test_floquet_four_qubit_summary():
    rc, text = run("floquet", "four_qubit", "--cycles", "2", "--json")
    summary = json.loads(text.strip().splitlines()[-1])["summary"]
    assert rc == 0
    assert summary["period"] == 6 and summary["conservation"] is True


def test_floquet_forced_trace_matches_fixture(tmp_path):
    path = tmp_path / "trace.jsonl"
    rc, _ = run("floquet", "four_qubit", "--cycles", "2", "--forced", "1", "--trace", str(path))
    assert rc == 0
    fixture = (FIXTURES / "four_qubit_forced.jsonl").read_text()
    assert path.read_text() == fixture
    trace = IsgTrace.loads(fixture)
    for i, gens in enumerate(FOUR_QUBIT_ISGS):
        assert trace.tableau(i).same_group(Tableau(4, gens))


def test_floquet_honeycomb_k():
    rc, text = run("floquet", "honeycomb", "--a", "4", "--b", "4")
    assert rc == 0
    assert "k: 2" in text
    assert "static subsystem view k: 0" in text


def test_msd_and_threshold_tables():
    rc, text = run("msd", "--p", "0.01", "0.001", "--json")
    rows = [json.loads(l) for l in text.strip().splitlines()]
    assert rc == 0 and rows[0]["accept"] == pytest.approx(1 - 10 * 0.01 * 0.99 ** 9)
    rc, text = run("threshold", "--A", "1e4", "--p", "1e-5", "--levels", "3", "--json")
    doc = json.loads(text)
    assert rc == 0 and float(doc["levels"][3]["iterated"]) == pytest.approx(1e-12)
    assert run("threshold", "--A", "-1", "--p", "0.1")[0] == EXIT_CONFIG
