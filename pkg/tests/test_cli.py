import json
import os

import pytest

from halfspace.cli import main


def test_simulate_asep_csv_and_manifest(tmp_path):
    out = tmp_path / "asep.csv"
    rc = main(["simulate", "--model", "asep", "--q", "0.4", "--alpha", "0.5",
               "--beta", "0.2", "--tau", "5", "--samples", "2000",
               "--seed", "7", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "s,cdf,stderr"
    man = json.loads((tmp_path / "asep.manifest.json").read_text())
    assert man["config"]["seed"] == 7 and "version" in man


def test_simulate_missing_rates_exits_2(tmp_path):
    rc = main(["simulate", "--model", "asep", "--q", "0.4",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 2


def test_simulate_invalid_sixvertex_params(tmp_path):
    rc = main(["simulate", "--model", "sixvertex", "--q", "0.3", "--t", "0.9",
               "--nu", "2.0", "--a", "0.4", "--n", "2", "--samples", "10",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 2


def test_simulate_deterministic_output(tmp_path):
    args = ["simulate", "--model", "asep", "--q", "0.4", "--alpha", "0.5",
            "--beta", "0.2", "--tau", "3", "--samples", "1500", "--seed", "3"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_pfaffian_cdf_table(tmp_path):
    out = tmp_path / "pf.csv"
    rc = main(["pfaffian-cdf", "--model", "sixvertex", "--q", "0.3", "--t", "0.2",
               "--nu", "2.0", "--a", "0.4", "--n", "2", "--s-min", "0",
               "--s-max", "4", "--step", "2", "--nodes", "128", "--out", str(out)])
    assert rc == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0].startswith("s,cdf")
    vals = [float(r.split(",")[1]) for r in rows[1:]]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_pfaffian_cdf_invalid_regime(tmp_path):
    rc = main(["pfaffian-cdf", "--model", "sixvertex", "--q", "0.3", "--t", "0.8",
               "--nu", "2.0", "--a", "0.4", "--n", "2", "--out",
               str(tmp_path / "x.csv")])
    assert rc == 2


def test_limit_table_monotone(tmp_path):
    out = tmp_path / "lim.csv"
    rc = main(["limit", "--dist", "gse", "--s-min", "-3", "--s-max", "1",
               "--s-step", "1.0", "--out", str(out)])
    assert rc == 0
    rows = out.read_text().strip().splitlines()
    vals = [float(r.split(",")[1]) for r in rows[1:]]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_verify_suite_exit_codes():
    assert main(["verify", "--suite", "yangbaxter", "--fast"]) == 0
    assert main(["verify", "--suite", "nope"]) == 2


def test_config_file_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 0.5, "beta": 0.2}))
    out = tmp_path / "c.csv"
    rc = main(["--config", str(cfg), "simulate", "--model", "asep", "--q", "0.4",
               "--tau", "2", "--samples", "500", "--out", str(out)])
    assert rc == 0
