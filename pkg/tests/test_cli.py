import json

import pytest
from click.testing import CliRunner

from wplmut.cli import ConfigError, SuiteConfig, main, run_suite, twists


def test_mutation_suite_counts():
    rep = run_suite(SuiteConfig("mutation", weights=[(2, 3)]))
    assert rep.summary()["PASS"] == 4 and rep.ok


def test_weyl_grid():
    rep = run_suite(SuiteConfig("weyl"))
    assert rep.ok
    assert {c.id.split("/n=")[1].split("/")[0] for c in rep.checks} == {"2", "3", "4", "5", "6"}


def test_unknown_suite():
    with pytest.raises(ConfigError):
        run_suite(SuiteConfig("nope"))
    with pytest.raises(ConfigError):
        run_suite(SuiteConfig("hall-appendix", q_list=(6,)))


def test_twists_cover_24_classes():
    from wplmut.lattice import WeightData

    assert len(twists(WeightData((2, 3)), (-2, -1, 0, 1))) == 24


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_suite(SuiteConfig("eta", weights=[(2, 3)], report_path=str(a), seed=3))
    run_suite(SuiteConfig("eta", weights=[(2, 3)], report_path=str(b), seed=3))
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["params"]["seed"] == 3
    ids = [c["id"] for c in data["checks"]]
    assert ids == sorted(ids)
    assert all(c["elapsed_ms"] is None for c in data["checks"])


def test_cli_exit_codes(tmp_path):
    runner = CliRunner()
    ok = runner.invoke(main, ["run", "mutation", "--weights", "2,3;2,2,2", "--quiet"])
    assert ok.exit_code == 0
    assert "FAIL=0" in ok.output
    bad = runner.invoke(main, ["run", "exp-ad", "--weights", "2,3", "--quiet"])
    assert bad.exit_code == 1
    assert runner.invoke(main, ["run", "bogus"]).exit_code == 2


def test_cli_cache_admin(tmp_path):
    runner = CliRunner()
    out = runner.invoke(main, ["cache", "stats", "--cache", str(tmp_path)])
    assert out.exit_code == 0 and json.loads(out.output) == {"distinct": 0, "records": 0}
    r = runner.invoke(main, ["run", "hall-appendix", "--n", "2", "--q", "2,3", "--cache", str(tmp_path), "--quiet"])
    assert r.exit_code == 0
    stats = json.loads(runner.invoke(main, ["cache", "stats", "--cache", str(tmp_path)]).output)
    assert stats["records"] > 0
    ver = json.loads(runner.invoke(main, ["cache", "verify", "--cache", str(tmp_path), "--fraction", "1"]).output)
    assert ver["mismatches"] == 0 and ver["checked"] == stats["records"]
    from wplmut import hall

    with open(tmp_path / hall.CACHE_FILE, "a") as fh:
        fh.write("broken\n")
    bad = runner.invoke(main, ["cache", "stats", "--cache", str(tmp_path)])
    assert bad.exit_code == 2 and "line" in bad.output


def test_cli_tits_on_affine_weights_skips():
    rep = run_suite(SuiteConfig("tits", weights=[(2, 2, 2, 2)], height_cap=3))
    assert any(c.status == "SKIPPED" for c in rep.checks)
