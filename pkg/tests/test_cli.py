import json

import pytest

from nklab import cli
from nklab.report import without_timing


def _run(tmp_path, *extra, name="out"):
    out = tmp_path / name
    code = cli.main(["verify", "algebra", "-q", "--out", str(out), *extra])
    return code, out


def test_catalog_list_and_dump(capsys):
    assert cli.main(["catalog", "list"]) == 0
    assert "halfsphere-lag" in capsys.readouterr().out
    assert cli.main(["catalog", "dump", "boruvka-s2"]) == 0
    assert json.loads(capsys.readouterr().out)["id"] == "boruvka-s2"
    assert cli.main(["catalog", "dump", "nope"]) == 2


def test_verify_writes_report(tmp_path):
    code, out = _run(tmp_path)
    assert code == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["summary"]["failed"] == 0 and doc["summary"]["total"] > 0
    assert "timing" in doc and "algebra" in doc["suites"]
    assert (out / "residuals.csv").read_text().startswith("suite,")


def test_failure_exit_code_still_writes(tmp_path):
    code, out = _run(tmp_path, "--tol-tier", "algebra=1e-30")
    assert code == 1
    assert json.loads((out / "report.json").read_text())["summary"]["failed"] > 0


@pytest.mark.parametrize("extra", [["--nodes", "17"], ["--catalog", "nope"], ["--tol-tier", "bogus=1"],
                                   ["--set", "seed"]])
def test_usage_errors(tmp_path, extra):
    code, out = _run(tmp_path, *extra)
    assert code == 2
    assert not out.exists()


def test_config_file_and_env(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nseed = 7\ntol.algebra = 1e-11\n")
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    assert cli.main(["verify", "algebra", "-q", "--config", str(cfg)]) == 0
    doc = json.loads((tmp_path / "env" / "report.json").read_text())
    assert doc["config"]["seed"] == 7
    assert doc["config"]["tolerances"]["algebra"] == 1e-11


def test_reproducible(tmp_path):
    _, a = _run(tmp_path, "--seed", "3", name="a")
    _, b = _run(tmp_path, "--seed", "3", name="b")
    da, db = (json.loads((d / "report.json").read_text()) for d in (a, b))
    assert without_timing(da) == without_timing(db)
    assert (a / "residuals.csv").read_text() == (b / "residuals.csv").read_text()
