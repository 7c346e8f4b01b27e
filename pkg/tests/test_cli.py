import json

import pytest

from wsupport.cli import main, read_config
from wsupport.errors import ConfigError


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_help_exits_zero(capsys):
    code, out, _ = _run(capsys, "--help")
    assert code == 0 and "verify" in out


def test_ops_list(capsys, tmp_path):
    path = tmp_path / "ops.json"
    code, out, _ = _run(capsys, "ops", "list", "--output", str(path))
    assert code == 0
    doc = json.loads(out)
    names = {d["name"] for d in doc["operators"]}
    assert {"hyperL", "besselL0", "calogero", "jacobi1d", "xdx"} <= names
    assert json.loads(path.read_text()) == doc


def test_roots_with_theta(capsys):
    code, out, _ = _run(capsys, "roots", "A", "2", "--theta", "1", "--samples", "2000")
    doc = json.loads(out)
    assert code == 0
    assert doc["group_order"] == 6
    assert doc["theta"] == [1]
    assert [e["root_index"] for e in doc["a_theta_inequalities"]] == [1, 2]
    assert doc["cone_lemma"]["disagreements"] == 0


def test_roots_errors(capsys):
    assert _run(capsys, "roots", "I2", "17", "--cap", "10")[0] == 1
    assert _run(capsys, "roots", "A", "2", "--theta", "3")[0] == 2
    assert _run(capsys, "roots", "E", "8")[0] == 2
    assert _run(capsys, "roots", "A", "2", "--bogus")[0] == 2


def test_symbol(capsys):
    code, out, _ = _run(capsys, "symbol", "jacobi1d", "--reg", "--x", "1", "--lam", "2")
    assert code == 0
    assert json.loads(out)["symbol"] == pytest.approx(5.524391382167262)  # 4 sinh(1)^2
    assert _run(capsys, "symbol", "jacobi1d", "--x", "0", "--lam", "1")[0] == 1
    assert _run(capsys, "symbol", "jacobi1d", "--x", "1,2", "--lam", "1")[0] == 2
    assert _run(capsys, "symbol", "nope")[0] == 2
    assert _run(capsys, "symbol", "hyperL", "A2", "--param", "m")[0] == 2


def test_symbol_factor(capsys):
    code, out, _ = _run(capsys, "symbol", "besselL0", "A2", "--reg", "--factor", "--samples", "300")
    assert code == 0 and json.loads(out)["factorization"]["passed"] is True
    assert _run(capsys, "symbol", "besselL0", "A2", "--factor")[0] == 2


def test_verify_writes_reports(capsys, tmp_path):
    out_dir = tmp_path / "out"
    csv = tmp_path / "hulls.csv"
    code, out, _ = _run(capsys, "verify", "rank1-abc", "--out", str(out_dir), "--csv", str(csv))
    assert code == 0
    summary = json.loads(out)
    assert summary["passed"] is True and len(summary["reports"]) == 3
    assert sorted(p.name for p in out_dir.iterdir()) == [
        "rank1-abc-0.json", "rank1-abc-1.json", "rank1-abc-2.json", "rank1-abc-summary.json"]
    assert csv.read_text().startswith("report,hull,vertex,coords")


def test_verify_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# coarse run\ngrid = 1001\neps = 0.1\n")
    assert read_config(str(cfg)) == {"grid": "1001", "eps": "0.1"}
    code, out, _ = _run(capsys, "verify", "rank1-abc", "--config", str(cfg))
    assert code == 0 and json.loads(out)["reports"][0]["grid"]["shape"] == [1001]
    cfg.write_text("colour = red\n")
    with pytest.raises(ConfigError):
        read_config(str(cfg))
    assert _run(capsys, "verify", "rank1-abc", "--config", str(cfg))[0] == 2
    assert _run(capsys, "verify", "rank1-abc", "--eps", "-1")[0] == 2
    assert _run(capsys, "verify", "nope")[0] == 2
