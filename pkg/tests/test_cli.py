import json

import pytest

from tfzero.cli import (
    RUNCONFIG_SCHEMA,
    RunConfig,
    dumps,
    main,
    parse_config,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_point(capsys):
    code, out, _ = run(capsys, "eval", "--pair", "OneSided", "--params", '{"a": 1, "b": 1}',
                          "--point", "0,0")
    assert code == 0
    assert json.loads(out)["value"] == [0.5, 0.0]


def test_eval_with_oracle_and_negative_point(capsys):
    code, out, _ = run(capsys, "eval", "--pair", "Gauss", "--point", "-1,0.5", "--oracle")
    d = json.loads(out)
    assert code == 0 and d["deviation"] < 1e-8


def test_eval_csv(tmp_path, capsys):
    csv = tmp_path / "v.csv"
    code, _, _ = run(capsys, "eval", "--pair", "Gauss", "--grid", "-1,1,3,-1,1,3", "--csv", str(csv))
    lines = csv.read_text().splitlines()
    assert code == 0 and lines[0] == "x,xi,re,im,modulus" and len(lines) == 10


def test_scan_outputs(tmp_path, capsys):
    pgm, out = tmp_path / "h.pgm", tmp_path / "r.json"
    code, _, _ = run(capsys, "scan", "--pair", "OneSided", "--grid", "-2,2,21,-2,2,21",
                     "--heatmap", str(pgm), "--out", str(out))
    assert code == 0
    d = json.loads(out.read_text())
    assert d["zeros"] == [] and "analytic" in d["certificates"]
    head = pgm.read_bytes()
    assert head.startswith(b"P5\n21 21\n255\n") and len(head) == len(b"P5\n21 21\n255\n") + 21 * 21
    assert (tmp_path / "r.json.log").exists()


def test_scan_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(capsys, "scan", "--pair", "SymExp", "--grid", "-3,3,41,-3,3,41", "--out", str(p))
    assert a.read_bytes() == b.read_bytes()


def test_hurwitz_command(capsys):
    code, out, _ = run(capsys, "hurwitz", "--An", "2")
    d = json.loads(out)
    assert code == 0 and d["is_hurwitz"] and d["minors"] == [12, 288]
    code, out, _ = run(capsys, "hurwitz", "--coeffs", "1,0,1")
    assert code == 0 and not json.loads(out)["is_hurwitz"]


def test_polyb_command(capsys):
    code, out, _ = run(capsys, "polyb", "--P", "0,1", "--Q", "0,1", "--scan", "--grid", "-1,1,51,-1,1,51")
    d = json.loads(out)
    assert code == 0 and not d["balk_zero_guaranteed"] and d["report"]["zeros"]


def test_stepfn_command(capsys):
    code, out, _ = run(capsys, "stepfn", "--mode", "lp", "--grid", "0,3,31,-5,5,31")
    assert code == 0 and json.loads(out)["zeros"]
    code, _, _ = run(capsys, "stepfn", "--mode", "monotone", "--grid", "0,3,31,-5,5,31")
    assert code == 0


def test_usage_errors(capsys):
    code, _, err = run(capsys, "scan", "--pair", "Gauss", "--grid", "1,2,3")
    assert code == 2 and "--grid" in err
    code, _, err = run(capsys, "reproduce", "bogus")
    assert code == 2
    code, _, err = run(capsys, "stepfn", "--mode", "lp", "--alpha", "1/2", "--grid", "0,1,3,0,1,3")
    assert code == 2 and "--alpha" in err
    code, _, _ = run(capsys, "eval", "--pair", "Gauss")
    assert code == 2
    code, _, err = run(capsys, "eval", "--pair", "Gauss", "--params", '{"q": 1}', "--point", "0,0")
    assert code == 2
    code, _, _ = run(capsys, "hurwitz", "--coeffs", "-1,2")
    assert code == 2


def test_help_prints_schema(capsys):
    assert main(["--help"]) == 0
    assert '"title": "RunConfig"' in capsys.readouterr().out


def test_run_config_round_trip():
    cfg = parse_config(["scan", "--pair", "Gauss", "--grid", "-1,1,3,-1,1,3"])
    back = RunConfig.from_json(json.loads(dumps(cfg.to_json())))
    assert back == cfg
    with pytest.raises(ValueError):
        RunConfig.from_json({"command": "scan", "bogus": 1})
    with pytest.raises(ValueError):
        RunConfig("nope")
    assert RUNCONFIG_SCHEMA["title"] == "RunConfig"


def test_threads_env(monkeypatch):
    monkeypatch.setenv("TFZERO_THREADS", "4")
    assert parse_config(["hurwitz", "--An", "3"]).parallelism == 4
    assert parse_config(["--threads", "2", "hurwitz", "--An", "3"]).parallelism == 2


def test_dumps_conventions():
    s = dumps({"b": 1j, "a": float("nan"), "c": 0.1})
    assert json.loads(s) == {"a": None, "b": [0.0, 1.0], "c": 0.1}
    assert s.index('"a"') < s.index('"b"')


@pytest.mark.parametrize("example_id", ["ex3_2", "sec4_hurwitz"])
def test_reproduce_passes(tmp_path, capsys, example_id):
    code, _, _ = run(capsys, "reproduce", example_id, "--out-dir", str(tmp_path))
    d = json.loads((tmp_path / f"{example_id}.json").read_text())
    assert code == 0 and d["pass"] and d["claims"]
    assert "elapsed" in (tmp_path / f"{example_id}.json.log").read_text()
