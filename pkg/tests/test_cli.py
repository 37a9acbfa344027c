import json

import pytest

from ainfty_forge.cli import ConfigError, bundled_config, dumps, main, parse_config, run

SMALL_CFG = """
[run]
n = 3
a = 3
pipelines = {pipes}

[superpotential]
terms =
    1; 1,1,1; 0,0,0
    {k1}; 3,0,0; 1,0,0
    1; 0,3,0; 0,1,0
    1; 0,0,3; 0,0,1

[truncation]
max_r_order = 2
max_u_degree = 6
max_length = 4

[hh]
lengths = 3, 4

[jacobian]
r_values = 1/10, 1
"""


def write(tmp_path, text, name="cfg.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def cfg_text(pipes="type-a", k1="1"):
    return SMALL_CFG.format(pipes=pipes, k1=k1)


def test_parse_bundled():
    cfg = parse_config(bundled_config("fermat-n3"))
    assert cfg.n == 3 and cfg.a == 3
    assert len(cfg.terms) == 4
    assert cfg.policy.max_length == 6
    assert cfg.hh_lengths == (3, 4, 5, 6)
    assert [str(r) for r in cfg.r_values] == ["1/10", "1/7", "1"]


@pytest.mark.parametrize("text", [
    "[run]\nn = 2\n",
    "[other]\nx = 1\n",
    "[run]\nn = three\n",
    "[run]\nn = 3\npipelines = frobnicate\n",
    "[run]\nn = 3\n[superpotential]\nterms = 1/0; 1,1,1; 0,0,0\n",
    "[run]\nn = 3\n[superpotential]\nterms = 1; 1,1; 0,0,0\n",
    "[run]\nn = 3\n[superpotential]\nterms = 1; 1,1,1\n",
    "[run]\nn = 3\n[truncation]\nmax_length = -1\n",
    "not an ini file",
])
def test_config_errors(tmp_path, text, capsys):
    with pytest.raises(ConfigError):
        parse_config(text)
    assert main(["run", "--config", write(tmp_path, text)]) == 2


def test_missing_config_file(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.ini")]) == 2


def test_empty_pipeline_list(tmp_path, capsys):
    code = main(["run", "--config", write(tmp_path, cfg_text(pipes=""))])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["report"]["status"] == "pass"
    assert report["report"]["pipelines"] == {}


def test_perturbed_w_fails_type_a(tmp_path, capsys):
    code = main(["run", "--config", write(tmp_path, cfg_text(k1="2"))])
    assert code == 1
    body = json.loads(capsys.readouterr().out)["report"]["pipelines"]["type-a"]
    assert body["status"] == "fail"
    assert body["discrepancy"] == "(1)*r1*u1^3"


def test_small_run_passes(tmp_path, capsys):
    out = tmp_path / "report.json"
    pipes = "check-square, mf-check, minimal-model, type-a, jacobian, versality"
    code = main(["run", "--config", write(tmp_path, cfg_text(pipes=pipes)), "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["report"]["status"] == "pass"
    assert set(report["report"]["pipelines"]) == {p.strip() for p in pipes.split(",")}
    assert set(report["timings"]) == set(report["report"]["pipelines"])


def test_alias_subcommand(tmp_path, capsys):
    assert main(["jacobian", "--config", write(tmp_path, cfg_text())]) == 0
    report = json.loads(capsys.readouterr().out)
    assert list(report["report"]["pipelines"]) == ["jacobian"]
    assert report["report"]["pipelines"]["jacobian"]["r_values"]["1/10"]["quotient_dimension"] == 8


def test_report_is_deterministic():
    cfg = parse_config(cfg_text(pipes="check-square, mf-check, type-a, jacobian"))
    a = run(cfg)
    b = run(cfg, parallel=True)
    assert dumps(a["report"]) == dumps(b["report"])
    assert a["report"]["input_hash"] == run(parse_config(cfg_text(pipes="check-square, mf-check, type-a, jacobian")))[
        "report"]["input_hash"]
    other = run(parse_config(cfg_text(pipes="check-square, mf-check, type-a, jacobian", k1="3")))
    assert other["report"]["input_hash"] != a["report"]["input_hash"]


def test_no_floats_in_report():
    cfg = parse_config(cfg_text(pipes="jacobian, type-a"))
    body = run(cfg)["report"]

    def walk(x):
        if isinstance(x, float):
            raise AssertionError(f"float in report: {x}")
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)

    walk(body)


def test_thread_count_does_not_change_results(monkeypatch):
    cfg = parse_config(cfg_text(pipes="check-square, mf-check, jacobian"))
    monkeypatch.setenv("AINFTY_FORGE_THREADS", "1")
    a = run(cfg, parallel=True)["report"]
    monkeypatch.setenv("AINFTY_FORGE_THREADS", "3")
    b = run(cfg, parallel=True)["report"]
    assert a == b


def test_bundled_config_passes(capsys):
    assert main(["run", "--config", "bundled:fermat-n3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert all(b["status"] == "pass" for b in report["report"]["pipelines"].values())
    assert len(report["report"]["pipelines"]) == 7
