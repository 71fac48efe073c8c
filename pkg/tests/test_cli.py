import csv
import io
import json
import math

import pytest

from lame_choquet.cli import EXIT_CONFIG, EXIT_FALSIFIED, EXIT_OK, EXIT_SOLVER, main, render


def write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(cfg if isinstance(cfg, str) else json.dumps(cfg))
    return str(path)


def run(tmp_path, command, cfg=None, *extra, fmt="json"):
    out = tmp_path / f"out.{fmt}"
    argv = [command, "--out", str(out), "--format", fmt, *extra]
    if cfg is not None:
        argv += ["--config", write(tmp_path, cfg)]
    code = main(argv)
    text = out.read_text() if out.exists() else ""
    return code, text


P3 = {"instance": {"zeta": [[-1, 0], [0, 0], [1, 0]], "a": [1, 1, 1], "k": 2, "n": 2}}
LEGENDRE = {"instance": {"zeta": [-1, 1], "a": [1, 1], "n": 2}}


def test_solve_p3(tmp_path):
    code, text = run(tmp_path, "solve", P3)
    assert code == EXIT_OK
    report = json.loads(text)
    assert len(report["tables"][0]["rows"]) == 3
    assert report["provenance"]["instance"] == P3["instance"]


def test_malformed_json(tmp_path):
    code, _ = run(tmp_path, "solve", "{nope")
    assert code == EXIT_CONFIG


@pytest.mark.parametrize(
    "cfg",
    [
        {**LEGENDRE, "typo": 1},
        {"instance": {**LEGENDRE["instance"], "zetta": [0, 1]}},
        {**LEGENDRE, "numeric_policy": {"solver_toll": 1e-9}},
        {"instance": {"zeta": [-1, 1], "a": [1, -1]}},
        {**LEGENDRE, "jacobi": {"n_maxx": 3}},
    ],
)
def test_config_errors(tmp_path, cfg):
    code, _ = run(tmp_path, "solve", cfg)
    assert code == EXIT_CONFIG


def test_missing_instance(tmp_path):
    assert main(["verify"]) == EXIT_CONFIG


def test_bad_seed(tmp_path):
    assert run(tmp_path, "solve", P3, "--seed", str(2**64))[0] == EXIT_CONFIG
    assert run(tmp_path, "solve", P3, "--seed", "x")[0] == EXIT_CONFIG


def test_solver_failure(tmp_path):
    cfg = {"instance": {"zeta": [[0, 1], [1, 0], [-1, -1]], "a": [1, 1, 1], "n": 2}, "numeric_policy": {"multistart": 0}}
    assert run(tmp_path, "solve", cfg)[0] == EXIT_SOLVER


def test_verify_legendre(tmp_path):
    code, text = run(tmp_path, "verify", LEGENDRE)
    assert code == EXIT_OK
    report = json.loads(text)
    assert all("tolerance" in v for v in report["verdicts"])
    names = {v["name"]: v for v in report["verdicts"]}
    assert names["pair[0].res_k.lp_feasible"]["passed"]
    circle = names["pair[0].potential.circle_min"]
    assert not circle["gating"] and not circle["passed"]
    assert names["pair[0].potential.premise_min"]["passed"]


def test_verify_negative_control(tmp_path):
    code, _ = run(tmp_path, "verify", {**P3, "perturb_s": 0.1})
    assert code == EXIT_FALSIFIED


def test_verify_k3_carries_note(tmp_path):
    cfg = {"instance": {"zeta": [-1, 0, 1], "a": [1, 1, 1], "k": 3, "n": 3}}
    code, text = run(tmp_path, "verify", cfg)
    assert code == EXIT_OK
    assert json.loads(text)["notes"]


def test_asymptotics_tables(tmp_path):
    code, text = run(tmp_path, "asymptotics", {**LEGENDRE, "asymptotics": {"n_list": [2, 4, 8, 16]}}, fmt="csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 4 and all(float(r["coef_S"]) == 1.0 for r in rows)
    code, text = run(tmp_path, "asymptotics", {"asymptotics": {"regime": "thermodynamic", "p_list": [4, 8, 16]}}, fmt="csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [r["bound_ok"] for r in rows] == ["true"] * 3
    code, text = run(tmp_path, "asymptotics", {"asymptotics": {"n_list": []}}, fmt="csv")
    assert code == EXIT_OK and len(text.splitlines()) == 1


def test_jacobi_single_row(tmp_path):
    cfg = {"jacobi": {"n_list": [2], "alphas": [0], "betas": [0], "arcsine_c": [0]}}
    code, text = run(tmp_path, "jacobi", cfg)
    assert code == EXIT_OK
    report = json.loads(text)
    row = report["tables"][0]["rows"][0]
    assert row["zeros"] == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)], abs=1e-15)
    arc = report["tables"][1]["rows"][0]
    assert arc["lhs"] == pytest.approx(2 / math.pi, abs=1e-8)


def test_classical_small(tmp_path):
    cfg = {"classical": {"configs": 10, "lemma2_configs": 1, "polynomials": 5}}
    code, text = run(tmp_path, "classical", cfg, "--seed", "7")
    assert code == EXIT_OK


def test_env_seed_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("LAME_CHOQUET_SEED", "99")
    cfg = {"classical": {"configs": 3, "lemma2_configs": 0, "polynomials": 0}}
    _, text = run(tmp_path, "classical", cfg)
    assert json.loads(text)["provenance"]["seed"] == 99
    _, text = run(tmp_path, "classical", cfg, "--seed", "5")
    assert json.loads(text)["provenance"]["seed"] == 5


def test_byte_identical(tmp_path):
    cfg = {"instance": {"zeta": [[0, 1], [1, 0], [-1, -1]], "a": [1, 2, 1], "n": 2}}
    _, first = run(tmp_path, "verify", cfg, "--seed", "12345")
    _, second = run(tmp_path, "verify", cfg, "--seed", "12345")
    assert first == second and first


def test_render_sentinels():
    payload = {"tables": [], "verdicts": [{"name": "u", "value": float("-inf"), "passed": False, "tolerance": 1e-9, "gating": True}]}
    text = render(payload, "json")
    assert '"-inf"' in text and "NaN" not in text and "Infinity" not in text
    text = render({**payload, "verdicts": [{**payload["verdicts"][0], "value": float("nan")}]}, "json")
    assert "NaN" not in text
    text = render({**payload, "verdicts": [{**payload["verdicts"][0], "value": 0.1}]}, "csv")
    assert "0.10000000000000001" in text
    assert text.endswith("\r\n")
