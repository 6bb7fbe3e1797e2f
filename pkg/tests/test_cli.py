"""End-to-end command-line tests driven through main(argv)."""

import json

import numpy as np
import pytest

from bb84sdi import ideal_bb84_model, isotropic_model, phi
from bb84sdi.cli import main

WHITE_NOISE_09 = {
    "Az": 0, "Ax": 0, "Bz": 0, "Bx": 0,
    "Ezz": 0.9, "Ezx": 0, "Exz": 0, "Exx": 0.9,
}
COUNTEREXAMPLE = {
    "Az": 1, "Ax": 0, "Bz": 1, "Bx": 0,
    "Ezz": 1, "Ezx": 0, "Exz": 0, "Exx": 1,
}


def write_json(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def matrix_json(m):
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(m)]


def model_json(m):
    return {
        "d_B": m.d_bob,
        "rho_AB": matrix_json(m.rho),
        "alice_povms": {u: [matrix_json(e) for e in m.alice[u]] for u in ("z", "x")},
        "bob_povms": {u: [matrix_json(e) for e in m.bob[u]] for u in ("z", "x")},
    }


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_certify_white_noise_correlators(tmp_path, capsys):
    path = write_json(tmp_path, "req.json", {
        "format": "correlators", "correlators": WHITE_NOISE_09,
    })
    code, out, _ = run(capsys, ["certify", path])
    assert code == 0
    cert = json.loads(out)
    assert cert["rate"] == pytest.approx(0.4272060857680874, abs=1e-11)
    assert cert["precondition_ok"] and cert["condition_ok"]
    assert cert["variant"] == "improved" and cert["hab_mode"] == "phi_bound"
    assert cert["inputs"]["Ezz"] == 0.9


def test_certify_round_trip(tmp_path, capsys):
    first = write_json(tmp_path, "req.json", {
        "format": "correlators",
        "correlators": {"Az": 0.05, "Ax": 0.02, "Bz": 0.04, "Bx": 0.03,
                        "Ezz": 0.93, "Ezx": 0.01, "Exz": 0.02, "Exx": 0.91},
    })
    code, out, _ = run(capsys, ["certify", first])
    assert code == 0
    cert = json.loads(out)
    second = write_json(tmp_path, "again.json", {
        "format": "correlators", "correlators": cert["inputs"],
    })
    code, out, _ = run(capsys, ["certify", second])
    assert code == 0
    assert json.loads(out) == cert


def test_certify_counterexample(tmp_path, capsys):
    path = write_json(tmp_path, "req.json", {
        "format": "correlators", "correlators": COUNTEREXAMPLE,
    })
    code, out, _ = run(capsys, ["certify", path])
    assert code == 0
    cert = json.loads(out)
    assert cert["rate"] == 0.0
    assert cert["lambda"] == 0.0
    assert cert["condition_ok"] is False


def test_certify_probabilities_with_exact_conditioning(tmp_path, capsys):
    v = 0.9
    hi, lo = (1 + v) / 4, (1 - v) / 4
    corr = [[hi, lo], [lo, hi]]
    flat = [[0.25, 0.25], [0.25, 0.25]]
    path = write_json(tmp_path, "req.json", {
        "format": "probabilities",
        "probabilities": {"zz": corr, "zx": flat, "xz": flat, "xx": corr},
        "options": {"hab_mode": "exact"},
    })
    code, out, _ = run(capsys, ["certify", path])
    assert code == 0
    cert = json.loads(out)
    assert cert["hab_mode"] == "exact"
    assert cert["rate"] == pytest.approx(0.4272060857680874, abs=1e-11)


def test_certify_counts_marginal_mismatch(tmp_path, capsys):
    path = write_json(tmp_path, "req.json", {
        "format": "counts",
        "counts": {"zz": [[900, 0], [0, 100]], "zx": [[100, 400], [400, 100]],
                   "xz": [[250, 250], [250, 250]], "xx": [[500, 0], [0, 500]]},
    })
    code, _, err = run(capsys, ["certify", path])
    assert code == 2
    assert "Alice marginal" in err


def test_certify_malformed_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, ["certify", str(path)])
    assert code == 2
    assert "malformed JSON" in err


def test_certify_missing_field_is_named(tmp_path, capsys):
    broken = {k: v for k, v in WHITE_NOISE_09.items() if k != "Exx"}
    path = write_json(tmp_path, "req.json", {
        "format": "correlators", "correlators": broken,
    })
    code, _, err = run(capsys, ["certify", path])
    assert code == 2
    assert "'Exx'" in err


def test_certify_unknown_field_is_named(tmp_path, capsys):
    extra = dict(WHITE_NOISE_09, Q=0.5)
    path = write_json(tmp_path, "req.json", {
        "format": "correlators", "correlators": extra,
    })
    code, _, err = run(capsys, ["certify", path])
    assert code == 2
    assert "'Q'" in err


def test_certify_bad_format_tag(tmp_path, capsys):
    path = write_json(tmp_path, "req.json", {"format": "telepathy"})
    code, _, err = run(capsys, ["certify", path])
    assert code == 2
    assert "'format'" in err


def test_certify_exact_mode_needs_tables(tmp_path, capsys):
    path = write_json(tmp_path, "req.json", {
        "format": "correlators", "correlators": WHITE_NOISE_09,
        "options": {"hab_mode": "exact"},
    })
    code, _, err = run(capsys, ["certify", path])
    assert code == 2
    assert "joint tables" in err


def test_simulate_ideal_model(tmp_path, capsys):
    path = write_json(tmp_path, "model.json", model_json(ideal_bb84_model()))
    code, out, _ = run(capsys, ["simulate", path])
    assert code == 0
    result = json.loads(out)
    assert result["certificate"]["rate"] == 1.0
    assert result["dw_rate"] == pytest.approx(1.0, abs=1e-9)
    assert abs(result["gap"]) <= 1e-9
    assert result["summary"]["Ezz"] == 1.0 and result["summary"]["Exx"] == 1.0


def test_simulate_werner_state(tmp_path, capsys):
    path = write_json(tmp_path, "model.json", model_json(isotropic_model(0.8)))
    code, out, _ = run(capsys, ["simulate", path])
    assert code == 0
    result = json.loads(out)
    assert result["certificate"]["rate"] == pytest.approx(1 - 2 * phi(0.8), abs=1e-11)
    assert result["gap"] >= -1e-9


def test_simulate_incomplete_povm(tmp_path, capsys):
    doc = model_json(ideal_bb84_model())
    doc["alice_povms"]["z"][1] = matrix_json(0.5 * np.eye(2))
    path = write_json(tmp_path, "model.json", doc)
    code, _, err = run(capsys, ["simulate", path])
    assert code == 2
    assert "sum to the identity" in err


def test_simulate_missing_model_field(tmp_path, capsys):
    doc = model_json(ideal_bb84_model())
    del doc["rho_AB"]
    path = write_json(tmp_path, "model.json", doc)
    code, _, err = run(capsys, ["simulate", path])
    assert code == 2
    assert "'rho_AB'" in err


def test_scan_prints_report_and_writes_csv(tmp_path, capsys):
    csv = tmp_path / "rows.csv"
    code, out, _ = run(capsys, ["scan", "--n", "25", "--seed", "3", "--csv", str(csv)])
    assert code == 0
    assert "soundness scan: n=25 seed=3 (from --seed) d_B=2,3,4" in out
    assert "min gap" in out
    assert "violations below -1e-07: 0" in out
    lines = csv.read_text().strip().split("\n")
    assert lines[0] == "seed,d_B,dw_rate,certified_rate,gap"
    assert len(lines) == 26


def test_scan_seed_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("BB84SDI_SEED", "12")
    code, out, _ = run(capsys, ["scan", "--n", "5"])
    assert code == 0
    assert "seed=12 (from BB84SDI_SEED environment variable)" in out
    # an explicit flag wins over the environment
    code, out, _ = run(capsys, ["scan", "--n", "5", "--seed", "4"])
    assert code == 0
    assert "seed=4 (from --seed)" in out


def test_scan_rejects_bad_environment_seed(capsys, monkeypatch):
    monkeypatch.setenv("BB84SDI_SEED", "lucky")
    code, _, err = run(capsys, ["scan", "--n", "5"])
    assert code == 2
    assert "BB84SDI_SEED" in err


def test_scan_rejects_bad_dimensions(capsys):
    code, _, err = run(capsys, ["scan", "--n", "5", "--seed", "1", "--d-b", "2,x"])
    assert code == 2
    assert "--d-b" in err
    code, _, err = run(capsys, ["scan", "--n", "5", "--seed", "1", "--d-b", "9"])
    assert code == 2
    assert "1..8" in err


def test_lemmas_command(capsys):
    code, out, _ = run(capsys, ["lemmas", "--n", "50", "--seed", "3"])
    assert code == 0
    assert "lemma scan: n=50 seed=3 (from --seed)" in out
    for name in ("lemma1", "lemma2", "lemma3"):
        (line,) = [l for l in out.splitlines() if l.startswith(f"{name} worst gap")]
        assert line.endswith("pass")


def test_sweep_default_grid(capsys):
    code, out, _ = run(capsys, ["sweep"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "visibility,certified_rate,shor_preskill,lambda,condition_ok"
    assert len(lines) == 102
    assert lines[1] == "0,0,-1,0,true"
    assert lines[-1] == "1,1,1,1,true"


def test_sweep_writes_file(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, [
        "sweep", "--from", "0.5", "--to", "0.6", "--step", "0.01",
        "--out", str(out_path),
    ])
    assert code == 0
    assert out == ""
    lines = out_path.read_text().strip().split("\n")
    assert len(lines) == 12
    assert lines[1].startswith("0.5,")


def test_sweep_rejects_bad_grid(capsys):
    code, _, err = run(capsys, ["sweep", "--step", "0"])
    assert code == 2
    assert "--step" in err
    code, _, err = run(capsys, ["sweep", "--from", "0.5", "--to", "0.2"])
    assert code == 2
    assert "--to" in err


def test_sweep_unwritable_path(tmp_path, capsys):
    code, _, err = run(capsys, ["sweep", "--out", str(tmp_path / "missing" / "x.csv")])
    assert code == 2
    assert "error:" in err
