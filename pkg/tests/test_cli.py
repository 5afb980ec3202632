import io
import json

import pandas as pd
import pytest

from core.capacity import Ensemble, holevo_quantity
from core.cli import main
from core.geometry import BlochVector


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, payload, name="channel.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_show_phase_preset(capsys):
    code, out, _ = run(capsys, "show", "--preset", "phase_damping", "--quiet")
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "phase_damping"
    assert payload["w_eq"] == 0.0
    assert payload["unital"] is True
    assert payload["c_matrix_positive"] is True


def test_show_default_svc(capsys):
    code, out, _ = run(capsys, "show", "--quiet")
    payload = json.loads(out)
    assert code == 0
    assert payload["rates"]["inv_T1"] == pytest.approx(3.0)
    assert payload["bloch_rates"]["inv_Tv"] == pytest.approx(0.085786, abs=1e-6)
    assert payload["t3_bound"] is True


def test_squeezing_beyond_bound_is_rejected(capsys, tmp_path):
    config = write_config(tmp_path, {"kind": "svc", "A": 1.0, "N": 1.0, "M": 1.5})
    code, out, err = run(capsys, "show", "--config", config, "--quiet")
    assert code == 2
    assert out == ""
    assert "complete positivity violated" in err


def test_unknown_config_key_is_rejected(capsys, tmp_path):
    config = write_config(tmp_path, {"kind": "svc", "A": 1.0, "squeeze": 0.3})
    code, _, err = run(capsys, "show", "--config", config, "--quiet")
    assert code == 2
    assert "❌" in err


def test_yaml_config_with_alias(capsys, tmp_path):
    path = tmp_path / "channel.yaml"
    path.write_text("kind: amplitude\nA: 2.0\n", encoding="utf-8")
    code, out, _ = run(capsys, "show", "--config", str(path), "--quiet")
    assert code == 0
    assert json.loads(out)["kind"] == "amplitude_damping"


def test_missing_config_file(capsys, tmp_path):
    code, _, err = run(capsys, "show", "--config", str(tmp_path / "missing.yaml"), "--quiet")
    assert code == 2
    assert "Invalid config" in err


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["capacity", "--max-states", "7"]])
def test_usage_errors_exit_with_one(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 1


def test_evolve_methods_agree(capsys):
    frames = {}
    for method in ("closed", "exp", "rk4"):
        code, out, _ = run(capsys, "evolve", "--method", method, "--t-max", "1", "--dt", "0.25", "--quiet")
        assert code == 0
        assert out.splitlines()[0] == "t,u,v,w"
        frames[method] = pd.read_csv(io.StringIO(out))
    assert len(frames["closed"]) == 5
    for method in ("exp", "rk4"):
        diff = (frames[method] - frames["closed"]).abs().to_numpy().max()
        assert diff <= 1e-6


def test_evolve_rejects_bad_grid(capsys):
    code, _, _ = run(capsys, "evolve", "--dt", "-0.1", "--quiet")
    assert code == 2


def test_evolve_json_format(capsys):
    code, out, _ = run(capsys, "evolve", "--format", "json", "--t-max", "0.5", "--dt", "0.5", "--quiet")
    rows = json.loads(out)["rows"]
    assert code == 0
    assert rows[0] == pytest.approx({"t": 0.0, "u": 1.0, "v": 0.0, "w": 0.0}, abs=1e-12)


def test_ellipsoid_rows(capsys):
    code, out, _ = run(capsys, "ellipsoid", "--times", "0", "1", "--points", "10", "--quiet")
    frame = pd.read_csv(io.StringIO(out))
    assert code == 0
    assert list(frame.columns) == ["t", "u", "v", "w"]
    assert len(frame) == 20


def test_kraus_identity_at_zero_time(capsys):
    code, out, _ = run(capsys, "kraus", "--t", "0", "--quiet")
    payload = json.loads(out)
    assert code == 0
    assert len(payload["ops"]) == 1
    assert payload["completeness_residual"] == 0.0
    assert payload["cp_inequalities"]["passed"] is True


def test_kraus_reference_time(capsys):
    code, out, _ = run(capsys, "kraus", "--quiet")
    payload = json.loads(out)
    assert code == 0
    assert len(payload["ops"]) == 4
    assert payload["appendix_residual"] <= 1e-10
    assert payload["constants"]["m13"][0] == pytest.approx(0.139418, abs=2e-6)


def test_kraus_short_time(capsys):
    code, out, _ = run(capsys, "kraus", "--t", "1e-9", "--quiet")
    payload = json.loads(out)
    assert code == 0
    assert len(payload["ops"]) == 4
    assert payload["completeness_residual"] <= 1e-10
    assert payload["appendix_residual"] <= 1e-10


def _ensemble(members):
    return Ensemble(members=tuple((m["p"], BlochVector(*m["bloch"])) for m in members))


def test_capacity_report(capsys, svc_rates):
    code, out, _ = run(capsys, "capacity", "--max-states", "2", "--quiet")
    payload = json.loads(out)
    assert code == 0
    assert round(payload["C"], 4) == 0.8168
    assert payload["C_max"] >= payload["C"] - 1e-9
    assert payload["decomposition"]["mixing_error"] == pytest.approx(0.109611, abs=1e-5)
    assert len(payload["ensemble"]) == 2
    assert payload["argmax"]["C"] == payload["C_max"]
    assert isinstance(payload["argmax"]["degenerate"], bool)

    # each reported value belongs to the ensemble reported next to it
    C = holevo_quantity(svc_rates, 1.0, _ensemble(payload["ensemble"]))
    C_max = holevo_quantity(svc_rates, 1.0, _ensemble(payload["argmax"]["ensemble"]))
    assert C == pytest.approx(payload["C"], abs=1e-9)
    assert C_max == pytest.approx(payload["C_max"], abs=1e-9)


def test_entangle_curves(capsys):
    code, out, _ = run(capsys, "entangle", "--quiet")
    frame = pd.read_csv(io.StringIO(out))
    assert code == 0
    assert out.splitlines()[0] == "M_label,t,e3"
    assert frame["M_label"].unique().tolist() == ["M=0", "M=0.8Mmax", "M=Mmax"]
    assert len(frame) == 3 * 201


def test_entangle_json_critical_times(capsys):
    code, out, _ = run(capsys, "entangle", "--format", "json", "--t-max", "1", "--dt", "0.5", "--quiet")
    times = json.loads(out)["critical_times"]
    assert code == 0
    assert times["M=0"] == pytest.approx(0.6157487, abs=1e-6)
    assert times["M=0"] < times["M=0.8Mmax"] < times["M=Mmax"]


def test_output_file(capsys, tmp_path):
    target = tmp_path / "show.json"
    code, out, _ = run(capsys, "show", "--out", str(target), "--quiet")
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["kind"] == "svc"


def test_outputs_are_deterministic(capsys):
    _, first, _ = run(capsys, "kraus", "--quiet")
    _, second, _ = run(capsys, "kraus", "--quiet")
    assert first == second
