import json
import math

import numpy as np
import pytest

from core.cli import main
from core.gates import (
    GATES, GateResult, gate_critical_ordering, gate_holevo, gate_pt_eigenvalues, reference_rates, run_gates,
)


def test_reference_rates():
    r = reference_rates()
    assert r.inv_T1 == pytest.approx(3.0)
    assert r.inv_T3 == pytest.approx(math.sqrt(2.0))
    assert reference_rates(omega=2.0).omega == 2.0


@pytest.mark.parametrize("gate", [gate_holevo, gate_critical_ordering])
def test_single_gate(gate):
    result = gate()
    assert result.passed, result.detail


def test_gate_results_are_json_ready():
    result = gate_pt_eigenvalues()
    assert type(result.passed) is bool
    payload = json.loads(json.dumps({"name": result.name, "passed": result.passed}))
    assert payload["passed"] is True
    assert GateResult("coerced", np.bool_(False)).passed is False


def test_all_gates_pass():
    results = run_gates()
    assert len(results) == len(GATES)
    failed = [f"{r.name}: {r.detail}" for r in results if not r.passed]
    assert not failed


def test_validate_command(capsys):
    code = main(["validate", "--quiet"])
    out, err = capsys.readouterr()
    assert code == 0
    assert "[✅ PASS] Holevo capacity reproduction" in err
    assert "ALL GATES PASSED" in err
    assert '"passed": true' in out
