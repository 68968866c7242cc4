"""Simulator amplitude, solution gap and both permanents on random circuits."""

import pytest

from permcirc.circuit import normalize, parse_circuit, random_circuit
from permcirc.config import Settings
from permcirc.gf2 import label_circuit
from permcirc.pipeline import run_verify

FAST = Settings(verify_matrix_cap=22)

TOFFOLI_CIRCUITS = [
    "qubits 3\nh 0\nh 1\nccx 0 1 2\nh 2\n",
    "qubits 3\nh 0\nh 1\nh 2\nccx 0 1 2\nh 2\nh 0\n",
    "qubits 3\nccx 0 1 2\nh 2\nh 1\n",
    "qubits 3\nh 0\nccx 0 1 2\nh 2\nh 1\n",
]


def _toffoli_circuits(count, cap, p_toffoli, first_seed):
    # random three-qubit circuits holding a Toffoli whose matrices fit under
    # cap in both modes: 3 vertices per monomial, at most 2q forcing, one
    # multiplier per variable missing from f, one conflict or sign vertex
    found = []
    seed = first_seed
    while len(found) < count:
        circuit, _ = normalize(random_circuit(3, 4, p_toffoli, seed))
        labeling = label_circuit(circuit)
        f = labeling.f_raw
        bound = 3 * len(f.monomials) + 6 + labeling.var_count - len(f.variables()) + 1
        if circuit.toffoli_count and bound <= cap:
            found.append(circuit)
        seed += 1
    return found


@pytest.mark.parametrize("text", TOFFOLI_CIRCUITS)
def test_toffoli_circuits_all_boundaries(text):
    report = run_verify(3, 0, 0, seed=0, exhaustive=True, circuits=[parse_circuit(text)])
    assert report.skipped == 0
    assert len(report.records) == 64
    assert all(record.toffolis == 1 for record in report.records)
    assert report.ok, report.failures


@pytest.mark.parametrize("q", [1, 2, 3])
def test_random_sweep(q):
    report = run_verify(q, 5, 12, seed=100 + q, p_toffoli=0.4, settings=FAST)
    assert report.ok, report.failures
    assert report.records
    assert all(record.unitary for record in report.records)


@pytest.mark.parametrize("first_seed", [0, 1000])
def test_random_sweep_with_dense_toffolis(first_seed):
    circuits = _toffoli_circuits(4, 22, 0.7, first_seed)
    report = run_verify(3, 0, 0, seed=first_seed, pairs=3, circuits=circuits, settings=FAST)
    assert report.ok, report.failures
    assert report.skipped == 0
    assert len(report.records) == 12
    assert all(record.toffolis for record in report.records)


@pytest.mark.slow
def test_full_sweep():
    # 200 circuits over q = 1..3, four boundary pairs each
    records = []
    for q in (1, 2, 3):
        trials = 67 if q < 3 else 66
        report = run_verify(q, 6, trials, seed=2024 + q, p_toffoli=0.3)
        assert report.ok, report.failures
        records += report.records
    assert len(records) > 400

    # plus 50 Toffoli circuits that all fit under the default cap
    report = run_verify(3, 0, 0, seed=7, circuits=_toffoli_circuits(50, 30, 0.5, 0))
    assert report.ok, report.failures
    assert report.skipped == 0
    assert len(report.records) == 200
    assert all(record.toffolis for record in report.records)
