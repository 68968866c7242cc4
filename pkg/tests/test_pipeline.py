import pytest

from permcirc.circuit import parse_circuit
from permcirc.config import Settings
from permcirc.errors import DisagreementError, TooLarge
from permcirc.gf2 import BoundaryAssignment, parse_poly
from permcirc.pipeline import (
    PolyInstance,
    check_instance,
    prepare_circuit,
    run_amplitude,
    run_bench,
    run_norm,
    run_verify,
)
from permcirc.statevector import DyadicAmplitude


def test_single_h_backends():
    instance = prepare_circuit("qubits 1\nh 0\n", "0", "0")
    for backend in ("sv", "count", "perm-exact"):
        result = run_amplitude(instance, backend, mode="graph-fix")
        assert (result.amplitude.k, result.h) == (1, 1)
        assert result.value == pytest.approx(0.70710678)
    assert run_amplitude(instance, "perm-exact", mode="graph-fix").matrix_size == 5


def test_four_qubit_exact_backends_agree(four_qubit_text):
    instance = prepare_circuit(four_qubit_text, "0000", "0011")
    ks = {
        run_amplitude(instance, "sv").amplitude.k,
        run_amplitude(instance, "count").amplitude.k,
        run_amplitude(instance, "perm-exact", mode="subst").amplitude.k,
    }
    assert ks == {-16}
    result = run_amplitude(instance, "count")
    assert result.h == 13 and result.variables == 9
    assert result.amplitude.to_float() == pytest.approx(-0.17677669529663687)


def test_four_qubit_graph_fix_exceeds_the_exact_cap(four_qubit_text):
    instance = prepare_circuit(four_qubit_text, "0000", "0011")
    with pytest.raises(TooLarge):
        run_amplitude(instance, "perm-exact", mode="graph-fix")


def test_monte_carlo_backend_reports_an_estimate():
    instance = prepare_circuit("qubits 1\nh 0\nh 0\n", "0", "0")
    result = run_amplitude(instance, "perm-mc", samples=2000, seed=5)
    doc = result.to_dict()
    assert doc["amplitude"]["k"] is None
    assert doc["estimate"]["stderr"] >= 0
    assert doc["seed"] == 5 and doc["samples"] == 2000
    assert result.to_dict()["estimate"] == run_amplitude(
        instance, "perm-mc", samples=2000, seed=5
    ).to_dict()["estimate"]


def test_substitution_conflict_is_zero():
    instance = prepare_circuit("qubits 2\nh 0\n", "00", "01")
    result = run_amplitude(instance, "perm-exact", mode="subst")
    assert result.amplitude.k == 0 and result.conflict
    assert run_amplitude(instance, "perm-exact", mode="graph-fix").amplitude.k == 0


def test_polynomial_input():
    poly, labels = parse_poly("x1 x2\n")
    instance = PolyInstance(poly, labels, h=2)
    result = run_amplitude(instance, "perm-exact")
    assert result.amplitude == DyadicAmplitude(2, 2)
    assert result.mode == "subst"
    assert run_amplitude(instance, "count").amplitude.k == 2


def test_cross_check_passes(four_qubit_text):
    instance = prepare_circuit(four_qubit_text, "1100", "0110")
    run_amplitude(instance, "count", cross_check=True)


def test_cross_check_reports_disagreement(monkeypatch):
    instance = prepare_circuit("qubits 1\nh 0\n", "0", "0")
    monkeypatch.setattr(
        "permcirc.pipeline.per_ryser", lambda matrix, **kwargs: -1
    )
    with pytest.raises(DisagreementError):
        run_amplitude(instance, "perm-exact", cross_check=True)


def test_norm_of_fully_folded_instance():
    instance = prepare_circuit("qubits 1\n", "0", "0")
    doc = run_norm(instance, "subst")
    assert doc["norm"] == 0.0 and doc["subunit"] and doc["matrix_size"] == 0


def test_check_instance_records_all_four_integers():
    circuit = parse_circuit("qubits 1\nh 0\nh 0\n")
    record = check_instance(circuit, BoundaryAssignment.from_strings("0", "0", 1))
    assert (record.k_sv, record.gap, record.per_subst, record.per_graphfix) == (2, 2, 2, 2)
    assert record.agree and record.unitary


def test_verify_hadamard_pairs_exhaustively():
    report = run_verify(1, 2, 3, seed=1, exhaustive=True)
    assert len(report.records) == 12
    assert report.ok


def test_verify_small_sweep():
    report = run_verify(2, 5, 15, seed=7, settings=Settings(verify_matrix_cap=22))
    assert report.ok
    assert len(report.records) + report.skipped == 60


def test_injected_fault_is_caught():
    report = run_verify(
        1, 0, 0, seed=0, exhaustive=True, inject_fault=True,
        circuits=[parse_circuit("qubits 1\nh 0\n")],
    )
    assert not report.ok
    assert report.failures[0]["circuit"] == "qubits 1\nh 0\n"


def test_verify_skips_oversized_instances():
    settings = Settings(verify_matrix_cap=4)
    report = run_verify(
        1, 0, 0, seed=0, exhaustive=True, settings=settings,
        circuits=[parse_circuit("qubits 1\nh 0\nh 0\n")],
    )
    assert report.skipped > 0


def test_bench_kernels_agree():
    doc = run_bench(8, "all", 2, seed=0)
    assert [row["repeat"] for row in doc["rows"]] == [0, 1]
    assert all(row["equal"] for row in doc["rows"])
    assert set(doc["rows"][0]["values"]) == {"naive", "ryser", "glynn"}


def test_bench_cap():
    with pytest.raises(TooLarge):
        run_bench(40, "ryser", 1, seed=0)
