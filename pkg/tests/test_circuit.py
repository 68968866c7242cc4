import pytest

from permcirc.circuit import (
    BasisState,
    Circuit,
    Hadamard,
    Toffoli,
    all_basis_states,
    concatenate,
    inverse,
    normalize,
    parse_circuit,
    random_circuit,
    segment_violations,
    serialize_circuit,
)
from permcirc.errors import (
    DuplicateToffoliIndex,
    IndexOutOfRange,
    MalformedLine,
    MissingHeader,
    UnknownGateName,
)
from permcirc.gf2 import label_circuit
from permcirc.statevector import amplitude


def test_parse_and_serialize(four_qubit_text, four_qubit_circuit):
    assert four_qubit_circuit.q == 4
    assert four_qubit_circuit.hadamard_count == 13
    assert four_qubit_circuit.toffoli_count == 2
    assert four_qubit_circuit.gates[4] == Toffoli(0, 1, 2)
    assert serialize_circuit(four_qubit_circuit) == four_qubit_text


def test_parse_ignores_comments_and_blank_lines():
    circuit = parse_circuit("# header\n\nqubits 2  # two lines\nH 1\n")
    assert circuit == Circuit(2, (Hadamard(1),))


@pytest.mark.parametrize(
    "text, error, line",
    [
        ("h 0\n", MissingHeader, 1),
        ("", MissingHeader, None),
        ("qubits 2\nh 5\n", IndexOutOfRange, 2),
        ("qubits 3\nccx 0 0 1\n", DuplicateToffoliIndex, 2),
        ("qubits 2\ncx 0 1\n", UnknownGateName, 2),
        ("qubits 2\n\nh\n", MalformedLine, 3),
        ("qubits 2\nh x\n", MalformedLine, 2),
        ("qubits 2\nqubits 3\n", MalformedLine, 2),
    ],
)
def test_parse_errors(text, error, line):
    with pytest.raises(error) as exc:
        parse_circuit(text)
    assert exc.value.line == line
    if line is not None:
        assert str(exc.value).startswith(f"line {line}:")


def test_basis_state_bit_order():
    state = BasisState.from_string("110")
    assert state.bits == (1, 1, 0)
    assert state.index == 3
    assert str(state) == "110"
    with pytest.raises(MalformedLine):
        BasisState.from_string("012")
    with pytest.raises(MalformedLine):
        BasisState.from_string("01", q=3)


def test_all_basis_states():
    states = [str(s) for s in all_basis_states(2)]
    assert states == ["00", "10", "01", "11"]


def test_normalized_circuit_is_unchanged(four_qubit_circuit):
    assert segment_violations(four_qubit_circuit) == []
    normalized, report = normalize(four_qubit_circuit)
    assert normalized == four_qubit_circuit
    assert report.inserted_pairs == 0


def test_final_target_segment_gets_a_pair():
    circuit = parse_circuit("qubits 3\nccx 0 1 2\n")
    assert segment_violations(circuit) == [(2, 1)]
    normalized, report = normalize(circuit)
    assert report.positions == ((2, 1),)
    assert normalized.gates == (Toffoli(0, 1, 2), Hadamard(2), Hadamard(2))


def test_back_to_back_toffolis():
    circuit = parse_circuit("qubits 3\nccx 0 1 2\nccx 0 1 2\n")
    normalized, report = normalize(circuit)
    assert report.positions == ((0, 1), (1, 1), (2, 1), (2, 2))
    assert len(normalized.gates) == 10
    assert segment_violations(normalized) == []


def test_segment_after_target_counts_as_busy():
    # line 2 is re-opened by a Hadamard after being a target; its fresh
    # variable already sits in a cubic clause
    circuit = parse_circuit("qubits 5\nccx 0 1 2\nh 0\nh 1\nh 2\nccx 2 3 4\nh 4\n")
    normalized, report = normalize(circuit)
    assert report.positions == ((2, 4),)
    assert segment_violations(normalized) == []


@pytest.mark.parametrize("seed", range(20))
def test_normal_form_keeps_cubic_clauses_disjoint(seed):
    raw = random_circuit(4, 10, 0.5, seed)
    circuit, _ = normalize(raw)
    assert segment_violations(circuit) == []
    labeling = label_circuit(circuit)
    seen = set()
    for monomial in labeling.f_raw.monomials:
        if len(monomial) == 3:
            assert not seen & set(monomial)
            seen |= set(monomial)
    assert all(expr.single_variable() is not None for expr in labeling.output_exprs)


def test_random_circuit_is_seeded():
    assert random_circuit(3, 12, 0.4, 9) == random_circuit(3, 12, 0.4, 9)
    assert random_circuit(2, 12, 0.9, 9).toffoli_count == 0


def test_inverse_and_concatenate(four_qubit_circuit):
    both = concatenate(four_qubit_circuit, inverse(four_qubit_circuit))
    assert len(both.gates) == 30
    assert both.gates[15] == four_qubit_circuit.gates[14]
    with pytest.raises(ValueError):
        concatenate(four_qubit_circuit, Circuit(2))


@pytest.mark.parametrize("seed", range(100))
def test_serialize_then_parse_is_identity(seed):
    circuit = random_circuit(1 + seed % 4, 12, 0.4, seed)
    assert parse_circuit(serialize_circuit(circuit)) == circuit


@pytest.mark.parametrize("seed", range(30))
def test_normalize_is_idempotent(seed):
    once, _ = normalize(random_circuit(3, 10, 0.6, seed))
    twice, report = normalize(once)
    assert report.inserted_pairs == 0
    assert twice == once


@pytest.mark.parametrize("seed", range(15))
def test_normalize_keeps_every_amplitude(seed):
    raw = random_circuit(1 + seed % 3, 8, 0.5, seed)
    normalized, _ = normalize(raw)
    for initial in all_basis_states(raw.q):
        for final in all_basis_states(raw.q):
            before = amplitude(raw, initial, final)
            after = amplitude(normalized, initial, final)
            assert before.same_value(after), (str(initial), str(final))
