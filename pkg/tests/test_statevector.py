import pytest

from permcirc.circuit import (
    BasisState,
    Circuit,
    Hadamard,
    all_basis_states,
    concatenate,
    inverse,
    normalize,
    parse_circuit,
    random_circuit,
)
from permcirc.errors import TooManyQubits
from permcirc.statevector import DyadicAmplitude, amplitude, simulate, to_float


def _state(bits):
    return BasisState.from_string(bits)


def test_single_hadamard(single_h):
    state = simulate(single_h, _state("0"))
    assert state.as_dict() == {"0": 1, "1": 1}
    assert state.exponent == 1


def test_toffoli_truth_table():
    circuit = parse_circuit("qubits 3\nccx 0 1 2\n")
    assert simulate(circuit, _state("110")).as_dict() == {"111": 1}
    assert simulate(circuit, _state("100")).as_dict() == {"100": 1}
    assert simulate(circuit, _state("111")).as_dict() == {"110": 1}


def test_toffoli_on_superposition():
    circuit = parse_circuit("qubits 3\nh 0\nh 1\nccx 0 1 2\n")
    state = simulate(circuit, _state("000"))
    assert state.as_dict() == {"000": 1, "100": 1, "010": 1, "111": 1}


@pytest.mark.parametrize(
    "text, in_bits, out_bits, expected",
    [
        ("qubits 1\nh 0\n", "0", "0", (1, 1)),
        ("qubits 1\nh 0\n", "1", "1", (-1, 1)),
        ("qubits 1\nh 0\nh 0\n", "0", "0", (2, 2)),
        ("qubits 1\nh 0\nh 0\n", "0", "1", (0, 2)),
    ],
)
def test_amplitudes(text, in_bits, out_bits, expected):
    result = amplitude(parse_circuit(text), _state(in_bits), _state(out_bits))
    assert (result.k, result.h) == expected


@pytest.mark.parametrize(
    "k, h, expected", [(1, 1, 0.7071067811865476), (0, 13, 0.0), (-3, 4, -0.75)]
)
def test_to_float(k, h, expected):
    assert to_float(DyadicAmplitude(k, h)) == pytest.approx(expected)


def test_same_value():
    assert DyadicAmplitude(2, 2).same_value(DyadicAmplitude(1, 0))
    assert DyadicAmplitude(1, 1).same_value(DyadicAmplitude(2, 3))
    assert not DyadicAmplitude(1, 1).same_value(DyadicAmplitude(-1, 1))
    assert not DyadicAmplitude(1, 1).same_value(DyadicAmplitude(1, 2))


@pytest.mark.parametrize("seed", range(30))
def test_unitarity(seed):
    circuit = random_circuit(1 + seed % 3, 8, 0.3, seed)
    for initial in all_basis_states(circuit.q):
        state = simulate(circuit, initial)
        assert state.squared_norm() == 1 << circuit.hadamard_count


@pytest.mark.parametrize("seed", range(10))
def test_circuit_followed_by_its_inverse(seed):
    circuit, _ = normalize(random_circuit(3, 8, 0.4, seed))
    both = concatenate(circuit, inverse(circuit))
    h = circuit.hadamard_count
    for initial in all_basis_states(3):
        for final in all_basis_states(3):
            result = amplitude(both, initial, final)
            expected = 1 << h if initial == final else 0
            assert (result.k, result.h) == (expected, 2 * h)


@pytest.mark.parametrize("q", [1, 2])
def test_many_hadamards_switch_to_python_integers(q):
    circuit = Circuit(q, (Hadamard(0),) * 130)
    zeros = _state("0" * q)
    result = amplitude(circuit, zeros, zeros)
    assert result == DyadicAmplitude(1 << 65, 130)
    assert simulate(circuit, zeros).coeffs.dtype == object


def test_qubit_cap():
    with pytest.raises(TooManyQubits):
        simulate(Circuit(21), BasisState((0,) * 21))
