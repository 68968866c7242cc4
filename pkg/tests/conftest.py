import pytest

from permcirc.circuit import parse_circuit

# four lines, thirteen Hadamards, two Toffolis; already in normal form
FOUR_QUBIT_TEXT = """\
qubits 4
h 0
h 1
h 2
h 3
ccx 0 1 2
h 2
h 0
h 1
h 2
ccx 3 2 1
h 1
h 0
h 1
h 2
h 3
"""

SINGLE_H_TEXT = "qubits 1\nh 0\n"


@pytest.fixture
def four_qubit_text():
    return FOUR_QUBIT_TEXT


@pytest.fixture
def four_qubit_circuit():
    return parse_circuit(FOUR_QUBIT_TEXT)


@pytest.fixture
def single_h():
    return parse_circuit(SINGLE_H_TEXT)


@pytest.fixture
def write_file(tmp_path):
    def write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
