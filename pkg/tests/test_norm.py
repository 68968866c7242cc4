import numpy as np
import pytest

from permcirc.circuit import parse_circuit
from permcirc.encoder import EncodingMode, encode
from permcirc.errors import NoConvergence
from permcirc.gadgets import gadget_quadratic
from permcirc.gf2 import BoundaryAssignment, Gf2Poly, label_circuit
from permcirc.matrix import IntMatrix
from permcirc.norm import gurvits_norm_report, spectral_norm


@pytest.mark.parametrize(
    "rows, expected",
    [([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1.0), ([[2, 0], [0, -3]], 3.0)],
)
def test_spectral_norm_of_simple_matrices(rows, expected):
    assert spectral_norm(IntMatrix.from_rows(rows)) == pytest.approx(expected)


def test_quadratic_block_matches_dense_routine():
    block = gadget_quadratic().block
    value = spectral_norm(block)
    assert 1 < value < 3
    assert value == pytest.approx(np.linalg.norm(block.to_numpy(np.float64), 2), abs=1e-8)


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        spectral_norm(IntMatrix.from_rows([[1]]), tol=0)


def test_no_convergence():
    rng = np.random.default_rng(0)
    matrix = IntMatrix.from_rows(rng.integers(-3, 4, size=(12, 12)).tolist())
    with pytest.raises(NoConvergence):
        spectral_norm(matrix, tol=1e-15, max_iter=1)


def test_empty_encoding_report():
    report = gurvits_norm_report(encode(Gf2Poly()))
    assert report.norm == 0.0
    assert report.subunit
    assert report.matrix_size == 0


def test_bare_gadget_report():
    labeling = label_circuit(parse_circuit("qubits 1\nh 0\n"))
    boundary = BoundaryAssignment.from_strings("1", "1", 1)
    encoding = encode(labeling, boundary, EncodingMode.GRAPH_FIX)
    report = gurvits_norm_report(encoding)
    assert report.scale == pytest.approx(2 ** (1 / 6))
    assert report.norm == pytest.approx(spectral_norm(encoding.matrix) / 2 ** (1 / 6))
    assert report.h == 1 and report.matrix_size == 3


def test_four_qubit_report_completes(four_qubit_circuit):
    labeling = label_circuit(four_qubit_circuit)
    boundary = BoundaryAssignment.from_strings("0000", "0011", 4)
    report = gurvits_norm_report(encode(labeling, boundary))
    assert report.matrix_size == 51
    assert report.norm > 0
    assert report.scale == pytest.approx(2 ** (13 / 102))
    assert report.subunit == (report.norm < 1)
