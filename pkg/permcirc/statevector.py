"""Exact state-vector simulation of Toffoli-Hadamard circuits.

Amplitudes are kept as integers over a shared power of sqrt(2): every
Hadamard maps (k0, k1) to (k0 + k1, k0 - k1) and bumps the exponent.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .circuit import BasisState, Circuit, Hadamard
from .config import DEFAULTS
from .errors import TooManyQubits

logger = logging.getLogger(__name__)

# |k| <= 2^(h/2) keeps int64 safe well past this many Hadamards
_INT64_HADAMARDS = 120


@dataclass(frozen=True)
class DyadicAmplitude:
    """The value k / sqrt(2)^h."""

    k: int
    h: int

    def __post_init__(self):
        if self.h < 0:
            raise ValueError(f"exponent must be non-negative, got {self.h}")

    def to_float(self) -> float:
        return to_float(self)

    def same_value(self, other: "DyadicAmplitude") -> bool:
        """Exact comparison of the represented reals."""
        if (self.h - other.h) % 2:
            # k1^2 2^h2 == k2^2 2^h1 with matching signs
            return (
                (self.k > 0) == (other.k > 0)
                and (self.k < 0) == (other.k < 0)
                and self.k * self.k << other.h == other.k * other.k << self.h
            )
        if self.h >= other.h:
            return self.k == other.k << ((self.h - other.h) // 2)
        return other.k == self.k << ((other.h - self.h) // 2)


def to_float(amplitude: DyadicAmplitude) -> float:
    return float(amplitude.k) * 2.0 ** (-amplitude.h / 2)


@dataclass(frozen=True)
class DyadicState:
    coeffs: np.ndarray
    exponent: int
    q: int

    def coefficient(self, basis: BasisState) -> int:
        return int(self.coeffs[basis.index])

    def as_dict(self) -> dict[str, int]:
        """Non-zero coefficients keyed by bitstring (character i = qubit i)."""
        return {
            "".join(str((index >> i) & 1) for i in range(self.q)): int(value)
            for index, value in enumerate(self.coeffs)
            if value != 0
        }

    def squared_norm(self) -> int:
        return sum(int(value) * int(value) for value in self.coeffs)


def _axis(q: int, qubit: int) -> int:
    # reshape([2]*q) puts the most significant bit (qubit q-1) on axis 0
    return q - 1 - qubit


def simulate(
    circuit: Circuit, initial: BasisState, *, qubit_cap: int | None = None
) -> DyadicState:
    """U|initial> with integer coefficients; the true amplitude of basis x is
    ``coeffs[x] / sqrt(2)^h``.
    """
    qubit_cap = DEFAULTS.sv_qubit_cap if qubit_cap is None else qubit_cap
    q = circuit.q
    if q > qubit_cap:
        raise TooManyQubits(f"{q} qubits exceed the simulator cap {qubit_cap}")
    if len(initial) != q:
        raise ValueError(f"input state has {len(initial)} bits, circuit has {q} qubits")

    dtype = np.int64 if circuit.hadamard_count <= _INT64_HADAMARDS else object
    state = np.zeros((2,) * q, dtype=dtype)
    state.reshape(-1)[initial.index] = 1

    for gate in circuit.gates:
        if isinstance(gate, Hadamard):
            axis = _axis(q, gate.line)
            # index lists keep the axis, so a 1-D object array stays an array
            zero = np.take(state, [0], axis=axis)
            one = np.take(state, [1], axis=axis)
            state = np.concatenate((zero + one, zero - one), axis=axis)
        else:
            index: list[slice | int] = [slice(None)] * q
            index[_axis(q, gate.control1)] = 1
            index[_axis(q, gate.control2)] = 1
            index[_axis(q, gate.target)] = 0
            flip0 = tuple(index)
            index[_axis(q, gate.target)] = 1
            flip1 = tuple(index)
            zero, one = np.array(state[flip0]), np.array(state[flip1])
            state[flip0], state[flip1] = one, zero

    return DyadicState(state.reshape(-1), circuit.hadamard_count, q)


def amplitude(
    circuit: Circuit,
    initial: BasisState,
    final: BasisState,
    *,
    qubit_cap: int | None = None,
) -> DyadicAmplitude:
    """<final|U|initial> as an exact ``DyadicAmplitude``."""
    state = simulate(circuit, initial, qubit_cap=qubit_cap)
    return DyadicAmplitude(state.coefficient(final), state.exponent)
