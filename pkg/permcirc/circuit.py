"""Toffoli-Hadamard circuit representation, text format and normalisation."""

import logging
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .errors import (
    DuplicateToffoliIndex,
    IndexOutOfRange,
    MalformedLine,
    MissingHeader,
    UnknownGateName,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Hadamard:
    line: int

    @property
    def lines(self) -> tuple[int, ...]:
        return (self.line,)


@dataclass(frozen=True)
class Toffoli:
    control1: int
    control2: int
    target: int

    @property
    def lines(self) -> tuple[int, ...]:
        return (self.control1, self.control2, self.target)


Gate = Hadamard | Toffoli


def _check_gate(gate: Gate, q: int, line: int | None = None) -> None:
    for index in gate.lines:
        if not 0 <= index < q:
            raise IndexOutOfRange(f"qubit index {index} outside [0, {q})", line)
    if isinstance(gate, Toffoli) and len(set(gate.lines)) != 3:
        raise DuplicateToffoliIndex(f"ccx indices must be distinct: {gate.lines}", line)


@dataclass(frozen=True)
class Circuit:
    q: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"qubit count must be positive, got {self.q}")
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            _check_gate(gate, self.q)

    @property
    def hadamard_count(self) -> int:
        return sum(1 for gate in self.gates if isinstance(gate, Hadamard))

    @property
    def toffoli_count(self) -> int:
        return sum(1 for gate in self.gates if isinstance(gate, Toffoli))


@dataclass(frozen=True)
class BasisState:
    """Computational basis state; ``bits[i]`` is qubit i (string character i)."""

    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"basis bits must be 0 or 1: {self.bits}")

    @classmethod
    def from_string(cls, text: str, q: int | None = None) -> "BasisState":
        text = text.strip()
        if not text or any(ch not in "01" for ch in text):
            raise MalformedLine(f"basis state must be a string of 0/1, got {text!r}")
        if q is not None and len(text) != q:
            raise MalformedLine(f"basis state {text!r} has length {len(text)}, expected {q}")
        return cls(tuple(int(ch) for ch in text))

    @property
    def index(self) -> int:
        return sum(bit << i for i, bit in enumerate(self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class NormalizationReport:
    inserted_pairs: int
    positions: tuple[tuple[int, int], ...]


def parse_circuit(text: str) -> Circuit:
    """Parse the circuit text format. Raises a ``CircuitParseError`` subclass
    carrying the 1-based line number where one applies.
    """
    q: int | None = None
    gates: list[Gate] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        name, args = tokens[0].lower(), tokens[1:]

        try:
            values = [int(arg) for arg in args]
        except ValueError:
            raise MalformedLine(f"non-integer argument in {raw.strip()!r}", lineno) from None

        if q is None:
            if name != "qubits":
                raise MissingHeader("first statement must be 'qubits <q>'", lineno)
            if len(values) != 1 or values[0] < 1:
                raise MalformedLine("expected 'qubits <q>' with q >= 1", lineno)
            q = values[0]
            continue

        if name == "h":
            if len(values) != 1:
                raise MalformedLine("expected 'h <i>'", lineno)
            gate: Gate = Hadamard(values[0])
        elif name == "ccx":
            if len(values) != 3:
                raise MalformedLine("expected 'ccx <c1> <c2> <t>'", lineno)
            gate = Toffoli(*values)
        elif name == "qubits":
            raise MalformedLine("duplicate 'qubits' header", lineno)
        else:
            raise UnknownGateName(f"unknown gate {name!r}", lineno)

        _check_gate(gate, q, lineno)
        gates.append(gate)

    if q is None:
        raise MissingHeader("no 'qubits' header found")
    return Circuit(q, tuple(gates))


def serialize_circuit(circuit: Circuit) -> str:
    """Inverse of ``parse_circuit``, without comments."""
    lines = [f"qubits {circuit.q}"]
    for gate in circuit.gates:
        if isinstance(gate, Hadamard):
            lines.append(f"h {gate.line}")
        else:
            lines.append(f"ccx {gate.control1} {gate.control2} {gate.target}")
    return "\n".join(lines) + "\n"


class _SegmentTracker:
    """Per-line segment state while scanning a gate list.

    A segment is busy once a Toffoli touches it. The segment opened by the
    Hadamard closing a target segment starts busy, since its fresh variable
    already sits in that Toffoli's cubic clause.
    """

    def __init__(self, q: int):
        self.busy = [False] * q
        self.target = [False] * q

    def hadamard(self, line: int) -> None:
        self.busy[line] = self.target[line]
        self.target[line] = False

    def toffoli(self, gate: Toffoli) -> None:
        for line in gate.lines:
            self.busy[line] = True
        self.target[gate.target] = True

    def reset(self, line: int) -> None:
        # state after an inserted H-H pair on this line
        self.busy[line] = False
        self.target[line] = False


def normalize(circuit: Circuit) -> tuple[Circuit, NormalizationReport]:
    """Insert H-H pairs so every segment touches at most one Toffoli and no
    line ends in a Toffoli-target segment."""
    tracker = _SegmentTracker(circuit.q)
    gates: list[Gate] = []
    positions: list[tuple[int, int]] = []

    for index, gate in enumerate(circuit.gates):
        if isinstance(gate, Toffoli):
            for line in gate.lines:
                if tracker.busy[line]:
                    gates.extend((Hadamard(line), Hadamard(line)))
                    positions.append((line, index))
                    tracker.reset(line)
            tracker.toffoli(gate)
        else:
            tracker.hadamard(gate.line)
        gates.append(gate)

    end = len(circuit.gates)
    for line in range(circuit.q):
        if tracker.target[line]:
            gates.extend((Hadamard(line), Hadamard(line)))
            positions.append((line, end))

    if positions:
        logger.info(f"Normalisation inserted {len(positions)} H-H pair(s)")
    report = NormalizationReport(len(positions), tuple(positions))
    return Circuit(circuit.q, tuple(gates)), report


def segment_violations(circuit: Circuit) -> list[tuple[int, int]]:
    """Return (line, gate index) pairs breaking the normal form; empty when
    the circuit is normalised. Gate index ``len(gates)`` marks a final
    target segment."""
    tracker = _SegmentTracker(circuit.q)
    violations = []
    for index, gate in enumerate(circuit.gates):
        if isinstance(gate, Toffoli):
            violations.extend((line, index) for line in gate.lines if tracker.busy[line])
            tracker.toffoli(gate)
        else:
            tracker.hadamard(gate.line)
    end = len(circuit.gates)
    violations.extend((line, end) for line in range(circuit.q) if tracker.target[line])
    return violations


def inverse(circuit: Circuit) -> Circuit:
    # H and Toffoli are self-inverse
    return Circuit(circuit.q, tuple(reversed(circuit.gates)))


def concatenate(first: Circuit, second: Circuit) -> Circuit:
    """Run ``first`` then ``second`` on the same register."""
    if first.q != second.q:
        raise ValueError(f"qubit counts differ: {first.q} vs {second.q}")
    return Circuit(first.q, first.gates + second.gates)


def random_circuit(q: int, n_gates: int, p_toffoli: float, seed: int) -> Circuit:
    """Seeded random gate list. Each gate is a Toffoli on three distinct lines
    with probability ``p_toffoli`` (never for q < 3), otherwise a Hadamard
    on a uniform line. Normalise before labelling.
    """
    if q < 1:
        raise ValueError(f"qubit count must be positive, got {q}")
    if q < 3:
        p_toffoli = 0.0

    rng = np.random.default_rng(seed & 0xFFFF_FFFF_FFFF_FFFF)
    gates: list[Gate] = []
    for _ in range(n_gates):
        if rng.random() < p_toffoli:
            c1, c2, t = (int(i) for i in rng.choice(q, size=3, replace=False))
            gates.append(Toffoli(c1, c2, t))
        else:
            gates.append(Hadamard(int(rng.integers(q))))
    return Circuit(q, tuple(gates))


def random_basis_state(q: int, rng: np.random.Generator) -> BasisState:
    return BasisState(tuple(int(b) for b in rng.integers(0, 2, size=q)))


def all_basis_states(q: int) -> Iterable[BasisState]:
    for index in range(1 << q):
        yield BasisState(tuple((index >> i) & 1 for i in range(q)))
