"""GF(2) polynomials built from a labelled circuit and their solution gap.

A polynomial is an XOR of monotone monomials plus a constant bit. Monomials
are tuples of strictly increasing variable ids; the labelling keeps the
id -> label table (``a1``, ``b3``, ...) used for text output.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np

from .circuit import BasisState, Circuit, Hadamard
from .config import DEFAULTS
from .errors import MalformedLine, NotNormalized, TooManyVariables, UnboundVariable

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]


@dataclass(frozen=True, order=True)
class VarId:
    id: int
    label: str = field(compare=False)

    def __str__(self) -> str:
        return self.label


def _toggle(terms: set[Monomial], term: Monomial) -> None:
    if term in terms:
        terms.remove(term)
    else:
        terms.add(term)


@dataclass(frozen=True)
class Gf2Poly:
    monomials: frozenset[Monomial] = frozenset()
    constant: int = 0

    def __post_init__(self):
        object.__setattr__(self, "monomials", frozenset(self.monomials))
        for monomial in self.monomials:
            if not monomial or any(a >= b for a, b in zip(monomial, monomial[1:])):
                raise ValueError(f"monomial must be non-empty and strictly sorted: {monomial}")
        if self.constant not in (0, 1):
            raise ValueError(f"constant must be 0 or 1, got {self.constant}")

    @classmethod
    def variable(cls, var: int) -> "Gf2Poly":
        return cls(frozenset({(var,)}))

    @classmethod
    def from_terms(cls, terms: Iterable[Iterable[int]], constant: int = 0) -> "Gf2Poly":
        """XOR of the given terms; repeated variables collapse (x*x = x) and
        repeated terms cancel."""
        acc: set[Monomial] = set()
        for term in terms:
            _toggle(acc, tuple(sorted(set(term))))
        if () in acc:
            acc.remove(())
            constant ^= 1
        return cls(frozenset(acc), constant)

    def _terms(self) -> set[Monomial]:
        terms = set(self.monomials)
        if self.constant:
            terms.add(())
        return terms

    def __add__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(self.monomials ^ other.monomials, self.constant ^ other.constant)

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        acc: set[Monomial] = set()
        for a in self._terms():
            for b in other._terms():
                _toggle(acc, tuple(sorted(set(a) | set(b))))
        constant = 1 if () in acc else 0
        acc.discard(())
        return Gf2Poly(frozenset(acc), constant)

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.monomials), default=0)

    def variables(self) -> set[int]:
        return {var for monomial in self.monomials for var in monomial}

    def single_variable(self) -> int | None:
        if self.constant == 0 and len(self.monomials) == 1:
            (monomial,) = self.monomials
            if len(monomial) == 1:
                return monomial[0]
        return None

    def bind(self, values: Mapping[int, int]) -> "Gf2Poly":
        """Fold bound variables into the polynomial: 0 kills a monomial, 1
        drops the variable, duplicates cancel and constants merge."""
        acc: set[Monomial] = set()
        constant = self.constant
        for monomial in self.monomials:
            kept = []
            for var in monomial:
                bit = values.get(var)
                if bit is None:
                    kept.append(var)
                elif bit == 0:
                    break
            else:
                if kept:
                    _toggle(acc, tuple(kept))
                else:
                    constant ^= 1
        return Gf2Poly(frozenset(acc), constant)

    def sorted_monomials(self) -> list[Monomial]:
        """By degree, then by variable id; labels play no part."""
        return sorted(self.monomials, key=lambda m: (len(m), m))


def eval_poly(poly: Gf2Poly, assignment: Mapping[int, int]) -> int:
    """f(x) for a complete assignment."""
    value = poly.constant
    for monomial in poly.monomials:
        term = 1
        for var in monomial:
            if var not in assignment:
                raise UnboundVariable(f"variable {var} has no value")
            term &= assignment[var]
        value ^= term
    return value


@dataclass(frozen=True)
class BoundaryAssignment:
    in_bits: BasisState
    out_bits: BasisState

    def __post_init__(self):
        if len(self.in_bits) != len(self.out_bits):
            raise ValueError("input and output basis states differ in length")

    @classmethod
    def from_strings(cls, in_text: str, out_text: str, q: int) -> "BoundaryAssignment":
        return cls(BasisState.from_string(in_text, q), BasisState.from_string(out_text, q))


@dataclass(frozen=True)
class Labeling:
    f_raw: Gf2Poly
    input_vars: tuple[int, ...]
    output_exprs: tuple[Gf2Poly, ...]
    h: int
    variables: tuple[VarId, ...]
    # monomial -> (gate index, line) of the Hadamard that produced it
    origins: Mapping[Monomial, tuple[int, int]] = field(default_factory=dict)

    @property
    def q(self) -> int:
        return len(self.input_vars)

    @property
    def var_count(self) -> int:
        return len(self.variables)

    def labels(self) -> dict[int, str]:
        return {var.id: var.label for var in self.variables}


def line_name(line: int) -> str:
    """Spreadsheet-style line names: a..z, aa, ab, ..."""
    name = ""
    line += 1
    while line:
        line, rem = divmod(line - 1, 26)
        name = chr(ord("a") + rem) + name
    return name


def label_circuit(circuit: Circuit) -> Labeling:
    """Give every wire segment a variable and collect the path polynomial.

    Line i starts with variable ``<line_name(i)>1``; each Hadamard opens the
    next one and adds ``expr(before) * after`` to ``f_raw``. Toffolis only
    update the target's expression. The circuit must be normalised, otherwise
    ``NotNormalized`` is raised.
    """
    variables: list[VarId] = []
    counters = [0] * circuit.q

    def fresh(line: int) -> int:
        counters[line] += 1
        var = VarId(len(variables), f"{line_name(line)}{counters[line]}")
        variables.append(var)
        return var.id

    inputs = tuple(fresh(line) for line in range(circuit.q))
    exprs = [Gf2Poly.variable(var) for var in inputs]
    touched = [0] * circuit.q
    f_raw = Gf2Poly()
    origins: dict[Monomial, tuple[int, int]] = {}

    for index, gate in enumerate(circuit.gates):
        if isinstance(gate, Hadamard):
            line = gate.line
            after = fresh(line)
            term = exprs[line] * Gf2Poly.variable(after)
            if term.degree > 3:
                raise NotNormalized(
                    f"gate {index}: Hadamard on line {line} yields degree {term.degree}"
                )
            f_raw = f_raw + term
            for monomial in term.monomials:
                origins[monomial] = (index, line)
            exprs[line] = Gf2Poly.variable(after)
            touched[line] = 0
        else:
            for line in gate.lines:
                touched[line] += 1
                if touched[line] > 1:
                    raise NotNormalized(
                        f"gate {index}: segment of line {line} touches two Toffolis"
                    )
            exprs[gate.target] = exprs[gate.target] + (
                exprs[gate.control1] * exprs[gate.control2]
            )

    return Labeling(
        f_raw=f_raw,
        input_vars=inputs,
        output_exprs=tuple(exprs),
        h=circuit.hadamard_count,
        variables=tuple(variables),
        origins=origins,
    )


def boundary_values(
    labeling: Labeling, boundary: BoundaryAssignment
) -> tuple[dict[int, int], list[int]]:
    """Bind input and output variables. Returns the bindings and the lines
    whose output bit contradicts a value already fixed."""
    values = dict(zip(labeling.input_vars, boundary.in_bits.bits))
    conflicts: list[int] = []
    pending: list[tuple[int, Gf2Poly, int]] = []

    for line, (expr, bit) in enumerate(zip(labeling.output_exprs, boundary.out_bits.bits)):
        var = expr.single_variable()
        if var is None:
            pending.append((line, expr, bit))
        elif var in values and values[var] != bit:
            conflicts.append(line)
        else:
            values[var] = bit

    for line, expr, bit in pending:
        folded = expr.bind(values)
        if folded.monomials:
            raise NotNormalized("output expression is not fixed by the boundary")
        if folded.constant != bit:
            conflicts.append(line)
    return values, conflicts


def substitute(
    labeling: Labeling, boundary: BoundaryAssignment
) -> tuple[Gf2Poly, list[int], bool]:
    """Plug the boundary bits into ``f_raw``. Returns (reduced polynomial,
    free variables in labelling order, conflict flag); on a conflict the
    polynomial is empty and the amplitude is zero.
    """
    values, conflicts = boundary_values(labeling, boundary)
    if conflicts:
        logger.debug(f"Boundary conflict on line(s) {conflicts}")
        return Gf2Poly(), [], True
    poly = labeling.f_raw.bind(values)
    free_vars = [var.id for var in labeling.variables if var.id not in values]
    return poly, free_vars, False


def _gap_chunk(args: tuple[list[Monomial], int, int, int]) -> int:
    masks, constant, start, stop = args
    x = np.arange(start, stop, dtype=np.int64)
    bits: dict[int, np.ndarray] = {}

    def bit(i: int) -> np.ndarray:
        if i not in bits:
            bits[i] = ((x >> i) & 1).astype(np.uint8)
        return bits[i]

    f = np.full(x.shape, constant, dtype=np.uint8)
    for monomial in masks:
        term = bit(monomial[0]).copy()
        for i in monomial[1:]:
            term &= bit(i)
        f ^= term
    ones = int(f.sum(dtype=np.int64))
    return (stop - start) - 2 * ones


def count_gap(
    poly: Gf2Poly,
    v: int,
    *,
    free_vars: Sequence[int] | None = None,
    limit: int | None = None,
    workers: int = 1,
    chunk_bits: int | None = None,
) -> int:
    """#0 - #1 over all 2^v assignments of the free variables.

    Bit i of the assignment integer is ``free_vars[i]`` (sorted variables of
    ``poly`` when not given). Free variables absent from ``poly`` are not
    enumerated; each doubles the result.
    """
    limit = DEFAULTS.enumeration_limit if limit is None else limit
    chunk_bits = DEFAULTS.gap_chunk_bits if chunk_bits is None else chunk_bits
    if v > limit:
        raise TooManyVariables(f"{v} free variables exceed the enumeration limit {limit}")

    occurring = poly.variables()
    if free_vars is None:
        used = sorted(occurring)
        if len(used) > v:
            raise UnboundVariable(f"polynomial has {len(used)} variables but v = {v}")
    else:
        if len(free_vars) != v:
            raise ValueError(f"free_vars has length {len(free_vars)}, expected {v}")
        missing = occurring - set(free_vars)
        if missing:
            raise UnboundVariable(f"variables {sorted(missing)} are not free")
        used = [var for var in free_vars if var in occurring]

    position = {var: i for i, var in enumerate(used)}
    masks = [tuple(position[var] for var in m) for m in poly.sorted_monomials()]
    total = 1 << len(used)
    step = 1 << chunk_bits
    jobs = [
        (masks, poly.constant, start, min(start + step, total))
        for start in range(0, total, step)
    ]

    if workers > 1 and len(jobs) > 1:
        with Pool(processes=workers) as pool:
            partials = pool.map(_gap_chunk, jobs)
    else:
        partials = [_gap_chunk(job) for job in jobs]

    return sum(partials) << (v - len(used))


def format_poly(poly: Gf2Poly, labels: Mapping[int, str] | None = None) -> str:
    """One monomial per line in ``sorted_monomials`` order, then the constant.

    Ids follow labelling order (or first appearance for parsed text), so
    ``a2 a3`` may follow ``b2 b3`` when b2 was labelled first.
    """

    def name(var: int) -> str:
        return labels[var] if labels else f"x{var}"

    lines = [" ".join(name(var) for var in monomial) for monomial in poly.sorted_monomials()]
    lines.append(f"constant {poly.constant}")
    return "\n".join(lines) + "\n"


def parse_poly(text: str) -> tuple[Gf2Poly, dict[int, str]]:
    """Read the text form written by ``format_poly``. Variables get ids in
    order of first appearance; returns the polynomial and its id -> label
    table."""
    ids: dict[str, int] = {}
    terms: list[list[int]] = []
    constant = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if tokens[0] == "constant":
            if len(tokens) != 2 or tokens[1] not in ("0", "1"):
                raise MalformedLine("expected 'constant <0|1>'", lineno)
            constant ^= int(tokens[1])
            continue
        if len(tokens) > 3 or len(set(tokens)) != len(tokens):
            raise MalformedLine("monomials hold one to three distinct variables", lineno)
        terms.append([ids.setdefault(token, len(ids)) for token in tokens])

    poly = Gf2Poly.from_terms(terms, constant)
    return poly, {var: label for label, var in ids.items()}
