"""Compile a clause set into one weighted digraph G with
<out|U|in> = per(G) / sqrt(2)^h.

Every monomial becomes a gadget block on the diagonal. Every variable gets a
weight-1 external cycle through one slot of each gadget containing it; a
cycle cover traversing that cycle stands for the variable being 0. Gadgets
contribute -1 exactly when none of their slots is covered externally, so a
cover's weight is (-1)^f(x) and the permanent is the solution gap.

Two ways to fix boundary variables:

* substitution: bind them in the polynomial first, then encode the
  reduced polynomial;
* graph-fix: encode the raw polynomial; a variable fixed to 1 gets no
  external cycle, one fixed to 0 has its cycle routed through a forcing
  vertex without self-loop so every cover must traverse it.
"""

import logging
from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum

from .errors import ConflictingBoundary, UnsupportedPolynomial
from .gadgets import GadgetSet
from .gf2 import BoundaryAssignment, Gf2Poly, Labeling, Monomial, boundary_values, substitute
from .matrix import IntMatrix
from .statevector import DyadicAmplitude

logger = logging.getLogger(__name__)


class EncodingMode(str, Enum):
    GRAPH_FIX = "graph-fix"
    SUBSTITUTION = "subst"


@dataclass(frozen=True)
class ExternalEdge:
    source: int
    target: int
    var: int


@dataclass(frozen=True)
class Encoding:
    matrix: IntMatrix
    h: int
    mode: EncodingMode
    vertex_labels: tuple[str, ...]
    external_edges: tuple[ExternalEdge, ...]
    sign_note: str | None = None
    # gadget, multiplier and sign entries only; external edges excluded
    internal: IntMatrix | None = None
    var_labels: Mapping[int, str] = field(default_factory=dict)
    positions: tuple[tuple[float, float] | None, ...] = ()
    warnings: tuple[str, ...] = ()
    monomial_count: int = 0
    forcing_count: int = 0
    multiplier_count: int = 0

    @property
    def size_bound(self) -> int:
        # one extra vertex covers the sign/conflict vertex when present
        extra = 1 if self.matrix.n and self.vertex_labels[-1] in ("sign", "conflict") else 0
        return 3 * self.monomial_count + self.forcing_count + self.multiplier_count + extra


class _GraphBuilder:
    def __init__(self, labels: Mapping[int, str]):
        self.var_labels = labels
        self.vertex_labels: list[str] = []
        self.positions: list[tuple[float, float] | None] = []
        self.internal: dict[tuple[int, int], int] = defaultdict(int)
        self.external: list[ExternalEdge] = []
        self.internal_vertices: list[int] = []

    def label(self, var: int) -> str:
        return self.var_labels.get(var, f"x{var}")

    def vertex(self, label: str, pos: tuple[float, float] | None = None) -> int:
        self.vertex_labels.append(label)
        self.positions.append(pos)
        return len(self.vertex_labels) - 1

    def gadget(
        self,
        index: int,
        clause: Monomial,
        gadgets: GadgetSet,
        pos: tuple[float, float] | None,
    ) -> list[int]:
        template = gadgets.for_degree(len(clause))
        slot_var = dict(zip(template.slots, clause))
        base = len(self.vertex_labels)
        for k in range(template.size):
            tag = self.label(slot_var[k]) if k in slot_var else "int"
            vpos = None if pos is None else (pos[0] + 0.3 * k, pos[1] - 0.3)
            vertex = self.vertex(f"g{index}.{tag}", vpos)
            if k not in slot_var:
                self.internal_vertices.append(vertex)
        for i, j, value in template.block.nonzeros():
            self.internal[base + i, base + j] += value
        return [base + slot for slot in template.slots]

    def cycle(self, var: int, vertices: Sequence[int]) -> None:
        if len(vertices) == 1:
            self.external.append(ExternalEdge(vertices[0], vertices[0], var))
            return
        for a, b in zip(vertices, [*vertices[1:], vertices[0]]):
            self.external.append(ExternalEdge(a, b, var))

    def build(self) -> tuple[IntMatrix, IntMatrix]:
        n = len(self.vertex_labels)
        internal = [[0] * n for _ in range(n)]
        for (i, j), value in self.internal.items():
            internal[i][j] = value
        full = [row[:] for row in internal]
        for edge in self.external:
            full[edge.source][edge.target] += 1
        return IntMatrix.from_rows(full), IntMatrix.from_rows(internal)


def _clause_order(
    monomials: frozenset[Monomial], origins: Mapping[Monomial, tuple[int, int]]
) -> list[Monomial]:
    return sorted(monomials, key=lambda m: (origins.get(m, (-1, -1)), len(m), m))


def _structural_warnings(clauses: Sequence[Monomial], labels: Mapping[int, str]) -> list[str]:
    quadratic = defaultdict(int)
    for clause in clauses:
        if len(clause) == 2:
            for var in clause:
                quadratic[var] += 1
    warnings = []
    for clause in clauses:
        if len(clause) == 3:
            for var in clause:
                if quadratic[var] < 2:
                    name = labels.get(var, f"x{var}")
                    warnings.append(
                        f"cubic-clause variable {name} sits in {quadratic[var]} quadratic clause(s)"
                    )
    return warnings


def _check_supported(poly: Gf2Poly) -> None:
    if poly.degree > 3:
        raise UnsupportedPolynomial(f"clause degree {poly.degree} exceeds 3")


def encode_poly(
    poly: Gf2Poly,
    *,
    free_vars: Sequence[int] | None = None,
    h: int = 0,
    labels: Mapping[int, str] | None = None,
    gadgets: GadgetSet | None = None,
) -> Encoding:
    """Substitution-mode encoding of an already reduced polynomial."""
    _check_supported(poly)
    gadgets = gadgets or GadgetSet.standard()
    labels = labels or {}
    occurring = poly.variables()
    free = sorted(occurring) if free_vars is None else list(free_vars)
    if not occurring <= set(free):
        raise ValueError(f"variables {sorted(occurring - set(free))} are not free")

    builder = _GraphBuilder(labels)
    clauses = _clause_order(poly.monomials, {})
    slots: dict[int, list[int]] = defaultdict(list)
    for index, clause in enumerate(clauses):
        for var, vertex in zip(clause, builder.gadget(index, clause, gadgets, None)):
            slots[var].append(vertex)
    for var in sorted(slots):
        builder.cycle(var, slots[var])

    unused = [var for var in free if var not in occurring]
    for var in unused:
        vertex = builder.vertex(f"mult:{builder.label(var)}")
        builder.internal[vertex, vertex] += 2

    sign_note = None
    if poly.constant:
        if builder.internal_vertices:
            internal_vertex = builder.internal_vertices[0]
            for (i, j), value in list(builder.internal.items()):
                if i == internal_vertex:
                    builder.internal[i, j] = -value
            sign_note = f"row {internal_vertex} ({builder.vertex_labels[internal_vertex]}) negated"
        else:
            vertex = builder.vertex("sign")
            builder.internal[vertex, vertex] = -1
            sign_note = f"sign vertex {vertex} with self-loop -1"

    warnings = _structural_warnings(clauses, labels)
    for warning in warnings:
        logger.debug(f"Encoder: {warning}")

    matrix, internal = builder.build()
    return Encoding(
        matrix=matrix,
        h=h,
        mode=EncodingMode.SUBSTITUTION,
        vertex_labels=tuple(builder.vertex_labels),
        external_edges=tuple(builder.external),
        sign_note=sign_note,
        internal=internal,
        var_labels=dict(labels),
        positions=tuple(builder.positions),
        warnings=tuple(warnings),
        monomial_count=len(clauses),
        multiplier_count=len(unused),
    )


def _encode_graph_fix(
    labeling: Labeling, boundary: BoundaryAssignment, gadgets: GadgetSet
) -> Encoding:
    values, conflicts = boundary_values(labeling, boundary)
    labels = labeling.labels()
    builder = _GraphBuilder(labels)
    clauses = _clause_order(labeling.f_raw.monomials, labeling.origins)

    slots: dict[int, list[int]] = defaultdict(list)
    for index, clause in enumerate(clauses):
        origin = labeling.origins.get(clause)
        pos = None if origin is None else (float(origin[0]), float(-origin[1]))
        for var, vertex in zip(clause, builder.gadget(index, clause, gadgets, pos)):
            slots[var].append(vertex)

    boundary_line = {var: line for line, var in enumerate(labeling.input_vars)}
    outputs = {}
    for line, expr in enumerate(labeling.output_exprs):
        var = expr.single_variable()
        if var is not None:
            outputs[var] = line
    end = float(max((o[0] for o in labeling.origins.values()), default=0) + 1)

    forcing = 0
    for var in sorted(slots):
        bit = values.get(var)
        if bit == 1:
            continue
        cycle = list(slots[var])
        if bit == 0:
            if var in boundary_line:
                pos = (-1.0, float(-boundary_line[var]))
            else:
                pos = (end, float(-outputs.get(var, 0)))
            cycle.append(builder.vertex(f"force:{builder.label(var)}", pos))
            forcing += 1
        builder.cycle(var, cycle)

    unused = [var.id for var in labeling.variables if var.id not in values and var.id not in slots]
    for var in unused:
        vertex = builder.vertex(f"mult:{builder.label(var)}")
        builder.internal[vertex, vertex] += 2

    sign_note = None
    if conflicts:
        builder.vertex("conflict")
        sign_note = f"boundary conflict on line(s) {conflicts}; isolated vertex appended"
        logger.debug(sign_note)

    matrix, internal = builder.build()
    return Encoding(
        matrix=matrix,
        h=labeling.h,
        mode=EncodingMode.GRAPH_FIX,
        vertex_labels=tuple(builder.vertex_labels),
        external_edges=tuple(builder.external),
        sign_note=sign_note,
        internal=internal,
        var_labels=labels,
        positions=tuple(builder.positions),
        monomial_count=len(clauses),
        forcing_count=forcing,
        multiplier_count=len(unused),
    )


def encode(
    source: Gf2Poly | Labeling,
    boundary: BoundaryAssignment | None = None,
    mode: EncodingMode | str | None = None,
    *,
    free_vars: Sequence[int] | None = None,
    h: int = 0,
    labels: Mapping[int, str] | None = None,
    gadgets: GadgetSet | None = None,
) -> Encoding:
    """Compile a polynomial or a labelled circuit into its permanent matrix.

    A bare polynomial is always encoded in substitution mode. A labelling
    needs a boundary and defaults to graph-fix; in substitution mode a
    conflicting boundary raises ``ConflictingBoundary``, while graph-fix
    appends an isolated vertex so the permanent is zero.
    """
    gadgets = gadgets or GadgetSet.standard()

    if isinstance(source, Gf2Poly):
        if mode is not None and EncodingMode(mode) is not EncodingMode.SUBSTITUTION:
            raise ValueError("a bare polynomial can only be encoded in substitution mode")
        return encode_poly(source, free_vars=free_vars, h=h, labels=labels, gadgets=gadgets)

    if boundary is None:
        raise ValueError("encoding a circuit labelling needs a boundary assignment")
    mode = EncodingMode.GRAPH_FIX if mode is None else EncodingMode(mode)
    _check_supported(source.f_raw)

    if mode is EncodingMode.GRAPH_FIX:
        encoding = _encode_graph_fix(source, boundary, gadgets)
    else:
        poly, free, conflict = substitute(source, boundary)
        if conflict:
            raise ConflictingBoundary("boundary bits contradict a Hadamard-free line")
        encoding = encode_poly(
            poly, free_vars=free, h=source.h, labels=source.labels(), gadgets=gadgets
        )
    logger.info(f"Encoded {mode.value} matrix of dimension {encoding.matrix.n}")
    return encoding


def amplitude_from_permanent(permanent: int, h: int) -> DyadicAmplitude:
    """per(G) / sqrt(2)^h."""
    return DyadicAmplitude(permanent, h)


def export_dot(encoding: Encoding, *, layout: bool = False) -> str:
    """Graphviz text of the weighted digraph; ``layout`` adds neato pin positions."""
    lines = ["digraph G {"]
    for index, label in enumerate(encoding.vertex_labels):
        attrs = [f'label="{label}"']
        pos = encoding.positions[index] if index < len(encoding.positions) else None
        if layout and pos is not None:
            attrs.append(f'pos="{pos[0]:g},{pos[1]:g}!"')
        lines.append(f"  v{index} [{', '.join(attrs)}];")

    internal = encoding.internal or encoding.matrix
    for i, j, value in internal.nonzeros():
        lines.append(f'  v{i} -> v{j} [label="{value}"];')
    for edge in encoding.external_edges:
        name = encoding.var_labels.get(edge.var, f"x{edge.var}")
        lines.append(f'  v{edge.source} -> v{edge.target} [label="1", color=blue, var="{name}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
