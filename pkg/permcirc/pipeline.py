"""Amplitude backends, the verification sweep and the permanent benchmark.

Every command builds a plain dataclass whose ``to_dict`` is the JSON
document printed by the command line.
"""

import hashlib
import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

import numpy as np
from tqdm import tqdm

from .circuit import (
    Circuit,
    NormalizationReport,
    all_basis_states,
    normalize,
    parse_circuit,
    random_basis_state,
    random_circuit,
    serialize_circuit,
)
from .config import DEFAULTS, Settings
from .encoder import Encoding, EncodingMode, amplitude_from_permanent, encode
from .errors import ConflictingBoundary, DisagreementError, SizeCapError, TooLarge
from .gadgets import GadgetSet, faulty_gadgets
from .gf2 import BoundaryAssignment, Gf2Poly, Labeling, count_gap, label_circuit, substitute
from .matrix import IntMatrix
from .norm import NormReport, gurvits_norm_report
from .permanent import per_glynn_exact, per_naive, per_ryser
from .sampling import McEstimate, per_gurvits
from .statevector import DyadicAmplitude, amplitude, simulate

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
BACKENDS = ("sv", "count", "perm-exact", "perm-mc")
BENCH_BACKENDS = ("naive", "ryser", "glynn", "all")


@contextmanager
def _timed(timings: dict[str, float], stage: str) -> Iterator[None]:
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[stage] = timings.get(stage, 0.0) + time.perf_counter() - start


@dataclass(frozen=True)
class CircuitInstance:
    circuit: Circuit
    labeling: Labeling
    boundary: BoundaryAssignment | None
    normalization: NormalizationReport


@dataclass(frozen=True)
class PolyInstance:
    poly: Gf2Poly
    labels: dict[int, str]
    h: int

    @property
    def free_vars(self) -> list[int]:
        return sorted(self.poly.variables())


Instance = CircuitInstance | PolyInstance


def prepare_circuit(
    text: str,
    in_text: str | None = None,
    out_text: str | None = None,
    timings: dict[str, float] | None = None,
) -> CircuitInstance:
    """Parse, normalise and label circuit text, timing each stage into ``timings``."""
    timings = {} if timings is None else timings
    with _timed(timings, "parse"):
        circuit = parse_circuit(text)
    logger.info(
        f"Parsed circuit: {circuit.q} qubits, {circuit.hadamard_count} H, "
        f"{circuit.toffoli_count} Toffoli"
    )
    with _timed(timings, "normalize"):
        circuit, report = normalize(circuit)
    with _timed(timings, "label"):
        labeling = label_circuit(circuit)

    boundary = None
    if in_text is not None or out_text is not None:
        if in_text is None or out_text is None:
            raise ValueError("--in and --out must be given together")
        boundary = BoundaryAssignment.from_strings(in_text, out_text, circuit.q)
    return CircuitInstance(circuit, labeling, boundary, report)


@dataclass
class RunResult:
    command: str
    backend: str
    mode: str | None
    amplitude: DyadicAmplitude | None
    value: float
    h: int
    matrix_size: int | None
    variables: int
    conflict: bool
    timings: dict[str, float] = field(default_factory=dict)
    seed: int | None = None
    samples: int | None = None
    estimate: McEstimate | None = None

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "backend": self.backend,
            "mode": self.mode,
            "amplitude": {
                "k": None if self.amplitude is None else self.amplitude.k,
                "h": self.h,
                "float": self.value,
            },
            "matrix_size": self.matrix_size,
            "variables": self.variables,
            "conflict": self.conflict,
            "timings": {stage: round(seconds, 6) for stage, seconds in self.timings.items()},
            "seed": self.seed,
            "samples": self.samples,
            "estimate": (
                None
                if self.estimate is None
                else {"mean": self.estimate.mean, "stderr": self.estimate.stderr}
            ),
        }


def _reduced(instance: Instance) -> tuple[Gf2Poly, list[int], bool]:
    if isinstance(instance, PolyInstance):
        return instance.poly, instance.free_vars, False
    if instance.boundary is None:
        raise ValueError("a boundary assignment (--in/--out) is required")
    return substitute(instance.labeling, instance.boundary)


def _h(instance: Instance) -> int:
    return instance.h if isinstance(instance, PolyInstance) else instance.labeling.h


def build_encoding(
    instance: Instance,
    mode: EncodingMode | str,
    *,
    gadgets: GadgetSet | None = None,
    settings: Settings = DEFAULTS,
) -> Encoding:
    """Encode an instance; polynomial input ignores ``mode`` and uses substitution."""
    gadgets = gadgets or GadgetSet.standard(settings.betas)
    mode = EncodingMode(mode)
    if isinstance(instance, PolyInstance):
        if mode is not EncodingMode.SUBSTITUTION:
            logger.info("Polynomial input is always encoded in substitution mode")
        return encode(instance.poly, h=instance.h, labels=instance.labels, gadgets=gadgets)
    if instance.boundary is None:
        raise ValueError("a boundary assignment (--in/--out) is required")
    encoding = encode(instance.labeling, instance.boundary, mode, gadgets=gadgets)
    for warning in encoding.warnings:
        logger.warning(f"Encoder: {warning}")
    return encoding


def run_amplitude(
    instance: Instance,
    backend: str,
    *,
    mode: EncodingMode | str | None = None,
    samples: int = 10_000,
    seed: int = 0,
    workers: int = 1,
    force_size: bool = False,
    cross_check: bool = False,
    settings: Settings = DEFAULTS,
    timings: dict[str, float] | None = None,
) -> RunResult:
    """Compute <out|U|in> with one backend.

    ``sv`` simulates, ``count`` enumerates the solution gap, ``perm-exact``
    runs Ryser on the encoding and ``perm-mc`` estimates it with ``samples``
    Glynn values from ``seed``. With ``cross_check`` an exact result is
    compared against the simulator and a mismatch raises
    ``DisagreementError``.
    """
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; choose from {', '.join(BACKENDS)}")
    timings = {} if timings is None else timings
    mode = EncodingMode(mode or settings.default_mode)
    if isinstance(instance, PolyInstance):
        mode = EncodingMode.SUBSTITUTION
    h = _h(instance)

    with _timed(timings, "substitute"):
        poly, free_vars, conflict = _reduced(instance)
    v = len(free_vars)
    result_mode = mode.value if backend.startswith("perm") else None
    matrix_size = None
    estimate = None

    if backend == "sv":
        if not isinstance(instance, CircuitInstance):
            raise ValueError("the sv backend needs a circuit")
        with _timed(timings, "simulate"):
            amp = amplitude(
                instance.circuit,
                instance.boundary.in_bits,
                instance.boundary.out_bits,
                qubit_cap=settings.sv_qubit_cap,
            )
    elif backend == "count":
        with _timed(timings, "count"):
            gap = 0 if conflict else count_gap(
                poly, v, free_vars=free_vars, limit=settings.enumeration_limit,
                workers=workers, chunk_bits=settings.gap_chunk_bits,
            )
        amp = DyadicAmplitude(gap, h)
    elif conflict and mode is EncodingMode.SUBSTITUTION:
        # nothing to encode: the boundary already forces the amplitude to 0
        logger.info("Boundary conflict; amplitude is 0 without building a matrix")
        matrix_size = 0
        amp = DyadicAmplitude(0, h)
        if backend == "perm-mc":
            estimate = McEstimate(0.0, 0.0, samples, seed & 0xFFFF_FFFF_FFFF_FFFF)
            amp = None
    else:
        with _timed(timings, "encode"):
            encoding = build_encoding(instance, mode, settings=settings)
        matrix_size = encoding.matrix.n
        if backend == "perm-exact":
            with _timed(timings, "permanent"):
                permanent = per_ryser(
                    encoding.matrix, cap=settings.ryser_cap, force=force_size, workers=workers
                )
            amp = amplitude_from_permanent(permanent, h)
        else:
            with _timed(timings, "sample"):
                estimate = per_gurvits(
                    encoding.matrix, samples, seed,
                    streams=settings.mc_streams, workers=workers,
                )
            amp = None

    if amp is not None:
        value = amp.to_float()
    else:
        value = estimate.mean * 2.0 ** (-h / 2)

    if cross_check and amp is not None and isinstance(instance, CircuitInstance):
        _cross_check(instance, amp, settings)

    logger.info(f"Backend {backend}: amplitude {value:.10g}")
    return RunResult(
        command="amp",
        backend=backend,
        mode=result_mode,
        amplitude=amp,
        value=value,
        h=h,
        matrix_size=matrix_size,
        variables=v,
        conflict=conflict,
        timings=timings,
        seed=seed if backend == "perm-mc" else None,
        samples=samples if backend == "perm-mc" else None,
        estimate=estimate,
    )


def _cross_check(instance: CircuitInstance, amp: DyadicAmplitude, settings: Settings) -> None:
    if instance.circuit.q > settings.sv_qubit_cap:
        logger.warning("Cross-check skipped: circuit exceeds the simulator cap")
        return
    reference = amplitude(
        instance.circuit, instance.boundary.in_bits, instance.boundary.out_bits
    )
    if not amp.same_value(reference):
        raise DisagreementError(
            f"cross-check failed: k={amp.k} h={amp.h} but the simulator gives "
            f"k={reference.k} h={reference.h} for in={instance.boundary.in_bits} "
            f"out={instance.boundary.out_bits}\n{serialize_circuit(instance.circuit)}"
        )
    logger.info("Cross-check against the simulator passed")


def run_norm(
    instance: Instance,
    mode: EncodingMode | str | None = None,
    *,
    settings: Settings = DEFAULTS,
) -> dict:
    """JSON document of the scaled-norm report for the instance's encoding."""
    mode = EncodingMode(mode or settings.default_mode)
    if isinstance(instance, CircuitInstance) and mode is EncodingMode.SUBSTITUTION:
        _, _, conflict = _reduced(instance)
        if conflict:
            raise ConflictingBoundary("boundary bits contradict a Hadamard-free line")
    encoding = build_encoding(instance, mode, settings=settings)
    report: NormReport = gurvits_norm_report(encoding, settings.norm_tol)
    return {"schema_version": SCHEMA_VERSION, "command": "norm", **asdict(report)}


def circuit_hash(circuit: Circuit) -> str:
    return hashlib.sha256(serialize_circuit(circuit).encode()).hexdigest()[:12]


@dataclass
class VerifyRecord:
    circuit_hash: str
    in_bits: str
    out_bits: str
    k_sv: int
    gap: int
    per_subst: int
    per_graphfix: int
    dims: dict[str, int]
    unitary: bool
    toffolis: int = 0

    @property
    def agree(self) -> bool:
        return self.k_sv == self.gap == self.per_subst == self.per_graphfix

    def to_dict(self) -> dict:
        return {
            "circuit_hash": self.circuit_hash,
            "in": self.in_bits,
            "out": self.out_bits,
            "k_sv": self.k_sv,
            "gap": self.gap,
            "per_subst": self.per_subst,
            "per_graphfix": self.per_graphfix,
            "dims": self.dims,
            "agree": self.agree,
            "unitary": self.unitary,
            "toffolis": self.toffolis,
        }


@dataclass
class VerifyReport:
    trials: int
    seed: int
    records: list[VerifyRecord] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "trials": self.trials,
            "seed": self.seed,
            "ok": self.ok,
            "records": [record.to_dict() for record in self.records],
            "failures": self.failures,
            "skipped": self.skipped,
        }


def check_instance(
    circuit: Circuit,
    boundary: BoundaryAssignment,
    *,
    gadgets: GadgetSet | None = None,
    workers: int = 1,
    settings: Settings = DEFAULTS,
) -> VerifyRecord:
    """Compute the four integers for one normalised circuit and boundary."""
    labeling = label_circuit(circuit)
    gadgets = gadgets or GadgetSet.standard(settings.betas)
    cap = settings.verify_matrix_cap

    poly, free_vars, conflict = substitute(labeling, boundary)
    subst = None
    if not conflict:
        subst = encode(poly, free_vars=free_vars, h=labeling.h, gadgets=gadgets)
    graphfix = encode(labeling, boundary, EncodingMode.GRAPH_FIX, gadgets=gadgets)
    for name, encoding in (("substitution", subst), ("graph-fix", graphfix)):
        if encoding is not None and encoding.matrix.n > cap:
            raise TooLarge(f"{name} matrix of dimension {encoding.matrix.n} exceeds {cap}")

    state = simulate(circuit, boundary.in_bits, qubit_cap=settings.sv_qubit_cap)
    k_sv = state.coefficient(boundary.out_bits)
    unitary = state.squared_norm() == 1 << state.exponent

    gap = 0 if conflict else count_gap(
        poly, len(free_vars), free_vars=free_vars, limit=settings.enumeration_limit,
        workers=workers,
    )
    per_subst = 0 if subst is None else per_ryser(subst.matrix, workers=workers)
    subst_dim = 0 if subst is None else subst.matrix.n
    per_graphfix = per_ryser(graphfix.matrix, workers=workers)

    return VerifyRecord(
        circuit_hash=circuit_hash(circuit),
        in_bits=str(boundary.in_bits),
        out_bits=str(boundary.out_bits),
        k_sv=k_sv,
        gap=gap,
        per_subst=per_subst,
        per_graphfix=per_graphfix,
        dims={"subst": subst_dim, "graph-fix": graphfix.matrix.n},
        unitary=unitary,
        toffolis=circuit.toffoli_count,
    )


def _boundaries(
    q: int, pairs: int, exhaustive: bool, rng: np.random.Generator
) -> list[BoundaryAssignment]:
    if exhaustive:
        return [
            BoundaryAssignment(i, o) for i in all_basis_states(q) for o in all_basis_states(q)
        ]
    return [
        BoundaryAssignment(random_basis_state(q, rng), random_basis_state(q, rng))
        for _ in range(pairs)
    ]


def run_verify(
    q: int,
    gates: int,
    trials: int,
    seed: int,
    *,
    pairs: int = 4,
    p_toffoli: float = 0.3,
    exhaustive: bool = False,
    inject_fault: bool = False,
    workers: int = 1,
    progress: bool = False,
    settings: Settings = DEFAULTS,
    circuits: list[Circuit] | None = None,
) -> VerifyReport:
    """Random circuits (or the given ones) checked on random or all boundary
    pairs. Instances beyond the size caps are skipped and counted."""
    rng = np.random.default_rng(seed & 0xFFFF_FFFF_FFFF_FFFF)
    gadgets = faulty_gadgets() if inject_fault else GadgetSet.standard(settings.betas)
    if inject_fault:
        logger.warning("Verifying with a deliberately broken quadratic gadget")

    if circuits is None:
        circuits = [
            random_circuit(q, gates, p_toffoli, int(rng.integers(1 << 62)))
            for _ in range(trials)
        ]
    report = VerifyReport(trials=len(circuits), seed=seed)

    for raw in tqdm(circuits, desc="verify", unit="circuit", disable=not progress):
        circuit, _ = normalize(raw)
        for boundary in _boundaries(circuit.q, pairs, exhaustive, rng):
            try:
                record = check_instance(
                    circuit, boundary, gadgets=gadgets, workers=workers, settings=settings
                )
            except SizeCapError as e:
                logger.warning(f"Skipped {circuit_hash(circuit)}: {e}")
                report.skipped += 1
                continue
            report.records.append(record)
            if not (record.agree and record.unitary):
                witness = record.to_dict() | {"circuit": serialize_circuit(circuit)}
                report.failures.append(witness)
                logger.error(
                    f"Disagreement on {record.circuit_hash} in={record.in_bits} "
                    f"out={record.out_bits}: sv={record.k_sv} gap={record.gap} "
                    f"subst={record.per_subst} graph-fix={record.per_graphfix}"
                )

    logger.info(
        f"Verified {len(report.records)} instance(s), {len(report.failures)} failure(s), "
        f"{report.skipped} skipped"
    )
    return report


def random_int_matrix(n: int, rng: np.random.Generator, low: int = -3, high: int = 3) -> IntMatrix:
    return IntMatrix.from_rows(rng.integers(low, high + 1, size=(n, n)).tolist())


def run_bench(
    n: int,
    backend: str,
    repeats: int,
    seed: int,
    *,
    force_size: bool = False,
    workers: int = 1,
    settings: Settings = DEFAULTS,
) -> dict:
    """Time permanent kernels on random integer matrices. Ryser and the exact
    Glynn sum always run so each repeat confirms they agree."""
    if backend not in BENCH_BACKENDS:
        raise ValueError(f"unknown bench backend {backend!r}")
    if n > settings.ryser_cap and not force_size:
        raise TooLarge(f"dimension {n} exceeds the cap {settings.ryser_cap}")
    kernels = ["ryser", "glynn"]
    if backend in ("naive", "all"):
        kernels.insert(0, "naive")

    rng = np.random.default_rng(seed & 0xFFFF_FFFF_FFFF_FFFF)
    rows = []
    for repeat in range(repeats):
        matrix = random_int_matrix(n, rng)
        timings: dict[str, float] = {}
        values: dict[str, int] = {}
        for kernel in kernels:
            with _timed(timings, kernel):
                if kernel == "naive":
                    values[kernel] = per_naive(matrix, cap=settings.naive_cap)
                elif kernel == "ryser":
                    values[kernel] = per_ryser(
                        matrix, cap=settings.ryser_cap, force=force_size, workers=workers
                    )
                else:
                    values[kernel] = per_glynn_exact(
                        matrix, cap=settings.ryser_cap, force=force_size, workers=workers
                    )
        equal = len(set(values.values())) == 1
        if not equal:
            logger.error(f"Kernels disagree on repeat {repeat}: {values}")
        rows.append(
            {
                "repeat": repeat,
                "timings": {k: round(t, 6) for k, t in timings.items()},
                "values": values,
                "equal": equal,
            }
        )
        logger.info(f"Repeat {repeat}: {timings}")

    return {
        "schema_version": SCHEMA_VERSION,
        "command": "bench",
        "n": n,
        "backend": backend,
        "rows": rows,
    }
