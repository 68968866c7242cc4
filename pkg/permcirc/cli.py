"""Command line: ``permcirc amp|compile|verify|norm|bench``.

JSON documents go to stdout, artifacts to ``--output`` (or stdout), log
messages to stderr.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .circuit import parse_circuit
from .config import load_settings
from .encoder import EncodingMode, export_dot
from .errors import PermcircError
from .gf2 import format_poly, parse_poly, substitute
from .matrix import export_matrix_market, format_dense
from .pipeline import (
    BACKENDS,
    BENCH_BACKENDS,
    PolyInstance,
    build_encoding,
    prepare_circuit,
    run_amplitude,
    run_bench,
    run_norm,
    run_verify,
)

logger = logging.getLogger(__name__)

EMIT_KINDS = ("poly", "matrix", "matrix-dense", "dot")
MODES = [mode.value for mode in EncodingMode]


def _print_json(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {output}")
    else:
        sys.stdout.write(text)


def _add_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--circuit",
        metavar="PATH",
        help="Circuit file ('qubits q', 'h i', 'ccx c1 c2 t')",
    )
    source.add_argument(
        "--poly",
        metavar="PATH",
        help="Polynomial text file (one monomial per line)",
    )
    parser.add_argument(
        "--in",
        dest="in_bits",
        metavar="BITS",
        help="Input basis state, character i = qubit i",
    )
    parser.add_argument("--out", dest="out_bits", metavar="BITS", help="Output basis state")
    parser.add_argument(
        "--hadamards",
        type=int,
        default=0,
        metavar="H",
        help="Hadamard count for --poly input",
    )
    parser.add_argument(
        "--mode",
        choices=MODES,
        default=None,
        help="Boundary handling (default from config)",
    )


def _add_execution(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        metavar="N",
        help="Worker processes (default 1)",
    )
    parser.add_argument("--force-size", action="store_true", help="Lift the permanent size cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permcirc",
        description="Toffoli-Hadamard circuit amplitudes as matrix permanents.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--config",
        metavar="PATH",
        help="YAML settings file (default ./permcirc.yml)",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Log level for messages on stderr",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    amp = sub.add_parser("amp", help="Compute <out|U|in>")
    _add_source(amp)
    _add_execution(amp)
    amp.add_argument("--backend", choices=BACKENDS, default="perm-exact")
    amp.add_argument("--samples", type=int, default=10_000, help="Samples for perm-mc")
    amp.add_argument("--seed", type=int, default=0)
    amp.add_argument(
        "--cross-check",
        action="store_true",
        help="Recompute with the simulator and fail on mismatch",
    )

    compile_ = sub.add_parser("compile", help="Emit the polynomial, matrix or graph")
    _add_source(compile_)
    compile_.add_argument("--emit", choices=EMIT_KINDS, default="poly")
    compile_.add_argument("--layout", action="store_true", help="Position hints in DOT output")
    compile_.add_argument(
        "--output",
        metavar="PATH",
        help="Write the artifact here instead of stdout",
    )

    verify = sub.add_parser("verify", help="Check sv = gap = per(G) on random circuits")
    _add_execution(verify)
    verify.add_argument(
        "--circuit",
        metavar="PATH",
        help="Verify this circuit instead of random ones",
    )
    verify.add_argument("--qubits", type=int, default=2)
    verify.add_argument("--gates", type=int, default=6)
    verify.add_argument("--trials", type=int, default=50)
    verify.add_argument("--pairs", type=int, default=4, help="Random (in, out) pairs per circuit")
    verify.add_argument("--p-toffoli", type=float, default=0.3)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--exhaustive", action="store_true", help="Check every (in, out) pair")
    verify.add_argument(
        "--inject-fault",
        action="store_true",
        help="Use a broken gadget to test the harness",
    )

    norm = sub.add_parser("norm", help="Spectral norm of G / 2^(h/(2m))")
    _add_source(norm)

    bench = sub.add_parser("bench", help="Time permanent kernels on random matrices")
    _add_execution(bench)
    bench.add_argument("--n", type=int, default=12)
    bench.add_argument("--backend", choices=BENCH_BACKENDS, default="ryser")
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--seed", type=int, default=0)
    return parser


def _instance(args, parser, need_boundary: bool, timings: dict[str, float] | None = None):
    if args.poly:
        poly, labels = parse_poly(Path(args.poly).read_text(encoding="utf-8"))
        return PolyInstance(poly, labels, args.hadamards)
    if need_boundary and (args.in_bits is None or args.out_bits is None):
        parser.error(f"{args.command} needs --in and --out with --circuit")
    text = Path(args.circuit).read_text(encoding="utf-8")
    return prepare_circuit(text, args.in_bits, args.out_bits, timings)


def cmd_amp(args, parser, settings) -> int:
    """``permcirc amp``: one amplitude as a JSON result document."""
    if args.poly and args.backend == "sv":
        parser.error("the sv backend needs --circuit")
    timings: dict[str, float] = {}
    instance = _instance(args, parser, need_boundary=True, timings=timings)
    result = run_amplitude(
        instance,
        args.backend,
        mode=args.mode,
        samples=args.samples,
        seed=args.seed,
        workers=args.threads,
        force_size=args.force_size,
        cross_check=args.cross_check,
        settings=settings,
        timings=timings,
    )
    _print_json(result.to_dict())
    return 0


def cmd_compile(args, parser, settings) -> int:
    """``permcirc compile``: write the polynomial, matrix or DOT graph."""
    instance = _instance(args, parser, need_boundary=args.emit != "poly")

    if args.emit == "poly":
        if isinstance(instance, PolyInstance):
            text = format_poly(instance.poly, instance.labels)
        elif instance.boundary is None:
            text = format_poly(instance.labeling.f_raw, instance.labeling.labels())
        else:
            poly, _, conflict = substitute(instance.labeling, instance.boundary)
            if conflict:
                logger.warning("Boundary conflict; the amplitude is 0")
            text = format_poly(poly, instance.labeling.labels())
        _write(text, args.output)
        return 0

    encoding = build_encoding(instance, args.mode or settings.default_mode, settings=settings)
    if args.emit == "matrix":
        text = export_matrix_market(encoding.matrix)
    elif args.emit == "matrix-dense":
        text = format_dense(encoding.matrix)
    else:
        text = export_dot(encoding, layout=args.layout)
    _write(text, args.output)
    return 0


def cmd_verify(args, parser, settings) -> int:
    """``permcirc verify``: agreement sweep; exit 1 if any record disagrees."""
    circuits = None
    if args.circuit:
        circuits = [parse_circuit(Path(args.circuit).read_text(encoding="utf-8"))]
    report = run_verify(
        args.qubits,
        args.gates,
        args.trials,
        args.seed,
        pairs=args.pairs,
        p_toffoli=args.p_toffoli,
        exhaustive=args.exhaustive,
        inject_fault=args.inject_fault,
        workers=args.threads,
        progress=sys.stderr.isatty(),
        settings=settings,
        circuits=circuits,
    )
    _print_json(report.to_dict())
    return 0 if report.ok else 1


def cmd_norm(args, parser, settings) -> int:
    """``permcirc norm``: scaled spectral norm report."""
    instance = _instance(args, parser, need_boundary=True)
    _print_json(run_norm(instance, args.mode, settings=settings))
    return 0


def cmd_bench(args, parser, settings) -> int:
    """``permcirc bench``: kernel timings; exit 4 if kernels disagree."""
    doc = run_bench(
        args.n,
        args.backend,
        args.repeats,
        args.seed,
        force_size=args.force_size,
        workers=args.threads,
        settings=settings,
    )
    _print_json(doc)
    return 0 if all(row["equal"] for row in doc["rows"]) else 4


COMMANDS = {
    "amp": cmd_amp,
    "compile": cmd_compile,
    "verify": cmd_verify,
    "norm": cmd_norm,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    """Console entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )

    try:
        settings = load_settings(Path(args.config) if args.config else None)
        return COMMANDS[args.command](args, parser, settings)
    except PermcircError as e:
        logger.error(str(e))
        return e.exit_code
    except (OSError, ValueError) as e:
        logger.error(str(e))
        return 2
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
