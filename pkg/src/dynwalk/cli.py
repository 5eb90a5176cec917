"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 unreadable or invalid input,
3 unsupported gate, 4 dimension mismatch. Data goes to ``--out`` or stdout;
diagnostics go to stderr. Set ``DYNWALK_LOG_LEVEL`` to change log verbosity.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .circuits import Circuit, adder_circuit, adder_input_state, compile_circuit, execute, teleport
from .dynamic import DynamicGraph, Trajectory, composite_propagator, evolve_dynamic
from .errors import DimensionMismatchError, DynwalkError, UnsupportedGateError
from .gates import gate_manifest
from .propagators import evolve, state_vector
from .verification import report_json, verify

log = logging.getLogger("dynwalk")

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_DIMENSION = 0, 1, 2, 3, 4


class InputError(DynwalkError):
    pass


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _dump_json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_amplitudes(data) -> np.ndarray:
    raw = data["amplitudes"] if isinstance(data, dict) else data
    amps = []
    for x in raw:
        if isinstance(x, (list, tuple)):
            amps.append(complex(float(x[0]), float(x[1])))
        else:
            amps.append(complex(float(x)))
    try:
        return state_vector(amps, tol=1e-9)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _stitch(parts: list[Trajectory]) -> Trajectory:
    """Join trajectories end to end, dropping each later part's duplicate start sample."""
    times, rows, bounds = [], [], [0.0]
    offset = 0.0
    for i, tr in enumerate(parts):
        start = 0 if i == 0 else 1
        times.extend(tr.sample_times[start:] + offset)
        rows.extend(tr.probabilities[start:])
        bounds.extend(b + offset for b in tr.stage_boundaries[1:])
        offset += tr.stage_boundaries[-1]
    return Trajectory(np.array(times), np.array(rows), bounds, parts[-1].final_state)


def _write_trajectory(tr: Trajectory, out: str | None, sidecar: str | None) -> None:
    _emit(tr.to_csv(), out)
    side = sidecar or (f"{out}.boundaries.json" if out else None)
    if side:
        Path(side).write_text(_dump_json(tr.boundaries_json()))


# ---------------------------------------------------------------------------
# commands


def cmd_compile(args) -> int:
    circuit = Circuit.from_json(_read_json(args.circuit))
    dg = compile_circuit(circuit)
    log.info("compiled %d ops into %d stages on %d vertices", len(circuit.ops), len(dg), dg.vertex_count)
    _emit(_dump_json(dg.to_json()), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    circuit = Circuit.from_json(_read_json(args.circuit))
    initial = _parse_amplitudes(_read_json(args.state)) if args.state else None
    report = execute(circuit, initial, rng=args.seed)
    _emit(_dump_json(report.to_json()), args.out)
    return EXIT_OK


def cmd_trajectory(args) -> int:
    dg = DynamicGraph.from_json(_read_json(args.graph))
    s0 = _parse_amplitudes(_read_json(args.state))
    if s0.shape[0] != dg.vertex_count:
        raise DimensionMismatchError(
            f"initial state has {s0.shape[0]} amplitudes, dynamic graph has {dg.vertex_count} vertices"
        )
    tr = evolve_dynamic(dg, s0, args.samples_per_stage)
    _write_trajectory(tr, args.out, args.boundaries)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = verify(args.target)
    for c in checks:
        if not c.passed:
            print(f"FAIL {c.name}: max deviation {c.deviation:.3e} {c.note}".rstrip(), file=sys.stderr)
    report = report_json(checks)
    _emit(_dump_json(report), args.out)
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


def cmd_teleport(args) -> int:
    forced = None
    if args.b1 is not None or args.b2 is not None:
        if args.b1 is None or args.b2 is None:
            raise InputError("give both --b1 and --b2, or neither")
        forced = (args.b1, args.b2)
    result = teleport(args.a, forced, rng=args.seed)
    if args.trajectory:
        s0 = np.zeros(8, dtype=complex)
        s0[0] = 1.0
        parts = [evolve_dynamic(result.pre_graph, s0, args.samples_per_stage)]
        if len(result.recovery_graph):
            parts.append(evolve_dynamic(result.recovery_graph, result.post_measurement_state, args.samples_per_stage))
        _write_trajectory(_stitch(parts), args.trajectory, None)
    _emit(_dump_json(result.to_json()), args.out)
    return EXIT_OK


def cmd_adder(args) -> int:
    b0 = args.b0 if args.b0 == "plus" else int(args.b0)
    s0 = adder_input_state(args.a0, b0)
    dg = compile_circuit(adder_circuit())
    final = evolve(composite_propagator(dg), s0)
    probs = np.abs(final) ** 2
    if args.trajectory:
        _write_trajectory(evolve_dynamic(dg, s0, args.samples_per_stage), args.trajectory, None)
    report = {
        "a0": args.a0,
        "b0": args.b0,
        "vertices": dg.vertex_count,
        "stages": len(dg),
        "final_probabilities": [float(p) for p in probs],
        "support": [int(v) for v in np.flatnonzero(probs > 1e-10)],
    }
    _emit(_dump_json(report), args.out)
    return EXIT_OK


def cmd_manifest(args) -> int:
    _emit(_dump_json(gate_manifest(args.max_qubits)), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _bit(text: str) -> int:
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError("expected 0 or 1")
    return int(text)


def _samples(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("samples per stage must be >= 2")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, samples=False):
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=0, help="RNG seed for sampled measurements")
        if samples:
            p.add_argument("--samples-per-stage", type=_samples, default=64)

    p = sub.add_parser("compile", help="compile a circuit JSON file to a dynamic graph JSON file")
    p.add_argument("circuit")
    common(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("simulate", help="run a circuit (measurements included) and report the result")
    p.add_argument("circuit")
    p.add_argument("--state", help="initial state JSON (default: vertex 0)")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("trajectory", help="sample vertex probabilities of a dynamic graph walk as CSV")
    p.add_argument("graph")
    p.add_argument("state")
    p.add_argument("--boundaries", help="sidecar JSON for stage boundaries (default: OUT.boundaries.json)")
    common(p, samples=True)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("verify", help="check gate walks against the circuit model and the reference stage matrices")
    p.add_argument("target", nargs="?", default="all")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("teleport", help="run the teleportation walk")
    p.add_argument("--a", type=float, required=True, help="input state sqrt(1-a)|0> + sqrt(a)|1>")
    p.add_argument("--b1", type=_bit, help="force the outcome on the input qubit")
    p.add_argument("--b2", type=_bit, help="force the outcome on the middle qubit")
    p.add_argument("--trajectory", help="also write the population CSV here")
    common(p, samples=True)
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("adder", help="run the one-bit adder walk")
    p.add_argument("--a0", type=_bit, required=True)
    p.add_argument("--b0", choices=["0", "1", "plus"], required=True)
    p.add_argument("--trajectory", help="also write the population CSV here")
    common(p, samples=True)
    p.set_defaults(func=cmd_adder)

    p = sub.add_parser("manifest", help="list the stage layout of every gate placement")
    p.add_argument("--max-qubits", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_manifest)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("DYNWALK_LOG_LEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedGateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except DimensionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (InputError, DynwalkError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
