"""Circuits, their compilation to dynamic graphs, and measurement.

A circuit is an ordered list of gate placements on ``n`` qubits, optionally led
by a state-preparation rotation and interleaved with single-qubit measurements.
Measurement is not a walk stage: :func:`execute` compiles each measurement-free
segment, evolves the state, projects, and carries on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .dynamic import DynamicGraph, Stage, composite_propagator, concatenate
from .errors import DimensionMismatchError, MeasurementError, PlacementError, UnsupportedGateError
from .gates import GateKind, GatePlacement, bit_mask, gate_t, gate_x
from .graph import build_graph
from .propagators import NORM_TOL, Duration, basis_state, evolve


@dataclass(frozen=True)
class Measure:
    qubit: int
    force: int | None = None


@dataclass(frozen=True)
class PrepareRotation:
    """K2 walk on the vertex pair (0, 1) for ``angle_time``.

    Starting from vertex 0 this gives cos(t)|0> - i sin(t)|1> on the last
    qubit. With ``phase_fix`` two confined T walks follow, removing the -i so
    the prepared amplitudes are cos(t) and sin(t). Needs at least 8 vertices
    for the T walks and a register that starts at vertex 0.
    """

    angle_time: float
    phase_fix: bool = True


Op = Union[GatePlacement, Measure, PrepareRotation]


@dataclass(frozen=True)
class Circuit:
    qubit_count: int
    ops: tuple[Op, ...] = ()

    def __post_init__(self) -> None:
        if self.qubit_count < 1:
            raise PlacementError("qubit_count must be >= 1")
        object.__setattr__(self, "ops", tuple(self.ops))
        seen_other = False
        for op in self.ops:
            if isinstance(op, PrepareRotation):
                if seen_other:
                    raise PlacementError("prepare_rotation may only appear before every other op")
                if not (op.angle_time >= 0 and math.isfinite(op.angle_time)):
                    raise ValueError("prepare_rotation time must be finite and >= 0")
                continue
            seen_other = True
            if isinstance(op, GatePlacement):
                if op.qubit_count != self.qubit_count:
                    raise PlacementError(
                        f"{op.kind.value} placed for {op.qubit_count} qubits in a {self.qubit_count}-qubit circuit"
                    )
            elif isinstance(op, Measure):
                if not 1 <= op.qubit <= self.qubit_count:
                    raise PlacementError(f"measured qubit {op.qubit} out of range")
                if op.force not in (None, 0, 1):
                    raise ValueError("forced outcome must be 0 or 1")
            else:
                raise TypeError(f"unknown circuit op {op!r}")

    @property
    def gates(self) -> list[GatePlacement]:
        return [op for op in self.ops if isinstance(op, GatePlacement)]

    @property
    def has_measurements(self) -> bool:
        return any(isinstance(op, Measure) for op in self.ops)

    def vertices_required(self) -> int:
        need = 2**self.qubit_count
        for op in self.ops:
            if isinstance(op, GatePlacement):
                need = max(need, op.vertices_required)
            elif isinstance(op, PrepareRotation):
                need = max(need, 8 if op.phase_fix else 2)
        return need

    def inverse(self) -> "Circuit":
        """Gates in reverse order. Every library gate except T is self-inverse."""
        if any(not isinstance(op, GatePlacement) for op in self.ops):
            raise PlacementError("only gate-only circuits can be inverted")
        if any(op.kind is GateKind.T for op in self.gates):
            raise UnsupportedGateError("T is not self-inverse")
        return Circuit(self.qubit_count, tuple(reversed(self.ops)))

    def to_json(self) -> dict:
        ops = []
        for op in self.ops:
            if isinstance(op, GatePlacement):
                ops.append(op.to_json())
            elif isinstance(op, Measure):
                ops.append({"measure": op.qubit} | ({"force": op.force} if op.force is not None else {}))
            else:
                ops.append({"prepare_rotation": op.angle_time} | ({} if op.phase_fix else {"phase_fix": False}))
        return {"qubits": self.qubit_count, "ops": ops}

    @classmethod
    def from_json(cls, data: dict) -> "Circuit":
        n = int(data["qubits"])
        ops: list[Op] = []
        for raw in data.get("ops", []):
            if "gate" in raw:
                name = str(raw["gate"]).upper()
                try:
                    kind = GateKind(name)
                except ValueError:
                    raise UnsupportedGateError(f"unknown gate {raw['gate']!r}") from None
                ops.append(GatePlacement(kind, n, tuple(raw.get("targets", [])), raw.get("variant")))
            elif "measure" in raw:
                ops.append(Measure(int(raw["measure"]), raw.get("force")))
            elif "prepare_rotation" in raw:
                ops.append(PrepareRotation(float(raw["prepare_rotation"]), bool(raw.get("phase_fix", True))))
            else:
                raise ValueError(f"unrecognised circuit op {raw!r}")
        return cls(n, tuple(ops))


def _prepare_graph(op: PrepareRotation, vertex_count: int) -> DynamicGraph:
    parts = []
    if op.angle_time > 0:
        parts.append(
            DynamicGraph(vertex_count, (Stage(build_graph(vertex_count, [(0, 1)]), Duration.raw(op.angle_time)),))
        )
    if op.phase_fix:
        parts += [gate_t(vertex_count), gate_t(vertex_count)]
    return concatenate(DynamicGraph(vertex_count), *parts)


def compile_ops(ops: Sequence[Op], vertex_count: int) -> DynamicGraph:
    parts = [DynamicGraph(vertex_count)]
    for op in ops:
        if isinstance(op, Measure):
            raise PlacementError("measurement cannot be compiled into a dynamic graph; use execute()")
        if isinstance(op, PrepareRotation):
            parts.append(_prepare_graph(op, vertex_count))
        else:
            parts.append(op.dynamic_graph(vertex_count))
    return concatenate(*parts)


def compile_circuit(c: Circuit, vertex_count: int | None = None) -> DynamicGraph:
    """Concatenate the gate walks of a measurement-free circuit.

    The vertex set is the ``2**n`` register plus whatever ancilla the hungriest
    gate needs; gates that need fewer leave the extra vertices as singletons.
    """
    if c.has_measurements:
        raise PlacementError("circuit contains measurements; use execute()")
    need = c.vertices_required()
    return compile_ops(c.ops, need if vertex_count is None else max(need, vertex_count))


# ---------------------------------------------------------------------------
# measurement and initialization


@dataclass(frozen=True)
class MeasurementRecord:
    qubit: int
    outcome: int
    probability: float

    def to_json(self) -> dict:
        return {"qubit": self.qubit, "outcome": self.outcome, "probability": self.probability}


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def outcome_probability(s: np.ndarray, qubit: int, n: int) -> float:
    """Probability of reading 1 on ``qubit``."""
    mask = bit_mask(n, qubit)
    probs = np.abs(np.asarray(s)[: 2**n]) ** 2
    return float(sum(p for v, p in enumerate(probs) if v & mask))


def measure_qubit(
    s: np.ndarray,
    qubit: int,
    n: int,
    rng: np.random.Generator | int | None = None,
    forced: int | None = None,
) -> tuple[MeasurementRecord, np.ndarray]:
    """Project ``s`` onto the vertices whose ``qubit`` bit matches the outcome.

    The outcome is sampled from ``rng`` unless ``forced`` is given. Vertices
    beyond ``2**n`` are ancilla and must be empty.
    """
    s = np.asarray(s, dtype=complex)
    if s.shape[0] < 2**n:
        raise DimensionMismatchError(f"state of length {s.shape[0]} cannot hold {n} qubits")
    if not 1 <= qubit <= n:
        raise PlacementError(f"qubit {qubit} out of range [1, {n}]")
    norm = float(np.vdot(s, s).real)
    if abs(norm - 1.0) > NORM_TOL * 10:
        raise MeasurementError(f"state is not normalized (norm^2 = {norm!r})")
    leak = float(np.sum(np.abs(s[2**n :]) ** 2))
    if leak > 1e-9:
        raise MeasurementError(f"ancilla vertices carry probability {leak:.3g}")
    p1 = outcome_probability(s, qubit, n)
    probs = (1.0 - p1, p1)
    if forced is None:
        outcome = int(_rng(rng).random() < p1)
    else:
        outcome = int(forced)
        if outcome not in (0, 1):
            raise ValueError("forced outcome must be 0 or 1")
        if probs[outcome] < 1e-12:
            raise MeasurementError(f"cannot force outcome {outcome}: probability {probs[outcome]:.3g}")
    mask = bit_mask(n, qubit)
    keep = np.array([v < 2**n and bool(v & mask) == bool(outcome) for v in range(s.shape[0])])
    post = np.where(keep, s, 0.0)
    post /= np.linalg.norm(post)
    return MeasurementRecord(qubit, outcome, probs[outcome]), post


def initialize(label: int, n: int, vertex_count: int | None = None) -> DynamicGraph:
    """X walks on every set bit of ``label``, steering that vertex to vertex 0."""
    if not 0 <= label < 2**n:
        raise PlacementError(f"label {label} out of range for {n} qubits")
    nv = vertex_count or 2**n
    parts = [gate_x(n, q, nv) for q in range(1, n + 1) if label & bit_mask(n, q)]
    return concatenate(DynamicGraph(nv), *parts)


# ---------------------------------------------------------------------------
# execution


@dataclass
class ExecutionReport:
    qubit_count: int
    vertex_count: int
    records: list[MeasurementRecord]
    final_state: np.ndarray
    segments: list[DynamicGraph] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "qubits": self.qubit_count,
            "vertices": self.vertex_count,
            "measurements": [r.to_json() for r in self.records],
            "final_amplitudes": [[float(a.real), float(a.imag)] for a in self.final_state],
            "final_probabilities": [float(abs(a) ** 2) for a in self.final_state],
            "segments": [
                {
                    "stage_durations": [st.duration.value for st in dg.stages],
                    "stage_boundaries": dg.transition_times(),
                }
                for dg in self.segments
            ],
        }


def execute(
    c: Circuit,
    initial_state: np.ndarray | None = None,
    rng: np.random.Generator | int | None = None,
) -> ExecutionReport:
    """Run ``c`` from ``initial_state`` (vertex 0 by default)."""
    nv = c.vertices_required()
    state = basis_state(nv, 0) if initial_state is None else np.asarray(initial_state, dtype=complex)
    if state.shape[0] < nv:
        state = np.concatenate([state, np.zeros(nv - state.shape[0], dtype=complex)])
    if state.shape != (nv,):
        raise DimensionMismatchError(f"initial state has length {state.shape[0]}, expected {nv}")
    gen = _rng(rng)
    records, segments, pending = [], [], []

    def flush():
        nonlocal state
        if pending:
            dg = compile_ops(pending, nv)
            state = evolve(composite_propagator(dg), state)
            segments.append(dg)
            pending.clear()

    for op in c.ops:
        if isinstance(op, Measure):
            flush()
            rec, state = measure_qubit(state, op.qubit, c.qubit_count, gen, op.force)
            records.append(rec)
        else:
            pending.append(op)
    flush()
    return ExecutionReport(c.qubit_count, nv, records, state, segments)


# ---------------------------------------------------------------------------
# teleportation
#
# Register qubits follow the MSB-first convention. The input state lives on
# qubit 3 (the vertex pair (0, 1)), qubit 2 holds the half of the Bell pair that
# is measured, and qubit 1 (the most significant bit) receives the state. The
# outcome b1 is read from qubit 3 and b2 from qubit 2.

TELEPORT_INPUT, TELEPORT_MIDDLE, TELEPORT_RECEIVER = 3, 2, 1


def preparation_time(a: float) -> float:
    """K2 walk time that rotates vertex 0 to amplitudes sqrt(1-a), sqrt(a)."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"a must lie in [0, 1], got {a}")
    return math.asin(math.sqrt(a))


def teleportation_circuit(a: float) -> Circuit:
    """Preparation plus the entangling gates, up to (not including) measurement."""
    g = GatePlacement
    return Circuit(
        3,
        (
            PrepareRotation(preparation_time(a)),
            g(GateKind.H, 3, (TELEPORT_MIDDLE,)),
            g(GateKind.CNOT, 3, (TELEPORT_MIDDLE, TELEPORT_RECEIVER)),
            g(GateKind.CNOT, 3, (TELEPORT_INPUT, TELEPORT_MIDDLE)),
            g(GateKind.H, 3, (TELEPORT_INPUT,)),
        ),
    )


def recovery_circuit(b1: int, b2: int) -> Circuit:
    """X^b2 then Z^b1 on the receiving qubit."""
    ops = []
    if b2:
        ops.append(GatePlacement(GateKind.X, 3, (TELEPORT_RECEIVER,)))
    if b1:
        ops.append(GatePlacement(GateKind.Z, 3, (TELEPORT_RECEIVER,)))
    return Circuit(3, tuple(ops))


def teleportation_graphs(a: float, forced_outcomes: tuple[int, int]) -> tuple[DynamicGraph, DynamicGraph]:
    """(pre-measurement walk, recovery walk) on 8 vertices."""
    b1, b2 = forced_outcomes
    if b1 not in (0, 1) or b2 not in (0, 1):
        raise ValueError("outcomes must be bits")
    return compile_circuit(teleportation_circuit(a)), compile_circuit(recovery_circuit(b1, b2), 8)


@dataclass
class TeleportResult:
    a: float
    pre_measurement_state: np.ndarray
    outcome_probabilities: dict[tuple[int, int], float]
    records: list[MeasurementRecord]
    post_measurement_state: np.ndarray
    final_state: np.ndarray
    received: np.ndarray  # normalized amplitudes of the receiving qubit
    pre_graph: DynamicGraph
    recovery_graph: DynamicGraph

    @property
    def outcomes(self) -> tuple[int, int]:
        return self.records[0].outcome, self.records[1].outcome

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "outcomes": {"b1": self.outcomes[0], "b2": self.outcomes[1]},
            "outcome_probabilities": {
                f"{b1}{b2}": p for (b1, b2), p in sorted(self.outcome_probabilities.items())
            },
            "measurements": [r.to_json() for r in self.records],
            "pre_measurement_amplitudes": [[float(x.real), float(x.imag)] for x in self.pre_measurement_state],
            "final_amplitudes": [[float(x.real), float(x.imag)] for x in self.final_state],
            "received_state": [[float(x.real), float(x.imag)] for x in self.received],
        }


def teleport(
    a: float,
    forced_outcomes: tuple[int, int] | None = None,
    rng: np.random.Generator | int | None = None,
) -> TeleportResult:
    """Full protocol: prepare, entangle, measure qubits 3 and 2, recover on qubit 1."""
    pre = compile_circuit(teleportation_circuit(a))
    state = evolve(composite_propagator(pre), basis_state(8, 0))
    probs = {}
    for b1 in (0, 1):
        for b2 in (0, 1):
            label_bits = b1 * bit_mask(3, TELEPORT_INPUT) + b2 * bit_mask(3, TELEPORT_MIDDLE)
            probs[(b1, b2)] = float(
                sum(abs(state[label_bits + r * bit_mask(3, TELEPORT_RECEIVER)]) ** 2 for r in (0, 1))
            )
    gen = _rng(rng)
    f1, f2 = forced_outcomes if forced_outcomes is not None else (None, None)
    rec1, post = measure_qubit(state, TELEPORT_INPUT, 3, gen, f1)
    rec2, post = measure_qubit(post, TELEPORT_MIDDLE, 3, gen, f2)
    recovery = compile_circuit(recovery_circuit(rec1.outcome, rec2.outcome), 8)
    final = evolve(composite_propagator(recovery), post)
    base = rec1.outcome * bit_mask(3, TELEPORT_INPUT) + rec2.outcome * bit_mask(3, TELEPORT_MIDDLE)
    received = np.array([final[base], final[base + bit_mask(3, TELEPORT_RECEIVER)]])
    received = received / np.linalg.norm(received)
    return TeleportResult(a, state, probs, [rec1, rec2], post, final, received, pre, recovery)


# ---------------------------------------------------------------------------
# one-bit adder
#
# Register order (MSB first): b1, b0, a0, c0, so vertex = 8*b1 + 4*b0 + 2*a0 + c0.

ADDER_B1, ADDER_B0, ADDER_A0, ADDER_C0 = 1, 2, 3, 4


def adder_circuit() -> Circuit:
    """Carry(c0, a0, b0, b1), CNOT(a0 -> b0), Sum(c0, a0, b0) on four qubits."""
    g = GatePlacement
    cx, ccx = GateKind.CNOT, GateKind.CCNOT
    return Circuit(
        4,
        (
            g(ccx, 4, (ADDER_A0, ADDER_B0, ADDER_B1)),
            g(cx, 4, (ADDER_A0, ADDER_B0)),
            g(ccx, 4, (ADDER_C0, ADDER_B0, ADDER_B1)),
            g(cx, 4, (ADDER_A0, ADDER_B0)),
            g(cx, 4, (ADDER_A0, ADDER_B0)),
            g(cx, 4, (ADDER_C0, ADDER_B0)),
        ),
    )


def adder_label(b1: int, b0: int, a0: int, c0: int) -> int:
    return 8 * b1 + 4 * b0 + 2 * a0 + c0


def adder_input_state(a0: int, b0: int | str, c0: int = 0) -> np.ndarray:
    """Basis input, or ``b0="plus"`` for (|0> + |1>)/sqrt(2) on b0."""
    s = np.zeros(16, dtype=complex)
    if b0 == "plus":
        for b in (0, 1):
            s[adder_label(0, b, a0, c0)] = math.sqrt(0.5)
    else:
        s[adder_label(0, int(b0), a0, c0)] = 1.0
    return s
