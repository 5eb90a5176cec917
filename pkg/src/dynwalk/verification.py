"""Independent checks for the walk constructions.

``kron_oracle`` builds circuit-model unitaries straight from 2x2 gate matrices
and Kronecker products, without touching any walk code. ``reference_golden``
holds published stage-by-stage matrices of the H and T walks, transcribed
verbatim (typos included) so that disagreements surface rather than being
silently fixed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

from .circuits import Circuit
from .dynamic import DynamicGraph, composite_propagator
from .errors import DimensionMismatchError, UnsupportedGateError
from .gates import GateKind, GatePlacement, all_placements, gate_h, gate_t, gate_x, gate_z
from .propagators import UNITARY_TOL, unitarity_error

_S = 1 / math.sqrt(2)
_W = complex(_S, -_S)  # e^{-i pi/4}
_WC = complex(_S, _S)  # e^{+i pi/4}

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = _S * np.array([[1, 1], [1, -1]], dtype=complex)
T_GATE = np.array([[1, 0], [0, _WC]], dtype=complex)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)

_SINGLE = {
    GateKind.X: PAULI_X,
    GateKind.Y: PAULI_Y,
    GateKind.Y_DIRECT: PAULI_Y,
    GateKind.Z: PAULI_Z,
    GateKind.H: HADAMARD,
    GateKind.T: T_GATE,
    GateKind.I: I2,
}


def _kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, factors, np.eye(1, dtype=complex))


def embed(n: int, ops: dict[int, np.ndarray]) -> np.ndarray:
    """Kronecker product over qubits 1..n (qubit 1 leftmost) with identities elsewhere."""
    return _kron_all(ops.get(q, I2) for q in range(1, n + 1))


def placement_matrix(p: GatePlacement) -> np.ndarray:
    n, k = p.qubit_count, p.kind
    if k in _SINGLE:
        return embed(n, {p.targets[0]: _SINGLE[k]})
    *controls, target = p.targets
    # sum over control patterns: flip the target only when every control is 1
    out = np.zeros((2**n, 2**n), dtype=complex)
    for pattern in range(2 ** len(controls)):
        bits = [(pattern >> i) & 1 for i in range(len(controls))]
        ops = {c: (P1 if b else P0) for c, b in zip(controls, bits)}
        if all(bits):
            ops[target] = PAULI_X
        out += embed(n, ops)
    return out


def kron_oracle(c: Circuit) -> np.ndarray:
    """Circuit-model unitary of a gate-only circuit (first gate rightmost)."""
    if c.qubit_count > 4:
        raise UnsupportedGateError("the oracle is limited to 4 qubits")
    u = np.eye(2**c.qubit_count, dtype=complex)
    for op in c.ops:
        if not isinstance(op, GatePlacement):
            raise UnsupportedGateError(f"oracle cannot model {type(op).__name__}")
        u = placement_matrix(op) @ u
    return u


@dataclass(frozen=True)
class EquivalenceReport:
    max_abs_deviation: float
    equal_strict: bool
    equal_up_to_global_phase: bool
    extracted_phase: complex | None
    phase_deviation: float

    def to_json(self) -> dict:
        ph = self.extracted_phase
        return {
            "max_abs_deviation": self.max_abs_deviation,
            "equal_strict": self.equal_strict,
            "equal_up_to_global_phase": self.equal_up_to_global_phase,
            "extracted_phase": None if ph is None else [ph.real, ph.imag],
            "phase_deviation": self.phase_deviation,
        }


def compare(u: np.ndarray, v: np.ndarray, tol: float = UNITARY_TOL) -> EquivalenceReport:
    """Strict and global-phase equivalence of two matrices.

    The phase is read off the largest-magnitude entry of ``v`` so that
    ``v ~= phase * u``; it is reported only when ``u`` is non-negligible there.
    """
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise DimensionMismatchError(f"cannot compare {u.shape} with {v.shape}")
    dev = float(np.abs(u - v).max()) if u.size else 0.0
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    phase: complex | None = None
    phase_dev = math.inf
    if abs(u[idx]) > 1e-12 and abs(v[idx]) > 1e-12:
        ratio = v[idx] / u[idx]
        phase = complex(ratio / abs(ratio))
        phase_dev = float(np.abs(v / phase - u).max())
    strict = dev <= tol
    global_ok = strict or phase_dev <= tol
    if strict and phase is None:
        phase = 1.0 + 0j
    return EquivalenceReport(dev, strict, global_ok, phase, 0.0 if strict else phase_dev)


def restricted(u: np.ndarray, vertices: Iterable[int]) -> np.ndarray:
    idx = list(vertices)
    return np.asarray(u)[np.ix_(idx, idx)]


def leakage(u: np.ndarray, logical: int) -> float:
    """Largest amplitude moved from the first ``logical`` vertices into the rest."""
    u = np.asarray(u)
    if u.shape[0] == logical:
        return 0.0
    return float(np.abs(u[logical:, :logical]).max())


# ---------------------------------------------------------------------------
# golden matrices (reference transcription)


@dataclass(frozen=True)
class GoldenSet:
    gate: str
    stages: tuple[np.ndarray, ...]
    product: np.ndarray


def _diag(values) -> np.ndarray:
    return np.diag(np.asarray(values, dtype=complex))


def _golden_h() -> GoldenSet:
    g0 = _diag([0, 1j, 0, 1j, 0, 1j, 0, 1j])
    g0[0, 6] = g0[6, 0] = g0[2, 4] = g0[4, 2] = -1
    g1 = np.zeros((8, 8), dtype=complex)
    for a, b in [(0, 7), (1, 6), (2, 5), (3, 4)]:
        g1[a, a] = g1[b, b] = _S
        g1[a, b] = g1[b, a] = -1j * _S
    # Reference rows 6 and 7 read (.., 0, -1) and (-i, 0, ..): not symmetric.
    g2 = _diag([0, -1j, 0, -1j, 0, -1j, 0, 0])
    g2[0, 6] = g2[2, 4] = g2[4, 2] = -1
    g2[6, 7] = -1
    g2[7, 0] = -1j
    g3 = np.zeros((8, 8), dtype=complex)
    for a, b in [(0, 1), (2, 3), (4, 5), (6, 7)]:
        g3[a, b] = g3[b, a] = -1j
    g4 = 1j * np.eye(8, dtype=complex)
    product = np.kron(np.eye(4), HADAMARD)
    return GoldenSet("H", (g0, g1, g2, g3, g4), product)


def _golden_t() -> GoldenSet:
    g0 = _diag([_S, _W, _S, _W, _W, _W, _W, _W])
    g0[0, 2] = g0[2, 0] = -1j * _S
    g1 = _diag([0, -1j, -1j, 0, 0, 0, -1j, -1j])
    g1[0, 5] = g1[5, 0] = g1[3, 4] = g1[4, 3] = -1
    g2 = _diag([_W, _W, _S, _S, _S, _S, _W, _W])
    g2[2, 4] = g2[4, 2] = g2[3, 5] = g2[5, 3] = -1j * _S
    g3 = _diag([-1j, -1j, 0, -1j, -1j, 0, 0, 0])
    g3[2, 5] = g3[5, 2] = g3[6, 7] = g3[7, 6] = -1
    g4 = _diag([0, _WC, 0.75, 0.75, 0.75, 0.75, _WC, _WC])
    for k in (2, 3, 4, 5):
        g4[0, k] = g4[k, 0] = 0.5j
        for m in (2, 3, 4, 5):
            if m != k:
                g4[k, m] = -0.25
    g5 = -1j * np.eye(8, dtype=complex)
    p = np.zeros((8, 8), dtype=complex)
    p[0, 0], p[1, 1] = 1, _WC
    p[2, [2, 4, 5]] = [-0.5, -_W * _S, 0.5]
    p[3, [2, 4, 5]] = [-0.5, _W * _S, 0.5]
    p[4, [2, 3, 5]] = [0.5, _W * _S, 0.5]
    p[5, [2, 3, 5]] = [0.5, -_W * _S, 0.5]
    p[6, 7] = p[7, 6] = _W
    return GoldenSet("T", (g0, g1, g2, g3, g4, g5), p)


def reference_golden(gate: str) -> GoldenSet:
    gate = gate.upper()
    if gate == "H":
        return _golden_h()
    if gate == "T":
        return _golden_t()
    raise ValueError(f"no reference matrices for gate {gate!r}")


# ---------------------------------------------------------------------------
# reports


@dataclass
class Check:
    name: str
    deviation: float
    passed: bool
    note: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "max_deviation": self.deviation, "passed": self.passed}
        if self.note:
            out["note"] = self.note
        return out


def _check(name: str, computed: np.ndarray, expected: np.ndarray, tol: float, note: str = "") -> Check:
    dev = float(np.abs(np.asarray(computed) - np.asarray(expected)).max())
    return Check(name, dev, dev <= tol, note)


_GOLDEN_NOTES = {
    ("H", 2): "reference matrix is not symmetric, so no undirected graph produces it; "
    "rows 6 and 7 disagree with the C4 + singleton stage",
}


def golden_checks(gate: str, tol: float = UNITARY_TOL) -> list[Check]:
    """Stage-by-stage and product comparison of our walk with the reference matrices."""
    gate = gate.upper()
    golden = reference_golden(gate)
    dg = gate_h(3, 3) if gate == "H" else gate_t()
    checks = []
    for i, (stage_u, gold) in enumerate(zip(dg.stage_propagators(), golden.stages)):
        checks.append(_check(f"{gate}:stage{i}", stage_u, gold, tol, _GOLDEN_NOTES.get((gate, i), "")))
    composite = composite_propagator(dg)
    checks.append(_check(f"{gate}:product", composite, golden.product, tol))
    if gate == "T":
        checks.append(_check("T:logical-block", restricted(composite, [0, 1]), T_GATE, tol))
    return checks


def placement_check(p: GatePlacement, tol: float = UNITARY_TOL) -> Check:
    """Compare a placement's composite with the oracle on the logical block.

    Padded and confined gates must also keep logical amplitude out of the
    ancilla vertices.
    """
    dg = p.dynamic_graph()
    u = composite_propagator(dg)
    logical = 2**p.qubit_count
    expected = placement_matrix(p)
    dev = float(np.abs(u[:logical, :logical] - expected).max())
    dev = max(dev, leakage(u, logical), unitarity_error(u))
    label = f"{p.kind.value}{list(p.targets)}@{p.qubit_count}q" + (f":{p.variant}" if p.variant else "")
    return Check(label, dev, dev <= tol)


def placement_checks(kind: GateKind, max_qubits: int = 4, tol: float = UNITARY_TOL) -> list[Check]:
    return [placement_check(p, tol) for n in range(1, max_qubits + 1) for p in all_placements(kind, n)]


def anticommutation_check(tol: float = UNITARY_TOL) -> Check:
    x = composite_propagator(gate_x(3, 3))
    z = composite_propagator(gate_z(3, 3))
    return _check("XZ=-ZX", x @ z, -(z @ x), tol)


VERIFY_TARGETS = ("X", "Y", "Y_DIRECT", "Z", "H", "T", "I", "CNOT", "CCNOT")


def verify(target: str = "all", tol: float = UNITARY_TOL) -> list[Check]:
    """Checks for one gate name, or every gate with ``"all"``. Order is fixed."""
    target = target.upper()
    if target == "ALL":
        out = []
        for name in VERIFY_TARGETS:
            out.extend(verify(name, tol))
        out.append(anticommutation_check(tol))
        return out
    if target not in VERIFY_TARGETS:
        raise UnsupportedGateError(f"unknown gate {target!r}; expected one of {VERIFY_TARGETS} or 'all'")
    checks: list[Check] = []
    if target in ("H", "T"):
        checks.extend(golden_checks(target, tol))
    if target != "T":
        checks.extend(placement_checks(GateKind(target), tol=tol))
    return checks


def report_json(checks: list[Check]) -> dict:
    return {
        "passed": all(c.passed for c in checks),
        "checks": [c.to_json() for c in checks],
        "failed": [c.name for c in checks if not c.passed],
    }


def max_dynamic_graph_unitarity(graphs: Iterable[DynamicGraph]) -> float:
    worst = 0.0
    for dg in graphs:
        for u in dg.stage_propagators():
            worst = max(worst, unitarity_error(u))
        worst = max(worst, unitarity_error(composite_propagator(dg)))
    return worst
