"""Dynamic-graph constructions for the elementary gate set.

Vertex ``v`` of a ``2**n``-vertex register is the basis state whose binary
expansion is ``v``; qubit 1 is the most significant bit. Every factory returns
a :class:`DynamicGraph` whose composite propagator is the circuit-model gate
exactly, global phase included.

Z, H and the composed Y need the target's ``bit = 0`` vertices to fill whole
C4 cycles, so on one or two qubits they borrow ancilla vertices appended after
the logical ones (5 vertices for one qubit, 6 for two). T and the direct Y are
confined gates: they act on the logical pair {0, 1} and assume the remaining
vertices carry no amplitude.
"""
from __future__ import annotations

import enum
from itertools import permutations
from dataclasses import dataclass
from typing import Sequence

from .dynamic import DynamicGraph, Stage, concatenate
from .errors import PlacementError, UnsupportedGateError
from .graph import Edge, build_graph, cycle4_edges, star_edges
from .propagators import Duration

PI_2 = Duration.pi(1, 2)
PI_4 = Duration.pi(1, 4)
PI = Duration.pi(1)
THREE_PI_2 = Duration.pi(3, 2)
TWO_PI = Duration.pi(2)


class GateKind(str, enum.Enum):
    X = "X"
    Y = "Y"  # composed from Z, X and a phase stage; valid on the full register
    Y_DIRECT = "Y_DIRECT"
    Z = "Z"
    H = "H"
    T = "T"
    I = "I"  # noqa: E741
    CNOT = "CNOT"
    CCNOT = "CCNOT"

    @property
    def arity(self) -> int:
        return {GateKind.CNOT: 2, GateKind.CCNOT: 3}.get(self, 1)

    @property
    def confined(self) -> bool:
        return self in (GateKind.T, GateKind.Y_DIRECT)


IDENTITY_VARIANTS = ("singletons_2pi", "k2_pairs_2pi", "c4_pi")


def bit_mask(n: int, qubit: int) -> int:
    """Mask of ``qubit`` (1-based, qubit 1 = MSB) in an ``n``-qubit label."""
    return 1 << (n - qubit)


def _check_qubits(n: int, *qubits: int) -> None:
    if n < 1:
        raise PlacementError(f"qubit count must be >= 1, got {n}")
    for q in qubits:
        if not 1 <= q <= n:
            raise PlacementError(f"qubit {q} out of range [1, {n}]")
    if len(set(qubits)) != len(qubits):
        raise PlacementError(f"qubit indices must be distinct, got {qubits}")


def padded_vertex_count(n: int) -> int:
    """Vertices needed by the C4-based gates (Z, H, Y) on ``n`` qubits."""
    return 2**n if n >= 3 else 2**n + 4 - 2 ** (n - 1)


def _resolve(required: int, vertex_count: int | None) -> int:
    if vertex_count is None:
        return required
    if vertex_count < required:
        raise PlacementError(f"gate needs {required} vertices, only {vertex_count} available")
    return vertex_count


def _build(vertex_count: int, stages: Sequence[tuple[Sequence[Edge], Duration]]) -> DynamicGraph:
    return DynamicGraph(
        vertex_count, tuple(Stage(build_graph(vertex_count, edges), dt) for edges, dt in stages)
    )


def _c4_cycles(groups: Sequence[Sequence[int]]) -> list[Edge]:
    edges: list[Edge] = []
    for a, b, c, d in groups:
        edges.extend(cycle4_edges(a, b, c, d))
    return edges


def _zero_class(n: int, target: int) -> list[int]:
    mask = bit_mask(n, target)
    return [v for v in range(2**n) if not v & mask]


# ---------------------------------------------------------------------------
# single-qubit gates


def gate_x(n: int, target: int, vertex_count: int | None = None) -> DynamicGraph:
    """K2 on every target-bit pair for 3pi/2 (gives iX), then singletons for pi/2."""
    _check_qubits(n, target)
    nv = _resolve(2**n, vertex_count)
    mask = bit_mask(n, target)
    pairs = [(v, v | mask) for v in _zero_class(n, target)]
    return _build(nv, [(pairs, THREE_PI_2), ([], PI_2)])


def gate_z(n: int, target: int, vertex_count: int | None = None) -> DynamicGraph:
    """One stage of length pi: target-bit-0 vertices in C4 cycles, the rest singletons.

    C4(pi) is the identity while a singleton picks up -1. The bit-0 class is
    cut into cycles four labels at a time in ascending order; with fewer than
    three qubits, ancilla vertices complete the last cycle.
    """
    _check_qubits(n, target)
    nv = _resolve(padded_vertex_count(n), vertex_count)
    members = _zero_class(n, target) + list(range(2**n, padded_vertex_count(n)))
    groups = [members[i : i + 4] for i in range(0, len(members), 4)]
    return _build(nv, [(_c4_cycles(groups), PI)])


def _antipodal_cycles(n: int, target: int) -> list[tuple[int, int, int, int]]:
    # C4 cycles on the target-bit-0 class in which each label sits opposite the
    # label with every other bit flipped.
    zero = _zero_class(n, target)
    if n == 1:
        return [(zero[0], 2, 3, 4)]
    flip = (2**n - 1) ^ bit_mask(n, target)
    if n == 2:
        x = zero[0]
        return [(x, 4, 5, x ^ flip)]
    unused = sorted(zero)
    groups = []
    while unused:
        x = unused[0]
        y = next(v for v in unused if v not in (x, x ^ flip))
        groups.append((x, y, y ^ flip, x ^ flip))
        for v in groups[-1]:
            unused.remove(v)
    return groups


def gate_h(n: int, target: int, vertex_count: int | None = None) -> DynamicGraph:
    """Five-stage Hadamard walk.

    With A the antipode map of the bit-0 C4 cycles, a logical pair
    (x, x|m) goes: C4 for 3pi/2 (x -> -A(x), x|m -> i x|m), a pi/4 half-mix of
    x|m with A(x), C4 for pi/2 (brings A(x) back to x), K2 on (x, x|m) for
    pi/2, and singletons for 3pi/2 as phase correction.
    """
    _check_qubits(n, target)
    nv = _resolve(padded_vertex_count(n), vertex_count)
    mask = bit_mask(n, target)
    groups = _antipodal_cycles(n, target)
    antipode = {}
    for a, b, c, d in groups:
        antipode.update({a: d, d: a, b: c, c: b})
    cycles = _c4_cycles(groups)
    zero = _zero_class(n, target)
    mix = [(x | mask, antipode[x]) for x in zero]
    pairs = [(x, x | mask) for x in zero]
    return _build(
        nv,
        [
            (cycles, THREE_PI_2),
            (mix, PI_4),
            (cycles, PI_2),
            (pairs, PI_2),
            ([], THREE_PI_2),
        ],
    )


def phase_stage(vertex_count: int, duration: Duration) -> DynamicGraph:
    """All vertices as singletons: a global phase exp(-i duration)."""
    return _build(vertex_count, [([], duration)])


def gate_y(n: int, target: int, vertex_count: int | None = None) -> DynamicGraph:
    """Y = i X Z: the Z walk, then the X walk, then singletons for 3pi/2 (phase i)."""
    _check_qubits(n, target)
    nv = _resolve(padded_vertex_count(n), vertex_count)
    return concatenate(gate_z(n, target, nv), gate_x(n, target, nv), phase_stage(nv, THREE_PI_2))


def gate_y_direct(vertex_count: int = 5) -> DynamicGraph:
    """Two-stage Y on the pair {0, 1} with ancilla {2, 3, 4}.

    Only correct when the ancilla are empty: a populated ancilla vertex ends up
    multiplied by -i.
    """
    nv = _resolve(5, vertex_count)
    return _build(nv, [([(0, 1)], PI_2), (cycle4_edges(0, 2, 3, 4), PI)])


# The C4 in stage 3 is the cycle 2-6-5-7 (antipodes 2/5 and 6/7) and the last
# phase stage lasts pi/2; together these reproduce the composite diag(1, e^{i pi/4})
# on the logical pair.
_T_STAGES: list[tuple[list[Edge], Duration]] = [
    ([(0, 2)], PI_4),
    (cycle4_edges(0, 3, 4, 5), PI_2),
    ([(2, 4), (3, 5)], PI_4),
    (cycle4_edges(2, 6, 7, 5), PI_2),
    (star_edges(0, [2, 3, 4, 5]), Duration.pi(7, 4)),
    ([], PI_2),
]


def gate_t(vertex_count: int = 8) -> DynamicGraph:
    """Six-stage T walk on the pair {0, 1} with ancilla {2, ..., 7}."""
    nv = _resolve(8, vertex_count)
    return _build(nv, _T_STAGES)


# ---------------------------------------------------------------------------
# multi-qubit gates


def _controlled_flip(n: int, controls: Sequence[int], target: int, vertex_count: int | None) -> DynamicGraph:
    _check_qubits(n, *controls, target)
    nv = _resolve(2**n, vertex_count)
    cmask = sum(bit_mask(n, c) for c in controls)
    tmask = bit_mask(n, target)
    pairs = [(v, v | tmask) for v in range(2**n) if v & cmask == cmask and not v & tmask]
    return _build(nv, [([], THREE_PI_2), (pairs, PI_2)])


def gate_cnot(n: int, control: int, target: int, vertex_count: int | None = None) -> DynamicGraph:
    """Singletons for 3pi/2, then K2 on the control=1 target pairs for pi/2."""
    return _controlled_flip(n, [control], target, vertex_count)


def gate_ccnot(
    n: int, control1: int, control2: int, target: int, vertex_count: int | None = None
) -> DynamicGraph:
    return _controlled_flip(n, [control1, control2], target, vertex_count)


def gate_identity(n: int, variant: str = "singletons_2pi", vertex_count: int | None = None) -> DynamicGraph:
    if n < 1:
        raise PlacementError("qubit count must be >= 1")
    nv = _resolve(2**n, vertex_count)
    if variant == "singletons_2pi":
        return phase_stage(nv, TWO_PI)
    if variant == "k2_pairs_2pi":
        return _build(nv, [([(v, v + 1) for v in range(0, 2**n - 1, 2)], TWO_PI)])
    if variant == "c4_pi":
        if 2**n % 4:
            raise PlacementError("the C4 identity needs a multiple of four vertices (n >= 2)")
        groups = [range(v, v + 4) for v in range(0, 2**n, 4)]
        return _build(nv, [(_c4_cycles(groups), PI)])
    raise PlacementError(f"unknown identity variant {variant!r}; expected one of {IDENTITY_VARIANTS}")


# ---------------------------------------------------------------------------
# placements


@dataclass(frozen=True)
class GatePlacement:
    kind: GateKind
    qubit_count: int
    targets: tuple[int, ...]
    variant: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if len(self.targets) != self.kind.arity:
            raise PlacementError(
                f"{self.kind.value} takes {self.kind.arity} qubit(s), got {len(self.targets)}"
            )
        _check_qubits(self.qubit_count, *self.targets)
        if self.kind.confined and self.qubit_count != 1:
            raise UnsupportedGateError(
                f"{self.kind.value} is a confined construction on a single logical qubit; "
                f"it cannot be placed on a {self.qubit_count}-qubit register"
            )
        if self.kind is GateKind.I:
            variant = self.variant or "singletons_2pi"
            if variant not in IDENTITY_VARIANTS:
                raise PlacementError(f"unknown identity variant {variant!r}")
            object.__setattr__(self, "variant", variant)
        elif self.variant is not None:
            raise PlacementError(f"{self.kind.value} takes no variant")

    @property
    def vertices_required(self) -> int:
        n = self.qubit_count
        if self.kind in (GateKind.Z, GateKind.H, GateKind.Y):
            return padded_vertex_count(n)
        if self.kind is GateKind.T:
            return 8
        if self.kind is GateKind.Y_DIRECT:
            return 5
        return 2**n

    def dynamic_graph(self, vertex_count: int | None = None) -> DynamicGraph:
        n, t = self.qubit_count, self.targets
        k = self.kind
        if k is GateKind.X:
            return gate_x(n, t[0], vertex_count)
        if k is GateKind.Z:
            return gate_z(n, t[0], vertex_count)
        if k is GateKind.Y:
            return gate_y(n, t[0], vertex_count)
        if k is GateKind.H:
            return gate_h(n, t[0], vertex_count)
        if k is GateKind.T:
            return gate_t(vertex_count or 8)
        if k is GateKind.Y_DIRECT:
            return gate_y_direct(vertex_count or 5)
        if k is GateKind.I:
            return gate_identity(n, self.variant or "singletons_2pi", vertex_count)
        if k is GateKind.CNOT:
            return gate_cnot(n, t[0], t[1], vertex_count)
        return gate_ccnot(n, t[0], t[1], t[2], vertex_count)

    def to_json(self) -> dict:
        out: dict = {"gate": self.kind.value, "targets": list(self.targets)}
        if self.variant is not None and self.variant != "singletons_2pi":
            out["variant"] = self.variant
        return out


def all_placements(kind: GateKind, n: int) -> list[GatePlacement]:
    """Every valid placement of ``kind`` on ``n`` qubits (ordered target tuples)."""
    kind = GateKind(kind)
    if kind.confined:
        return [GatePlacement(kind, 1, (1,))] if n == 1 else []
    if kind.arity > n:
        return []
    if kind is GateKind.I:
        return [
            GatePlacement(kind, n, (1,), v)
            for v in IDENTITY_VARIANTS
            if not (v == "c4_pi" and n < 2)
        ]
    return [GatePlacement(kind, n, p) for p in permutations(range(1, n + 1), kind.arity)]


def gate_manifest(max_qubits: int = 3) -> list[dict]:
    """Stage summary for every placement on up to ``max_qubits`` qubits."""
    rows = []
    for n in range(1, max_qubits + 1):
        for kind in GateKind:
            for p in all_placements(kind, n):
                dg = p.dynamic_graph()
                rows.append(
                    {
                        "kind": kind.value,
                        "qubits": n,
                        "targets": list(p.targets),
                        "variant": p.variant,
                        "vertices": dg.vertex_count,
                        "stages": [
                            {"edges": len(st.graph.edges), "duration": str(st.duration)}
                            for st in dg.stages
                        ],
                    }
                )
    return rows
