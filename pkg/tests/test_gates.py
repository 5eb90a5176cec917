import cmath
import json

import numpy as np
import pytest

from dynwalk.dynamic import DynamicGraph, composite_propagator, concatenate
from dynwalk.errors import PlacementError, UnsupportedGateError
from dynwalk.gates import (
    GateKind,
    GatePlacement,
    all_placements,
    bit_mask,
    gate_ccnot,
    gate_cnot,
    gate_h,
    gate_identity,
    gate_manifest,
    gate_t,
    gate_x,
    gate_y,
    gate_y_direct,
    gate_z,
    padded_vertex_count,
)
from dynwalk.verification import HADAMARD, PAULI_X, PAULI_Y, PAULI_Z, T_GATE, embed, leakage

I2 = np.eye(2)
TOL = 1e-10


def logical(dg, n):
    return composite_propagator(dg)[: 2**n, : 2**n]


def perm(size, swaps):
    p = np.eye(size)
    for a, b in swaps:
        p[[a, b]] = p[[b, a]]
    return p


def close(a, b, tol=TOL):
    return np.abs(np.asarray(a) - np.asarray(b)).max() <= tol


def test_bit_mask_msb_first():
    assert bit_mask(3, 1) == 4 and bit_mask(3, 3) == 1


def test_padding_sizes():
    assert [padded_vertex_count(n) for n in (1, 2, 3, 4)] == [5, 6, 8, 16]


# X -----------------------------------------------------------------------


def test_x_single():
    assert np.array_equal(composite_propagator(gate_x(1, 1)), PAULI_X)


def test_x_two_qubits():
    assert np.array_equal(composite_propagator(gate_x(2, 2)), np.kron(I2, PAULI_X))
    assert np.array_equal(composite_propagator(gate_x(2, 1)), np.kron(PAULI_X, I2))


def test_x_stage_layout():
    dg = gate_x(3, 1)
    assert dg.stages[0].graph.edges == ((0, 4), (1, 5), (2, 6), (3, 7))
    assert str(dg.stages[0].duration) == "3pi/2"
    assert dg.stages[1].graph.edges == ()


def test_x_target_out_of_range():
    with pytest.raises(PlacementError):
        gate_x(2, 3)


# Z -----------------------------------------------------------------------


def test_z_last_qubit():
    dg = gate_z(3, 3)
    assert len(dg) == 1
    assert dg.stages[0].graph.edges == ((0, 2), (0, 4), (2, 6), (4, 6))
    assert np.array_equal(composite_propagator(dg), np.diag([1, -1] * 4))


def test_z_first_qubit():
    assert np.array_equal(composite_propagator(gate_z(3, 1)), np.diag([1] * 4 + [-1] * 4))


def test_z_single_qubit_padded():
    dg = gate_z(1, 1)
    assert dg.vertex_count == 5
    assert np.array_equal(logical(dg, 1), np.diag([1, -1]))
    assert leakage(composite_propagator(dg), 2) == 0


# Y -----------------------------------------------------------------------


@pytest.mark.parametrize("target, ops", [(3, {3: PAULI_Y}), (1, {1: PAULI_Y})])
def test_y_composed(target, ops):
    assert close(composite_propagator(gate_y(3, target)), embed(3, ops))


def test_y_squared():
    y = gate_y(3, 3)
    assert close(composite_propagator(concatenate(y, y)), np.eye(8))


def test_y_direct_logical_block():
    u = composite_propagator(gate_y_direct())
    assert close(u[:2, :2], PAULI_Y)
    assert close(u[:, 0], [0, 1j, 0, 0, 0])


def test_y_direct_corrupts_populated_ancilla():
    u = composite_propagator(gate_y_direct())
    assert close(u[:, 2], [0, 0, -1j, 0, 0])


# H -----------------------------------------------------------------------


def test_h_last_qubit_block_diagonal():
    assert close(composite_propagator(gate_h(3, 3)), np.kron(np.eye(4), HADAMARD))


def test_h_middle_qubit():
    assert close(composite_propagator(gate_h(3, 2)), embed(3, {2: HADAMARD}))


def test_h_has_five_stages():
    assert [str(s.duration) for s in gate_h(3, 3).stages] == ["3pi/2", "pi/4", "pi/2", "pi/2", "3pi/2"]


def test_h_squared():
    h = gate_h(3, 3)
    assert close(composite_propagator(concatenate(h, h)), np.eye(8))


@pytest.mark.parametrize("n", [1, 2])
def test_h_small_registers_padded(n):
    u = composite_propagator(gate_h(n, 1))
    assert close(u[: 2**n, : 2**n], embed(n, {1: HADAMARD}))
    assert leakage(u, 2**n) <= TOL


# T -----------------------------------------------------------------------


def test_t_reference_entries():
    u = composite_propagator(gate_t())
    assert abs(u[0, 0] - 1) <= TOL
    assert abs(u[1, 1] - cmath.exp(1j * cmath.pi / 4)) <= TOL
    assert abs(u[7, 6] - cmath.exp(-1j * cmath.pi / 4)) <= TOL


def test_t_logical_block_and_confinement():
    u = composite_propagator(gate_t())
    assert close(u[:2, :2], T_GATE)
    assert leakage(u, 2) <= TOL


def test_t_eighth_power():
    t = gate_t()
    u = composite_propagator(concatenate(*[t] * 8))
    assert close(u[:2, :2], np.eye(2))


# CNOT / CCNOT ------------------------------------------------------------


def test_cnot_examples():
    assert np.array_equal(composite_propagator(gate_cnot(2, 1, 2)), perm(4, [(2, 3)]))
    assert np.array_equal(composite_propagator(gate_cnot(2, 2, 1)), perm(4, [(1, 3)]))


def test_ccnot_examples():
    assert np.array_equal(composite_propagator(gate_ccnot(3, 1, 2, 3)), perm(8, [(6, 7)]))
    assert np.array_equal(composite_propagator(gate_ccnot(3, 2, 3, 1)), perm(8, [(3, 7)]))


@pytest.mark.parametrize("dg", [gate_cnot(3, 3, 1), gate_ccnot(4, 1, 4, 2)], ids=["cnot", "ccnot"])
def test_controlled_self_inverse(dg):
    assert np.array_equal(composite_propagator(concatenate(dg, dg)), np.eye(dg.vertex_count))


def test_controlled_repeated_qubit():
    with pytest.raises(PlacementError):
        gate_cnot(2, 1, 1)
    with pytest.raises(PlacementError):
        gate_ccnot(3, 1, 2, 1)


# identity ----------------------------------------------------------------


@pytest.mark.parametrize("n, variant", [(1, "singletons_2pi"), (2, "c4_pi"), (2, "k2_pairs_2pi"), (3, "c4_pi")])
def test_identity_variants(n, variant):
    assert np.array_equal(composite_propagator(gate_identity(n, variant)), np.eye(2**n))


def test_identity_bad_variant():
    with pytest.raises(PlacementError):
        gate_identity(1, "c4_pi")
    with pytest.raises(PlacementError):
        gate_identity(2, "nope")


# properties over every placement -------------------------------------------

FULL_SPACE = [GateKind.X, GateKind.Z, GateKind.Y, GateKind.H, GateKind.I, GateKind.CNOT, GateKind.CCNOT]
SELF_INVERSE = [GateKind.X, GateKind.Z, GateKind.Y, GateKind.H, GateKind.CNOT, GateKind.CCNOT]


def placements(kinds, max_n=4):
    return [p for k in kinds for n in range(1, max_n + 1) for p in all_placements(k, n)]


@pytest.mark.parametrize("p", placements(SELF_INVERSE, 3), ids=str)
def test_self_inverse(p):
    dg = p.dynamic_graph()
    u = composite_propagator(concatenate(dg, dg))
    n = 2**p.qubit_count
    assert close(u[:n, :n], np.eye(n))


def test_anticommutation():
    x, z = composite_propagator(gate_x(3, 2)), composite_propagator(gate_z(3, 2))
    assert close(x @ z, -(z @ x))


@pytest.mark.parametrize("p", placements(list(GateKind)), ids=str)
def test_json_round_trip(p):
    dg = p.dynamic_graph()
    text = json.dumps(dg.to_json())
    back = DynamicGraph.from_json(json.loads(text))
    assert back == dg
    assert json.dumps(back.to_json()) == text
    assert GatePlacement(**{"kind": p.kind, "qubit_count": p.qubit_count, "targets": p.targets, "variant": p.variant}) == p


def test_placement_validation():
    with pytest.raises(PlacementError):
        GatePlacement(GateKind.CNOT, 2, (1,))
    with pytest.raises(PlacementError):
        GatePlacement(GateKind.X, 2, (1,), variant="c4_pi")
    with pytest.raises(UnsupportedGateError):
        GatePlacement(GateKind.T, 2, (1,))
    with pytest.raises(PlacementError):
        gate_x(3, 1, vertex_count=4)


def test_confined_placements_only_single_qubit():
    assert all_placements(GateKind.T, 2) == []
    assert len(all_placements(GateKind.T, 1)) == 1


def test_manifest_rows():
    rows = gate_manifest(3)
    kinds = {r["kind"] for r in rows}
    assert kinds == {k.value for k in GateKind}
    assert json.loads(json.dumps(rows)) == rows
