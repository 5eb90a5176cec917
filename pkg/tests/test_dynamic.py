import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dynwalk.dynamic import (
    DynamicGraph,
    Stage,
    composite_propagator,
    concatenate,
    dynamic_graph,
    evolve_dynamic,
    split_stage,
    state_at,
)
from dynwalk.errors import DimensionMismatchError
from dynwalk.gates import gate_cnot, gate_x
from dynwalk.graph import build_graph
from dynwalk.propagators import Duration, basis_state, propagate_k2, unitarity_error

PI_2, PI_4, THREE_PI_2 = Duration.pi(1, 2), Duration.pi(1, 4), Duration.pi(3, 2)
X = np.array([[0, 1], [1, 0]])


def delayed_swap():
    s0 = np.array([math.sqrt(1 / 3), math.sqrt(2 / 3)], dtype=complex)
    return dynamic_graph(2, [([], PI_2), ([(0, 1)], THREE_PI_2)]), s0


def test_x_gate_stage_order():
    dg = dynamic_graph(2, [([(0, 1)], THREE_PI_2), ([], PI_2)])
    assert np.array_equal(composite_propagator(dg), X)


def test_full_period_k2_is_identity():
    dg = dynamic_graph(2, [([(0, 1)], Duration.pi(2))])
    assert np.array_equal(composite_propagator(dg), np.eye(2))


def test_two_quarter_stages_compose():
    dg = dynamic_graph(2, [([(0, 1)], PI_4), ([(0, 1)], PI_4)])
    assert np.abs(composite_propagator(dg) - propagate_k2(PI_2)).max() <= 1e-15


def test_rightmost_factor_is_stage_zero():
    # non-commuting stages: K2 on (0,1) then K2 on (1,2)
    a, b = Duration.raw(0.3), Duration.raw(0.7)
    dg = dynamic_graph(3, [([(0, 1)], a), ([(1, 2)], b)])
    u0, u1 = dg.stage_propagators()
    assert np.abs(composite_propagator(dg) - u1 @ u0).max() <= 1e-15


def test_zero_stage_graph_is_identity():
    assert np.array_equal(composite_propagator(DynamicGraph(3)), np.eye(3))


def test_concatenate_x_twice_is_identity():
    x = gate_x(1, 1)
    assert np.array_equal(composite_propagator(concatenate(x, x)), np.eye(2))


def test_concatenate_with_empty():
    x = gate_x(1, 1)
    assert concatenate(x, DynamicGraph(2)) == x
    assert concatenate(DynamicGraph(2), x) == x


def test_concatenate_vertex_mismatch():
    with pytest.raises(DimensionMismatchError):
        concatenate(gate_x(1, 1), gate_cnot(2, 1, 2))


def test_stage_validation():
    with pytest.raises(DimensionMismatchError):
        DynamicGraph(3, (Stage(build_graph(2), PI_2),))
    with pytest.raises(ValueError):
        DynamicGraph(2, (Stage(build_graph(2), Duration.pi(0)),))


def test_transition_times():
    dg, _ = delayed_swap()
    assert dg.transition_times() == pytest.approx([0, math.pi / 2, 2 * math.pi])
    assert dg.total_time == pytest.approx(2 * math.pi)


def test_delayed_swap_first_stage_constant():
    dg, s0 = delayed_swap()
    tr = evolve_dynamic(dg, s0, 64)
    first = tr.sample_times <= math.pi / 2 + 1e-12
    assert np.abs(tr.probabilities[first] - [1 / 3, 2 / 3]).max() <= 1e-10


def test_delayed_swap_swap_at_k2_half_period():
    dg, s0 = delayed_swap()
    p = np.abs(state_at(dg, s0, math.pi / 2 + math.pi / 2)) ** 2
    assert np.abs(p - [2 / 3, 1 / 3]).max() <= 1e-10


def test_pair_then_cycle_trajectory_columns():
    s0 = np.zeros(4, dtype=complex)
    s0[0], s0[2] = math.sqrt(1 / 3), math.sqrt(2 / 3)
    dg = dynamic_graph(4, [([(0, 1), (2, 3)], PI_2), ([(0, 1), (0, 2), (1, 3), (2, 3)], THREE_PI_2)])
    tr = evolve_dynamic(dg, s0, 16)
    lines = tr.to_csv().splitlines()
    assert lines[0] == "t,p0,p1,p2,p3"
    assert len(lines) == 1 + 2 * 16 + 1
    # K2+K2 for pi/2 swaps each pair
    mid = np.abs(state_at(dg, s0, math.pi / 2)) ** 2
    assert np.abs(mid - [0, 1 / 3, 0, 2 / 3]).max() <= 1e-12


def test_singleton_trajectory_constant():
    dg = dynamic_graph(1, [([], Duration.raw(2.5))])
    tr = evolve_dynamic(dg, basis_state(1, 0), 8)
    assert np.all(tr.probabilities == 1.0)


def test_sampling_grid():
    dg, s0 = delayed_swap()
    tr = evolve_dynamic(dg, s0, 4)
    assert len(tr.sample_times) == 2 * 4 + 1
    assert np.all(np.diff(tr.sample_times) > 0)
    assert tr.sample_times[0] == 0 and tr.sample_times[-1] == pytest.approx(2 * math.pi)
    assert math.pi / 2 in tr.sample_times.tolist()


def test_evolve_dynamic_errors():
    dg, _ = delayed_swap()
    with pytest.raises(DimensionMismatchError):
        evolve_dynamic(dg, basis_state(3, 0))
    with pytest.raises(ValueError):
        evolve_dynamic(dg, basis_state(2, 0), samples_per_stage=1)


def test_csv_format():
    dg, s0 = delayed_swap()
    text = evolve_dynamic(dg, s0, 2).to_csv()
    assert "\r" not in text and text.endswith("\n")
    row = text.splitlines()[1].split(",")
    assert row[0] == "0"
    assert row[1] == format(1 / 3, ".15g")


def test_state_at_transition_uses_left_stage():
    dg, s0 = delayed_swap()
    left = state_at(dg, s0, math.pi / 2)
    u0 = dg.stage_propagators()[0]
    assert np.abs(left - u0 @ s0).max() <= 1e-15


def test_json_round_trip_exact():
    dg = concatenate(gate_cnot(3, 1, 2), dynamic_graph(8, [([(0, 7)], Duration.raw(0.123456789))]))
    back = DynamicGraph.from_json(json.loads(json.dumps(dg.to_json())))
    assert back == dg
    assert dg.to_json()["stages"][0]["duration"] == {"pi_num": 3, "pi_den": 2}


@st.composite
def dynamic_graphs(draw, n=None):
    n = n or draw(st.integers(1, 6))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    stages = []
    for _ in range(draw(st.integers(1, 4))):
        edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
        if draw(st.booleans()):
            dt = Duration.pi(draw(st.integers(1, 8)), 4)
        else:
            dt = Duration.raw(draw(st.floats(0.01, 6)))
        stages.append((edges, dt))
    return dynamic_graph(n, stages)


@st.composite
def states(draw, n):
    re = draw(st.lists(st.floats(-1, 1), min_size=n, max_size=n))
    im = draw(st.lists(st.floats(-1, 1), min_size=n, max_size=n))
    v = np.array(re) + 1j * np.array(im)
    if np.linalg.norm(v) < 1e-3:
        v = basis_state(n, 0)
    return v / np.linalg.norm(v)


@settings(max_examples=60)
@given(st.data())
def test_trajectory_invariants(data):
    dg = data.draw(dynamic_graphs())
    s0 = data.draw(states(dg.vertex_count))
    tr = evolve_dynamic(dg, s0, 8)
    assert np.abs(tr.probabilities.sum(axis=1) - 1).max() <= 1e-10
    final = np.abs(composite_propagator(dg) @ s0) ** 2
    assert np.abs(tr.probabilities[-1] - final).max() <= 1e-10


@settings(max_examples=60)
@given(st.data())
def test_concatenation_order(data):
    a = data.draw(dynamic_graphs())
    b = data.draw(dynamic_graphs(a.vertex_count))
    lhs = composite_propagator(concatenate(a, b))
    rhs = composite_propagator(b) @ composite_propagator(a)
    assert np.abs(lhs - rhs).max() <= 1e-10


@settings(max_examples=60)
@given(st.data())
def test_split_stage_invariant(data):
    dg = data.draw(dynamic_graphs())
    i = data.draw(st.integers(0, len(dg) - 1))
    split = split_stage(dg, i)
    assert len(split) == len(dg) + 1
    assert np.abs(composite_propagator(split) - composite_propagator(dg)).max() <= 1e-10
    assert unitarity_error(composite_propagator(split)) <= 1e-10
