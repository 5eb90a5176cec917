"""Dynamic graphs: ordered (graph, duration) stages on a fixed vertex set."""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, GraphError
from .graph import Graph, build_graph
from .propagators import Duration, TimeLike, as_duration, evolve, stage_propagator


@dataclass(frozen=True)
class Stage:
    graph: Graph
    duration: Duration

    def propagator(self) -> np.ndarray:
        return stage_propagator(self.graph, self.duration)

    def to_json(self) -> dict:
        return {"edges": [[u, v] for u, v in self.graph.edges], "duration": self.duration.to_json()}


@dataclass(frozen=True)
class DynamicGraph:
    vertex_count: int
    stages: tuple[Stage, ...] = ()

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise GraphError("vertex_count must be >= 1")
        for i, st in enumerate(self.stages):
            if st.graph.vertex_count != self.vertex_count:
                raise DimensionMismatchError(
                    f"stage {i} has {st.graph.vertex_count} vertices, expected {self.vertex_count}"
                )
            if st.duration.value <= 0:
                raise ValueError(f"stage {i} has non-positive duration {st.duration}")

    def __len__(self) -> int:
        return len(self.stages)

    @property
    def total_time(self) -> float:
        return float(sum(st.duration.value for st in self.stages))

    def transition_times(self) -> list[float]:
        """Cumulative stage boundaries t_0 = 0, t_1, ..., t_L."""
        out = [0.0]
        for st in self.stages:
            out.append(out[-1] + st.duration.value)
        return out

    def stage_propagators(self) -> list[np.ndarray]:
        return [st.propagator() for st in self.stages]

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "stages": [st.to_json() for st in self.stages]}

    @classmethod
    def from_json(cls, data: dict) -> "DynamicGraph":
        n = int(data["vertices"])
        stages = tuple(
            Stage(build_graph(n, [tuple(e) for e in s.get("edges", [])]), Duration.from_json(s["duration"]))
            for s in data.get("stages", [])
        )
        return cls(n, stages)


def dynamic_graph(vertex_count: int, stages: Iterable[tuple[Iterable[Sequence[int]], TimeLike]]) -> DynamicGraph:
    """Convenience constructor from (edge list, duration) pairs."""
    built = tuple(Stage(build_graph(vertex_count, edges), as_duration(dt)) for edges, dt in stages)
    return DynamicGraph(vertex_count, built)


def composite_propagator(dg: DynamicGraph) -> np.ndarray:
    """Product of stage propagators with stage 0 applied first (rightmost)."""
    u = np.eye(dg.vertex_count, dtype=complex)
    for st in dg.stages:
        u = st.propagator() @ u
    return u


def concatenate(*graphs: DynamicGraph) -> DynamicGraph:
    """Run the graphs one after another on the same vertex set."""
    if not graphs:
        raise ValueError("concatenate needs at least one dynamic graph")
    n = graphs[0].vertex_count
    stages: list[Stage] = []
    for dg in graphs:
        if dg.vertex_count != n:
            raise DimensionMismatchError(
                f"cannot concatenate dynamic graphs on {n} and {dg.vertex_count} vertices"
            )
        stages.extend(dg.stages)
    return DynamicGraph(n, tuple(stages))


def split_stage(dg: DynamicGraph, index: int) -> DynamicGraph:
    """Replace stage ``index`` by two consecutive halves of the same graph."""
    st = dg.stages[index]
    half = Stage(st.graph, st.duration.scaled(Fraction(1, 2)))
    return DynamicGraph(dg.vertex_count, dg.stages[:index] + (half, half) + dg.stages[index + 1 :])


@dataclass
class Trajectory:
    sample_times: np.ndarray
    probabilities: np.ndarray  # shape (samples, N)
    stage_boundaries: list[float]
    final_state: np.ndarray = field(repr=False)

    def to_csv(self) -> str:
        n = self.probabilities.shape[1]
        buf = io.StringIO()
        buf.write("t," + ",".join(f"p{j}" for j in range(n)) + "\n")
        for t, row in zip(self.sample_times, self.probabilities):
            buf.write(",".join(format(float(x), ".15g") for x in (t, *row)) + "\n")
        return buf.getvalue()

    def boundaries_json(self) -> dict:
        return {"stage_boundaries": [float(t) for t in self.stage_boundaries]}


def evolve_dynamic(dg: DynamicGraph, s0: np.ndarray, samples_per_stage: int = 64) -> Trajectory:
    """Sample vertex probabilities on a per-stage uniform grid.

    Stage l contributes ``samples_per_stage`` points starting at its entry time
    t_l; the final time t_L is appended once at the end. Each stage starts from
    the exact end state of the previous one.
    """
    s0 = np.asarray(s0, dtype=complex)
    if s0.shape != (dg.vertex_count,):
        raise DimensionMismatchError(
            f"initial state has length {s0.shape[0]}, graph has {dg.vertex_count} vertices"
        )
    if samples_per_stage < 2:
        raise ValueError("samples_per_stage must be >= 2")
    times, rows = [], []
    state = s0
    boundaries = dg.transition_times()
    for st, t0 in zip(dg.stages, boundaries):
        d = st.duration.value
        for j in range(samples_per_stage):
            tau = d * j / samples_per_stage
            psi = state if j == 0 else evolve(stage_propagator(st.graph, tau), state)
            times.append(t0 + tau)
            rows.append(np.abs(psi) ** 2)
        state = evolve(st.propagator(), state)
    times.append(boundaries[-1])
    rows.append(np.abs(state) ** 2)
    return Trajectory(np.array(times), np.array(rows), boundaries, state)


def state_at(dg: DynamicGraph, s0: np.ndarray, t: float) -> np.ndarray:
    """Walk state at absolute time ``t`` (clamped to [0, t_L]).

    At a transition time the state is the end state of the stage on the left.
    """
    s0 = np.asarray(s0, dtype=complex)
    if s0.shape != (dg.vertex_count,):
        raise DimensionMismatchError("initial state length does not match the graph")
    state, elapsed = s0, 0.0
    for st in dg.stages:
        d = st.duration.value
        if t <= elapsed + d:
            tau = max(t - elapsed, 0.0)
            return evolve(stage_propagator(st.graph, tau), state)
        state = evolve(st.propagator(), state)
        elapsed += d
    return state
