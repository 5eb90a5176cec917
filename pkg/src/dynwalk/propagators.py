"""Stage propagators ``exp(-i H dt)`` and state evolution.

Closed forms are provided for the graphs the gate constructions are built from
(K1, K2, C4 and the five-vertex star). ``propagate_general`` works for any
graph through a real-symmetric eigendecomposition and is used as the oracle
for the closed forms. ``stage_propagator`` evolves each connected component of
a graph independently, using a closed form whenever the component is
recognised.

Time is dimensionless (hbar = 1, all energy scales 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import DimensionMismatchError, GraphError, NumericError
from .graph import Graph, hamiltonian

UNITARY_TOL = 1e-10
NORM_TOL = 1e-12
PST_TOL = 1e-9

_SQRT_HALF = math.sqrt(0.5)
# cos/sin of k*pi/4 for k = 0..7
_EIGHTHS = [
    (1.0, 0.0),
    (_SQRT_HALF, _SQRT_HALF),
    (0.0, 1.0),
    (-_SQRT_HALF, _SQRT_HALF),
    (-1.0, 0.0),
    (-_SQRT_HALF, -_SQRT_HALF),
    (0.0, -1.0),
    (_SQRT_HALF, -_SQRT_HALF),
]


@dataclass(frozen=True)
class Duration:
    """A stage length: either an exact rational multiple of pi or a raw float.

    Use ``Duration.pi(3, 2)`` for 3*pi/2 and ``Duration.raw(0.7)`` for
    state-specific times such as arcsin(sqrt(a)).
    """

    pi_multiple: Fraction | None = None
    raw_value: float | None = None

    def __post_init__(self) -> None:
        if (self.pi_multiple is None) == (self.raw_value is None):
            raise ValueError("Duration needs exactly one of pi_multiple / raw_value")
        if self.pi_multiple is not None and self.pi_multiple < 0:
            raise ValueError("duration must be non-negative")
        if self.raw_value is not None and not (self.raw_value >= 0 and math.isfinite(self.raw_value)):
            raise ValueError(f"duration must be finite and non-negative, got {self.raw_value}")

    @classmethod
    def pi(cls, num: int, den: int = 1) -> "Duration":
        if den <= 0:
            raise ValueError("denominator must be positive")
        return cls(pi_multiple=Fraction(num, den))

    @classmethod
    def raw(cls, value: float) -> "Duration":
        return cls(raw_value=float(value))

    @property
    def value(self) -> float:
        if self.pi_multiple is not None:
            return float(self.pi_multiple) * math.pi
        return self.raw_value  # type: ignore[return-value]

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0

    def scaled(self, factor: Fraction | int) -> "Duration":
        factor = Fraction(factor)
        if self.pi_multiple is not None:
            return Duration(pi_multiple=self.pi_multiple * factor)
        return Duration.raw(self.raw_value * float(factor))  # type: ignore[operator]

    def __add__(self, other: "Duration") -> "Duration":
        if self.pi_multiple is not None and other.pi_multiple is not None:
            return Duration(pi_multiple=self.pi_multiple + other.pi_multiple)
        return Duration.raw(self.value + other.value)

    def cos_sin(self, multiplier: int = 1) -> tuple[float, float]:
        """cos and sin of ``multiplier * self``, exact on the pi/4 grid."""
        if self.pi_multiple is not None:
            quarters = self.pi_multiple * multiplier * 4
            if quarters.denominator == 1:
                return _EIGHTHS[int(quarters) % 8]
        x = multiplier * self.value
        return math.cos(x), math.sin(x)

    def to_json(self) -> dict:
        if self.pi_multiple is not None:
            return {"pi_num": self.pi_multiple.numerator, "pi_den": self.pi_multiple.denominator}
        return {"raw": self.raw_value}

    @classmethod
    def from_json(cls, data: dict) -> "Duration":
        if "raw" in data:
            return cls.raw(float(data["raw"]))
        return cls.pi(int(data["pi_num"]), int(data.get("pi_den", 1)))

    def __str__(self) -> str:
        if self.pi_multiple is None:
            return f"{self.raw_value!r}"
        p = self.pi_multiple
        num = "pi" if p.numerator == 1 else f"{p.numerator}pi"
        return num if p.denominator == 1 else f"{num}/{p.denominator}"


TimeLike = Union[Duration, float, int]


def as_duration(dt: TimeLike) -> Duration:
    if isinstance(dt, Duration):
        return dt
    return Duration.raw(float(dt))


# ---------------------------------------------------------------------------
# matrices and states


def unitarity_error(u: np.ndarray) -> float:
    """max |U^dagger U - I| entry."""
    u = np.asarray(u)
    return float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return unitarity_error(u) <= tol


def state_vector(amplitudes, tol: float = NORM_TOL) -> np.ndarray:
    """Return ``amplitudes`` as a complex vector, checking it has unit norm."""
    s = np.asarray(amplitudes, dtype=complex).reshape(-1)
    norm = float(np.vdot(s, s).real)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state is not normalized: sum |c|^2 = {norm!r}")
    return s


def basis_state(dim: int, index: int) -> np.ndarray:
    s = np.zeros(dim, dtype=complex)
    s[index] = 1.0
    return s


def evolve(u: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Apply ``u`` to ``s``. No renormalization: norm drift is left visible."""
    u = np.asarray(u)
    s = np.asarray(s, dtype=complex)
    if u.shape != (s.shape[0], s.shape[0]):
        raise DimensionMismatchError(f"cannot apply {u.shape} matrix to state of length {s.shape[0]}")
    return u @ s


# ---------------------------------------------------------------------------
# propagators


def propagate_general(h: np.ndarray, dt: TimeLike) -> np.ndarray:
    """exp(-i h dt) from the eigendecomposition of a real symmetric ``h``."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatchError(f"Hamiltonian must be square, got shape {h.shape}")
    if not np.array_equal(h, h.conj().T):
        raise ValueError("Hamiltonian is not Hermitian")
    t = as_duration(dt).value
    if t == 0.0:
        return np.eye(h.shape[0], dtype=complex)
    try:
        evals, evecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericError(f"eigendecomposition failed: {exc}") from exc
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def propagate_k1(dt: TimeLike) -> np.ndarray:
    c, s = as_duration(dt).cos_sin()
    return np.array([[complex(c, -s)]])


def _k2_form(h: np.ndarray, dt: Duration) -> np.ndarray:
    c, s = dt.cos_sin()
    return c * np.eye(h.shape[0]) - 1j * s * h


def _spectrum_pm2_form(h: np.ndarray, dt: Duration) -> np.ndarray:
    # Valid for any h with spectrum in {-2, 0, 2} (C4 and the five-vertex star):
    # exp(-i h t) = I + (cos 2t - 1) h^2 / 4 - i sin 2t h / 2.
    c, s = dt.cos_sin(2)
    h2 = h @ h
    return np.eye(h.shape[0]) + (c - 1.0) * h2 / 4.0 - 0.5j * s * h


def propagate_k2(dt: TimeLike) -> np.ndarray:
    return _k2_form(np.array([[0.0, 1.0], [1.0, 0.0]]), as_duration(dt))


def propagate_c4(dt: TimeLike) -> np.ndarray:
    """C4 with edges (0,1),(0,2),(1,3),(2,3); vertex pairs 0/3 and 1/2 are antipodal."""
    h = np.array(
        [[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]], dtype=float
    )
    return _spectrum_pm2_form(h, as_duration(dt))


def propagate_star5(dt: TimeLike) -> np.ndarray:
    """Five-vertex star with the centre at local vertex 0."""
    h = np.zeros((5, 5))
    h[0, 1:] = h[1:, 0] = 1.0
    return _spectrum_pm2_form(h, as_duration(dt))


def _classify(sub: np.ndarray) -> str:
    n = sub.shape[0]
    degrees = sub.sum(axis=1)
    if n == 1:
        return "K1"
    if n == 2:
        return "K2"
    edges = int(np.triu(sub, 1).sum())
    if n == 4 and edges == 4 and np.all(degrees == 2):
        return "C4"
    if n == 5 and edges == 4 and sorted(degrees) == [1, 1, 1, 1, 4]:
        return "S5"
    return "general"


def stage_propagator(g: Graph, dt: TimeLike) -> np.ndarray:
    """exp(-i H_g dt), assembled component by component.

    Components that are K1, K2, C4 or a five-vertex star use closed forms (exact
    on the pi/4 grid); anything else falls back to ``propagate_general``.
    """
    d = as_duration(dt)
    h = hamiltonian(g)
    u = np.zeros((g.vertex_count, g.vertex_count), dtype=complex)
    for comp in g.components():
        idx = np.ix_(comp, comp)
        sub = h[idx]
        kind = _classify(sub)
        if kind == "K1":
            block = propagate_k1(d)
        elif kind == "K2":
            block = _k2_form(sub, d)
        elif kind in ("C4", "S5"):
            block = _spectrum_pm2_form(sub, d)
        else:
            block = propagate_general(sub, d)
        u[idx] = block
    return u


def pst_check(
    g: Graph, u: int, v: int, t: TimeLike, tol: float = PST_TOL
) -> tuple[bool, complex | None]:
    """Does the walk on ``g`` move vertex ``u`` onto vertex ``v`` at time ``t``?

    Returns ``(True, amplitude)`` when |<v|U(t)|u>| >= 1 - tol, else
    ``(False, None)``.
    """
    n = g.vertex_count
    if not (0 <= u < n and 0 <= v < n):
        raise GraphError(f"vertices ({u}, {v}) out of range for {n}-vertex graph")
    if u == v:
        raise GraphError("perfect state transfer needs two distinct vertices")
    if tol <= 0:
        raise ValueError("tol must be positive")
    amp = complex(stage_propagator(g, t)[v, u])
    if abs(amp) >= 1.0 - tol:
        return True, amp
    return False, None
