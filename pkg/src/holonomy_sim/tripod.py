"""Ideal tripod system: Hamiltonian, dark states, and the NOT-gate loop.

A hub level |0> couples to three legs |1>, |2>, |3> with complex
amplitudes (Omega_1, Omega_2, Omega_3).  The two zero-energy dark states
span the logical qubit; sweeping the spherical angles (alpha, beta)
around the closed loop

    (0, 0) -> (0, pi/2) -> (pi/2, pi/2) -> (pi/2, 0)

swaps the logical basis states up to a phase (a holonomic NOT).  The
loop runs in three equal segments, with a smooth-step ramp shaping each
angle sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .linalg import require_hermitian

HALF_PI = 0.5 * math.pi


def _smootherstep(s: np.ndarray) -> np.ndarray:
    return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)


def _sine_squared(s: np.ndarray) -> np.ndarray:
    return np.sin(HALF_PI * s) ** 2


# Ramp shapes r(s) on [0, 1] with r(0)=0, r(1)=1, r(1/2)=1/2 and zero end
# slope.  "smootherstep" also has zero end curvature, which suppresses
# nonadiabatic leakage at the segment joints markedly better than the
# sine-squared ramp at moderate gate times; it is therefore the default.
RAMPS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "smootherstep": _smootherstep,
    "sine-squared": _sine_squared,
}

DEFAULT_RAMP = "smootherstep"


@dataclass(frozen=True)
class LoopSchedule:
    """Closed NOT-gate loop: gate time, coupling magnitude, ramp shape.

    gate_time is in seconds, omega (the constant coupling magnitude) in
    rad/s.  phases are the three static drive phases; the NOT gate uses
    (0, 0, 0).
    """

    gate_time: float
    omega: float
    ramp: str = DEFAULT_RAMP
    phases: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        if self.gate_time <= 0.0:
            raise ValueError(f"gate_time must be positive, got {self.gate_time}")
        if self.omega < 0.0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")
        if self.ramp not in RAMPS:
            raise ValueError(f"unknown ramp {self.ramp!r}; available: {sorted(RAMPS)}")

    def with_gate_time(self, gate_time: float) -> "LoopSchedule":
        return replace(self, gate_time=gate_time)


def angles_schedule(loop: LoopSchedule, t) -> tuple[np.ndarray, np.ndarray]:
    """Angles (alpha, beta) at time t in [0, gate_time]; vectorized in t.

    Segment 1 ramps beta 0 -> pi/2, segment 2 ramps alpha 0 -> pi/2,
    segment 3 ramps beta back to 0; each segment occupies one third of
    the loop and uses the schedule's smooth-step ramp.
    """
    tt = np.asarray(t, dtype=float)
    if np.any(tt < -1e-15 * loop.gate_time) or np.any(tt > loop.gate_time * (1 + 1e-15)):
        raise ValueError("time outside [0, gate_time]")
    s = np.clip(3.0 * tt / loop.gate_time, 0.0, 3.0)
    r = RAMPS[loop.ramp]
    seg = np.minimum(np.floor(s), 2.0)
    x = np.clip(s - seg, 0.0, 1.0)
    alpha = np.where(seg == 0, 0.0, np.where(seg == 1, HALF_PI * r(x), HALF_PI))
    beta = np.where(seg == 0, HALF_PI * r(x), np.where(seg == 1, HALF_PI, HALF_PI * (1.0 - r(x))))
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(alpha), float(beta)
    return alpha, beta


def rabi_from_angles(omega: float, alpha, beta, phases=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Coupling vector of the spherical parameterization.

    (Omega sin(b) cos(a) e^{i p1}, Omega sin(b) sin(a) e^{i p2},
    Omega cos(b) e^{i p3}); its norm is omega.  Vectorized over alpha and
    beta (last axis is the component index).
    """
    if omega < 0:
        raise ValueError("omega must be >= 0")
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    comps = np.stack(
        [np.sin(b) * np.cos(a), np.sin(b) * np.sin(a), np.cos(b) * np.ones_like(a)], axis=-1
    )
    return omega * comps * np.exp(1j * np.asarray(phases, dtype=float))


def rabi_norm(r: np.ndarray) -> float:
    """Coupling magnitude sqrt(sum |Omega_i|^2)."""
    v = np.asarray(r, dtype=complex).reshape(-1)
    return float(np.sqrt(np.sum(v.real**2 + v.imag**2)))


def tripod_hamiltonian(r: np.ndarray) -> np.ndarray:
    """Hub-and-legs Hamiltonian in basis order (|0>, |1>, |2>, |3>).

    First row (0, Omega_1, Omega_2, Omega_3), Hermitian conjugates in the
    first column, zeros elsewhere.  Eigenvalues are (-norm, 0, 0, +norm).
    """
    v = np.asarray(r, dtype=complex).reshape(-1)
    if v.shape[0] != 3:
        raise ValueError(f"expected 3 coupling amplitudes, got {v.shape[0]}")
    H = np.zeros((4, 4), dtype=complex)
    H[0, 1:] = v
    H[1:, 0] = np.conj(v)
    return H


def dark_states(alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """The two zero-energy states at angles (alpha, beta), as 4-vectors.

    D1 = cos(b)(cos(a)|1> + sin(a)|2>) - sin(b)|3>,
    D2 = cos(a)|2> - sin(a)|1>.
    Both are normalized, orthogonal, and annihilated by the matching
    tripod Hamiltonian (for real coupling phases).
    """
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    d1 = np.array([0.0, cb * ca, cb * sa, -sb], dtype=complex)
    d2 = np.array([0.0, -sa, ca, 0.0], dtype=complex)
    return d1, d2


def ideal_dark_path(loop: LoopSchedule, ts) -> np.ndarray:
    """Adiabatically transported logical |1> along the loop, shape (n, 4).

    For this loop the dark-space connection vanishes (alpha only moves
    while beta = pi/2 and vice versa), so the transported state is the
    instantaneous D1(alpha(t), beta(t)) with no extra mixing.
    """
    alpha, beta = angles_schedule(loop, np.asarray(ts, dtype=float))
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    out = np.zeros((alpha.shape[0], 4), dtype=complex)
    out[:, 1] = np.cos(beta) * np.cos(alpha)
    out[:, 2] = np.cos(beta) * np.sin(alpha)
    out[:, 3] = -np.sin(beta)
    return out


class TripodLoopHamiltonian:
    """Time evaluator for the loop-driven tripod Hamiltonian."""

    def __init__(self, loop: LoopSchedule):
        self.loop = loop

    def __call__(self, t: float) -> np.ndarray:
        return tripod_hamiltonian(
            rabi_from_angles(self.loop.omega, *angles_schedule(self.loop, t), self.loop.phases)
        )

    def sample(self, ts: np.ndarray) -> np.ndarray:
        alpha, beta = angles_schedule(self.loop, np.asarray(ts, dtype=float))
        r = rabi_from_angles(self.loop.omega, alpha, beta, self.loop.phases)
        n = r.shape[0]
        H = np.zeros((n, 4, 4), dtype=complex)
        H[:, 0, 1:] = r
        H[:, 1:, 0] = np.conj(r)
        return H


@dataclass(frozen=True)
class HolonomyMatrix:
    """Logical-subspace block of a loop propagator plus its leakage.

    block is the 2x2 matrix <k|U|l> for k, l in {1, 2}; leakage is
    1 - sigma_min(block)^2, the worst-case logical population lost to the
    rest of the space.
    """

    block: np.ndarray
    leakage: float


def holonomy_from_propagator(u_total: np.ndarray) -> HolonomyMatrix:
    """Extract the realized logical operation from a full loop propagator."""
    U = np.asarray(u_total, dtype=complex)
    if U.shape != (4, 4):
        raise ValueError(f"expected a 4x4 propagator, got shape {U.shape}")
    dev = np.max(np.abs(U.conj().T @ U - np.eye(4)))
    if dev > 1e-9:
        raise ValueError(f"propagator is not unitary: max |U^dag U - I| = {dev:.3e}")
    block = U[1:3, 1:3].copy()
    smin = float(np.min(np.linalg.svd(block, compute_uv=False)))
    return HolonomyMatrix(block=block, leakage=max(0.0, 1.0 - smin**2))


def require_hermitian_tripod(H: np.ndarray) -> np.ndarray:
    """Hermiticity check with the tripod's zero pattern enforced."""
    A = require_hermitian(H, name="tripod Hamiltonian")
    if np.max(np.abs(A[1:, 1:])) > 1e-12 * max(np.max(np.abs(A)), 1e-300):
        raise ValueError("legs of a tripod Hamiltonian must not couple to each other")
    return A
