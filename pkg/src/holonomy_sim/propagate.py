"""Time-dependent Schrodinger integration with exact unitary steps.

One step advances the state with the exponential midpoint rule,
psi(t + h) = exp(-i h H(t + h/2)) psi(t), where the matrix exponential
comes from the Jacobi eigendecomposition.  Every step is unitary to
round-off, so norm drift measures only accumulated floating-point error.
Accuracy in h is second order; `propagate_converged` halves the step
until two refinements agree.

Hamiltonian evaluators are callables t -> H.  If the callable also has a
``sample(ts) -> (n, dim, dim)`` method, all midpoint Hamiltonians of a
run are evaluated and diagonalized in one batch, which is much faster
than per-step calls.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import eigh_stack, require_normalized

# Stacked-eigendecomposition work buffer cap (steps per chunk).
_CHUNK = 32768


class StepConvergenceError(RuntimeError):
    """Step-halving refinement failed to converge."""

    def __init__(self, msg: str, fidelities: tuple[float, ...]):
        super().__init__(msg)
        self.fidelities = fidelities


@dataclass(frozen=True)
class PropagationTrace:
    """Sampled solution of a propagation run.

    times are strictly increasing and include both endpoints; states has
    one row per sample; step is the largest step actually taken (never
    above the requested one); norm_drift is max |norm^2 - 1| over every
    integration step of the run.
    """

    times: np.ndarray
    states: np.ndarray
    step: float
    norm_drift: float

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


def _sample_hamiltonians(hfun, ts: np.ndarray) -> np.ndarray:
    sample = getattr(hfun, "sample", None)
    if sample is not None:
        return np.asarray(sample(ts), dtype=complex)
    return np.stack([np.asarray(hfun(float(t)), dtype=complex) for t in ts])


def propagate(
    hfun,
    psi0: np.ndarray,
    t0: float,
    t1: float,
    h: float,
    samples: int = 2,
) -> PropagationTrace:
    """Integrate i d(psi)/dt = H(t) psi from t0 to t1.

    Parameters
    ----------
    hfun : callable t -> Hermitian matrix (optionally with ``.sample``)
    psi0 : normalized initial state
    t0, t1 : time span, t1 > t0
    h : requested step; the actual step is h rounded down so that the
        uniform sample intervals divide evenly, landing exactly on every
        sample time and on t1
    samples : number of stored states, uniformly spaced, >= 2
    """
    psi = require_normalized(psi0, atol=1e-9, name="initial state")
    if not (t1 > t0):
        raise ValueError(f"need t1 > t0, got [{t0}, {t1}]")
    if h <= 0.0:
        raise ValueError(f"step must be positive, got {h}")
    if h >= (t1 - t0):
        raise ValueError(f"step {h} must be smaller than the span {t1 - t0}")
    if samples < 2:
        raise ValueError("need at least 2 samples (t0 and t1)")

    sample_times = np.linspace(t0, t1, samples)
    interval = (t1 - t0) / (samples - 1)
    per_interval = max(1, int(np.ceil(interval / h - 1e-12)))
    step = interval / per_interval

    dim = psi.shape[0]
    states = np.empty((samples, dim), dtype=complex)
    states[0] = psi
    n_steps = per_interval * (samples - 1)
    # midpoints expressed from t0 to keep them exact for the final interval
    mids = t0 + (np.arange(n_steps) + 0.5) * step

    drift = 0.0
    pos = 1
    for lo in range(0, n_steps, _CHUNK):
        hi = min(lo + _CHUNK, n_steps)
        Hs = _sample_hamiltonians(hfun, mids[lo:hi])
        w, V = eigh_stack(Hs)
        phases = np.exp(-1j * step * w)
        U = np.einsum("kij,kj,klj->kil", V, phases, np.conj(V))
        for k in range(hi - lo):
            psi = U[k] @ psi
            nrm2 = float(np.sum(psi.real**2 + psi.imag**2))
            err = abs(nrm2 - 1.0)
            if err > drift:
                drift = err
            if (lo + k + 1) % per_interval == 0:
                states[pos] = psi
                pos += 1
    return PropagationTrace(times=sample_times, states=states, step=step, norm_drift=drift)


def propagate_converged(
    hfun,
    psi0: np.ndarray,
    t0: float,
    t1: float,
    h_initial: float,
    tol: float,
    samples: int = 2,
    max_halvings: int = 12,
) -> tuple[PropagationTrace, float]:
    """Halve the step until successive final states agree to 1 - tol.

    Returns the finer of the two agreeing traces together with its step.
    Raises StepConvergenceError carrying the last two overlap fidelities
    if max_halvings is exhausted.
    """
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")
    coarse = propagate(hfun, psi0, t0, t1, h_initial, samples)
    fids: list[float] = []
    h = h_initial
    for _ in range(max_halvings):
        h = h / 2.0
        fine = propagate(hfun, psi0, t0, t1, h, samples)
        a, b = coarse.final_state, fine.final_state
        overlap = float(abs(np.vdot(a, b)) ** 2 / (np.vdot(a, a).real * np.vdot(b, b).real))
        fids.append(overlap)
        if overlap > 1.0 - tol:
            return fine, fine.step
        coarse = fine
    last = ", ".join(f"{f:.12f}" for f in fids[-2:])
    raise StepConvergenceError(
        f"no convergence to 1 - {tol:g} within {max_halvings} halvings; last overlaps {last}",
        fidelities=tuple(fids[-2:]),
    )
