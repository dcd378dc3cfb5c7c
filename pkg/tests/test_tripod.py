"""Tripod Hamiltonian, dark states, loop schedule, holonomy extraction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonomy_sim.linalg import eigh_stack
from holonomy_sim.propagate import propagate
from holonomy_sim.tripod import (
    RAMPS,
    HolonomyMatrix,
    LoopSchedule,
    TripodLoopHamiltonian,
    angles_schedule,
    dark_states,
    holonomy_from_propagator,
    ideal_dark_path,
    rabi_from_angles,
    rabi_norm,
    tripod_hamiltonian,
)

TWO_PI = 2 * np.pi


# ---------------------------------------------------------------------------
# Hamiltonian and couplings


def test_tripod_structure_single_leg():
    H = tripod_hamiltonian([0.0, 0.0, 5.0])
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 3] = expected[3, 0] = 5.0
    assert np.array_equal(H, expected)


def test_tripod_complex_couplings_hermitian():
    H = tripod_hamiltonian([1.0, 2.0j, 3.0 - 1.0j])
    assert np.max(np.abs(H - H.conj().T)) == 0.0
    assert np.max(np.abs(H[1:, 1:])) == 0.0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bright_eigenvalues_are_plus_minus_norm(seed):
    rng = np.random.default_rng(seed)
    r = rng.normal(size=3) + 1j * rng.normal(size=3)
    H = tripod_hamiltonian(r)
    w, _ = eigh_stack(H)
    norm = rabi_norm(r)
    assert np.allclose(w, [-norm, 0.0, 0.0, norm], atol=1e-10 * max(norm, 1.0))


def test_rabi_from_angles_reference_points():
    om = TWO_PI * 10.5e6
    tol = 1e-15 * om  # trig of pi/2 leaves machine-epsilon residues
    assert np.allclose(rabi_from_angles(om, 0.0, 0.0), [0, 0, om], atol=tol)
    assert np.allclose(rabi_from_angles(om, 0.0, np.pi / 2), [om, 0, 0], atol=tol)
    assert np.allclose(
        rabi_from_angles(om, np.pi / 4, np.pi / 2),
        [om / np.sqrt(2), om / np.sqrt(2), 0],
        atol=tol,
    )


@settings(max_examples=50, deadline=None)
@given(st.floats(0, np.pi), st.floats(0, np.pi), st.floats(0.0, 1e8))
def test_rabi_norm_matches_magnitude(alpha, beta, om):
    assert rabi_norm(rabi_from_angles(om, alpha, beta)) == pytest.approx(om, rel=1e-12, abs=1e-9)


def test_rabi_rejects_negative_magnitude():
    with pytest.raises(ValueError):
        rabi_from_angles(-1.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# dark states


def test_dark_states_initial_point():
    d1, d2 = dark_states(0.0, 0.0)
    assert np.allclose(d1, [0, 1, 0, 0])
    assert np.allclose(d2, [0, 0, 1, 0])


def test_dark_states_loop_end_exhibits_swap():
    d1, d2 = dark_states(np.pi / 2, 0.0)
    assert np.allclose(d1, [0, 0, 1, 0], atol=1e-12)
    assert np.allclose(d2, [0, -1, 0, 0], atol=1e-12)


def test_dark_states_annihilated_on_grid():
    om = TWO_PI * 10.5e6
    grid = np.linspace(0, np.pi / 2, 100)
    worst = 0.0
    for alpha in grid:
        for beta in grid:
            H = tripod_hamiltonian(rabi_from_angles(om, alpha, beta))
            d1, d2 = dark_states(alpha, beta)
            assert abs(np.vdot(d1, d2)) < 1e-12
            assert abs(np.linalg.norm(d1) - 1) < 1e-12
            assert abs(np.linalg.norm(d2) - 1) < 1e-12
            worst = max(worst, np.linalg.norm(H @ d1), np.linalg.norm(H @ d2))
    assert worst < 1e-12 * om


# ---------------------------------------------------------------------------
# loop schedule


def test_schedule_endpoints():
    loop = LoopSchedule(gate_time=0.5e-6, omega=TWO_PI * 10.5e6)
    assert angles_schedule(loop, 0.0) == (0.0, 0.0)
    alpha, beta = angles_schedule(loop, 0.5e-6)
    assert alpha == pytest.approx(np.pi / 2, abs=1e-12)
    assert beta == pytest.approx(0.0, abs=1e-12)


def test_schedule_midpoint():
    loop = LoopSchedule(gate_time=0.6e-6, omega=1.0)
    alpha, beta = angles_schedule(loop, 0.3e-6)
    assert alpha == pytest.approx(np.pi / 4, abs=1e-12)
    assert beta == pytest.approx(np.pi / 2, abs=1e-12)


def test_schedule_rejects_out_of_range():
    loop = LoopSchedule(gate_time=1e-6, omega=1.0)
    with pytest.raises(ValueError):
        angles_schedule(loop, -1e-9)
    with pytest.raises(ValueError):
        angles_schedule(loop, 1.1e-6)


@pytest.mark.parametrize("ramp", sorted(RAMPS))
def test_ramp_shape_contract(ramp):
    r = RAMPS[ramp]
    s = np.array([0.0, 0.5, 1.0])
    assert np.allclose(r(s), [0.0, 0.5, 1.0], atol=1e-12)
    eps = 1e-7
    assert abs(r(np.array([eps]))[0]) / eps < 1e-4  # zero start slope
    assert abs(1.0 - r(np.array([1 - eps]))[0]) / eps < 1e-4  # zero end slope


@pytest.mark.parametrize("ramp", sorted(RAMPS))
def test_schedule_continuity_and_flat_joints(ramp):
    T = 0.9e-6
    loop = LoopSchedule(gate_time=T, omega=1.0, ramp=ramp)
    eps = 1e-6 * T
    for tj in (0.0, T / 3, 2 * T / 3, T):
        lo = max(tj - eps, 0.0)
        hi = min(tj + eps, T)
        a_lo, b_lo = angles_schedule(loop, lo)
        a_hi, b_hi = angles_schedule(loop, hi)
        # continuity across the joint
        assert abs(a_hi - a_lo) < 1e-4
        assert abs(b_hi - b_lo) < 1e-4
        # one-sided derivatives vanish at every joint
        assert abs(a_hi - a_lo) / (hi - lo) * T < 1e-3
        assert abs(b_hi - b_lo) / (hi - lo) * T < 1e-3


def test_schedule_validation():
    with pytest.raises(ValueError, match="gate_time"):
        LoopSchedule(gate_time=0.0, omega=1.0)
    with pytest.raises(ValueError, match="unknown ramp"):
        LoopSchedule(gate_time=1e-6, omega=1.0, ramp="boxcar")


def test_ideal_dark_path_endpoints():
    loop = LoopSchedule(gate_time=1e-6, omega=1.0)
    path = ideal_dark_path(loop, [0.0, 1e-6])
    assert np.allclose(path[0], [0, 1, 0, 0], atol=1e-12)
    assert np.allclose(path[-1], [0, 0, 1, 0], atol=1e-12)


# ---------------------------------------------------------------------------
# holonomy extraction


def test_holonomy_identity():
    hol = holonomy_from_propagator(np.eye(4, dtype=complex))
    assert isinstance(hol, HolonomyMatrix)
    assert np.allclose(hol.block, np.eye(2))
    assert hol.leakage == pytest.approx(0.0, abs=1e-12)


def test_holonomy_rejects_non_unitary():
    with pytest.raises(ValueError, match="not unitary"):
        holonomy_from_propagator(0.5 * np.eye(4))


def test_holonomy_of_adiabatic_not_loop():
    # a slow loop realizes the logical swap: |<2|U|1>|^2 near 1
    loop = LoopSchedule(gate_time=0.5e-6, omega=TWO_PI * 10.5e6)
    hfun = TripodLoopHamiltonian(loop)
    cols = []
    for k in range(4):
        e = np.zeros(4, dtype=complex)
        e[k] = 1.0
        cols.append(propagate(hfun, e, 0.0, loop.gate_time, 0.5e-9).final_state)
    U = np.stack(cols, axis=1)
    hol = holonomy_from_propagator(U)
    assert abs(hol.block[1, 0]) ** 2 >= 0.98  # |<2|U|1>|^2
    assert hol.leakage <= 0.02


def test_populations_invariant_under_common_phase_shift():
    # shifting all three coupling phases together is a gauge transformation
    om = TWO_PI * 10.5e6
    T = 0.2e-6
    base = (0.4, -0.9, 1.7)
    shift = 0.81

    class PhasedLoop:
        def __init__(self, phases):
            self.loop = LoopSchedule(gate_time=T, omega=om, phases=phases)

        def __call__(self, t):
            return TripodLoopHamiltonian(self.loop)(t)

        def sample(self, ts):
            return TripodLoopHamiltonian(self.loop).sample(ts)

    psi0 = np.array([0, 1, 0, 0], dtype=complex)
    tr_a = propagate(PhasedLoop(base), psi0, 0.0, T, 1e-9, samples=9)
    shifted = tuple(p + shift for p in base)
    tr_b = propagate(PhasedLoop(shifted), psi0, 0.0, T, 1e-9, samples=9)
    pops_a = np.abs(tr_a.states) ** 2
    pops_b = np.abs(tr_b.states) ** 2
    assert np.max(np.abs(pops_a - pops_b)) < 1e-10
