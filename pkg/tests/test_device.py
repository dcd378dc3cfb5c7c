"""Flux maps, static Hamiltonian, dressed basis, drive synthesis."""

import math

import numpy as np
import pytest

from holonomy_sim.device import (
    DeviceModelError,
    DeviceParams,
    DriveProgram,
    TimeDependentHamiltonian,
    TransmonSpec,
    device_from_frequencies,
    dressed_basis,
    effective_rabi,
    epsilon_of_flux,
    flux_amplitude_for_L,
    g_of_flux,
    h0_matrix,
    h_of_t,
    invert_rabi,
    level_splittings,
    rabi_coefficient,
)
from holonomy_sim.linalg import hermitian_eig

TWO_PI = 2 * np.pi

MHZ = TWO_PI * 1e6
GHZ = TWO_PI * 1e9


@pytest.fixture
def reference_device():
    return device_from_frequencies(5.0, [60.0, -80.0, 100.0], [-300.0, -400.0, -500.0])


@pytest.fixture
def flux_transmon():
    # feasibility-style transmon; k anchors g(phi0) to 2pi*60 MHz
    phi0 = 0.48426
    return TransmonSpec.from_flux(
        ec=280 * MHZ, ejmax=224 * GHZ, phi0=phi0, k=60 * MHZ / math.cos(math.pi * phi0) ** 0.25
    )


# ---------------------------------------------------------------------------
# flux maps


def test_epsilon_of_flux_feasibility_value(flux_transmon):
    # sqrt(8 * 0.28 * 224 * |cos(0.48426 pi)|) GHz = 4.980 GHz
    assert epsilon_of_flux(flux_transmon, 0.48426) / GHZ == pytest.approx(4.980, abs=2e-3)


def test_epsilon_of_flux_limits(flux_transmon):
    # cos(pi/2) only vanishes to machine precision, so compare to scale
    top = math.sqrt(8 * flux_transmon.ec * flux_transmon.ejmax)
    assert epsilon_of_flux(flux_transmon, 0.5) < 1e-8 * top
    assert epsilon_of_flux(flux_transmon, 0.0) == pytest.approx(top, rel=1e-12)


def test_g_of_flux_limits(flux_transmon):
    assert g_of_flux(flux_transmon, 0.0) == pytest.approx(flux_transmon.k, rel=1e-12)
    # quarter power of the machine-epsilon cosine residue
    assert g_of_flux(flux_transmon, 0.5) < 1e-4 * abs(flux_transmon.k)


def test_g_of_flux_quarter_power_ratio():
    # oracle: g(0.486)/g(0.485) = (cos(0.486 pi)/cos(0.485 pi))^(1/4)
    k = 100 * MHZ / math.cos(math.pi * 0.485) ** 0.25
    t = TransmonSpec.from_flux(ec=280 * MHZ, ejmax=224 * GHZ, phi0=0.485, k=k)
    assert g_of_flux(t, 0.485) / MHZ == pytest.approx(100.0, rel=1e-12)
    ratio = (math.cos(0.486 * math.pi) / math.cos(0.485 * math.pi)) ** 0.25
    assert g_of_flux(t, 0.486) / MHZ == pytest.approx(100.0 * ratio, rel=1e-12)
    # frozen: 98.291 MHz
    assert g_of_flux(t, 0.486) / MHZ == pytest.approx(98.2911, abs=1e-3)


def test_g_of_flux_rejects_negative_cos(flux_transmon):
    with pytest.raises(DeviceModelError, match="operating range"):
        g_of_flux(flux_transmon, 0.7)


def test_coupling_detuning_relation_second_order(flux_transmon):
    # relative coupling change tracks half the relative frequency change,
    # with the mismatch shrinking quadratically in the flux step
    t = flux_transmon
    phi0 = t.phi0
    eps0 = float(epsilon_of_flux(t, phi0))
    g0 = float(g_of_flux(t, phi0))
    mismatch = []
    for delta in (1e-4, 5e-5, 2.5e-5):
        dg = (float(g_of_flux(t, phi0 + delta)) - g0) / g0
        de = (float(epsilon_of_flux(t, phi0 + delta)) - eps0) / (2 * eps0)
        mismatch.append(abs(dg - de))
    assert mismatch[0] / mismatch[1] == pytest.approx(4.0, rel=0.15)
    assert mismatch[1] / mismatch[2] == pytest.approx(4.0, rel=0.15)


# ---------------------------------------------------------------------------
# static Hamiltonian and dressed basis


def test_h0_matrix_structure(reference_device):
    H = h0_matrix(reference_device)
    assert np.allclose(H[0, 1:] / MHZ, [60, -80, 100])
    assert np.allclose(np.diag(H)[1:] / MHZ, [-300, -400, -500])
    assert H[0, 0] == 0.0
    assert np.allclose(H[1:, 1:] - np.diag(np.diag(H)[1:]), 0.0)
    assert np.max(np.abs(H - H.conj().T)) == 0.0


def test_h0_matrix_no_coupling_is_diagonal():
    d = device_from_frequencies(5.0, [0.0, 0.0, 0.0], [-300.0, -400.0, -500.0])
    H = h0_matrix(d)
    assert np.allclose(H, np.diag(np.diag(H)))


def test_h0_exact_spectrum_vs_second_order(reference_device):
    # second-order estimates: hub pushed up by sum g^2/|Delta|, legs pushed
    # down by g_i^2/|Delta_i|; residual is third order
    eig = hermitian_eig(h0_matrix(reference_device))
    vals = np.sort(eig.values / MHZ)
    # frozen exact values (cross-checked against numpy.linalg.eigvalsh)
    assert np.allclose(vals, [-522.0552, -412.9073, -308.3645, 43.3270], atol=1e-3)
    assert np.allclose(vals, np.sort(np.linalg.eigvalsh(h0_matrix(reference_device)) / MHZ))
    hub_estimate = 12.0 + 16.0 + 20.0  # sum g_i^2 / |Delta_i|
    assert abs(vals[-1] - hub_estimate) < 6.0
    assert abs(vals[2] - (-300 - 12)) < 5.0
    assert abs(vals[1] - (-400 - 16)) < 5.0
    assert abs(vals[0] - (-500 - 20)) < 5.0


def test_perturbative_splittings_reference_values(reference_device):
    E = level_splittings(reference_device, mode="perturbative") / MHZ
    assert np.allclose(E, [-360.0, -464.0, -568.0], atol=1e-9)


def test_splittings_no_coupling_limit():
    d = device_from_frequencies(5.0, [0.0, 0.0, 0.0], [-300.0, -400.0, -500.0])
    for mode in ("perturbative", "exact"):
        assert np.allclose(level_splittings(d, mode) / MHZ, [-300, -400, -500], atol=1e-9)


def test_exact_splittings_frozen_values(reference_device):
    E = level_splittings(reference_device, mode="exact") / MHZ
    assert np.allclose(E, [-351.6916, -456.2344, -565.3822], atol=1e-3)
    # documented gap to the second-order formula: (8.31, 7.77, 2.62) MHz
    gaps = E - level_splittings(reference_device, mode="perturbative") / MHZ
    assert np.allclose(gaps, [8.308, 7.766, 2.618], atol=0.01)


def test_dressed_basis_no_coupling_is_standard():
    d = device_from_frequencies(5.0, [0.0, 0.0, 0.0], [-300.0, -400.0, -500.0])
    for mode in ("perturbative", "exact"):
        V = dressed_basis(d, mode)
        assert np.allclose(np.abs(V), np.eye(4), atol=1e-12)


def test_dressed_basis_perturbative_v1(reference_device):
    V = dressed_basis(reference_device, "perturbative")
    expected = np.array([-0.2, 1.0, 0.0, 0.0])
    expected /= np.linalg.norm(expected)
    assert np.allclose(V[:, 1], expected, atol=1e-12)


def test_dressed_basis_exact_overlaps(reference_device):
    Vp = dressed_basis(reference_device, "perturbative")
    Vx = dressed_basis(reference_device, "exact")
    ov = np.abs(np.sum(np.conj(Vp) * Vx, axis=0)) ** 2
    # frozen overlaps; the first-order defect here is (g/Delta)^2 = 4%
    assert np.allclose(ov, [0.99896, 0.97726, 0.95963, 0.97684], atol=1e-4)
    assert np.all(ov > 0.95)
    # phase alignment: overlaps are positive real
    raw = np.sum(np.conj(Vp) * Vx, axis=0)
    assert np.all(raw.real > 0)
    assert np.max(np.abs(raw.imag)) < 1e-12


def test_dressed_basis_exact_diagonalizes_h0(reference_device):
    H = h0_matrix(reference_device)
    V = dressed_basis(reference_device, "exact")
    W = V.conj().T @ H @ V
    off = W - np.diag(np.diag(W))
    assert np.max(np.abs(off)) < 1e-10 * np.max(np.abs(H))


def test_guard_rejects_strong_coupling():
    with pytest.raises(DeviceModelError, match="perturbative guard"):
        device_from_frequencies(5.0, [60.0, -80.0, 160.0], [-300.0, -400.0, -300.0])


# ---------------------------------------------------------------------------
# effective coupling


def test_effective_rabi_reference_transmon3(reference_device):
    parts = effective_rabi(reference_device, 2, 100 * MHZ)
    assert abs(parts.total) / MHZ == pytest.approx(10.5556, abs=1e-3)
    assert abs(parts.indirect) / MHZ == pytest.approx(10.0, abs=1e-9)
    assert abs(parts.direct) / MHZ == pytest.approx(0.5556, abs=1e-3)


def test_effective_rabi_zero_drive(reference_device):
    assert effective_rabi(reference_device, 0, 0.0).total == 0.0


def test_effective_rabi_indirect_scales_with_inverse_detuning(reference_device):
    doubled = device_from_frequencies(5.0, [60.0, -80.0, 100.0], [-600.0, -800.0, -1000.0])
    a = effective_rabi(reference_device, 2, 100 * MHZ).indirect
    b = effective_rabi(doubled, 2, 100 * MHZ).indirect
    assert abs(b) == pytest.approx(abs(a) / 2, rel=1e-12)


def test_effective_rabi_parts_same_sign_for_negative_detuning(reference_device):
    for i in range(3):
        parts = effective_rabi(reference_device, i, 50 * MHZ)
        assert np.sign(parts.direct.real) == np.sign(parts.indirect.real)


def test_effective_rabi_phase_factor(reference_device):
    parts = effective_rabi(reference_device, 2, 100 * MHZ, phase=0.7)
    assert np.angle(parts.total) == pytest.approx(0.7, abs=1e-12)


def test_invert_rabi_round_trip(reference_device):
    for i in range(3):
        target = 10.5556 * MHZ
        L = invert_rabi(reference_device, i, target)
        realized = abs(effective_rabi(reference_device, i, L).total)
        assert realized == pytest.approx(target, rel=1e-12)
    assert invert_rabi(reference_device, 2, 10.5556 * MHZ) / MHZ == pytest.approx(100.0, abs=0.01)
    assert invert_rabi(reference_device, 0, 10.5556 * MHZ) / MHZ == pytest.approx(102.3, abs=0.05)


def test_invert_rabi_zero_target(reference_device):
    assert invert_rabi(reference_device, 1, 0.0) == 0.0


def test_invert_rabi_dead_transmon():
    # Delta = -2 omega makes the two channels cancel exactly
    d = DeviceParams(
        omega_cavity=5 * GHZ,
        transmons=(
            TransmonSpec.direct(g0=1 * MHZ, delta0=-10 * GHZ),
            TransmonSpec.direct(g0=1 * MHZ, delta0=-0.3 * GHZ),
            TransmonSpec.direct(g0=1 * MHZ, delta0=-0.4 * GHZ),
        ),
    )
    assert rabi_coefficient(d, 0) == 0.0
    with pytest.raises(DeviceModelError, match="cannot produce"):
        invert_rabi(d, 0, 1 * MHZ)


# ---------------------------------------------------------------------------
# flux amplitude


def test_flux_amplitude_feasibility(flux_transmon):
    F = flux_amplitude_for_L(flux_transmon, 100 * MHZ)
    assert F == pytest.approx(6.3e-4, rel=0.05)


def test_flux_amplitude_linearity(flux_transmon):
    assert flux_amplitude_for_L(flux_transmon, 0.0) == 0.0
    one = flux_amplitude_for_L(flux_transmon, 50 * MHZ)
    two = flux_amplitude_for_L(flux_transmon, 100 * MHZ)
    assert two == pytest.approx(2 * one, rel=1e-12)


def test_flux_amplitude_flat_point():
    t = TransmonSpec.from_flux(ec=280 * MHZ, ejmax=224 * GHZ, phi0=0.0, k=MHZ)
    with pytest.raises(DeviceModelError, match="flat point"):
        flux_amplitude_for_L(t, MHZ)


# ---------------------------------------------------------------------------
# driven Hamiltonian


def _constant_program(freqs_mhz, amps_mhz, phases=(0.0, 0.0, 0.0)):
    def envelope(amp):
        return lambda t: amp * np.ones_like(np.asarray(t, dtype=float))

    return DriveProgram(
        drive_freqs=tuple(f * 1e6 * TWO_PI for f in freqs_mhz),
        phases=phases,
        envelopes=tuple(envelope(a * MHZ) for a in amps_mhz),
    )


def test_h_of_t_no_drive_is_static(reference_device):
    prog = _constant_program([360, 464, 568], [0, 0, 0])
    H = h_of_t(reference_device, prog, 1.23e-7)
    assert np.allclose(H, h0_matrix(reference_device), atol=1e-6)


def test_h_of_t_envelope_extremum(reference_device):
    # pick t = 0 with zero phases: every carrier is at +1
    prog = _constant_program([360, 464, 568], [100, 0, 0])
    H = h_of_t(reference_device, prog, 0.0)
    assert H[1, 1] / MHZ == pytest.approx(-300 + 100, rel=1e-12)
    assert H[2, 2] / MHZ == pytest.approx(-400, rel=1e-12)
    eps1 = reference_device.epsilon0()[0]
    expected_g = 60 * MHZ * (1 + 100 * MHZ / (2 * eps1))
    assert H[0, 1] == pytest.approx(expected_g, rel=1e-12)


def test_h_of_t_hermitian_both_modes(flux_transmon):
    d = DeviceParams(
        omega_cavity=5 * GHZ,
        transmons=(
            flux_transmon,
            TransmonSpec.from_flux(ec=280 * MHZ, ejmax=224 * GHZ, phi0=0.48489, k=-80 * MHZ),
            TransmonSpec.from_flux(ec=280 * MHZ, ejmax=224 * GHZ, phi0=0.48550, k=100 * MHZ),
        ),
    )
    prog = _constant_program([100, 120, 140], [40, 50, 60], phases=(0.1, 0.2, 0.3))
    for mode in ("first-order", "flux-exact"):
        for t in (0.0, 3.7e-9, 1.1e-7):
            H = h_of_t(d, prog, t, fidelity_mode=mode)
            assert np.max(np.abs(H - H.conj().T)) < 1e-9 * np.max(np.abs(H))


def test_h_of_t_flux_exact_matches_first_order(flux_transmon):
    # with the feasibility flux swing (~6.3e-4) the two drive models agree
    # to about 1% of the drive amplitude over a full carrier period; the
    # residue is the quadratic term of the flux map (measured 1.03-1.07%)
    d = DeviceParams(
        omega_cavity=5 * GHZ,
        transmons=(
            flux_transmon,
            TransmonSpec.from_flux(ec=280 * MHZ, ejmax=224 * GHZ, phi0=0.48489, k=-80 * MHZ),
            TransmonSpec.from_flux(ec=280 * MHZ, ejmax=224 * GHZ, phi0=0.48550, k=100 * MHZ),
        ),
    )
    L = 100 * MHZ
    prog = _constant_program([360, 464, 568], [100, 100, 100])
    period = 1.0 / (360e6)
    ha = TimeDependentHamiltonian(d, prog, mode="first-order")
    hb = TimeDependentHamiltonian(d, prog, mode="flux-exact")
    ts = np.linspace(0.0, period, 64)
    diff = np.max(np.abs(ha.sample(ts) - hb.sample(ts)))
    assert diff < 0.012 * L
    assert diff > 0.008 * L  # the quadratic term really is there


def test_flux_exact_requires_flux_mode(reference_device):
    prog = _constant_program([360, 464, 568], [10, 10, 10])
    with pytest.raises(DeviceModelError, match="flux-exact"):
        h_of_t(reference_device, prog, 0.0, fidelity_mode="flux-exact")


def test_transverse_envelope_tracks_longitudinal(reference_device):
    prog = _constant_program([360, 464, 568], [80, 90, 100])
    for i in range(3):
        L = prog.longitudinal(i, 0.0)
        T = prog.transverse(reference_device, i, 0.0)
        g0 = reference_device.g0()[i]
        eps0 = reference_device.epsilon0()[i]
        assert T / g0 == pytest.approx(L / (2 * eps0), rel=1e-12)


def test_flux_modulation_sign_opposes_detuning(flux_transmon):
    # frequency falls with flux below half a quantum, so a positive
    # detuning swing needs a negative flux swing
    d = DeviceParams(omega_cavity=5 * GHZ, transmons=(flux_transmon,) * 3)
    prog = _constant_program([100, 100, 100], [50, 50, 50])
    dphi = prog.flux_modulation(d, 0, 0.0)
    assert dphi < 0
    assert abs(dphi) == pytest.approx(flux_amplitude_for_L(flux_transmon, 50 * MHZ), rel=1e-12)


# ---------------------------------------------------------------------------
# validation


def test_transmon_spec_validation():
    with pytest.raises(DeviceModelError):
        TransmonSpec.from_flux(ec=-1.0, ejmax=1.0, phi0=0.4, k=1.0)
    with pytest.raises(DeviceModelError, match="zero-gap"):
        TransmonSpec.from_flux(ec=1.0, ejmax=1.0, phi0=0.5, k=1.0)
    with pytest.raises(DeviceModelError):
        TransmonSpec.direct(g0=1.0, delta0=0.0)


def test_device_params_validation():
    t = TransmonSpec.direct(g0=60 * MHZ, delta0=-300 * MHZ)
    with pytest.raises(DeviceModelError, match="exactly 3"):
        DeviceParams(omega_cavity=5 * GHZ, transmons=(t, t))
    f = TransmonSpec.from_flux(ec=280 * MHZ, ejmax=224 * GHZ, phi0=0.48, k=MHZ)
    with pytest.raises(DeviceModelError, match="one mode"):
        DeviceParams(omega_cavity=5 * GHZ, transmons=(t, t, f))
