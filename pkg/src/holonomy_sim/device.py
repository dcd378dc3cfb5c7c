"""Physical model of three flux-tunable transmons coupled to one cavity.

The model lives in the one-excitation subspace spanned by
(|1ggg>, |0egg>, |0geg>, |0gge>): one cavity photon, or one excited
transmon.  A device is specified either directly by the static couplings
and detunings (g_i, Delta_i) or by transmon flux parameters
(E_C, E_Jmax, phi0, k) from which those follow.  All stored frequencies
are angular (rad/s, hbar = 1); conversion to ordinary frequencies happens
only at the I/O boundary.

Sign conventions: negative static couplings are allowed and carried
through every formula; detunings Delta_i = eps_i - omega_cavity are
negative for transmons below the cavity.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .linalg import EigenSystem, hermitian_eig

TWO_PI = 2.0 * math.pi

# |g/Delta| above which the dispersive treatment of the dressed basis is
# not trusted; construction fails rather than silently degrading.
PERTURBATIVE_GUARD = 0.5

# Flux drive amplitudes above this fraction of a flux quantum void the
# small-modulation assumption; we warn but do not refuse.
FLUX_AMPLITUDE_WARN = 1e-2


class DeviceModelError(ValueError):
    """Inconsistent or out-of-range device parameters."""


class MatchingError(RuntimeError):
    """Dressed-state overlap matching was ambiguous (near degeneracy)."""


@dataclass(frozen=True)
class TransmonSpec:
    """One transmon, in either flux mode or direct mode.

    Flux mode carries (ec, ejmax, phi0, k); direct mode carries
    (g0, delta0).  Unused fields are None.  All energies/frequencies are
    angular.
    """

    ec: float | None = None
    ejmax: float | None = None
    phi0: float | None = None
    k: float | None = None
    g0: float | None = None
    delta0: float | None = None

    @classmethod
    def from_flux(cls, ec: float, ejmax: float, phi0: float, k: float) -> "TransmonSpec":
        if ec <= 0 or ejmax <= 0:
            raise DeviceModelError("charging and Josephson energies must be positive")
        if abs(math.cos(math.pi * phi0)) < 1e-12:
            raise DeviceModelError(f"phi0={phi0} sits at the zero-gap point cos(pi*phi0)=0")
        return cls(ec=float(ec), ejmax=float(ejmax), phi0=float(phi0), k=float(k))

    @classmethod
    def direct(cls, g0: float, delta0: float) -> "TransmonSpec":
        if delta0 == 0.0:
            raise DeviceModelError("direct mode requires a nonzero detuning")
        return cls(g0=float(g0), delta0=float(delta0))

    @property
    def mode(self) -> str:
        return "flux" if self.ec is not None else "direct"


def epsilon_of_flux(t: TransmonSpec, phi: float | np.ndarray) -> float | np.ndarray:
    """Transmon frequency sqrt(8 E_C E_Jmax |cos(pi phi)|) at flux ``phi``.

    Total function of flux: returns 0 at phi = 0.5 where the junction gap
    closes.
    """
    if t.mode != "flux":
        raise DeviceModelError("epsilon_of_flux requires a flux-mode transmon")
    return np.sqrt(8.0 * t.ec * t.ejmax * np.abs(np.cos(np.pi * np.asarray(phi, dtype=float))))


def g_of_flux(t: TransmonSpec, phi: float | np.ndarray) -> float | np.ndarray:
    """Cavity coupling k * cos(pi phi)^(1/4).

    Negative cos(pi phi) is outside the transmon operating range and is an
    error rather than a complex value.
    """
    if t.mode != "flux":
        raise DeviceModelError("g_of_flux requires a flux-mode transmon")
    c = np.cos(np.pi * np.asarray(phi, dtype=float))
    if np.any(c < 0.0):
        raise DeviceModelError("cos(pi*phi) < 0: flux outside the operating range")
    return t.k * c**0.25


def _depsilon_dphi(t: TransmonSpec) -> float:
    """d(eps)/d(phi) at the static flux: -(eps/2) * pi * tan(pi phi0)."""
    eps0 = float(epsilon_of_flux(t, t.phi0))
    return -0.5 * eps0 * math.pi * math.tan(math.pi * t.phi0)


@dataclass(frozen=True)
class DeviceParams:
    """Cavity frequency plus exactly three transmons of one common mode."""

    omega_cavity: float
    transmons: tuple[TransmonSpec, TransmonSpec, TransmonSpec]

    def __post_init__(self) -> None:
        if len(self.transmons) != 3:
            raise DeviceModelError(f"expected exactly 3 transmons, got {len(self.transmons)}")
        modes = {t.mode for t in self.transmons}
        if len(modes) != 1:
            raise DeviceModelError("all transmons must share one mode (flux or direct)")
        if self.mode == "direct":
            for i, t in enumerate(self.transmons):
                if abs(t.g0 / t.delta0) >= PERTURBATIVE_GUARD:
                    raise DeviceModelError(
                        f"transmon {i + 1}: |g0/delta0| = {abs(t.g0 / t.delta0):.3f} "
                        f"violates the perturbative guard < {PERTURBATIVE_GUARD}"
                    )

    @property
    def mode(self) -> str:
        return self.transmons[0].mode

    def g0(self) -> np.ndarray:
        """Static couplings g_i^(0), angular."""
        if self.mode == "direct":
            return np.array([t.g0 for t in self.transmons])
        return np.array([float(g_of_flux(t, t.phi0)) for t in self.transmons])

    def delta0(self) -> np.ndarray:
        """Static detunings Delta_i^(0) = eps_i^(0) - omega, angular."""
        if self.mode == "direct":
            return np.array([t.delta0 for t in self.transmons])
        return self.epsilon0() - self.omega_cavity

    def epsilon0(self) -> np.ndarray:
        """Static transmon frequencies; in direct mode eps = omega + Delta."""
        if self.mode == "direct":
            return np.array([self.omega_cavity + t.delta0 for t in self.transmons])
        return np.array([float(epsilon_of_flux(t, t.phi0)) for t in self.transmons])


def h0_matrix(d: DeviceParams) -> np.ndarray:
    """Static one-excitation Hamiltonian.

    Basis order (|1ggg>, |0egg>, |0geg>, |0gge>); diagonal
    (0, Delta_1, Delta_2, Delta_3) with the couplings g_i on the first
    row/column.
    """
    g = d.g0()
    delta = d.delta0()
    H = np.zeros((4, 4), dtype=complex)
    H[0, 1:] = g
    H[1:, 0] = g
    H[1, 1], H[2, 2], H[3, 3] = delta
    return H


class RabiParts(NamedTuple):
    """Effective drive-induced coupling, split into its two channels."""

    total: complex
    direct: complex
    indirect: complex


def rabi_coefficient(d: DeviceParams, i: int) -> float:
    """Coefficient c_i with Omega_i = c_i * L_i: g0/(4 eps0) - g0/(2 Delta0)."""
    g = d.g0()[i]
    return g / (4.0 * d.epsilon0()[i]) - g / (2.0 * d.delta0()[i])


def effective_rabi(d: DeviceParams, i: int, L: float, phase: float = 0.0) -> RabiParts:
    """Effective coupling produced by longitudinal drive amplitude ``L``.

    The direct channel comes from the coupling modulation that rides along
    with the detuning modulation; the indirect channel from the detuning
    modulation itself.  For negative detunings both carry the sign of g_i
    and add up.
    """
    if L < 0:
        raise DeviceModelError("drive amplitude L must be >= 0")
    g = d.g0()[i]
    ph = complex(math.cos(phase), math.sin(phase))
    direct = L * g / (4.0 * d.epsilon0()[i]) * ph
    indirect = -L * g / (2.0 * d.delta0()[i]) * ph
    return RabiParts(total=direct + indirect, direct=direct, indirect=indirect)


def invert_rabi(d: DeviceParams, i: int, target: float) -> float:
    """Drive amplitude L_i achieving effective coupling magnitude ``target``."""
    if target < 0:
        raise DeviceModelError("target coupling magnitude must be >= 0")
    c = rabi_coefficient(d, i)
    if c == 0.0:
        raise DeviceModelError(f"transmon {i + 1}: drive cannot produce coupling (c_i = 0)")
    return target / abs(c)


def flux_amplitude_for_L(t: TransmonSpec, L: float) -> float:
    """Flux oscillation amplitude (in flux quanta) for drive amplitude ``L``.

    First-order inversion of the flux map: F = 2L / (eps0 pi |tan(pi phi0)|).
    """
    if t.mode != "flux":
        raise DeviceModelError("flux_amplitude_for_L requires a flux-mode transmon")
    if math.tan(math.pi * t.phi0) == 0.0:
        raise DeviceModelError("phi0 = 0 is a flat point of the flux map: no longitudinal control")
    eps0 = float(epsilon_of_flux(t, t.phi0))
    return 2.0 * L / (eps0 * math.pi * abs(math.tan(math.pi * t.phi0)))


def perturbative_basis(d: DeviceParams) -> np.ndarray:
    """First-order dressed basis columns (v0, v1, v2, v3), normalized."""
    g = d.g0()
    delta = d.delta0()
    ratios = g / delta
    V = np.zeros((4, 4))
    V[0, 0] = 1.0
    V[1:, 0] = -ratios
    for i in range(3):
        V[0, i + 1] = ratios[i]
        V[i + 1, i + 1] = 1.0
    return V / np.linalg.norm(V, axis=0)


def _match_to_perturbative(d: DeviceParams, eig: EigenSystem) -> tuple[np.ndarray, np.ndarray]:
    """Order exact eigenpairs by overlap with the first-order basis.

    Returns (values, vectors) ordered as (v0, v1, v2, v3), each column
    phase-aligned so its overlap with the first-order vector is positive
    real.  Ambiguous matches (two candidates within 1e-6 in overlap) raise
    MatchingError.
    """
    Vp = perturbative_basis(d)
    ov = np.abs(Vp.T @ eig.vectors)  # rows: perturbative k, cols: exact j
    taken: list[int] = []
    values = np.empty(4)
    vectors = np.empty((4, 4), dtype=complex)
    for k in range(4):
        row = ov[k].copy()
        row[taken] = -1.0
        order = np.argsort(row)
        best, second = order[-1], order[-2]
        if row[best] - max(row[second], 0.0) < 1e-6:
            raise MatchingError(
                f"dressed-state matching ambiguous for v{k}: overlaps "
                f"{row[best]:.8f} vs {row[second]:.8f}"
            )
        taken.append(int(best))
        col = eig.vectors[:, best]
        phase = np.vdot(col, Vp[:, k])
        if abs(phase) > 0:
            col = col * (phase / abs(phase))
        values[k] = eig.values[best]
        vectors[:, k] = col
    return values, vectors


def dressed_basis(d: DeviceParams, mode: str = "exact") -> np.ndarray:
    """Dressed one-excitation basis as columns (v0, v1, v2, v3).

    ``perturbative`` evaluates the first-order formulas; ``exact``
    diagonalizes the static Hamiltonian and matches/phase-aligns the
    eigenvectors to the perturbative ones.
    """
    _check_guard(d)
    if mode == "perturbative":
        return perturbative_basis(d)
    if mode == "exact":
        eig = hermitian_eig(h0_matrix(d))
        _, vectors = _match_to_perturbative(d, eig)
        return vectors
    raise ValueError(f"unknown dressed basis mode {mode!r}")


def level_splittings(d: DeviceParams, mode: str = "exact") -> np.ndarray:
    """Transition frequencies E_i between dressed state v_i and the hub v0.

    ``perturbative`` evaluates
    E_i = Delta_i + 2 g_i^2/Delta_i + sum_{j != i} g_j^2/Delta_j;
    ``exact`` returns lambda_i - lambda_0 from the matched exact spectrum.
    """
    _check_guard(d)
    if mode == "perturbative":
        g = d.g0()
        delta = d.delta0()
        shifts = g**2 / delta
        return delta + shifts + np.sum(shifts)
    if mode == "exact":
        eig = hermitian_eig(h0_matrix(d))
        values, _ = _match_to_perturbative(d, eig)
        return values[1:] - values[0]
    raise ValueError(f"unknown splitting mode {mode!r}")


def _check_guard(d: DeviceParams) -> None:
    g = d.g0()
    delta = d.delta0()
    worst = np.max(np.abs(g / delta))
    if worst >= PERTURBATIVE_GUARD:
        raise DeviceModelError(
            f"|g/Delta| = {worst:.3f} violates the perturbative guard < {PERTURBATIVE_GUARD}"
        )


@dataclass(frozen=True)
class DriveProgram:
    """Per-transmon oscillatory longitudinal drive.

    Each transmon i is driven as Delta_i(t) = Delta_i0 + L_i(t) cos(w_i t
    + phase_i).  Envelopes must be deterministic, stateless functions of
    time accepting scalars or arrays; the coupling modulation T_i(t) and
    the signed flux modulation follow from L_i by construction, which
    enforces T_i/g_i0 = L_i/(2 eps_i0) identically.
    """

    drive_freqs: tuple[float, float, float]
    phases: tuple[float, float, float]
    envelopes: tuple[Callable, Callable, Callable]

    def longitudinal(self, i: int, t) -> np.ndarray:
        """L_i(t), angular, signed."""
        return np.asarray(self.envelopes[i](t), dtype=float)

    def transverse(self, d: DeviceParams, i: int, t) -> np.ndarray:
        """T_i(t) = g_i0 L_i(t) / (2 eps_i0)."""
        return d.g0()[i] * self.longitudinal(i, t) / (2.0 * d.epsilon0()[i])

    def flux_modulation(self, d: DeviceParams, i: int, t) -> np.ndarray:
        """Signed flux envelope delta-phi_i(t) realizing L_i(t), flux quanta."""
        if d.mode != "flux":
            raise DeviceModelError("flux modulation requires a flux-mode device")
        return self.longitudinal(i, t) / _depsilon_dphi(d.transmons[i])

    def warn_if_flux_large(self, d: DeviceParams, t_grid: np.ndarray) -> None:
        if d.mode != "flux":
            return
        for i in range(3):
            peak = float(np.max(np.abs(self.flux_modulation(d, i, t_grid))))
            if peak > FLUX_AMPLITUDE_WARN:
                warnings.warn(
                    f"transmon {i + 1}: flux amplitude {peak:.2e} exceeds "
                    f"{FLUX_AMPLITUDE_WARN:.0e} flux quanta; first-order flux expansion "
                    "is unreliable",
                    stacklevel=2,
                )


class TimeDependentHamiltonian:
    """Evaluator for the driven one-excitation Hamiltonian H(t).

    Callable at a scalar time; ``sample`` evaluates a whole time grid at
    once (used by the propagator's batched stepping).  Two fidelity modes:

    - ``first-order``: Delta_i(t) = Delta_i0 + L_i cos(...), g_i(t) = g_i0
      + T_i cos(...), the linearized drive model;
    - ``flux-exact``: the flux maps evaluated at the modulated flux
      phi_i(t), available only for flux-mode devices.
    """

    def __init__(self, d: DeviceParams, p: DriveProgram, mode: str = "first-order"):
        if mode not in ("first-order", "flux-exact"):
            raise ValueError(f"unknown Hamiltonian mode {mode!r}")
        if mode == "flux-exact" and d.mode != "flux":
            raise DeviceModelError("flux-exact mode requires a flux-mode device")
        self.device = d
        self.program = p
        self.mode = mode
        self._g0 = d.g0()
        self._delta0 = d.delta0()
        self._eps0 = d.epsilon0()
        self._freqs = np.asarray(p.drive_freqs, dtype=float)
        self._phases = np.asarray(p.phases, dtype=float)

    def __call__(self, t: float) -> np.ndarray:
        return self.sample(np.asarray([t], dtype=float))[0]

    def sample(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        n = ts.shape[0]
        L = np.stack([self.program.longitudinal(i, ts) for i in range(3)], axis=1)
        carrier = np.cos(ts[:, None] * self._freqs[None, :] + self._phases[None, :])
        H = np.zeros((n, 4, 4), dtype=complex)
        if self.mode == "first-order":
            gmod = self._g0[None, :] + (L * self._g0[None, :] / (2.0 * self._eps0[None, :])) * carrier
            dmod = self._delta0[None, :] + L * carrier
        else:
            dphi = np.stack(
                [self.program.flux_modulation(self.device, i, ts) for i in range(3)], axis=1
            )
            phi = np.array([t.phi0 for t in self.device.transmons])[None, :] + dphi * carrier
            eps = np.stack(
                [epsilon_of_flux(self.device.transmons[i], phi[:, i]) for i in range(3)], axis=1
            )
            gmod = np.stack(
                [g_of_flux(self.device.transmons[i], phi[:, i]) for i in range(3)], axis=1
            )
            dmod = eps - self.device.omega_cavity
        H[:, 0, 1:] = gmod
        H[:, 1:, 0] = gmod
        H[:, 1, 1] = dmod[:, 0]
        H[:, 2, 2] = dmod[:, 1]
        H[:, 3, 3] = dmod[:, 2]
        return H


def h_of_t(
    d: DeviceParams, p: DriveProgram, t: float, fidelity_mode: str = "first-order"
) -> np.ndarray:
    """Driven Hamiltonian at one instant (convenience over the evaluator)."""
    return TimeDependentHamiltonian(d, p, mode=fidelity_mode)(t)


def device_from_frequencies(
    cavity_ghz: float, g_mhz: Sequence[float], delta_mhz: Sequence[float]
) -> DeviceParams:
    """Direct-mode device from ordinary-frequency inputs (GHz / MHz)."""
    transmons = tuple(
        TransmonSpec.direct(g0=TWO_PI * g * 1e6, delta0=TWO_PI * dd * 1e6)
        for g, dd in zip(g_mhz, delta_mhz, strict=True)
    )
    return DeviceParams(omega_cavity=TWO_PI * cavity_ghz * 1e9, transmons=transmons)
