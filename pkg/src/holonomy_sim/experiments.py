"""Scenario presets, gate runs, gate-time sweeps, and file outputs.

A Scenario is a plain-data description of one numerical experiment:
either the ideal four-level model at a given coupling magnitude, or the
full driven device model.  `run_scenario` produces a sampled trace with
populations and instantaneous fidelity; `sweep_gate_time` repeats the
run over a grid of gate times.  `write_outputs` serializes results as
CSV plus a JSON manifest.

Units at this boundary follow laboratory conventions: ordinary
frequencies (MHz / GHz), microseconds, picoseconds.  Internally
everything is angular (rad/s) and seconds.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import device as dev
from . import tripod
from .linalg import populations
from .propagate import PropagationTrace, propagate, propagate_converged

__version__ = "0.1.0"

TWO_PI = 2.0 * math.pi

# Default step rules: fractions of the fastest period present.  The ideal
# model has no drive carrier, so its scale is the coupling magnitude; the
# device model resolves the fastest drive.  Both defaults keep the
# step-halving change of the final fidelity below 1e-6.
EFFECTIVE_STEP_DIVISOR = 128
EFFECTIVE_RAMP_STEPS = 512
EXACT_STEP_DIVISOR = 1024

DEFAULT_SAMPLES = 1001


class ScenarioError(ValueError):
    """Scenario failed validation."""


class RunError(RuntimeError):
    """A numerical run could not be completed."""


@dataclass(frozen=True)
class SimSettings:
    """Integrator settings: fixed step (s), optional convergence tolerance."""

    step: float | None = None
    converge_tol: float | None = None
    samples: int = DEFAULT_SAMPLES


@dataclass(frozen=True)
class SweepGrid:
    t_min: float
    t_max: float
    points: int

    def times(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.points)


@dataclass(frozen=True)
class Scenario:
    """One experiment: model choice, physics inputs, loop, settings."""

    model: str  # "effective" | "exact"
    label: str = ""
    device: dev.DeviceParams | None = None
    omega_eff: float | None = None  # angular; effective model, or exact-model override
    l_max: float | None = None  # angular cap on longitudinal drive amplitudes
    drive_freq_mode: str = "exact"  # "exact" | "perturbative"
    hamiltonian_mode: str = "first-order"  # "first-order" | "flux-exact"
    ramp: str = tripod.DEFAULT_RAMP
    gate_time: float = 0.5e-6
    sim: SimSettings = field(default_factory=SimSettings)
    sweep: SweepGrid | None = None

    def __post_init__(self) -> None:
        if self.model not in ("effective", "exact"):
            raise ScenarioError(f"unknown model {self.model!r}")
        if self.drive_freq_mode not in ("exact", "perturbative"):
            raise ScenarioError(f"unknown drive_freq_mode {self.drive_freq_mode!r}")
        if self.hamiltonian_mode not in ("first-order", "flux-exact"):
            raise ScenarioError(f"unknown hamiltonian_mode {self.hamiltonian_mode!r}")
        if self.model == "effective":
            if self.omega_eff is None:
                raise ScenarioError("effective model requires omega_eff")
        else:
            if self.device is None:
                raise ScenarioError("exact model requires device parameters")
            if self.l_max is None and self.omega_eff is None:
                raise ScenarioError("exact model requires l_max (or an omega_eff override)")
        if self.gate_time <= 0:
            raise ScenarioError("gate_time must be positive")


# ---------------------------------------------------------------------------
# JSON round-trip


def scenario_to_json(s: Scenario) -> dict:
    out: dict = {
        "model": s.model,
        "label": s.label,
        "drive_freq_mode": s.drive_freq_mode,
        "hamiltonian_mode": s.hamiltonian_mode,
        "ramp": s.ramp,
        "gate_time_us": s.gate_time * 1e6,
        "samples": s.sim.samples,
    }
    if s.omega_eff is not None:
        out["omega_eff_mhz"] = s.omega_eff / TWO_PI / 1e6
    if s.l_max is not None:
        out["l_max_mhz"] = s.l_max / TWO_PI / 1e6
    if s.device is not None:
        out["cavity_freq_ghz"] = s.device.omega_cavity / TWO_PI / 1e9
        ts = []
        for t in s.device.transmons:
            if t.mode == "direct":
                ts.append({"g0_mhz": t.g0 / TWO_PI / 1e6, "delta0_mhz": t.delta0 / TWO_PI / 1e6})
            else:
                ts.append(
                    {
                        "ec_mhz": t.ec / TWO_PI / 1e6,
                        "ejmax_ghz": t.ejmax / TWO_PI / 1e9,
                        "phi0": t.phi0,
                        "k_mhz": t.k / TWO_PI / 1e6,
                    }
                )
        out["transmons"] = ts
    if s.sim.step is not None:
        out["step_ps"] = s.sim.step * 1e12
    if s.sim.converge_tol is not None:
        out["converge_tol"] = s.sim.converge_tol
    if s.sweep is not None:
        out["sweep"] = {
            "t_min_us": s.sweep.t_min * 1e6,
            "t_max_us": s.sweep.t_max * 1e6,
            "points": s.sweep.points,
        }
    return out


def scenario_from_json(data: dict) -> Scenario:
    try:
        model = data["model"]
    except KeyError as e:
        raise ScenarioError("scenario is missing the 'model' key") from e
    device = None
    if "transmons" in data:
        if "cavity_freq_ghz" not in data:
            raise ScenarioError("device scenarios need cavity_freq_ghz")
        specs = []
        for i, t in enumerate(data["transmons"]):
            if "g0_mhz" in t:
                specs.append(
                    dev.TransmonSpec.direct(
                        g0=TWO_PI * t["g0_mhz"] * 1e6, delta0=TWO_PI * t["delta0_mhz"] * 1e6
                    )
                )
            elif "ec_mhz" in t:
                specs.append(
                    dev.TransmonSpec.from_flux(
                        ec=TWO_PI * t["ec_mhz"] * 1e6,
                        ejmax=TWO_PI * t["ejmax_ghz"] * 1e9,
                        phi0=t["phi0"],
                        k=TWO_PI * t["k_mhz"] * 1e6,
                    )
                )
            else:
                raise ScenarioError(
                    f"transmon {i + 1}: need either g0_mhz/delta0_mhz or "
                    "ec_mhz/ejmax_ghz/phi0/k_mhz"
                )
        if len(specs) != 3:
            raise ScenarioError(f"expected 3 transmons, got {len(specs)}")
        try:
            device = dev.DeviceParams(
                omega_cavity=TWO_PI * data["cavity_freq_ghz"] * 1e9, transmons=tuple(specs)
            )
        except dev.DeviceModelError as e:
            raise ScenarioError(str(e)) from e
    sweep = None
    if "sweep" in data:
        sw = data["sweep"]
        sweep = SweepGrid(
            t_min=sw["t_min_us"] * 1e-6, t_max=sw["t_max_us"] * 1e-6, points=int(sw["points"])
        )
    sim = SimSettings(
        step=data["step_ps"] * 1e-12 if "step_ps" in data else None,
        converge_tol=data.get("converge_tol"),
        samples=int(data.get("samples", DEFAULT_SAMPLES)),
    )
    try:
        return Scenario(
            model=model,
            label=data.get("label", ""),
            device=device,
            omega_eff=(
                TWO_PI * data["omega_eff_mhz"] * 1e6 if "omega_eff_mhz" in data else None
            ),
            l_max=TWO_PI * data["l_max_mhz"] * 1e6 if "l_max_mhz" in data else None,
            drive_freq_mode=data.get("drive_freq_mode", "exact"),
            hamiltonian_mode=data.get("hamiltonian_mode", "first-order"),
            ramp=data.get("ramp", tripod.DEFAULT_RAMP),
            gate_time=data.get("gate_time_us", 0.5) * 1e-6,
            sim=sim,
            sweep=sweep,
        )
    except ValueError as e:
        raise ScenarioError(str(e)) from e


# ---------------------------------------------------------------------------
# Drive synthesis for the device model


@dataclass(frozen=True)
class _LoopEnvelope:
    """L_i(t) tracking the loop's instantaneous coupling request.

    Picklable, stateless, vectorized: component i of the loop coupling
    divided by the drive coefficient of transmon i (signs carried).
    """

    loop: tripod.LoopSchedule
    component: int
    coefficient: float

    def __call__(self, t):
        alpha, beta = tripod.angles_schedule(self.loop, np.asarray(t, dtype=float))
        comps = tripod.rabi_from_angles(self.loop.omega, alpha, beta)
        return np.real(comps[..., self.component]) / self.coefficient


def synthesize_drive(s: Scenario, loop: tripod.LoopSchedule) -> tuple[dev.DriveProgram, float]:
    """Drive program realizing the loop on the scenario's device.

    Returns the program and the loop coupling magnitude.  Amplitudes are
    obtained by inverting the effective-coupling relation per transmon;
    drive frequencies come from the level splittings in the configured
    mode.  Raises RunError if any amplitude would exceed the cap.
    """
    d = s.device
    coeffs = np.array([dev.rabi_coefficient(d, i) for i in range(3)])
    if np.any(coeffs == 0.0):
        raise RunError("a transmon has zero drive coefficient; cannot realize the loop")
    if s.omega_eff is not None:
        omega = s.omega_eff
    else:
        omega = s.l_max * float(np.min(np.abs(coeffs)))
    loop = replace(loop, omega=omega)
    if s.l_max is not None:
        # peak |L_i| over the loop is omega/|c_i| (each component reaches 1)
        for i in range(3):
            peak = omega / abs(coeffs[i])
            if peak > s.l_max * (1.0 + 1e-9):
                t_peak = {0: 2.0 * loop.gate_time / 3.0, 1: loop.gate_time, 2: 0.0}[i]
                raise RunError(
                    f"drive amplitude cap exceeded on transmon {i + 1}: "
                    f"|L| = 2pi*{peak / TWO_PI / 1e6:.3f} MHz at t = {t_peak * 1e6:.3f} us, "
                    f"cap 2pi*{s.l_max / TWO_PI / 1e6:.3f} MHz"
                )
    splittings = dev.level_splittings(d, mode=s.drive_freq_mode)
    freqs = tuple(float(abs(e)) for e in splittings)
    envelopes = tuple(_LoopEnvelope(loop, i, float(coeffs[i])) for i in range(3))
    program = dev.DriveProgram(drive_freqs=freqs, phases=loop.phases, envelopes=envelopes)
    program.warn_if_flux_large(d, np.linspace(0.0, loop.gate_time, 201))
    return program, omega


def default_step(s: Scenario, omega: float, freqs: Sequence[float] | None) -> float:
    if s.sim.step is not None:
        return s.sim.step
    if s.model == "effective":
        return min(
            (TWO_PI / omega) / EFFECTIVE_STEP_DIVISOR,
            s.gate_time / EFFECTIVE_RAMP_STEPS,
        )
    return (TWO_PI / max(freqs)) / EXACT_STEP_DIVISOR


# ---------------------------------------------------------------------------
# Runs and sweeps


@dataclass(frozen=True)
class ScenarioResult:
    """Sampled gate run in the logical frame of its model."""

    scenario: Scenario
    trace: PropagationTrace
    populations: np.ndarray  # (samples, 4), logical-frame populations
    fidelity_series: np.ndarray  # (samples,), overlap with the transported ideal state
    alpha: np.ndarray
    beta: np.ndarray
    fidelity: float  # final-time fidelity
    leakage: float  # 1 - (p1 + p2) at the final time
    omega_eff: float  # realized loop coupling magnitude, angular
    h_used: float
    wall_time: float
    version: str = __version__


def run_scenario(
    s: Scenario, gate_time: float | None = None, samples: int | None = None
) -> ScenarioResult:
    """Propagate one gate and report populations and fidelity.

    The initial state is the logical |1> of the model (dressed state v1
    for the device model); the ideal final state is logical |2>.
    """
    t_start = time.perf_counter()
    T = float(gate_time if gate_time is not None else s.gate_time)
    n_samples = int(samples if samples is not None else s.sim.samples)
    loop = tripod.LoopSchedule(gate_time=T, omega=0.0, ramp=s.ramp)

    if s.model == "effective":
        loop = replace(loop, omega=float(s.omega_eff))
        hfun = tripod.TripodLoopHamiltonian(loop)
        basis = np.eye(4, dtype=complex)
        omega = loop.omega
        freqs = None
    else:
        program, omega = synthesize_drive(s, loop)
        loop = replace(loop, omega=omega)
        hfun = dev.TimeDependentHamiltonian(s.device, program, mode=s.hamiltonian_mode)
        basis = dev.dressed_basis(s.device, mode="exact")
        freqs = program.drive_freqs

    psi0 = basis[:, 1].copy()
    h = default_step(s, omega, freqs)
    try:
        if s.sim.converge_tol is not None:
            trace, h_used = propagate_converged(
                hfun, psi0, 0.0, T, h, tol=s.sim.converge_tol, samples=n_samples
            )
        else:
            trace = propagate(hfun, psi0, 0.0, T, h, samples=n_samples)
            h_used = trace.step
    except (ValueError, RuntimeError) as e:
        raise RunError(f"propagation failed: {e}") from e

    pops = np.abs(trace.states @ np.conj(basis)) ** 2
    ideal = tripod.ideal_dark_path(loop, trace.times)  # logical-frame components
    amps = trace.states @ np.conj(basis)  # logical-frame amplitudes
    fid_series = np.abs(np.sum(np.conj(ideal) * amps, axis=1)) ** 2
    alpha, beta = tripod.angles_schedule(loop, trace.times)
    final_p = pops[-1]
    return ScenarioResult(
        scenario=s,
        trace=trace,
        populations=pops,
        fidelity_series=fid_series,
        alpha=np.asarray(alpha),
        beta=np.asarray(beta),
        fidelity=float(fid_series[-1]),
        leakage=float(max(0.0, 1.0 - final_p[1] - final_p[2])),
        omega_eff=omega,
        h_used=h_used,
        wall_time=time.perf_counter() - t_start,
    )


@dataclass(frozen=True)
class SweepRecord:
    gate_time: float
    fidelity: float
    leakage: float


@dataclass(frozen=True)
class SweepResult:
    scenario: Scenario
    records: tuple[SweepRecord, ...]  # sorted ascending by gate_time
    failures: tuple[dict, ...]
    h_used: float
    wall_time: float
    version: str = __version__

    def gate_times(self) -> np.ndarray:
        return np.array([r.gate_time for r in self.records])

    def fidelities(self) -> np.ndarray:
        return np.array([r.fidelity for r in self.records])


def _sweep_point(args: tuple[Scenario, float]) -> tuple[float, float, float, float]:
    s, T = args
    res = run_scenario(s, gate_time=T, samples=2)
    return T, res.fidelity, res.leakage, res.h_used


def sweep_gate_time(
    s: Scenario, times: Iterable[float] | None = None, workers: int = 1
) -> SweepResult:
    """Run the gate across a grid of gate times.

    Points execute independently (optionally across processes); records
    come back sorted by gate time regardless of completion order, and a
    failed point is recorded in the manifest without aborting the sweep.
    """
    t_start = time.perf_counter()
    if times is None:
        if s.sweep is None:
            raise ScenarioError("no sweep grid: pass times or set scenario.sweep")
        times = s.sweep.times()
    ts = [float(t) for t in times]
    if not ts or any(t <= 0 for t in ts):
        raise ScenarioError("sweep times must be non-empty and positive")
    jobs = [(s, t) for t in ts]
    outcomes: list[tuple[float, float, float, float] | None] = [None] * len(jobs)
    errors: list[dict] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_point, job) for job in jobs]
            for idx, fut in enumerate(futures):
                try:
                    outcomes[idx] = fut.result()
                except Exception as e:  # noqa: BLE001 - attributed and reported
                    errors.append({"gate_time_us": ts[idx] * 1e6, "error": str(e)})
    else:
        for idx, job in enumerate(jobs):
            try:
                outcomes[idx] = _sweep_point(job)
            except Exception as e:  # noqa: BLE001
                errors.append({"gate_time_us": ts[idx] * 1e6, "error": str(e)})
    good = [o for o in outcomes if o is not None]
    good.sort(key=lambda rec: rec[0])
    records = tuple(SweepRecord(gate_time=t, fidelity=f, leakage=lk) for t, f, lk, _ in good)
    h_used = max((h for _, _, _, h in good), default=0.0)
    return SweepResult(
        scenario=s,
        records=records,
        failures=tuple(errors),
        h_used=h_used,
        wall_time=time.perf_counter() - t_start,
    )


# ---------------------------------------------------------------------------
# Presets


def _fig3_device() -> dev.DeviceParams:
    return dev.device_from_frequencies(5.0, [60.0, -80.0, 100.0], [-300.0, -400.0, -500.0])


def _scaled_device(g_scale: float, delta_scale: float) -> dev.DeviceParams:
    g = np.array([60.0, -80.0, 100.0]) * g_scale
    delta = np.array([-300.0, -400.0, -500.0]) * delta_scale
    return dev.device_from_frequencies(5.0, list(g), list(delta))


def _coarse_step(d: dev.DeviceParams) -> float:
    """Sweep-grade step: 1/64 of the fastest drive period (device exact)."""
    fmax = float(np.max(np.abs(dev.level_splittings(d, mode="exact"))))
    return (TWO_PI / fmax) / 64.0


def _exact_preset(
    label: str, d: dev.DeviceParams, l_max_mhz: float, grid: SweepGrid
) -> Scenario:
    return Scenario(
        model="exact",
        label=label,
        device=d,
        l_max=TWO_PI * l_max_mhz * 1e6,
        sim=SimSettings(step=_coarse_step(d)),
        sweep=grid,
    )


def presets() -> dict[str, Scenario]:
    """Named scenarios reproducing the published numerical experiments."""
    feas_phi = (0.48426, 0.48489, 0.48550)
    feas_g_mhz = (60.0, -80.0, 100.0)
    feas = tuple(
        dev.TransmonSpec.from_flux(
            ec=TWO_PI * 280e6,
            ejmax=TWO_PI * 224e9,
            phi0=phi,
            # anchor the coupling map to the reference couplings
            k=TWO_PI * g * 1e6 / math.cos(math.pi * phi) ** 0.25,
        )
        for phi, g in zip(feas_phi, feas_g_mhz)
    )
    out = {
        "fig2-effective": Scenario(
            model="effective",
            label="ideal loop, coupling 10.5 MHz",
            omega_eff=TWO_PI * 10.5e6,
            sweep=SweepGrid(0.05e-6, 1.0e-6, 40),
        ),
        "fig3-exact": _exact_preset(
            "driven device, reference parameters",
            _fig3_device(),
            100.0,
            SweepGrid(0.4e-6, 1.0e-6, 40),
        ),
        "fig4a": _exact_preset(
            "half detunings", _scaled_device(1.0, 0.5), 100.0, SweepGrid(0.05e-6, 0.6e-6, 18)
        ),
        "fig4b": _exact_preset(
            "double couplings", _scaled_device(2.0, 1.0), 100.0, SweepGrid(0.05e-6, 0.6e-6, 18)
        ),
        "fig4c": _exact_preset(
            "double drive cap", _fig3_device(), 200.0, SweepGrid(0.05e-6, 0.6e-6, 18)
        ),
        "fig4d": _exact_preset(
            "double couplings, detunings and drive",
            _scaled_device(2.0, 2.0),
            200.0,
            SweepGrid(0.05e-6, 0.6e-6, 18),
        ),
        "feasibility-flux": Scenario(
            model="exact",
            label="flux-map feasibility parameters",
            device=dev.DeviceParams(omega_cavity=TWO_PI * 5e9, transmons=feas),
            l_max=TWO_PI * 100e6,
            hamiltonian_mode="flux-exact",
        ),
    }
    return out


def preset_report(s: Scenario) -> dict:
    """Derived quantities of a scenario: coupling, amplitudes, flux swing."""
    report: dict = {"model": s.model, "label": s.label}
    if s.model == "effective":
        report["omega_eff_mhz"] = s.omega_eff / TWO_PI / 1e6
        return report
    d = s.device
    coeffs = np.array([dev.rabi_coefficient(d, i) for i in range(3)])
    omega = (
        s.omega_eff if s.omega_eff is not None else s.l_max * float(np.min(np.abs(coeffs)))
    )
    report["omega_eff_mhz"] = omega / TWO_PI / 1e6
    report["rabi_coefficients"] = [float(c) for c in coeffs]
    report["peak_drive_mhz"] = [float(omega / abs(c) / TWO_PI / 1e6) for c in coeffs]
    if d.mode == "flux" and s.l_max is not None:
        # flux swing corresponding to the full drive-amplitude cap
        peaks = [dev.flux_amplitude_for_L(d.transmons[i], s.l_max) for i in range(3)]
        report["flux_amplitudes"] = [float(p) for p in peaks]
        report["max_flux_amplitude"] = float(max(peaks))
    return report


# ---------------------------------------------------------------------------
# Output files


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def write_outputs(result: ScenarioResult | SweepResult, out_dir: str | Path) -> list[Path]:
    """Write CSV files and a manifest for a run or a sweep.

    Trace runs produce trace.csv (t_us, p0..p3, fidelity) and
    schedule.csv (t_us, alpha_rad, beta_rad); sweeps produce sweep.csv
    (T_us, fidelity, leakage).  Content is deterministic for identical
    results; I/O errors carry the offending path.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise RunError(f"cannot create output directory {out}: {e}") from e
    written: list[Path] = []

    def _write(name: str, text: str) -> None:
        path = out / name
        try:
            path.write_text(text, encoding="utf-8", newline="")
        except OSError as e:
            raise RunError(f"cannot write {path}: {e}") from e
        written.append(path)

    manifest: dict = {
        "scenario": scenario_to_json(result.scenario),
        "version": result.version,
        "wall_time_s": result.wall_time,
    }
    if isinstance(result, ScenarioResult):
        rows = ["t_us,p0,p1,p2,p3,fidelity"]
        for k in range(result.trace.times.shape[0]):
            p = result.populations[k]
            rows.append(
                ",".join(
                    [_fmt(result.trace.times[k] * 1e6)]
                    + [_fmt(v) for v in p]
                    + [_fmt(result.fidelity_series[k])]
                )
            )
        _write("trace.csv", "\n".join(rows) + "\n")
        rows = ["t_us,alpha_rad,beta_rad"]
        for k in range(result.trace.times.shape[0]):
            rows.append(
                ",".join(
                    [
                        _fmt(result.trace.times[k] * 1e6),
                        _fmt(float(result.alpha[k])),
                        _fmt(float(result.beta[k])),
                    ]
                )
            )
        _write("schedule.csv", "\n".join(rows) + "\n")
        manifest["integrator"] = {
            "step_ps": result.h_used * 1e12,
            "norm_drift": result.trace.norm_drift,
            "samples": int(result.trace.times.shape[0]),
        }
        manifest["result"] = {
            "gate_time_us": result.trace.times[-1] * 1e6,
            "fidelity": result.fidelity,
            "leakage": result.leakage,
            "omega_eff_mhz": result.omega_eff / TWO_PI / 1e6,
        }
    else:
        rows = ["T_us,fidelity,leakage"]
        for rec in result.records:
            rows.append(
                ",".join([_fmt(rec.gate_time * 1e6), _fmt(rec.fidelity), _fmt(rec.leakage)])
            )
        _write("sweep.csv", "\n".join(rows) + "\n")
        manifest["integrator"] = {"step_ps": result.h_used * 1e12}
        manifest["failures"] = list(result.failures)
    _write("manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return written


def loop_propagator(hfun, gate_time: float, h: float) -> np.ndarray:
    """Full 4x4 propagator of a loop, column by column (diagnostic helper)."""
    cols = []
    for k in range(4):
        e = np.zeros(4, dtype=complex)
        e[k] = 1.0
        cols.append(propagate(hfun, e, 0.0, gate_time, h, samples=2).final_state)
    return np.stack(cols, axis=1)
