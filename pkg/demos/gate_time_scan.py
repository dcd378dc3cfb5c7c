"""Gate fidelity versus gate time for the ideal and device models.

Sweeps both models over their preset grids and reports the time rescale
that best aligns the device curve with the ideal one.  This is the
slowest demo (a few minutes single-core): the device sweep integrates
tens of thousands of drive periods.

Usage: python demos/gate_time_scan.py [OUTDIR]
"""

import sys
from pathlib import Path

import numpy as np

from holonomy_sim.experiments import presets, sweep_gate_time, write_outputs

out_root = Path(sys.argv[1] if len(sys.argv) > 1 else "demos/output/gate_time_scan")
named = presets()

ideal = sweep_gate_time(named["fig2-effective"])
write_outputs(ideal, out_root / "ideal")
print(f"ideal sweep: {len(ideal.records)} points  ->  {out_root}/ideal/sweep.csv")

device = sweep_gate_time(named["fig3-exact"])
write_outputs(device, out_root / "device")
print(f"device sweep: {len(device.records)} points  ->  {out_root}/device/sweep.csv")

# align the device curve to the ideal one with a single time rescale
t_ref = np.linspace(0.3e-6, 1.25e-6, 480)
ref = sweep_gate_time(named["fig2-effective"], times=t_ref)
Tg, Fg = device.gate_times(), device.fidelities()
best = (0.0, np.inf)
for delta in np.arange(-0.25, 0.2501, 0.001):
    dev = np.max(np.abs(Fg - np.interp(Tg * (1 + delta), ref.gate_times(), ref.fidelities())))
    if dev < best[1]:
        best = (float(delta), float(dev))
print(
    f"\nbest single time-rescale: delta = {best[0]:+.3f} "
    f"(device gate ~{abs(best[0]) * 100:.0f}% slower), max deviation {best[1]:.3f}"
)
print("render: figgen sweep --in <dir>/sweep.csv --out sweep.png")
