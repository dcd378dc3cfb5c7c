"""Command-line front end: run a scenario, sweep gate times, list presets.

Exit codes: 0 success, 2 invalid scenario or arguments, 3 numerical
failure during a run.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments as xp
from .device import DeviceModelError, MatchingError
from .propagate import StepConvergenceError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def _load_scenario(source: str) -> xp.Scenario:
    """Scenario from a JSON file path, or by preset name as a fallback."""
    path = Path(source)
    if path.exists():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise xp.ScenarioError(f"cannot read scenario {path}: {e}") from e
        return xp.scenario_from_json(data)
    named = xp.presets()
    if source in named:
        return named[source]
    raise xp.ScenarioError(
        f"scenario {source!r} is neither a readable file nor a preset "
        f"(presets: {', '.join(sorted(named))})"
    )


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args.scenario)
    gate_time = args.gate_time_us * 1e-6 if args.gate_time_us is not None else None
    result = xp.run_scenario(scenario, gate_time=gate_time, samples=args.samples)
    files = xp.write_outputs(result, args.out)
    print(
        f"gate time {result.trace.times[-1] * 1e6:.6g} us: "
        f"fidelity {result.fidelity:.6f}, leakage {result.leakage:.2e}"
    )
    for f in files:
        print(f"wrote {f}")
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args.scenario)
    times = None
    if args.t_min_us is not None or args.t_max_us is not None or args.points is not None:
        if None in (args.t_min_us, args.t_max_us, args.points):
            raise xp.ScenarioError("--t-min-us, --t-max-us and --points must be given together")
        grid = xp.SweepGrid(args.t_min_us * 1e-6, args.t_max_us * 1e-6, args.points)
        times = grid.times()
    result = xp.sweep_gate_time(scenario, times=times, workers=args.workers)
    files = xp.write_outputs(result, args.out)
    print(f"{len(result.records)} points, {len(result.failures)} failures")
    for f in files:
        print(f"wrote {f}")
    if result.failures and not result.records:
        raise xp.RunError("every sweep point failed")
    return EXIT_OK


def _cmd_presets(args: argparse.Namespace) -> int:
    named = xp.presets()
    if args.dump is not None:
        if args.dump not in named:
            raise xp.ScenarioError(
                f"unknown preset {args.dump!r} (presets: {', '.join(sorted(named))})"
            )
        scenario = named[args.dump]
        payload = xp.scenario_to_json(scenario)
        payload["report"] = xp.preset_report(scenario)
        print(json.dumps(payload, indent=2, sort_keys=True))
        return EXIT_OK
    for name, scenario in named.items():
        report = xp.preset_report(scenario)
        line = f"{name:18s} {scenario.model:9s} {scenario.label}"
        if "omega_eff_mhz" in report:
            line += f"  [coupling {report['omega_eff_mhz']:.3f} MHz]"
        print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holonomy-sim",
        description="Simulate adiabatic holonomic NOT gates on a transmon-cavity device.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="propagate one gate and write trace CSVs")
    p_run.add_argument("scenario", help="scenario JSON file or preset name")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--gate-time-us", type=float, default=None)
    p_run.add_argument("--samples", type=int, default=None)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="fidelity vs gate time")
    p_sweep.add_argument("scenario", help="scenario JSON file or preset name")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--t-min-us", type=float, default=None)
    p_sweep.add_argument("--t-max-us", type=float, default=None)
    p_sweep.add_argument("--points", type=int, default=None)
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_presets = sub.add_parser("presets", help="list or dump the shipped scenarios")
    group = p_presets.add_mutually_exclusive_group()
    group.add_argument("--list", action="store_true", default=True)
    group.add_argument("--dump", metavar="NAME", default=None)
    p_presets.set_defaults(func=_cmd_presets)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (xp.ScenarioError, DeviceModelError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (xp.RunError, MatchingError, StepConvergenceError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
