"""Command-line entry point.

    cavity-qfi run --preset fig1b --format csv,svg --out results/
    cavity-qfi run --lambda 0.5 --omega 4 --family standard --mode rederived
    cavity-qfi validate --level quick
    cavity-qfi presets

Exit codes: 0 success, 1 a validation check failed, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import replace

from .dynamics import InitialStateSpec, StateFamily
from .kernels import PhysParams
from .qfi import Mode
from .scenario import COLUMNS, FORMATS, PRESETS, Scenario, ScenarioError, run_scenario
from .validation import run_checks

EXIT_OK, EXIT_CHECK_FAILED, EXIT_BAD_ARGS = 0, 1, 2


def _csv_list(value: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


def _amplitudes(value: str) -> tuple[complex, ...]:
    return tuple(complex(v.strip().replace(" ", "")) for v in value.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavity-qfi",
        description="QFI dynamics of a qubit in a dissipative cavity (units of gamma0).",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute a trajectory and write CSV/JSON/SVG")
    run.add_argument("--preset", choices=sorted(PRESETS), help="figure parameter set")
    run.add_argument("--lambda", dest="lam", type=float, help="reservoir spectral width")
    run.add_argument("--omega", type=float, help="atom-cavity coupling")
    run.add_argument("--omega0", type=float, help="atomic frequency (default 50)")
    run.add_argument("--theta", type=float, help="polar angle in [0, pi) (default pi/2)")
    run.add_argument("--phi", type=float, help="phase in [0, 2 pi) (default 0)")
    run.add_argument("--family", choices=[f.value for f in StateFamily])
    run.add_argument("--amplitudes", type=_amplitudes,
                     help="raw family: three dressed-basis amplitudes, e.g. '0.5,0.5,0.7071067811865476'")
    run.add_argument("--mode", choices=["rederived", "paper-faithful", "paper_faithful"])
    run.add_argument("--t-max", type=float, help="horizon in gamma0*t (default 20)")
    run.add_argument("--samples", type=int, help="grid points (default 2001)")
    run.add_argument("--out", default=None, help="output directory (default $QFI_OUT_DIR or .)")
    run.add_argument("--format", type=_csv_list, default=("csv",),
                     help=f"comma-separated subset of {','.join(FORMATS)}")
    run.add_argument("--name", help="output file stem (default: preset name or 'custom')")
    run.add_argument("--plot-columns", type=_csv_list, default=None,
                     help=f"columns for the SVG plot; any of {','.join(COLUMNS[1:])}")

    val = sub.add_parser("validate", help="run the oracle cross-checks")
    val.add_argument("--level", choices=["quick", "full"], default="quick")

    sub.add_parser("presets", help="list the figure presets")
    return parser


def scenario_from_args(args: argparse.Namespace) -> Scenario:
    if args.preset:
        base = Scenario.from_preset(args.preset)
    else:
        if args.lam is None or args.omega is None:
            raise ScenarioError("either --preset or both --lambda and --omega are required")
        base = None

    old_p = base.params if base else None
    params = PhysParams(
        lam=args.lam if args.lam is not None else old_p.lam,
        omega=args.omega if args.omega is not None else old_p.omega,
        omega0=args.omega0 if args.omega0 is not None else (old_p.omega0 if old_p else 50.0),
    )

    old_s = base.state if base else None
    family = StateFamily(args.family) if args.family else (old_s.kind if old_s else StateFamily.DRESSED)
    if family is StateFamily.RAW:
        if args.amplitudes is None:
            raise ScenarioError("--family raw needs --amplitudes")
        state = InitialStateSpec.raw(args.amplitudes)
    else:
        if args.amplitudes is not None:
            raise ScenarioError("--amplitudes only applies to --family raw")
        theta = args.theta if args.theta is not None else (old_s.theta if old_s else math.pi / 2)
        phi = args.phi if args.phi is not None else (old_s.phi if old_s else 0.0)
        state = InitialStateSpec(family, theta, phi)

    if args.mode:
        mode = Mode.parse(args.mode)
    else:
        mode = base.mode if base else Mode.REDERIVED

    fields = dict(params=params, state=state, mode=mode, outputs=tuple(args.format))
    if args.t_max is not None:
        fields["t_max"] = args.t_max
    if args.samples is not None:
        fields["samples"] = args.samples
    if args.name:
        fields["name"] = args.name
    if args.plot_columns is not None:
        fields["plot_columns"] = tuple(args.plot_columns)
    if base is None:
        return Scenario(**fields)
    return replace(base, **fields)


def _fail(kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return EXIT_BAD_ARGS


def cmd_run(args) -> int:
    try:
        scenario = scenario_from_args(args)
    except ValueError as exc:
        return _fail("invalid_scenario", str(exc))
    out_dir = args.out or os.environ.get("QFI_OUT_DIR") or "."
    try:
        paths = run_scenario(scenario, out_dir)
    except OSError as exc:
        return _fail("io_error", str(exc))
    for path in paths:
        print(path)
    return EXIT_OK


def cmd_validate(args) -> int:
    results = run_checks(args.level)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_presets(args) -> int:
    for name in sorted(PRESETS):
        print(f"{name:12s} {PRESETS[name].description}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"run": cmd_run, "validate": cmd_validate, "presets": cmd_presets}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
