"""Command-line entry point.

Subcommands:

* ``run <config>``       - execute the configured pipeline end to end.
* ``reproduce-fig4``     - canned two-qubit demonstration run with built-in
                           threshold checks.
* ``solve-params``       - print the physical couplings realizing a target
                           exchange strength.
* ``wigner <config>``    - emit Wigner grids only.
* ``estimate <config>``  - emit angular profiles and spectral estimates only.

Exit codes: 0 success, 1 validation error, 2 acceptance failure,
3 numerical (truncation) diagnostic failure.

The output directory defaults to the AQPE_OUT_DIR environment variable, then
to ``./aqpe-out``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .config import apply_overrides, load_config, parse_config
from .errors import AcceptanceError, ConfigError, TruncationError
from .hamiltonians import solve_zero_lambda, two_qubit_preset
from .pipeline import reproduce_fig4, run_experiment

OUT_DIR_ENV = "AQPE_OUT_DIR"
TWO_PI = 2 * np.pi


def _default_out_dir() -> str:
    return os.environ.get(OUT_DIR_ENV, "aqpe-out")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aqpe",
        description="Analog quantum phase estimation simulator "
        "(all configured frequencies are linear Hz; 2*pi is applied on ingestion)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="path to the JSON configuration file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--strict", action="store_true",
                       help="turn hierarchy warnings into errors")
        p.add_argument("--set", action="append", dest="overrides", metavar="KEY=VALUE",
                       help="override a config key, e.g. --set cavity.n_max=60")
        return p

    add_config_command("run", "run the configured experiment pipeline")
    add_config_command("wigner", "emit Wigner grids for the configured run")
    add_config_command("estimate", "emit angular profiles and spectral estimates")

    p = sub.add_parser("reproduce-fig4", help="canned two-qubit demonstration run")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--nmax", type=int, default=None,
                   help="pin every truncation, including Wigner evaluation")
    p.add_argument("--out", default=None)
    p.add_argument("--eta", type=float, default=1e4, help="target coupling in Hz")
    p.add_argument("--g", type=float, default=1e7, help="cavity-coupler coupling in Hz")
    p.add_argument("--delta", type=float, default=1e9, help="target detuning in Hz")
    p.add_argument("--n-theta", type=int, default=720)
    p.add_argument("--grid-step", type=float, default=0.2)
    p.add_argument("--no-grids", action="store_true", help="skip Wigner grid emission")

    p = sub.add_parser("solve-params", help="solve physical couplings for a target eta")
    p.add_argument("--eta", type=float, required=True, help="target coupling in Hz")
    p.add_argument("--g", type=float, required=True, help="cavity-coupler coupling in Hz")
    p.add_argument("--delta", type=float, required=True, help="target detuning in Hz")

    return parser


def _run_config_command(args, artifacts) -> int:
    doc_overrides = list(args.overrides or [])
    if args.strict:
        doc_overrides.append("strict=true")
    try:
        with open(args.config, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load {args.config}: {exc}") from exc
    config = parse_config(apply_overrides(doc, doc_overrides))
    out_dir = args.out or _default_out_dir()
    manifest = run_experiment(config, out_dir, artifacts=artifacts)
    print(f"wrote {len(manifest.files)} files to {out_dir}")
    return 0


def _solve_params(args) -> int:
    eta = TWO_PI * args.eta
    g = TWO_PI * args.g
    delta = TWO_PI * args.delta
    layout, coeffs = two_qubit_preset(eta, g, delta)
    roots = solve_zero_lambda([layout.j_cross[0]])
    r1, r2 = layout.hierarchy_ratios()
    result = {
        "frequency_convention": "linear-Hz-times-2pi",
        "inputs_hz": {"eta": args.eta, "g": args.g, "delta": args.delta},
        "j_cross_hz": layout.j_cross[0] / TWO_PI,
        "j_local_hz": layout.j_local[0] / TWO_PI,
        "j_local_roots_hz": [r / TWO_PI for r in roots],
        "eta_eng_hz": coeffs.eta_eng[0] / TWO_PI,
        "lambda_eng_hz": [lam / TWO_PI for lam in coeffs.lambda_eng],
        "hierarchy_ratios": [r1, r2],
    }
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run_config_command(args, ("profiles", "grids", "fidelity", "estimates"))
        if args.command == "wigner":
            return _run_config_command(args, ("grids",))
        if args.command == "estimate":
            return _run_config_command(args, ("profiles", "estimates"))
        if args.command == "solve-params":
            return _solve_params(args)
        if args.command == "reproduce-fig4":
            out_dir = args.out or _default_out_dir()
            manifest = reproduce_fig4(
                out_dir,
                n_max=args.nmax,
                strict=args.strict,
                eta_hz=args.eta,
                g_hz=args.g,
                delta_hz=args.delta,
                n_theta=args.n_theta,
                grid_step=args.grid_step,
                emit_grids=not args.no_grids,
            )
            ratios = manifest.derived["engineered"]["hierarchy_ratios"]
            print(
                f"reproduction complete: min fidelity "
                f"{manifest.derived['min_fidelity']:.6f}, hierarchy ratios "
                f"({ratios[0]:.2f}, {ratios[1]:.2f}), {len(manifest.files)} files "
                f"in {out_dir}"
            )
            return 0
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except AcceptanceError as exc:
        print(f"acceptance failure: {exc}", file=sys.stderr)
        return 2
    except TruncationError as exc:
        print(f"truncation diagnostic: {exc}", file=sys.stderr)
        return 3
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
