"""Command-line entry point.

Subcommands: ``converge``, ``solve``, ``sod``, ``burgers-shock`` (all driven
by a config file, with common overrides as flags) and ``spectrum`` for the
semi-discrete eigenvalue study.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .. import spectral
from .config import RunConfig, load_config
from .experiments import (run_burgers_shock, run_convergence, run_sod,
                          run_solve)


def add_common(parser):
    parser.add_argument("--config", type=Path, help="TOML/JSON run config")
    parser.add_argument("--p", type=int, help="polynomial degree override")
    parser.add_argument("--nu", type=float, help="CFL fraction override")
    parser.add_argument("--final-time", type=float, dest="final_time")
    parser.add_argument("--output-dir", dest="output_dir")
    parser.add_argument("--limiter", action="store_true", default=None,
                        help="enable the TVDM limiter")
    parser.add_argument("--positivity", action="store_true", default=None,
                        help="enable the positivity guard (Euler)")
    parser.add_argument("--seed", type=int, help="random mesh seed override")
    parser.add_argument("--alpha", type=float,
                        help="constant cut fraction override")


def resolve_config(args):
    config = load_config(args.config) if args.config else RunConfig()
    for key in ("p", "nu", "final_time", "output_dir"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    if args.p is not None:
        config.p_list = [args.p]
    if args.limiter:
        config.limiter.enabled = True
    if args.positivity:
        config.limiter.positivity = True
    if args.seed is not None:
        config.mesh.seed = args.seed
        config.mesh.alpha = None
    if args.alpha is not None:
        config.mesh.alpha = args.alpha
        config.mesh.seed = None
    return config


def cmd_spectrum(args):
    result = spectral.operator_spectrum(args.alpha, args.p,
                                        variant=args.variant)
    print(f"variant={args.variant} p={args.p} alpha={args.alpha:g} "
          f"abscissa={result.abscissa:.6e}")
    if args.output_dir:
        out_dir = Path(args.output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "spectrum.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["re", "im"])
            for lam in result.eigenvalues:
                writer.writerow([lam.real, lam.imag])
        with open(out_dir / "metadata.json", "w") as fh:
            json.dump({"variant": args.variant, "p": args.p,
                       "alpha": args.alpha, "dt": result.dt,
                       "abscissa": result.abscissa}, fh, indent=2)
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="cutcelldg",
        description="1D cut-cell DG solver with small-cell stabilization")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("converge", "solve", "sod", "burgers-shock"):
        cmd = sub.add_parser(name)
        add_common(cmd)

    spec = sub.add_parser("spectrum", help="semi-discrete eigenvalue study")
    spec.add_argument("--p", type=int, required=True, choices=(1, 2, 3))
    spec.add_argument("--alpha", type=float, required=True)
    spec.add_argument("--variant", choices=("full", "legacy", "none"),
                      default="full")
    spec.add_argument("--output-dir", dest="output_dir")

    args = parser.parse_args(argv)
    if args.command == "spectrum":
        return cmd_spectrum(args)

    config = resolve_config(args)
    runner = {"converge": run_convergence, "solve": run_solve,
              "sod": run_sod, "burgers-shock": run_burgers_shock}
    runner[args.command](config)
    return 0


if __name__ == "__main__":
    sys.exit(main())
