"""Command-line driver.

Two subcommands:

  unitrack run     build the curve sequence, measure it, check the claims,
                   and write manifest + per-depth CSV + SVG + PNG figures
  unitrack verify  check the claims and print the report table (from fresh
                   flags or from an existing manifest's configuration)

Exit codes: 0 success, 1 a claim check failed, 2 configuration problem,
3 numerical capacity exceeded (jet budget, refinement cap, overflow).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .curve import DEFAULT_JET_BUDGET, SeedSpec
from .errors import (
    JetOverflow,
    NotImmersed,
    OrderBudgetExceeded,
    RefinementLimitExceeded,
)
from .manifest import (
    ManifestError,
    build_manifest,
    csv_name,
    load_manifest,
    write_curve_csv,
    write_manifest,
)
from .plots import render_figures, render_svg
from .verify import Tolerances, any_failures, run_unitrack, verify_run

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

SEED_CHOICES = {"finn": "finn_bump", "straight": "straight", "custom": "custom_bump"}


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--seed",
        choices=sorted(SEED_CHOICES),
        default="finn",
        help="seed profile (default: finn)",
    )
    p.add_argument(
        "--amplitude", type=float, default=4.0, help="seed vertical scale (default 4)"
    )
    p.add_argument(
        "--power",
        type=int,
        default=2,
        help="flatness exponent of the custom seed (default 2)",
    )
    p.add_argument("--depth", type=int, default=5, help="iteration depth (default 5)")
    p.add_argument(
        "--theta-max",
        type=float,
        default=0.02,
        help="sampling turning-angle threshold in radians (default 0.02)",
    )
    p.add_argument(
        "--jet-budget",
        type=int,
        default=DEFAULT_JET_BUDGET,
        help=f"total derivative orders available (default {DEFAULT_JET_BUDGET})",
    )
    p.add_argument(
        "--grid",
        type=int,
        default=1001,
        help="parameter-grid size for pointwise checks (default 1001)",
    )
    p.add_argument(
        "--tol-alg",
        type=float,
        default=1e-10,
        help="tolerance for algebraic identities (default 1e-10)",
    )
    p.add_argument(
        "--tol-quad",
        type=float,
        default=1e-7,
        help="tolerance for quadrature-dependent comparisons (default 1e-7)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unitrack",
        description="Iterate the front-track map on a seed curve, measure the "
        "resulting curve family, and verify its structural claims.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the pipeline and persist results")
    _add_run_flags(p_run)
    p_run.add_argument(
        "--out",
        type=Path,
        default=Path("unitrack_out"),
        help="output directory (default ./unitrack_out)",
    )
    svg = p_run.add_mutually_exclusive_group()
    svg.add_argument(
        "--svg",
        action="store_true",
        dest="svg",
        default=True,
        help="write the SVG drawing (default: on)",
    )
    svg.add_argument(
        "--no-svg", action="store_false", dest="svg", help="skip the SVG drawing"
    )
    p_run.add_argument(
        "--no-figures",
        action="store_true",
        help="skip the PNG report figures",
    )

    p_ver = sub.add_parser("verify", help="check the claims and print the table")
    _add_run_flags(p_ver)
    p_ver.add_argument(
        "--manifest",
        type=Path,
        default=None,
        help="re-verify using the configuration stored in an existing manifest",
    )
    return parser


def _seed_from_args(args) -> SeedSpec:
    kind = SEED_CHOICES[args.seed]
    amplitude = 0.0 if kind == "straight" else args.amplitude
    return SeedSpec(kind=kind, amplitude=amplitude, power=args.power)


def _print_reports(reports, out=None) -> None:
    if out is None:
        out = sys.stdout  # late-bound so stream redirection is honoured
    print(f"{'claim':<26} {'status':<13} {'max violation':>14} {'tolerance':>10}", file=out)
    print("-" * 68, file=out)
    for r in reports:
        print(
            f"{r.claim_id:<26} {r.status:<13} {r.max_violation:>14.3e} "
            f"{r.tolerance:>10.0e}",
            file=out,
        )
        if r.note:
            print(f"{'':<26} note: {r.note}", file=out)


def _execute(args, seed: SeedSpec):
    tol = Tolerances(algebraic=args.tol_alg, quadrature=args.tol_quad)
    run = run_unitrack(
        seed,
        depth_max=args.depth,
        theta_max=args.theta_max,
        jet_budget=args.jet_budget,
    )
    import numpy as np

    grid = np.linspace(0.0, 1.0, args.grid)
    reports = verify_run(run, t_grid=grid, tolerances=tol)
    return run, reports, tol


def cmd_run(args) -> int:
    try:
        seed = _seed_from_args(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        run, reports, tol = _execute(args, seed)
    except (OrderBudgetExceeded, RefinementLimitExceeded, JetOverflow, NotImmersed) as e:
        print(f"numerical capacity exceeded: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    for c in run.sampled:
        write_curve_csv(out / csv_name(c.depth), c)
    manifest = build_manifest(
        run, reports, tol, grid=args.grid, min_samples=65, max_samples=500_000
    )
    write_manifest(out / "manifest.json", manifest)
    if args.svg:
        render_svg(run, out / "curves.svg")
    if not args.no_figures:
        render_figures(run, out)

    _print_reports(reports)
    print(f"\nwrote {len(run.sampled)} CSV files + manifest to {out}/")
    if any_failures(reports):
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.manifest is not None:
        try:
            data = load_manifest(args.manifest)
        except ManifestError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_CONFIG
        cfg = data["config"]
        seed = SeedSpec.from_dict(cfg["seed"])
        args.depth = int(cfg["depth_max"])
        args.theta_max = float(cfg["theta_max"])
        args.jet_budget = int(cfg["jet_budget"])
        args.grid = int(cfg.get("grid", args.grid))
        tols = cfg.get("tolerances", {})
        args.tol_alg = float(tols.get("algebraic", args.tol_alg))
        args.tol_quad = float(tols.get("quadrature", args.tol_quad))
    else:
        try:
            seed = _seed_from_args(args)
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_CONFIG
    try:
        _, reports, _ = _execute(args, seed)
    except (OrderBudgetExceeded, RefinementLimitExceeded, JetOverflow, NotImmersed) as e:
        print(f"numerical capacity exceeded: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    _print_reports(reports)
    if any_failures(reports):
        return EXIT_CHECK_FAILED
    return EXIT_OK


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags, matching the config-error contract
        return int(e.code or 0)
    if args.command == "run":
        return cmd_run(args)
    return cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
