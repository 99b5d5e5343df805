"""Command-line entry point: ``ctes <command> ...``.

Exit status: 0 success, 1 usage, 2 I/O or parse failure, 3 planning or
feasibility failure, 4 coverage violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import analysis, planner
from .errors import (
    ConfigurationError,
    CoverageViolation,
    DomainError,
    ParseError,
    PlanningError,
    ValidationError,
)
from .instrument import (
    DEFAULT_INTENSITY_NOISE,
    DEFAULT_PATH_ERROR,
    DEFAULT_STEP,
    DEFAULT_WAVELENGTH_ERROR,
    Band,
    NoiseSpec,
    SetupSpec,
    fringe_period,
    max_step,
    read_interferogram,
    simulate,
    write_interferogram,
)
from .sumcore import SumConfig, nonfactor_ceiling
from .oracle import residue_max_intensity

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_PLAN, EXIT_COVERAGE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"expected key=value, got {line!r}", line=lineno)
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _default_seed():
    return int(os.environ.get("CTES_SEED", "0"))


def _add_noise_flags(p):
    p.add_argument("--noise", choices=["off", "default"], help="'default' switches on hardware-level noise")
    p.add_argument("--sigma", type=float, help="additive intensity noise (std dev)")
    p.add_argument("--dlam-cal", type=float, help="wavelength reading error bound, nm")
    p.add_argument("--dx-cal", type=float, help="arm path error bound, nm")
    p.add_argument("--amp", help="comma-separated relative arm amplitudes")
    p.add_argument("--seed", type=int, help="RNG seed (default $CTES_SEED or 0)")


def _noise_from(args):
    on = args.noise == "default"
    sigma = args.sigma if args.sigma is not None else (DEFAULT_INTENSITY_NOISE if on else 0.0)
    dlam = args.dlam_cal if args.dlam_cal is not None else (DEFAULT_WAVELENGTH_ERROR if on else 0.0)
    dx = args.dx_cal if args.dx_cal is not None else (DEFAULT_PATH_ERROR if on else 0.0)
    amp = None if not args.amp else tuple(float(a) for a in str(args.amp).split(","))
    seed = args.seed if args.seed is not None else _default_seed()
    return NoiseSpec(float(sigma), float(dlam), float(dx), amp, int(seed))


def _apply_config(args, parser_defaults):
    if getattr(args, "config", None):
        for key, value in read_config(args.config).items():
            if not hasattr(args, key):
                raise UsageError(f"unknown config key {key!r}")
            if getattr(args, key) is None:
                setattr(args, key, value)
    for key, value in parser_defaults.items():
        if getattr(args, key) is None:
            setattr(args, key, value)


def _emit(text, out):
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------

def cmd_simulate(args):
    _apply_config(args, {"M": 3, "j": 2, "dl": DEFAULT_STEP, "out": "interferogram.csv"})
    try:
        x = float(args.x)
        band = Band.parse(args.band)
        cfg = SumConfig(int(args.M), int(args.j))
    except (TypeError, ValueError):
        raise UsageError("simulate needs --x > 0 and --band LO:HI") from None
    if not x > 0:
        raise UsageError(f"--x must be positive, got {x}")
    dl = float(args.dl)
    bound = max_step(cfg, x, band)
    print(f"fringe period at {band.lam_min} nm: {bound * 8:.6g} nm")
    setup = SetupSpec(cfg, x, band, dl, _noise_from(args))
    ig = simulate(setup)
    write_interferogram(ig, args.out)
    per_fringe = fringe_period(setup, band.lam_min) / dl
    print(f"samples per fringe (worst case): {per_fringe:.1f}; required >= 8")
    print(f"wrote {len(ig)} samples to {args.out}")
    if args.plot:
        from .plotting import plot_interferogram
        plot_interferogram(ig, args.plot)
    return EXIT_OK


def _plot_name(base, N, many):
    if not many:
        return base
    stem, dot, ext = base.rpartition(".")
    return f"{stem}_N{N}.{ext}" if dot else f"{base}_N{N}"


def cmd_factor(args):
    ig = read_interferogram(args.file)
    if any(N < 2 for N in args.N):
        raise UsageError("every N must be >= 2")
    reports = analysis.multi_scan(ig, args.N, args.rho, args.include_two)
    for rep in reports:
        if rep.coverage_empty:
            print(f"warning: no trial factors of N = {rep.N} fall in the band", file=sys.stderr)
    _emit(json.dumps([r.to_dict() for r in reports], indent=2) + "\n", args.out)
    if args.plot:
        from .plotting import plot_factor_report
        for rep in reports:
            plot_factor_report(ig, rep, _plot_name(args.plot, rep.N, len(reports) > 1))
    return EXIT_OK


def cmd_plot(args):
    from .plotting import plot_interferogram
    ig = read_interferogram(args.file)
    plot_interferogram(ig, args.out, args.N)
    return EXIT_OK


def cmd_plan(args):
    band = Band.parse(args.band)
    p = planner.plan(args.nmin, args.nmax, band, args.method, args.x0)
    p.save(args.out)
    print(f"method {p.method.value}: n = {p.n} interferograms, x0 = {p.x0:.12g} nm, c = {p.c:.12g}")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_verify(args):
    p = planner.SequencePlan.load(args.plan)
    for N in args.N:
        try:
            proof = planner.verify_coverage(p, N)
        except CoverageViolation as exc:
            print(json.dumps({"N": N, "gaps": [list(g) for g in exc.gaps]}))
            print(f"violation: {exc}", file=sys.stderr)
            return EXIT_COVERAGE
        print(f"N = {N}: covered, no gaps")
        print(json.dumps(proof.to_dict()))
    return EXIT_OK


def _ell_range(text):
    for sep in ("..", ":", "-"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return range(int(lo), int(hi) + 1)
    return range(int(text), int(text) + 1)


def cmd_bound(args):
    cfg = SumConfig(args.M, args.j)
    ells = _ell_range(args.ell)
    if ells.start < 2:
        raise UsageError("trial factors start at 2")
    lines = ["ell,worst_residue,ceiling,threshold"]
    for ell in ells:
        r, _ = residue_max_intensity(cfg, ell)
        c = nonfactor_ceiling(cfg, ell)
        lines.append(f"{ell},{r},{c:.12g},{c + args.rho * (1 - c):.12g}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_sequence(args):
    _apply_config(args, {})
    p = planner.SequencePlan.load(args.plan)
    cfg = SumConfig(args.M, args.j)
    reports = planner.run_sequence(p, args.N, _noise_from(args), args.dl, cfg, args.rho)
    _emit(json.dumps([r.to_dict() for r in reports], indent=2) + "\n", args.out)
    incomplete = [r.N for r in reports if not r.complete]
    if incomplete:
        print(f"incomplete coverage for N = {incomplete}", file=sys.stderr)
        return EXIT_COVERAGE
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="ctes", description="Exponential-sum interferogram factoring toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="synthesize an interferogram file")
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--M", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--x", type=float, help="displacement unit, nm")
    p.add_argument("--band", help="LO:HI in nm")
    p.add_argument("--dl", type=float, help=f"grid step, nm (default {DEFAULT_STEP})")
    p.add_argument("-o", "--out")
    p.add_argument("--plot", help="also render the interferogram to this file")
    _add_noise_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("factor", help="classify trial factors of N from an interferogram")
    p.add_argument("file")
    p.add_argument("--N", type=int, nargs="+", required=True)
    p.add_argument("--rho", type=float, default=analysis.DEFAULT_RHO)
    p.add_argument("--include-two", action="store_true")
    p.add_argument("-o", "--out", default="-")
    p.add_argument("--plot", help="figure path (svg/png/pdf); _N<value> is appended for several N")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("plot", help="render an interferogram file")
    p.add_argument("file")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--N", type=int, help="rescale the axis to xi_N")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("plan", help="plan an interferogram sequence for a range of N")
    p.add_argument("--method", default="2")
    p.add_argument("--nmin", type=int, default=1)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--band", default="400:800")
    p.add_argument("--x0", type=float)
    p.add_argument("-o", "--out", default="plan.json")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="check a plan covers the trial factors of N")
    p.add_argument("plan")
    p.add_argument("--N", type=int, nargs="+", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound", help="tabulate non-factor intensity ceilings")
    p.add_argument("--M", type=int, default=3)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--ell", required=True, help="one value or LO..HI")
    p.add_argument("--rho", type=float, default=analysis.DEFAULT_RHO)
    p.add_argument("-o", "--out", default="-")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sequence", help="simulate and scan every interferogram of a plan")
    p.add_argument("plan")
    p.add_argument("--N", type=int, nargs="+", required=True)
    p.add_argument("--M", type=int, default=3)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--dl", type=float, help="grid step, nm (default: 0.01, finer where fringes need it)")
    p.add_argument("--rho", type=float, default=analysis.DEFAULT_RHO)
    p.add_argument("--config", help="key=value file for the noise flags")
    p.add_argument("-o", "--out", default="-")
    _add_noise_flags(p)
    p.set_defaults(func=cmd_sequence)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ctes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ParseError, ValidationError) as exc:
        print(f"ctes: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigurationError, PlanningError) as exc:
        print(f"ctes: {exc}", file=sys.stderr)
        return EXIT_PLAN
    except DomainError as exc:
        print(f"ctes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
