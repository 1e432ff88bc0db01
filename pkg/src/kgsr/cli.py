"""Command-line interface.

Exit status: 0 on success, 1 for usage or parse errors, 2 when a
single-point solve finds no root (or a verification/AB check fails).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import heun
from .config_io import ConfigError, apply_overrides, format_config, load_config
from .model import PhysicalConfig, QuantumNumbers, radial_coefficients
from .oracle import GridSpec, OracleError
from .spectrum import (
    DEFAULT_GRID_POINTS,
    DEFAULT_TOL,
    NoBoundStateError,
    RootSearchSpec,
    ab_flux_shift_check,
    select_branch,
    solve_energy,
)
from .sweep import (
    SweepRow,
    SweepSpec,
    SweepTable,
    apply_point,
    format_number,
    level_rows,
    read_table,
    run_sweep,
    verify_rows,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected EMIN,EMAX, got {text!r}") from None
    return lo, hi


def _family(text: str) -> tuple[str, tuple]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=v1,v2,..., got {text!r}")
    key, values = text.split("=", 1)
    key = key.strip()
    cast = int if key in ("n", "l") else float
    try:
        return key, tuple(cast(v) for v in values.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad value list for {key!r}: {values!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model")
    g.add_argument("--config", metavar="PATH", help="key = value configuration file")
    g.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                   help="override a configuration value (repeatable)")
    g.add_argument("--n", type=int, default=0, help="radial quantum number (polynomial degree)")
    g.add_argument("--l", type=int, default=0, help="angular quantum number")
    g.add_argument("--k", type=float, default=0.0, help="axial wavenumber")
    g.add_argument("--tol", type=float, default=DEFAULT_TOL, help="root residual tolerance")
    g.add_argument("--window", type=_window, metavar="EMIN,EMAX", help="energy search window")
    g.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS,
                   help="energy scan resolution")
    g.add_argument("--include-negative", action="store_true",
                   help="also report the negative-energy branch")
    g.add_argument("--print-config", action="store_true",
                   help="print the effective configuration and exit")
    g.add_argument("--out", metavar="PATH", help="output file (default stdout)")

    oracle_opts = argparse.ArgumentParser(add_help=False)
    o = oracle_opts.add_argument_group("oracle")
    o.add_argument("--points", type=int, default=4000, help="finite-difference grid points")
    o.add_argument("--r-max", type=float, help="outer radius (default: sized from a2)")

    parser = _Parser(prog="kgsr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("spectrum", parents=[common], help="energy levels at one parameter point")

    sp = sub.add_parser("sweep", parents=[common, oracle_opts], help="parameter sweep to CSV")
    sp.add_argument("--param", required=True, help="swept parameter")
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--family", type=_family, metavar="KEY=V1,V2,...",
                    help="one curve per value of this parameter")
    sp.add_argument("--with-oracle", action="store_true", help="add finite-difference energies")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")

    op = sub.add_parser("oracle", parents=[common, oracle_opts],
                        help="analytic vs finite-difference comparison table")
    op.add_argument("--family", type=_family, metavar="KEY=V1,V2,...",
                    help="tabulate over these values (e.g. n=0,1,2)")

    wp = sub.add_parser("wavefunction", parents=[common], help="tabulate s(r) as r,s CSV")
    wp.add_argument("--energy", type=float, help="use this energy instead of solving")
    wp.add_argument("--rmax", type=float, help="largest radius (default: a2 r^2/2 = 40)")
    wp.add_argument("--samples", type=int, default=401)
    wp.add_argument("--terms", type=int, default=heun.DEFAULT_TERMS, help="series length N")
    wp.add_argument("--normalize", action="store_true",
                    help="divide by sqrt(int s^2 r dr) over [0, rmax]")

    ap = sub.add_parser("check-ab", parents=[common], help="Aharonov-Bohm flux-shift identity")
    ap.add_argument("--tau", type=int, action="append", help="flux quanta (repeatable, default 1)")
    ap.add_argument("--sign", type=int, choices=(1, -1), default=1)

    vp = sub.add_parser("verify", parents=[common], help="re-check residuals of a sweep CSV")
    vp.add_argument("csv", help="CSV written by 'sweep' or 'spectrum'")
    return parser


def _config(args) -> PhysicalConfig:
    cfg = load_config(args.config) if args.config else PhysicalConfig()
    return apply_overrides(cfg, args.set)


def _spec(args) -> RootSearchSpec:
    lo, hi = args.window if args.window else (None, None)
    return RootSearchSpec(E_min=lo, E_max=hi, grid_points=args.grid_points, tol=args.tol)


def _grid(args) -> GridSpec:
    return GridSpec(r_max=args.r_max, points=args.points)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_spectrum(args, cfg, qn) -> int:
    levels = solve_energy(cfg, qn, _spec(args))
    if not args.include_negative:
        levels = [lv for lv in levels if lv.E > 0]
    if not levels:
        print("kgsr: no root in the search window", file=sys.stderr)
        return EXIT_NUMERIC
    rows = [SweepRow("", None, "", None, lv.n, lv.l, lv.k, lv.E, lv.residual) for lv in levels]
    _emit(args, SweepTable(rows).to_csv())
    return EXIT_OK


def _cmd_sweep(args, cfg, qn) -> int:
    family, values = args.family if args.family else ("", (None,))
    sweep = SweepSpec(args.param, args.start, args.stop, args.steps, family, values)
    table = run_sweep(cfg, qn, sweep, args.with_oracle, spec=_spec(args), grid=_grid(args),
                      include_negative=args.include_negative, jobs=args.jobs)
    _emit(args, table.to_csv())
    return EXIT_OK


def _cmd_oracle(args, cfg, qn) -> int:
    family, values = args.family if args.family else ("", (None,))
    rows = []
    for value in values:
        point_cfg, point_qn = apply_point(cfg, qn, family, value) if family else (cfg, qn)
        rows += level_rows(point_cfg, point_qn, spec=_spec(args), grid=_grid(args),
                           include_negative=args.include_negative, with_oracle=True,
                           family=(family, value))
    _emit(args, SweepTable(rows).to_csv())
    return EXIT_OK if any(r.E is not None for r in rows) else EXIT_NUMERIC


def _cmd_wavefunction(args, cfg, qn) -> int:
    E = args.energy
    if E is None:
        level = select_branch(solve_energy(cfg, qn, _spec(args)),
                              "negative" if args.include_negative else "positive")
        if level is None:
            print("kgsr: no root in the search window", file=sys.stderr)
            return EXIT_NUMERIC
        E = level.E
    rc = radial_coefficients(cfg, qn, E)
    rc.require_confining()
    r_max = args.rmax if args.rmax else math.sqrt(80.0 / rc.a2)
    r = np.linspace(0.0, r_max, args.samples)
    norm = heun.wavefunction_norm(rc, r_max, args.terms) if args.normalize else None
    s = heun.radial_wavefunction(rc, args.terms, r, norm=norm)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("r", "s"))
    for ri, si in zip(r, s):
        writer.writerow((format_number(ri), format_number(si)))
    _emit(args, buf.getvalue())
    return EXIT_OK


def _cmd_check_ab(args, cfg, qn) -> int:
    taus = args.tau or [1]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("tau", "sign", "PhiB_shifted", "l_shifted", "E_shifted",
                     "PhiB_reference", "l_reference", "E_reference", "abs_diff"))
    worst = 0.0
    for tau in taus:
        shifted, ref, diff = ab_flux_shift_check(cfg, qn, tau, _spec(args), sign=args.sign)
        worst = max(worst, diff)
        writer.writerow((
            tau, args.sign, format_number(cfg.PhiB + args.sign * 2 * math.pi * tau / cfg.e),
            qn.l, format_number(shifted.E), format_number(cfg.PhiB), ref.l,
            format_number(ref.E), format_number(diff),
        ))
    _emit(args, buf.getvalue())
    return EXIT_OK if worst <= 2 * args.tol else EXIT_NUMERIC


def _cmd_verify(args, cfg, qn) -> int:
    with open(args.csv, encoding="utf-8") as fh:
        rows = read_table(fh.read())
    bad = verify_rows(cfg, rows, args.tol)
    checked = sum(r.E is not None for r in rows)
    for i, res in bad:
        print(f"row {i + 1}: |residual| = {res!r} > {args.tol!r}", file=sys.stderr)
    print(f"checked {checked} roots, {len(bad)} above tolerance")
    return EXIT_OK if not bad else EXIT_NUMERIC


COMMANDS = {
    "spectrum": _cmd_spectrum,
    "sweep": _cmd_sweep,
    "oracle": _cmd_oracle,
    "wavefunction": _cmd_wavefunction,
    "check-ab": _cmd_check_ab,
    "verify": _cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = _config(args)
        if args.print_config:
            _emit(args, format_config(cfg))
            return EXIT_OK
        qn = QuantumNumbers(args.n, args.l, args.k)
        return COMMANDS[args.command](args, cfg, qn)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"kgsr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoBoundStateError, OracleError, ArithmeticError) as exc:
        print(f"kgsr: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
