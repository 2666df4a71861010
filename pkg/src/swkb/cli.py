"""Command-line interface: ``swkb {list,spectrum,verify,trace,oracle}``.

Exit status is 0 on success, 1 when a check fails or a computation raises a
numeric error, and 2 for usage errors.
"""
from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from .catalog import ENTRY_FACTORIES, UnitSystem, default_catalog, make_entry
from .errors import ConfigurationError, ParameterError, SwkbError
from .maslov import eta_closed
from .oracle import default_grid, fd_spectrum
from .trace import broadened_stick_density, density_curve
from .verify import CHECK_KINDS, run_all, run_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _num(v: float) -> str:
    return f"{float(v):.12g}"


def _param(text: str):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected k=v, got {text!r}")
    try:
        return key, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parameter {key} needs a number, got {value!r}") from None


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _count(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--hbar", type=_positive, default=1.0)
    common.add_argument("--mass", type=_positive, default=0.5)
    common.add_argument("--out", help="write the artifact here instead of stdout")

    entry_opts = _Parser(add_help=False)
    entry_opts.add_argument("entry", help="catalog entry: " + ", ".join(ENTRY_FACTORIES))
    entry_opts.add_argument("--param", type=_param, action="append", default=[], metavar="K=V")

    p = _Parser(prog="swkb", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("list", parents=[common], help="catalog entries with Barclay data and eta")
    s.add_argument("--format", choices=("csv", "json"), default="csv")

    s = sub.add_parser("spectrum", parents=[common, entry_opts], help="closed-form levels")
    s.add_argument("--levels", type=_count, default=11)
    s.add_argument("--format", choices=("csv", "json"), default="csv")

    s = sub.add_parser("verify", parents=[common], help="run identity checks")
    s.add_argument("entry", nargs="?", help="entry name; omit for the whole default catalog")
    s.add_argument("--param", type=_param, action="append", default=[], metavar="K=V")
    s.add_argument("--check", choices=CHECK_KINDS, action="append", help="repeatable; default all")
    s.add_argument("--tol", type=_positive)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("json",), default="json")

    s = sub.add_parser("trace", parents=[common, entry_opts], help="smoothed trace-formula density")
    s.add_argument("--emin", type=float, required=True)
    s.add_argument("--emax", type=float, required=True)
    s.add_argument("--sigma", type=_positive, required=True)
    s.add_argument("--kmax", type=_count, default=10_000)
    s.add_argument("--samples", type=_count, required=True)
    s.add_argument("--format", choices=("csv", "json"), default="csv")

    s = sub.add_parser("oracle", parents=[common, entry_opts], help="closed form vs finite differences")
    s.add_argument("--levels", type=_count, default=5)
    s.add_argument("--points", type=int, help="interior grid points (default: automatic)")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def _table(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_num(v) if isinstance(v, (float, np.floating)) else str(v) for v in row) + "\n")
    return buf.getvalue()


def _records(header, rows) -> str:
    return json.dumps([dict(zip(header, (float(v) if isinstance(v, np.floating) else v for v in row)))
                       for row in rows], indent=2) + "\n"


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _units(args) -> UnitSystem:
    return UnitSystem(hbar=args.hbar, mass=args.mass)


def _entry(args):
    params = dict(args.param)
    if len(params) != len(args.param):
        raise UsageError("duplicate --param key")
    if args.entry not in ENTRY_FACTORIES:
        raise UsageError(f"unknown entry {args.entry!r} (known: {', '.join(ENTRY_FACTORIES)})")
    try:
        return make_entry(args.entry, params, _units(args))
    except (ParameterError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def _cmd_list(args):
    header = ("entry", "class", "A", "B", "C", "eta")
    rows = []
    for e in default_catalog(_units(args)):
        bc = e.barclay
        rows.append((e.label, bc.class_tag.value, float(bc.A), float(bc.B), float(bc.C), eta_closed(e).value))
    fmt = _records if args.format == "json" else _table
    _emit(fmt(header, rows), args.out)
    return EXIT_OK


def _cmd_spectrum(args):
    e = _entry(args)
    n_max = args.levels if e.bound_state_count is None else min(args.levels, e.bound_state_count)
    rows = [(n, float(e.spectrum_f(n))) for n in range(n_max)]
    fmt = _records if args.format == "json" else _table
    _emit(fmt(("n", "E"), rows), args.out)
    return EXIT_OK


def _cmd_verify(args):
    kinds = tuple(args.check) if args.check else CHECK_KINDS
    if args.entry is None:
        if args.param:
            raise UsageError("--param needs an entry")
        if args.tol is not None and len(kinds) > 1:
            raise UsageError("--tol applies to a single --check")
        profile = {k: args.tol for k in kinds} if args.tol is not None else None
        reports = run_all(default_catalog(_units(args)), profile, args.seed, kinds)
    else:
        e = _entry(args)
        if args.tol is not None and len(kinds) > 1:
            raise UsageError("--tol applies to a single --check")
        reports = sorted((run_check(e, k, args.tol, args.seed) for k in kinds), key=lambda r: r.kind)
    _emit(json.dumps([r.to_dict() for r in reports], indent=2) + "\n", args.out)
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.entry} {r.kind} worst={r.worst_residual:.3e} tol={r.tol:.1e}",
              file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_trace(args):
    e = _entry(args)
    if not args.emin < args.emax:
        raise UsageError("--emin must be below --emax")
    if args.emin < 0:
        raise UsageError("--emin must be non-negative")
    curve = density_curve(e, args.emin, args.emax, args.samples, args.sigma, args.kmax)
    ref = broadened_stick_density(e, curve.energies, args.sigma)
    header = ("E", "smooth", "oscillating", "total", "reference")
    rows = zip(curve.energies, curve.smooth, curve.oscillating, curve.total, ref.total)
    if args.format == "json":
        _emit(_records(header, rows), args.out)
    else:
        _emit(_table(header, rows), args.out)
    return EXIT_OK


def _cmd_oracle(args):
    e = _entry(args)
    n = args.levels
    if e.bound_state_count is not None:
        n = min(n, e.bound_state_count)
    grid = default_grid(e, n, args.points)
    fd = fd_spectrum(e, grid=grid, n_levels=n)
    exact = [float(e.spectrum_f(k)) for k in range(n)]
    scale1 = exact[1] if n > 1 else 1.0
    rows = [(k, exact[k], float(fd[k]), abs(fd[k] - exact[k]) / max(exact[k], scale1)) for k in range(n)]
    fmt = _records if args.format == "json" else _table
    _emit(fmt(("n", "exact", "fd", "rel_err"), rows), args.out)
    print(f"grid: [{_num(grid.x_lo)}, {_num(grid.x_hi)}] with {grid.points} interior points", file=sys.stderr)
    return EXIT_OK


_COMMANDS = {
    "list": _cmd_list,
    "spectrum": _cmd_spectrum,
    "verify": _cmd_verify,
    "trace": _cmd_trace,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, ConfigurationError) as exc:
        # inconsistent flag combinations surface as configuration errors
        print(f"swkb {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SwkbError, ValueError, ArithmeticError, IndexError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
