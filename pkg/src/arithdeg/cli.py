"""Command line entry point: ``arithdeg <command> ...``.

Exit status is 0 when every check passes, 1 when some check fails and 2 on
bad input (unreadable file, malformed scenario, singular ``M``, ...).
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .degrees import dynamical_degree, height_sequence
from .heightmodel import restrict_map
from .polyalgebra import bezout_certificate, charpoly_exact, unipotent_split
from .scenario import (
    CSV_HEADER,
    Scenario,
    ScenarioError,
    SuiteResult,
    emit_outputs,
    heights_rows,
    load_scenario,
    load_suite,
    run_suite,
    text_report,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-max", type=int, help="orbit length (overrides the scenario)")
    p.add_argument("--tol", type=float, help="width of the spectral enclosure")
    p.add_argument("--tail-window", type=float, help="fraction of the orbit used by the fallback fit")


def _outputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", action="append", choices=("text", "csv", "summary"),
                   help="report files to write (repeatable; default all)")
    p.add_argument("--out", help="output directory (default $ARITHDEG_OUT or ./arithdeg_out)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arithdeg", description="Dynamical and arithmetic degrees of translated isogenies.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degree", help="print the certified dynamical degree of one scenario")
    p.add_argument("scenario")
    _common(p)

    p = sub.add_parser("orbit", help="print the height sequence as CSV")
    p.add_argument("scenario")
    _common(p)

    p = sub.add_parser("decompose", help="print the charpoly split, Bezout certificate and invariant pieces")
    p.add_argument("scenario")
    _common(p)

    p = sub.add_parser("verify", help="run the full check on one or more scenarios")
    p.add_argument("scenarios", nargs="+")
    _common(p)
    _outputs(p)

    p = sub.add_parser("suite", help="run every scenario file in a directory")
    p.add_argument("directory")
    _common(p)
    _outputs(p)
    return ap


def _override(s: Scenario, args) -> Scenario:
    over = {}
    if args.n_max is not None:
        over["n_max"] = args.n_max
    if args.tol is not None:
        over["tol"] = args.tol
    if args.tail_window is not None:
        over["tail_window"] = args.tail_window
    return replace(s, **over) if over else s


def _cmd_degree(s: Scenario, out) -> int:
    delta = dynamical_degree(s.selfmap(), s.tol)
    print(f"delta  {delta.value:.12g}  in [{float(delta.lower):.12g}, {float(delta.upper):.12g}]", file=out)
    return EXIT_OK


def _cmd_orbit(s: Scenario, out) -> int:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(heights_rows(height_sequence(s.model(), s.selfmap(), s.point(), s.n_max)))
    return EXIT_OK


def _cmd_decompose(s: Scenario, out) -> int:
    F = charpoly_exact(s.M)
    split = unipotent_split(F)
    print(f"charpoly  {F}", file=out)
    print(f"split     (X - 1)^{split.r} * ({split.f2})", file=out)
    if split.r == 0 or split.f2 == 1:
        print("no decomposition needed", file=out)
        return EXIT_OK
    cert = bezout_certificate(split.f1, split.f2)
    print(f"bezout    ({cert.g1}) * f1 + ({cert.g2}) * f2 = {cert.rho}", file=out)
    print(f"check     {'ok' if cert.check() else 'FAIL'}", file=out)
    for label, f in (("invertible", split.f1), ("unipotent", split.f2)):
        B, Mi = restrict_map(s.M, f)
        print(f"{label} piece: basis columns {[list(c) for c in zip(*B)]}, restricted M {[list(r) for r in Mi]}", file=out)
    return EXIT_OK if cert.check() else EXIT_FAIL


def _report(result: SuiteResult, args, out) -> int:
    formats = args.format or ["text", "csv", "summary"]
    out_dir = emit_outputs(result, formats, args.out)
    by_name = {s.name: s for s in result.scenarios}
    for name, r in result.reports.items():
        print(text_report(by_name[name], r), end="", file=out)
    print(f"{result.n_pass}/{len(result.reports)} passed; reports in {out_dir}", file=out)
    return result.exit_code


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "suite":
            if not Path(args.directory).is_dir():
                raise ScenarioError(f"{args.directory}: not a directory")
            scenarios = [_override(s, args) for s in load_suite(args.directory)]
            return _report(run_suite(scenarios, args.jobs), args, out)
        if args.command == "verify":
            scenarios = [_override(load_scenario(p), args) for p in args.scenarios]
            names = [s.name for s in scenarios]
            if len(set(names)) != len(names):
                raise ScenarioError("duplicate scenario names")
            return _report(run_suite(scenarios, args.jobs), args, out)
        s = _override(load_scenario(args.scenario), args)
        return {"degree": _cmd_degree, "orbit": _cmd_orbit, "decompose": _cmd_decompose}[args.command](s, out)
    except (ScenarioError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"arithdeg: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"arithdeg: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
