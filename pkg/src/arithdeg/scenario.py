"""Scenario documents, suite runs and report files.

A scenario is a small YAML mapping::

    name: doubling
    M: [[2]]
    G: [[1]]
    Q: [[0]]
    P: [[1]]
    density: dense_by_construction
    options: {n_max: 80, tol: 1.0e-9, tail_window: 0.25}

``d`` and ``k`` may be given and are then checked against the matrices.
Rationals are written as integers or as ``"p/q"`` strings.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

import yaml

from . import _exact
from .degrees import DegreeReport, TheoremOptions, verify_theorem
from .heightmodel import AbelianModel, MWModel, PointCoords, SelfMap
from .polyalgebra import BezoutCertificate, IntPoly, UnipotentSplit

__all__ = [
    "ScenarioError",
    "Scenario",
    "SuiteResult",
    "parse_scenario",
    "dump_scenario",
    "load_scenario",
    "load_suite",
    "run_scenario",
    "run_suite",
    "emit_outputs",
    "heights_rows",
    "summary_document",
    "OUT_ENV",
]

OUT_ENV = "ARITHDEG_OUT"
DENSITIES = ("dense_by_construction", "non_dense", "unknown")
CSV_HEADER = ("n", "h_n_numerator_digits", "log_h_n", "running_alpha")


class ScenarioError(ValueError):
    """Malformed or invalid scenario input."""


@dataclass(frozen=True)
class Scenario:
    name: str
    M: tuple
    G: tuple
    Q: tuple
    P: tuple
    density: str = "dense_by_construction"
    n_max: int = 80
    tol: float = 1e-9
    tail_window: float = 0.25

    def __post_init__(self):
        def mat(field_name, value, rational):
            if isinstance(value, PointCoords):
                value = value.coords
            try:
                m = _exact.as_matrix(value, rational=rational)
                return _exact.as_matrix(m)
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise ScenarioError(f"{field_name}: {exc}") from None

        M = mat("M", self.M, False)
        if any(not isinstance(x, int) for row in M for x in row):
            raise ScenarioError("M: entries must be integers")
        if not M or not _exact.is_square(M):
            raise ScenarioError("M: must be a nonempty square matrix")
        if _exact.det(M) == 0:
            raise ScenarioError("M singular")
        G = mat("G", self.G, True)
        try:
            MWModel(G)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from None
        d, k = len(M), len(G)
        Q, P = mat("Q", self.Q, True), mat("P", self.P, True)
        for nm, X in (("Q", Q), ("P", P)):
            if _exact.shape(X) != (d, k):
                raise ScenarioError(f"{nm}: expected a {d}x{k} matrix, got {_exact.shape(X)[0]}x{_exact.shape(X)[1]}")
        if self.density not in DENSITIES:
            raise ScenarioError(f"density: must be one of {', '.join(DENSITIES)}")
        if int(self.n_max) < 8:
            raise ScenarioError("options.n_max: must be at least 8")
        if not self.tol > 0:
            raise ScenarioError("options.tol: must be positive")
        if not 0 < self.tail_window <= 1:
            raise ScenarioError("options.tail_window: must lie in (0, 1]")
        for nm, v in (("M", M), ("G", G), ("Q", Q), ("P", P)):
            object.__setattr__(self, nm, v)
        object.__setattr__(self, "n_max", int(self.n_max))
        object.__setattr__(self, "tol", float(self.tol))
        object.__setattr__(self, "tail_window", float(self.tail_window))

    @property
    def d(self) -> int:
        return len(self.M)

    @property
    def k(self) -> int:
        return len(self.G)

    def model(self) -> AbelianModel:
        return AbelianModel(self.d, MWModel(self.G))

    def selfmap(self) -> SelfMap:
        return SelfMap(self.M, PointCoords(self.Q))

    def point(self) -> PointCoords:
        return PointCoords(self.P)

    def options(self, **over) -> TheoremOptions:
        return TheoremOptions(n_max=self.n_max, tol=self.tol, tail_window=self.tail_window, **over)


# --- documents ------------------------------------------------------------


def _parse_rational(x, where: str) -> Fraction:
    if isinstance(x, bool):
        raise ScenarioError(f"{where}: booleans are not numbers")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ScenarioError(f"{where}: cannot read {x!r} as a rational") from None
    raise ScenarioError(f"{where}: expected an integer or a 'p/q' string, got {type(x).__name__}")


def _parse_matrix(doc: dict, key: str) -> tuple:
    if key not in doc:
        raise ScenarioError(f"{key}: missing")
    rows = doc[key]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ScenarioError(f"{key}: expected a nonempty list of rows")
    return tuple(tuple(_parse_rational(x, f"{key}[{i}][{j}]") for j, x in enumerate(r)) for i, r in enumerate(rows))


def scenario_from_dict(doc: Any) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("document must be a mapping")
    known = {"name", "d", "k", "M", "G", "Q", "P", "density", "options"}
    extra = set(doc) - known
    if extra:
        raise ScenarioError(f"unknown field(s): {', '.join(sorted(extra))}")
    opts = doc.get("options") or {}
    if not isinstance(opts, dict) or set(opts) - {"n_max", "tol", "tail_window"}:
        raise ScenarioError("options: only n_max, tol and tail_window are allowed")
    M = _parse_matrix(doc, "M")
    if any(x.denominator != 1 for row in M for x in row):
        raise ScenarioError("M: entries must be integers")
    try:
        s = Scenario(
            name=str(doc.get("name", "scenario")),
            M=tuple(tuple(int(x) for x in row) for row in M),
            G=_parse_matrix(doc, "G"),
            Q=_parse_matrix(doc, "Q"),
            P=_parse_matrix(doc, "P"),
            density=doc.get("density", "dense_by_construction"),
            n_max=opts.get("n_max", 80),
            tol=float(opts.get("tol", 1e-9)),
            tail_window=float(opts.get("tail_window", 0.25)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(str(exc)) from None
    for key, actual in (("d", s.d), ("k", s.k)):
        if key in doc and doc[key] != actual:
            raise ScenarioError(f"{key}: declared {doc[key]} but the matrices give {actual}")
    return s


def parse_scenario(text: str) -> Scenario:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"not valid YAML: {exc}") from None
    return scenario_from_dict(doc)


def _fmt_q(x) -> int | str:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_matrix(A) -> list:
    return [[_fmt_q(x) for x in row] for row in A]


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "name": s.name,
        "d": s.d,
        "k": s.k,
        "M": _fmt_matrix(s.M),
        "G": _fmt_matrix(s.G),
        "Q": _fmt_matrix(s.Q),
        "P": _fmt_matrix(s.P),
        "density": s.density,
        "options": {"n_max": s.n_max, "tol": s.tol, "tail_window": s.tail_window},
    }


def dump_scenario(s: Scenario) -> str:
    """Canonical YAML text; ``parse_scenario(dump_scenario(s)) == s``."""
    return yaml.safe_dump(scenario_to_dict(s), sort_keys=False, default_flow_style=None)


def load_scenario(path: str | os.PathLike) -> Scenario:
    return parse_scenario(Path(path).read_text())


def load_suite(directory: str | os.PathLike) -> list[Scenario]:
    paths = sorted(p for p in Path(directory).iterdir() if p.suffix in (".yaml", ".yml"))
    scenarios = [load_scenario(p) for p in paths]
    names = [s.name for s in scenarios]
    dupes = {n for n in names if names.count(n) > 1}
    if dupes:
        raise ScenarioError(f"duplicate scenario names: {', '.join(sorted(dupes))}")
    return sorted(scenarios, key=lambda s: s.name)


# --- running --------------------------------------------------------------


def run_scenario(s: Scenario, **overrides) -> DegreeReport:
    """Deterministic: the same scenario always yields the same report."""
    s = replace(s, **overrides) if overrides else s
    return verify_theorem(s.model(), s.selfmap(), s.point(), s.density, s.options())


@dataclass
class SuiteResult:
    scenarios: list[Scenario]
    reports: dict[str, DegreeReport] = field(default_factory=dict)

    @property
    def n_pass(self) -> int:
        return sum(1 for r in self.reports.values() if r.passed)

    @property
    def n_fail(self) -> int:
        return len(self.reports) - self.n_pass

    @property
    def failures(self) -> list[str]:
        return [name for name, r in self.reports.items() if not r.passed]

    @property
    def exit_code(self) -> int:
        return 0 if self.n_fail == 0 else 1


def _run_one(s: Scenario) -> tuple[str, DegreeReport]:
    return s.name, run_scenario(s)


def run_suite(scenarios: Iterable[Scenario], jobs: int = 1) -> SuiteResult:
    scenarios = sorted(scenarios, key=lambda s: s.name)
    if jobs > 1 and len(scenarios) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            pairs = list(ex.map(_run_one, scenarios))
    else:
        pairs = [_run_one(s) for s in scenarios]
    return SuiteResult(scenarios, dict(sorted(pairs)))


# --- outputs --------------------------------------------------------------


def _g12(x: float) -> float:
    return float(f"{x:.12g}")


def _log_q(h: Fraction) -> float:
    return math.log(h.numerator) - math.log(h.denominator)


def heights_rows(heights: list[Fraction]) -> list[tuple]:
    """Rows ``(n, digits of numerator of h_n, log h_n, h_n^(1/n))``."""
    rows = []
    for n, h in enumerate(heights):
        h = Fraction(h)
        digits = len(str(abs(h.numerator)))
        if h > 0:
            lg = _log_q(h)
            run = math.exp(lg / n) if n > 0 else ""
            rows.append((n, digits, f"{lg:.12g}", f"{run:.12g}" if n > 0 else ""))
        else:
            rows.append((n, digits, "", ""))
    return rows


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return _g12(x)
    if isinstance(x, Fraction):
        return _fmt_q(x)
    if isinstance(x, IntPoly):
        return list(x.coeffs)
    if isinstance(x, PointCoords):
        return _fmt_matrix(x.coords)
    if isinstance(x, BezoutCertificate):
        return {"f1": list(x.f1.coeffs), "f2": list(x.f2.coeffs), "g1": list(x.g1.coeffs),
                "g2": list(x.g2.coeffs), "rho": x.rho}
    if isinstance(x, UnipotentSplit):
        return {"r": x.r, "f2": list(x.f2.coeffs)}
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "__dataclass_fields__"):
        return {k: _jsonable(getattr(x, k)) for k in x.__dataclass_fields__}
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _cert_doc(c) -> dict:
    return {"value": _g12(c.value), "lower": _g12(float(c.lower)), "upper": _g12(float(c.upper)),
            "width": _g12(float(c.width)), "lower_exact": _fmt_q(c.lower), "upper_exact": _fmt_q(c.upper)}


def report_document(s: Scenario, r: DegreeReport) -> dict:
    a = r.alpha
    certs = dict(r.certificates)
    factors = certs.pop("factors", None)
    doc = {
        "scenario": scenario_to_dict(s),
        "route": r.route,
        "density": r.density,
        "verdict": r.verdict,
        "gap": _g12(r.gap),
        "delta": _cert_doc(r.delta),
        "alpha": {"value": _g12(a.value), "mode": a.mode, "n_used": a.n_used, "poly_degree_fit": a.poly_degree_fit,
                  "residual": _g12(a.residual), "method": a.method,
                  "recurrence": list(a.recurrence.coeffs) if a.recurrence is not None else None},
        "checks": dict(sorted(r.checks.items())),
        "certificates": _jsonable(certs),
    }
    if factors:
        doc["factors"] = {
            k: (_cert_doc(v) if k.startswith("delta") else {"value": _g12(v.value), "mode": v.mode})
            for k, v in factors.items()
        }
    return doc


def summary_document(result: SuiteResult) -> dict:
    by_name = {s.name: s for s in result.scenarios}
    return {
        "n_scenarios": len(result.reports),
        "n_pass": result.n_pass,
        "n_fail": result.n_fail,
        "failures": result.failures,
        "reports": {name: report_document(by_name[name], r) for name, r in result.reports.items()},
    }


def text_report(s: Scenario, r: DegreeReport) -> str:
    lines = [
        f"scenario {s.name}  (d={s.d}, k={s.k}, density={r.density})",
        f"  route    {r.route}",
        f"  delta    {r.delta.value:.12g}  in [{float(r.delta.lower):.12g}, {float(r.delta.upper):.12g}]",
        f"  alpha    {r.alpha.value:.12g}  ({r.alpha.mode}, n={r.alpha.n_used}, method={r.alpha.method})",
        f"  gap      {r.gap:.3e}",
        f"  verdict  {r.verdict}",
        "  checks",
    ]
    lines += [f"    {'ok  ' if v else 'FAIL'} {k}" for k, v in r.checks.items()]
    return "\n".join(lines) + "\n"


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_ENV, "arithdeg_out"))


def emit_outputs(result: SuiteResult, formats: Iterable[str] = ("text", "csv", "summary"),
                 out_dir: str | os.PathLike | None = None) -> Path:
    """Write per-scenario text reports, height CSVs and ``summary.json``."""
    out = Path(out_dir) if out_dir is not None else default_out_dir()
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    if not os.access(out, os.W_OK):
        raise PermissionError(f"output directory {out} is not writable")
    formats = set(formats)
    by_name = {s.name: s for s in result.scenarios}
    for name, r in result.reports.items():
        if "text" in formats:
            (out / f"{name}.txt").write_text(text_report(by_name[name], r))
        if "csv" in formats:
            with open(out / f"{name}_heights.csv", "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(CSV_HEADER)
                w.writerows(heights_rows(r.heights))
    if "summary" in formats:
        (out / "summary.json").write_text(json.dumps(summary_document(result), indent=2, sort_keys=False) + "\n")
    return out
