"""Scenario-driven command line front end.

A scenario is a single YAML document with nested key-value sections::

    manifolds:
      M: {kind: torus, dim: 2}            # analytic model, or
      X: {triangulation: octahedron.tri}  # a triangulation file (path
                                          # relative to the scenario file)
    maps:
      f: {domain: M, codomain: M, expr: "2*x + y; x + y"}
      g: {domain: M, codomain: M, family: identity}
      a: {domain: X, codomain: X, vertices: [5, 3, 4, 1, 2, 0]}
    tasks:
      - {task: betti, manifold: X, expect: [1, 0, 1]}
      - {task: lefschetz, f: f, g: g, expect: -1}
    config:
      tolerance: 1.0e-6
      quadrature_order: 8
      grid: 40
      seed: 0
      max_budget: 2000000

Map families: `expr` (chart expressions; integer-affine torus maps are
recognized exactly, with optional `w_expr` for the second sphere chart),
`family: identity`, `family: torus_linear` with `matrix` and `offset`,
`family: circle_power` with `k` and `offset`, `family: rational` with
integer coefficient lists `p`, `q` (low degree first), and `vertices` for
simplicial vertex maps.

Tasks: betti | pairing | induced | lefschetz | indices | residue_check |
degree.  Expectations are optional; numeric comparisons use the scenario
tolerance, exact rational results compare exactly.

Triangulation files list one signed top simplex per line: an optional sign
token (+, -, +1, -1) followed by vertex ids; '#' starts a comment.  Without
a sign token the orientation is read from the permutation parity of the
vertex order.

Exit codes: 0 all expectations met, 1 expectation mismatch, 2 input error,
3 numerical non-convergence.  JSON reports contain every residual and
provenance tag, never the seed or wall-clock timings, and serialize with
sorted keys so identical scenario + config gives byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from . import analytic, cohomology, coincidence, simplicial
from .analytic import (
    ChartExpr,
    CirclePower,
    ManifoldDescriptor,
    SmoothMapSpec,
    SphereRational,
    TorusLinear,
)
from .degree import (
    BoundaryZero,
    DegreeConfig,
    LocalZeroProblem,
    NoConvergence,
    OracleInconclusive,
    local_degree_jacobian,
    local_degree_kronecker,
    local_degree_oracle,
    winding_number,
    fd_jacobian,
)
from .exact_linalg import RationalMatrix
from .expressions import ArityMismatch, ParseError, compile_map, parse_expressions

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

_INPUT_ERRORS = (
    ParseError,
    ArityMismatch,
    analytic.NotWellDefinedOnQuotient,
    analytic.FamilyMismatch,
    analytic.ChartDomainError,
    simplicial.NotClosedManifold,
    simplicial.NotOrientable,
    simplicial.NotSimplicial,
    simplicial.DegreeOutOfRange,
    cohomology.DegeneratePairing,
    coincidence.DimensionMismatch,
    coincidence.FrameNotTransverse,
)
_NUMERIC_ERRORS = (
    NoConvergence,
    BoundaryZero,
    OracleInconclusive,
    analytic.DegreeUnresolved,
    coincidence.DetectionInconclusive,
    coincidence.NonIntegerTrace,
)


class ScenarioError(Exception):
    pass


@dataclass
class TaskResult:
    task: str
    label: str
    values: dict
    expected: Optional[dict]
    passed: Optional[bool]
    error: Optional[str] = None
    error_kind: Optional[str] = None  # "numeric" when it maps to exit 3


@dataclass
class RunReport:
    scenario: str
    tasks: list
    config: dict
    seed: int
    timings: dict = field(default_factory=dict)

    def exit_code(self) -> int:
        if any(t.error_kind == "numeric" for t in self.tasks):
            return EXIT_NUMERIC
        if any(t.error for t in self.tasks):
            return EXIT_INPUT
        if any(t.passed is False for t in self.tasks):
            return EXIT_MISMATCH
        return EXIT_OK


# -- scenario loading -----------------------------------------------------------


def load_triangulation(path: Path) -> simplicial.OrientedComplex:
    tops = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        sign = None
        if parts[0] in ("+", "-", "+1", "-1"):
            sign = 1 if parts[0] in ("+", "+1") else -1
            parts = parts[1:]
        try:
            verts = tuple(int(p) for p in parts)
        except ValueError as exc:
            raise ScenarioError("%s:%d: bad simplex line %r" % (path, lineno, raw)) from exc
        if not verts:
            raise ScenarioError("%s:%d: empty simplex" % (path, lineno))
        tops.append((sign, verts) if sign is not None else verts)
    return simplicial.build_complex(tops)


def _frac(value) -> Fraction:
    if isinstance(value, bool):
        raise ScenarioError("expected a number, got %r" % value)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        return Fraction(value)
    raise ScenarioError("expected a number, got %r" % value)


class Scenario:
    """Parsed scenario: named manifolds and maps plus a task list."""

    def __init__(self, doc: dict, base_dir: Path):
        if not isinstance(doc, dict):
            raise ScenarioError("scenario document must be a mapping")
        self.manifolds = {}
        self.complexes = {}
        for name, spec in (doc.get("manifolds") or {}).items():
            self._add_manifold(name, spec, base_dir)
        self.maps = {}
        self.simplicial_maps = {}
        for name, spec in (doc.get("maps") or {}).items():
            self._add_map(name, spec)
        self.tasks = doc.get("tasks") or []
        if not isinstance(self.tasks, list):
            raise ScenarioError("tasks must be a list")
        self.config = doc.get("config") or {}

    def _add_manifold(self, name, spec, base_dir: Path):
        if not isinstance(spec, dict):
            raise ScenarioError("manifold %r must be a mapping" % name)
        if "triangulation" in spec:
            path = Path(spec["triangulation"])
            if not path.is_absolute():
                path = base_dir / path
            if not path.exists():
                raise ScenarioError("triangulation file %s not found" % path)
            self.complexes[name] = load_triangulation(path)
            return
        kind = spec.get("kind")
        dim = spec.get("dim")
        if kind == "torus":
            self.manifolds[name] = analytic.torus(int(dim))
        elif kind == "sphere":
            self.manifolds[name] = analytic.sphere(int(dim))
        else:
            raise ScenarioError("manifold %r: unknown kind %r" % (name, kind))

    def _add_map(self, name, spec):
        if not isinstance(spec, dict):
            raise ScenarioError("map %r must be a mapping" % name)
        dom = spec.get("domain")
        cod = spec.get("codomain", dom)
        if "vertices" in spec:
            src = self.complex_named(dom)
            tgt = self.complex_named(cod)
            smap = simplicial.SimplicialMapSpec(src, tgt, tuple(spec["vertices"]))
            simplicial.validate_simplicial_map(smap)
            self.simplicial_maps[name] = smap
            return
        domain = self.manifold_named(dom)
        codomain = self.manifold_named(cod)
        if "expr" in spec:
            self.maps[name] = analytic.parse_map_expr(
                spec["expr"], domain, codomain, w_text=spec.get("w_expr")
            )
            return
        family = spec.get("family")
        if family == "identity":
            if not analytic.is_torus_like(domain):
                fam = SphereRational((0, 1), (1,))
            else:
                n = domain.dim
                fam = TorusLinear(
                    tuple(tuple(int(i == j) for j in range(n)) for i in range(n)),
                    tuple(Fraction(0) for _ in range(n)),
                )
            self.maps[name] = SmoothMapSpec(domain, codomain, fam)
        elif family == "torus_linear":
            matrix = tuple(tuple(int(v) for v in row) for row in spec["matrix"])
            offset = tuple(_frac(v) for v in spec.get("offset", [0] * len(matrix)))
            self.maps[name] = SmoothMapSpec(domain, codomain, TorusLinear(matrix, offset))
        elif family == "circle_power":
            fam = CirclePower(int(spec["k"]), _frac(spec.get("offset", 0)))
            self.maps[name] = SmoothMapSpec(domain, codomain, fam)
        elif family == "rational":
            fam = SphereRational(tuple(int(v) for v in spec["p"]),
                                 tuple(int(v) for v in spec["q"]))
            self.maps[name] = SmoothMapSpec(domain, codomain, fam)
        else:
            raise ScenarioError("map %r: unknown family %r" % (name, family))

    def manifold_named(self, name) -> ManifoldDescriptor:
        if name not in self.manifolds:
            raise ScenarioError("unknown manifold %r" % name)
        return self.manifolds[name]

    def complex_named(self, name) -> simplicial.OrientedComplex:
        if name not in self.complexes:
            raise ScenarioError("unknown manifold (triangulation) %r" % name)
        return self.complexes[name]

    def smooth_map(self, name) -> SmoothMapSpec:
        if name not in self.maps:
            raise ScenarioError("unknown map %r" % name)
        return self.maps[name]

    def any_map(self, name):
        if name in self.maps:
            return self.maps[name]
        if name in self.simplicial_maps:
            return self.simplicial_maps[name]
        raise ScenarioError("unknown map %r" % name)


# -- JSON-safe value encoding -----------------------------------------------------


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _matrix_payload(mat: RationalMatrix) -> list:
    return [[str(mat.entry(i, j)) for j in range(mat.cols)] for i in range(mat.rows)]


def _class_payload(cls: dict) -> dict:
    return {",".join(str(i) for i in key): int(val) for key, val in sorted(cls.items())}


# -- task runners -----------------------------------------------------------------


def _manifold_betti(scn: Scenario, name: str) -> list:
    if name in scn.complexes:
        return list(cohomology.betti_numbers(scn.complexes[name]))
    desc = scn.manifold_named(name)
    if desc.kind == "torus":
        import math as _math

        return [_math.comb(desc.dim, q) for q in range(desc.dim + 1)]
    return [1 if q in (0, desc.dim) else 0 for q in range(desc.dim + 1)]


def _run_betti(scn, spec, cfg):
    name = spec.get("manifold")
    if name is None:
        raise ScenarioError("betti task needs a manifold")
    betti = _manifold_betti(scn, name)
    values = {"betti": betti}
    expected = spec.get("expect")
    passed = None if expected is None else list(expected) == betti
    return values, passed


def _run_pairing(scn, spec, cfg):
    name = spec.get("manifold")
    degree = int(spec.get("degree", 0))
    if name in scn.complexes:
        pm = cohomology.cup_pairing(scn.complexes[name], degree)
        mat = pm.matrix
    else:
        desc = scn.manifold_named(name)
        if desc.kind == "torus":
            mat = analytic.torus_pairing(desc.dim, degree)
        else:
            mat = (RationalMatrix.identity(1) if degree in (0, desc.dim)
                   else RationalMatrix.zeros(0, 0))
    values = {"degree": degree, "rank": mat.rank(), "matrix": _matrix_payload(mat)}
    passed = None
    if "expect_rank" in spec:
        passed = int(spec["expect_rank"]) == values["rank"]
    return values, passed


def _run_induced(scn, spec, cfg):
    name = spec.get("map")
    degree = int(spec.get("degree", 0))
    target = scn.any_map(name)
    if isinstance(target, simplicial.SimplicialMapSpec):
        mat = cohomology.induced_map(target, degree)
    else:
        if analytic.is_torus_like(target.domain):
            model = analytic.torus_cohomology_model({name: target})
        else:
            model = analytic.sphere_cohomology_model(
                {name: target}, order=cfg["quadrature_order"], snap_tol=cfg["tolerance"]
            )
        mat = model.induced_matrix(name, degree)
    values = {"degree": degree, "matrix": _matrix_payload(mat)}
    passed = None
    if "expect" in spec:
        want = [[str(Fraction(str(v))) for v in row] for row in spec["expect"]]
        passed = want == values["matrix"]
    return values, passed


def _model_for_pair(scn: Scenario, spec, cfg):
    fname, gname = spec.get("f"), spec.get("g")
    f = scn.any_map(fname)
    g = scn.any_map(gname)
    if isinstance(f, simplicial.SimplicialMapSpec) != isinstance(
        g, simplicial.SimplicialMapSpec
    ):
        raise ScenarioError("maps %r and %r use different backends" % (fname, gname))
    if isinstance(f, simplicial.SimplicialMapSpec):
        if f.source is not g.source or f.target is not g.target:
            raise ScenarioError("simplicial maps must share source and target")
        model = cohomology.simplicial_cohomology_model(
            f.source, f.target, {"f": f, "g": g}
        )
        return model, None, None
    if analytic.is_torus_like(f.domain):
        model = analytic.torus_cohomology_model({"f": f, "g": g})
    else:
        model = analytic.sphere_cohomology_model(
            {"f": f, "g": g}, order=cfg["quadrature_order"], snap_tol=cfg["tolerance"]
        )
    return model, f, g


def _run_lefschetz(scn, spec, cfg):
    model, _, _ = _model_for_pair(scn, spec, cfg)
    value = coincidence.lefschetz_coincidence_number(model, "f", "g")
    values = {"lefschetz": str(value)}
    passed = None
    if "expect" in spec:
        passed = Fraction(str(spec["expect"])) == value
    return values, passed


def _coords_payload(point) -> list:
    out = []
    for c in point.coords:
        if isinstance(c, Fraction):
            out.append(str(c))
        else:
            out.append(round(float(c), 9))
    return out


def _component_payload(results) -> list:
    payload = []
    for res in results:
        comp = res.component
        if isinstance(comp, coincidence.IsolatedPoint):
            entry = {
                "kind": "point",
                "chart": comp.chart,
                "coords": _coords_payload(comp),
                "nondegenerate": comp.nondegenerate,
                "index": res.value,
                "method": res.method,
                "residual": float(res.residual),
            }
        else:
            entry = {
                "kind": "submanifold",
                "chart": "fund",
                "coords": [str(c) for c in comp.basepoint],
                "dim": comp.dim,
                "coefficient": res.value,
                "method": res.method,
                "residual": float(res.residual),
                "class": _class_payload(res.homology_class or {}),
            }
        payload.append(entry)
    payload.sort(key=lambda e: (e["chart"], [str(c) for c in e["coords"]]))
    return payload


def _coincidence_opts(cfg, seed) -> coincidence.CoincidenceOptions:
    deg = DegreeConfig(
        snap_tol=cfg["tolerance"],
        initial_order=cfg["quadrature_order"],
        max_evals=cfg["max_budget"],
    )
    return coincidence.CoincidenceOptions(grid=cfg["grid"], degree=deg, seed=seed)


def _run_indices(scn, spec, cfg):
    f = scn.smooth_map(spec.get("f"))
    g = scn.smooth_map(spec.get("g"))
    opts = _coincidence_opts(cfg, cfg["seed"])
    comps = coincidence.find_coincidence_components(f, g, opts)
    rng = np.random.default_rng(cfg["seed"])
    results = []
    for comp in comps:
        if isinstance(comp, coincidence.IsolatedPoint):
            radius = coincidence._radius_for(comp, comps, opts.radius_cap)
            results.append(
                coincidence.local_coincidence_index(
                    f, g, comp, radius=radius, config=opts.degree, rng=rng
                )
            )
        else:
            results.append(coincidence.submanifold_class_coefficient(f, g, comp))
    indices = sorted(r.value for r in results)
    values = {"indices": indices, "components": _component_payload(results)}
    passed = None
    if "expect" in spec:
        passed = sorted(int(v) for v in spec["expect"]) == indices
    return values, passed


def _run_residue_check(scn, spec, cfg):
    f = scn.smooth_map(spec.get("f"))
    g = scn.smooth_map(spec.get("g"))
    opts = _coincidence_opts(cfg, cfg["seed"])
    report = coincidence.verify_residue_formula(f, g, opts)
    values = {
        "verdict": "pass" if report.verdict else "fail",
        "components": _component_payload(report.components),
        "symmetry_ok": report.symmetry_ok,
    }
    if report.global_value is not None:
        values["global"] = str(report.global_value)
        values["local_total"] = str(report.local_total)
        values["symmetry_value"] = str(report.symmetry_value)
    else:
        values["global_class"] = _class_payload(report.global_class)
        values["local_class"] = _class_payload(report.local_total)
        values["symmetry_class"] = _class_payload(report.symmetry_value)
    if not report.verdict:
        values["discrepancy"] = _jsonable(report.discrepancy)
    passed = None
    checks = []
    if "expect_global" in spec:
        checks.append(values.get("global") == str(Fraction(str(spec["expect_global"]))))
    if "expect_class" in spec:
        want = {str(k): int(v) for k, v in spec["expect_class"].items()}
        checks.append(values.get("global_class") == want)
    if "expect_indices" in spec:
        got = sorted(r.value for r in report.components)
        checks.append(sorted(int(v) for v in spec["expect_indices"]) == got)
    if "expect_verdict" in spec:
        checks.append(values["verdict"] == str(spec["expect_verdict"]))
    if checks:
        passed = all(checks)
    return values, passed


def _run_degree(scn, spec, cfg):
    text = spec.get("h")
    if text is None:
        raise ScenarioError("degree task needs an expression map 'h'")
    center = [float(v) for v in spec.get("center", [])]
    if not center:
        raise ScenarioError("degree task needs a center")
    m = len(center)
    exprs = parse_expressions(text, m)
    if len(exprs) != m:
        raise ScenarioError("degree map must have %d coordinates" % m)
    h = compile_map(exprs, m)
    radius = float(spec.get("radius", 0.5))
    config = DegreeConfig(
        snap_tol=cfg["tolerance"],
        initial_order=cfg["quadrature_order"],
        max_evals=cfg["max_budget"],
    )
    prob = LocalZeroProblem(h, center, radius, config=config)
    method = spec.get("method", "auto")
    rng = np.random.default_rng(cfg["seed"])
    if method == "jacobian":
        jac, err = fd_jacobian(h, np.array(center), m)
        res = local_degree_jacobian(prob, jac, jac_error=err)
    elif method == "winding":
        res = winding_number(prob)
    elif method == "kronecker":
        res = local_degree_kronecker(prob)
    elif method == "oracle":
        res = local_degree_oracle(prob, rng=rng)
    elif method == "auto":
        jac, err = fd_jacobian(h, np.array(center), m)
        try:
            res = local_degree_jacobian(prob, jac, jac_error=err)
        except Exception:
            res = coincidence._degenerate_degree(prob, m, rng)
    else:
        raise ScenarioError("unknown degree method %r" % method)
    values = {
        "degree": res.value,
        "raw": float(res.raw),
        "residual": float(res.residual),
        "method": res.method,
        "diagnostics": _jsonable(res.diagnostics),
    }
    passed = None
    if "expect" in spec:
        passed = int(spec["expect"]) == res.value
    return values, passed


_RUNNERS = {
    "betti": _run_betti,
    "pairing": _run_pairing,
    "induced": _run_induced,
    "lefschetz": _run_lefschetz,
    "indices": _run_indices,
    "residue_check": _run_residue_check,
    "degree": _run_degree,
}


# -- driving ----------------------------------------------------------------------


DEFAULT_CONFIG = {
    "tolerance": 1e-6,
    "quadrature_order": 8,
    "grid": 40,
    "seed": 0,
    "max_budget": 2_000_000,
}


def run_scenario(path, overrides: Optional[dict] = None) -> RunReport:
    """Execute every task in a scenario file; never raises for task errors."""
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text())
    except FileNotFoundError as exc:
        raise ScenarioError("scenario file %s not found" % path) from exc
    except yaml.YAMLError as exc:
        raise ScenarioError("scenario file does not parse: %s" % exc) from exc
    scn = Scenario(doc, path.parent)
    cfg = dict(DEFAULT_CONFIG)
    for key, val in scn.config.items():
        if key not in DEFAULT_CONFIG:
            raise ScenarioError("unknown config key %r" % key)
        cfg[key] = val
    for key, val in (overrides or {}).items():
        if val is not None:
            cfg[key] = val
    cfg["tolerance"] = float(cfg["tolerance"])
    cfg["quadrature_order"] = int(cfg["quadrature_order"])
    cfg["grid"] = int(cfg["grid"])
    cfg["seed"] = int(cfg["seed"])
    cfg["max_budget"] = int(cfg["max_budget"])

    results = []
    timings = {}
    for pos, spec in enumerate(scn.tasks):
        if not isinstance(spec, dict) or "task" not in spec:
            raise ScenarioError("task %d is not a mapping with a 'task' key" % pos)
        kind = spec["task"]
        if kind not in _RUNNERS:
            raise ScenarioError("unknown task %r" % kind)
        label = spec.get("label", "%s_%d" % (kind, pos))
        started = time.perf_counter()
        try:
            values, passed = _RUNNERS[kind](scn, spec, cfg)
            result = TaskResult(kind, label, values, _expectations(spec), passed)
        except ScenarioError:
            raise
        except _NUMERIC_ERRORS as exc:
            result = TaskResult(kind, label, {}, _expectations(spec), None,
                                error=str(exc), error_kind="numeric")
        except _INPUT_ERRORS as exc:
            result = TaskResult(kind, label, {}, _expectations(spec), None,
                                error=str(exc), error_kind="input")
        timings[label] = time.perf_counter() - started
        results.append(result)
    report = RunReport(
        scenario=path.stem, tasks=results, config=cfg, seed=cfg["seed"], timings=timings
    )
    return report


def _expectations(spec: dict) -> Optional[dict]:
    keys = [k for k in spec if k == "expect" or k.startswith("expect_")]
    if not keys:
        return None
    return {k: spec[k] for k in keys}


def emit_report(report: RunReport, fmt: str = "text") -> str:
    """Render a report: aligned text table or canonical sorted-key JSON."""
    if fmt == "json":
        doc = {
            "scenario": report.scenario,
            "config": {
                "tolerance": report.config["tolerance"],
                "quadrature_order": report.config["quadrature_order"],
                "grid": report.config["grid"],
                "max_budget": report.config["max_budget"],
            },
            "tasks": [
                {
                    "task": t.task,
                    "label": t.label,
                    "values": _jsonable(t.values),
                    "expected": _jsonable(t.expected),
                    "status": _status(t),
                    "error": t.error,
                }
                for t in report.tasks
            ],
            "exit_code": report.exit_code(),
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ValueError("unknown report format %r" % fmt)
    lines = ["scenario: %s (seed %d)" % (report.scenario, report.seed)]
    width = max([len(t.label) for t in report.tasks] + [4])
    for t in report.tasks:
        status = _status(t)
        detail = t.error if t.error else _text_detail(t)
        lines.append("%-*s  %-8s %s" % (width, t.label, status, detail))
        for comp in t.values.get("components", []):
            coords = ", ".join(str(c) for c in comp["coords"])
            val = comp.get("index", comp.get("coefficient"))
            lines.append(
                "  S_%s @ %s(%s) : index %s (%s)"
                % (
                    comp.get("kind", "?"),
                    comp["chart"],
                    coords,
                    val,
                    comp["method"],
                )
            )
        lines.append(
            "  [%.3fs]" % report.timings.get(t.label, 0.0)
        )
    lines.append("exit: %d" % report.exit_code())
    return "\n".join(lines) + "\n"


def _status(t: TaskResult) -> str:
    if t.error:
        return "error"
    if t.passed is None:
        return "ok"
    return "pass" if t.passed else "FAIL"


def _text_detail(t: TaskResult) -> str:
    vals = dict(t.values)
    vals.pop("components", None)
    vals.pop("matrix", None)
    return ", ".join("%s=%s" % (k, v) for k, v in vals.items())


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="coinv", description="coincidence invariants from scenario files"
    )
    parser.add_argument("--scenario", required=True, help="path to a scenario file")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--tolerance", type=float, default=None)
    parser.add_argument("--quadrature-order", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--max-budget", type=int, default=None)
    args = parser.parse_args(argv)
    overrides = {
        "tolerance": args.tolerance,
        "quadrature_order": args.quadrature_order,
        "seed": args.seed,
        "max_budget": args.max_budget,
    }
    try:
        report = run_scenario(args.scenario, overrides)
    except (ScenarioError, *_INPUT_ERRORS) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(emit_report(report, args.format))
    for t in report.tasks:
        if t.error:
            print("task %s failed: %s" % (t.label, t.error), file=sys.stderr)
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
