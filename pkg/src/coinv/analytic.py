"""Closed-form manifold models: tori, spheres, and evaluable smooth maps.

Charts
------
* Torus T^m: the fundamental-domain chart [0,1)^m; map outputs are reduced
  mod 1.  Integer-affine maps x -> A x + c are recognized exactly and carry
  exact Jacobians.
* Sphere S^m: two stereographic charts, both positively oriented.  The
  z-chart projects from the north pole; the w-chart projects from the south
  pole with the last coordinate flipped, so the transition is

      w = (x_1, ..., x_{m-1}, -x_m) / |x|^2,

  an orientation-preserving involution.  For m = 2 this is exactly w = 1/z
  on complex coordinates, so rational maps read the same in both charts up
  to swapping numerator and denominator.

Jacobians are exact for the linear families and use central finite
differences with one Richardson level otherwise; the estimated error is
returned alongside so callers can widen their tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .cohomology import CohomologyModel
from .degree import fd_jacobian, global_sphere_degree
from .exact_linalg import RationalMatrix
from .expressions import ArityMismatch, affine_parts, compile_map, parse_expressions


class ChartDomainError(Exception):
    pass


class NotWellDefinedOnQuotient(Exception):
    pass


class FamilyMismatch(Exception):
    pass


class DegreeUnresolved(Exception):
    pass


# -- manifold descriptors ----------------------------------------------------


@dataclass(frozen=True)
class ManifoldDescriptor:
    """Torus/sphere/product model with the standard coordinate orientation."""

    kind: str  # "torus" | "sphere" | "product"
    dim: int
    factors: Tuple["ManifoldDescriptor", ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("manifold dimension must be >= 1")
        if self.kind == "product" and self.dim != sum(f.dim for f in self.factors):
            raise ValueError("product dimension must be the sum of factor dimensions")


def torus(m: int) -> ManifoldDescriptor:
    return ManifoldDescriptor("torus", m)


def sphere(m: int) -> ManifoldDescriptor:
    if m < 2:
        raise ValueError("use torus(1) for the circle")
    return ManifoldDescriptor("sphere", m)


def product(*factors: ManifoldDescriptor) -> ManifoldDescriptor:
    return ManifoldDescriptor("product", sum(f.dim for f in factors), tuple(factors))


def is_torus_like(d: ManifoldDescriptor) -> bool:
    if d.kind == "torus":
        return True
    return d.kind == "product" and all(is_torus_like(f) for f in d.factors)


# -- map families ------------------------------------------------------------


@dataclass(frozen=True)
class TorusLinear:
    """x -> A x + c on T^m -> T^n with integer A (well-defined on quotients)."""

    matrix: Tuple[Tuple[int, ...], ...]  # n rows, m columns
    offset: Tuple[Fraction, ...]

    def __post_init__(self):
        for row in self.matrix:
            for a in row:
                if not isinstance(a, int):
                    raise NotWellDefinedOnQuotient(
                        "linear coefficient %r is not an integer" % (a,)
                    )
        if len(self.offset) != len(self.matrix):
            raise ValueError("offset length must match the row count")


@dataclass(frozen=True)
class CirclePower:
    """x -> k x + c on the circle."""

    k: int
    offset: Fraction = Fraction(0)


@dataclass(frozen=True)
class SphereRational:
    """z -> p(z)/q(z) on S^2 = CP^1; coefficients low to high, reduced."""

    num: Tuple[int, ...]
    den: Tuple[int, ...]

    def __post_init__(self):
        num = _trim_poly(self.num)
        den = _trim_poly(self.den)
        if not num and not den:
            raise ValueError("numerator and denominator cannot both be zero")
        g = _poly_gcd(num, den)
        if len(g) > 1:
            num = _poly_div_exact(num, g)
            den = _poly_div_exact(den, g)
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", tuple(den))

    def algebraic_degree(self) -> int:
        return max(len(self.num), len(self.den)) - 1


@dataclass(frozen=True)
class ChartExpr:
    """Per-output-coordinate expression ASTs in the primary chart.

    For sphere maps a second expression list for the w-chart may be supplied;
    otherwise evaluation composes with the chart transition.
    """

    exprs: Tuple[object, ...]
    w_exprs: Optional[Tuple[object, ...]] = None


@dataclass(frozen=True)
class SmoothMapSpec:
    domain: ManifoldDescriptor
    codomain: ManifoldDescriptor
    family: object


# -- integer polynomial helpers (for SphereRational) --------------------------


def _trim_poly(coeffs) -> list:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] -= f * bc
        a = _trim_poly(a)
        if not a:
            break
    return a


def _poly_gcd(a: list, b: list) -> list:
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_mod(a, b)
    if a:
        lead = a[-1]
        a = [x / lead for x in a]
    return a


def _poly_div_exact(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    rem = list(a)
    while len(rem) >= len(b) and rem:
        f = rem[-1] / b[-1]
        shift = len(rem) - len(b)
        out[shift] = f
        for i, bc in enumerate(b):
            rem[shift + i] -= f * bc
        rem = _trim_poly(rem)
    if rem:
        raise ValueError("inexact polynomial division")
    return _trim_poly(out)


def _poly_eval_homogeneous(coeffs, u, v, degree):
    """Evaluate the degree-homogenization sum c_i u^i v^(degree-i)."""
    acc = np.zeros_like(u)
    for i, c in enumerate(coeffs):
        acc = acc + complex(c) * u**i * v ** (degree - i)
    return acc


# -- sphere charts -------------------------------------------------------------


def sphere_embed(coords: np.ndarray, chart: str) -> np.ndarray:
    """Chart coordinates -> points on the unit sphere in R^(m+1)."""
    x = np.atleast_2d(np.asarray(coords, dtype=float))
    n2 = np.sum(x * x, axis=1)
    denom = 1.0 + n2
    if chart == "z":
        out = np.concatenate([2.0 * x, (n2 - 1.0)[:, None]], axis=1)
    elif chart == "w":
        flipped = x.copy()
        flipped[:, -1] = -flipped[:, -1]
        out = np.concatenate([2.0 * flipped, (1.0 - n2)[:, None]], axis=1)
    else:
        raise ValueError("unknown sphere chart %r" % chart)
    return out / denom[:, None]


def sphere_chart_coords(points: np.ndarray, chart: str) -> np.ndarray:
    """Ambient unit-sphere points -> chart coordinates."""
    p = np.atleast_2d(np.asarray(points, dtype=float))
    last = p[:, -1]
    if chart == "z":
        denom = 1.0 - last
    elif chart == "w":
        denom = 1.0 + last
    else:
        raise ValueError("unknown sphere chart %r" % chart)
    if np.any(np.abs(denom) < 1e-14):
        raise ChartDomainError("point at the %s-chart pole" % chart)
    x = p[:, :-1] / denom[:, None]
    if chart == "w":
        x = x.copy()
        x[:, -1] = -x[:, -1]
    return x


def sphere_transition(coords: np.ndarray) -> np.ndarray:
    """The involutive z<->w transition (x_1,...,-x_m)/|x|^2."""
    x = np.atleast_2d(np.asarray(coords, dtype=float))
    n2 = np.sum(x * x, axis=1)
    if np.any(n2 < 1e-300):
        raise ChartDomainError("chart transition at the origin")
    out = x / n2[:, None]
    out[:, -1] = -out[:, -1]
    return out


def best_sphere_chart(points: np.ndarray) -> np.ndarray:
    """Per-point chart choice keeping |coords| <= 1: 'z' on the south side."""
    p = np.atleast_2d(np.asarray(points, dtype=float))
    return np.where(p[:, -1] <= 0.0, "z", "w")


# -- evaluation ----------------------------------------------------------------


def _reduce_mod1(values: np.ndarray) -> np.ndarray:
    return np.mod(values, 1.0)


def as_torus_linear(spec: SmoothMapSpec) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[Fraction, ...]]:
    """Normalize the linear torus families to (matrix, offset)."""
    fam = spec.family
    if isinstance(fam, TorusLinear):
        return fam.matrix, fam.offset
    if isinstance(fam, CirclePower):
        return ((fam.k,),), (fam.offset,)
    raise FamilyMismatch("map is not an integer-affine torus map: %r" % (fam,))


def chart_function(spec: SmoothMapSpec, in_chart: str = None, out_chart: str = None,
                   reduce_torus: bool = True):
    """Vectorized chart-to-chart evaluator (npoints, m) -> (npoints, n)."""
    fam = spec.family
    dkind = spec.domain.kind
    m = spec.domain.dim
    n = spec.codomain.dim

    if dkind in ("torus", "product") or spec.codomain.kind in ("torus", "product"):
        if isinstance(fam, (TorusLinear, CirclePower)):
            mat, off = as_torus_linear(spec)
            a = np.array([[float(v) for v in row] for row in mat])
            c = np.array([float(v) for v in off])

            def ev(points):
                pts = np.atleast_2d(np.asarray(points, dtype=float))
                out = pts @ a.T + c
                return _reduce_mod1(out) if reduce_torus else out

            return ev
        if isinstance(fam, ChartExpr):
            base = compile_map(fam.exprs, m)
            if reduce_torus and spec.codomain.kind in ("torus", "product"):
                return lambda points: _reduce_mod1(base(points))
            return base
        raise FamilyMismatch("unsupported torus map family %r" % (fam,))

    # sphere domain and codomain
    in_chart = in_chart or "z"
    out_chart = out_chart or "z"
    if isinstance(fam, SphereRational):
        if m != 2:
            raise FamilyMismatch("rational maps live on the 2-sphere")
        d = fam.algebraic_degree()
        numc, denc = fam.num, fam.den

        def ev(points):
            pts = np.atleast_2d(np.asarray(points, dtype=float))
            z = pts[:, 0] + 1j * pts[:, 1]
            if in_chart == "z":
                u, v = z, np.ones_like(z)
            else:
                u, v = np.ones_like(z), z
            scale = np.maximum(np.abs(u), np.abs(v))
            u, v = u / scale, v / scale
            pnum = _poly_eval_homogeneous(numc, u, v, d)
            pden = _poly_eval_homogeneous(denc, u, v, d)
            img = pnum / pden if out_chart == "z" else pden / pnum
            return np.stack([img.real, img.imag], axis=-1)

        return ev
    if isinstance(fam, ChartExpr):
        primary = compile_map(fam.exprs, m)
        secondary = compile_map(fam.w_exprs, m) if fam.w_exprs is not None else None

        def ev(points):
            pts = np.atleast_2d(np.asarray(points, dtype=float))
            if in_chart == "z":
                img = primary(pts)  # z-chart coords of the image
                out_is = "z"
            elif secondary is not None:
                img = secondary(pts)
                out_is = "w"
            else:
                img = primary(sphere_transition(pts))
                out_is = "z"
            if not np.all(np.isfinite(img)):
                raise ChartDomainError("map evaluation left the chart")
            if out_is != out_chart:
                img = sphere_transition(img)
            return img

        return ev
    raise FamilyMismatch("unsupported sphere map family %r" % (fam,))


def eval_map(spec: SmoothMapSpec, point, chart: str = None, out_chart: str = None):
    """Evaluate at a single chart point; torus outputs are reduced to [0,1)."""
    fn = chart_function(spec, in_chart=chart, out_chart=out_chart)
    return fn(np.asarray(point, dtype=float)[None, :])[0]


def eval_ambient(spec: SmoothMapSpec, points: np.ndarray) -> np.ndarray:
    """Sphere maps as ambient R^(m+1) -> R^(m+1) unit-vector functions."""
    if spec.domain.kind != "sphere":
        raise FamilyMismatch("ambient evaluation is for sphere maps")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty_like(pts)
    charts = best_sphere_chart(pts)
    for c_in in ("z", "w"):
        mask = charts == c_in
        if not np.any(mask):
            continue
        coords = sphere_chart_coords(pts[mask], c_in)
        img_z = chart_function(spec, in_chart=c_in, out_chart="z")
        vals = img_z(coords)
        big = np.sum(vals * vals, axis=1) > 1.0
        emb = np.empty((vals.shape[0], pts.shape[1]))
        if np.any(~big):
            emb[~big] = sphere_embed(vals[~big], "z")
        if np.any(big):
            img_w = chart_function(spec, in_chart=c_in, out_chart="w")
            emb[big] = sphere_embed(img_w(coords[big]), "w")
        out[mask] = emb
    return out


# -- Jacobians -----------------------------------------------------------------


def jacobian(spec: SmoothMapSpec, point, chart: str = None, out_chart: str = None):
    """Jacobian matrix at a chart point, with an error estimate.

    Exact (error 0) for the torus-linear families; finite differences with
    Richardson extrapolation otherwise.
    """
    fam = spec.family
    if isinstance(fam, (TorusLinear, CirclePower)):
        mat, _ = as_torus_linear(spec)
        return np.array([[float(v) for v in row] for row in mat]), 0.0
    x = np.asarray(point, dtype=float)
    fn = chart_function(spec, in_chart=chart, out_chart=out_chart, reduce_torus=False)
    return fd_jacobian(fn, x, spec.codomain.dim)


# -- parsing -------------------------------------------------------------------


def parse_map_expr(text: str, domain: ManifoldDescriptor, codomain: ManifoldDescriptor,
                   w_text: str = None) -> SmoothMapSpec:
    """Parse ';'-separated coordinate expressions into a map spec.

    On torus codomains an integer-affine expression list is recognized as a
    TorusLinear family (exact offsets); anything else keeps the AST and is
    sample-checked for well-definedness on the quotient.
    """
    exprs = parse_expressions(text, domain.dim)
    if len(exprs) != codomain.dim:
        raise ArityMismatch(
            "map has %d coordinate expressions, codomain needs %d"
            % (len(exprs), codomain.dim)
        )
    if is_torus_like(codomain) and is_torus_like(domain):
        parts = [affine_parts(e, domain.dim) for e in exprs]
        if all(p is not None for p in parts):
            rows = []
            for coeffs, _ in parts:
                for a in coeffs:
                    if a.denominator != 1:
                        raise NotWellDefinedOnQuotient(
                            "linear coefficient %s is not an integer" % a
                        )
                rows.append(tuple(int(a) for a in coeffs))
            offset = tuple(const for _, const in parts)
            fam = TorusLinear(tuple(rows), offset)
            return SmoothMapSpec(domain, codomain, fam)
        spec = SmoothMapSpec(domain, codomain, ChartExpr(exprs))
        _check_quotient_periodicity(spec)
        return spec
    w_exprs = None
    if w_text is not None:
        w_exprs = parse_expressions(w_text, domain.dim)
        if len(w_exprs) != codomain.dim:
            raise ArityMismatch("secondary chart expression arity mismatch")
    return SmoothMapSpec(domain, codomain, ChartExpr(exprs, w_exprs))


def _check_quotient_periodicity(spec: SmoothMapSpec, samples: int = 4):
    """Sample e(x + e_i) - e(x) for integrality on torus targets."""
    rng = np.random.default_rng(20240501)
    m = spec.domain.dim
    fn = chart_function(spec, reduce_torus=False)
    pts = rng.uniform(0.1, 0.9, size=(samples, m))
    base = fn(pts)
    for i in range(m):
        shifted = pts.copy()
        shifted[:, i] += 1.0
        delta = fn(shifted) - base
        if np.max(np.abs(delta - np.round(delta))) > 1e-8:
            raise NotWellDefinedOnQuotient(
                "shift by lattice generator %d changes the map by a non-integer" % i
            )


# -- cohomology models ----------------------------------------------------------


def _subsets(n: int, q: int):
    return list(combinations(range(n), q))


def _shuffle_sign(s: Tuple[int, ...], comp: Tuple[int, ...]) -> int:
    perm = list(s) + list(comp)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def exterior_power(mat: RationalMatrix, q: int) -> RationalMatrix:
    """q-th compound matrix: minors indexed by lexicographic q-subsets."""
    rows = _subsets(mat.rows, q)
    cols = _subsets(mat.cols, q)
    ent = []
    for s in rows:
        for t in cols:
            ent.append(mat.submatrix(s, t).det())
    return RationalMatrix(len(rows), len(cols), ent)


def torus_pairing(m: int, q: int) -> RationalMatrix:
    """Wedge pairing of coordinate q-forms against complementary (m-q)-forms."""
    rows = _subsets(m, q)
    cols = _subsets(m, m - q)
    ent = []
    for s in rows:
        comp = tuple(i for i in range(m) if i not in s)
        for t in cols:
            ent.append(Fraction(_shuffle_sign(s, comp)) if t == comp else Fraction(0))
    return RationalMatrix(len(rows), len(cols), ent)


def torus_cohomology_model(maps: Dict[str, SmoothMapSpec]) -> CohomologyModel:
    """Cohomology of integer-affine torus maps: H^q is the q-th compound of A^T.

    Offsets never enter, so the model is invariant under homotopies within
    the family.
    """
    if not maps:
        raise ValueError("no maps given")
    specs = list(maps.values())
    m = specs[0].domain.dim
    n = specs[0].codomain.dim
    for s in specs:
        if s.domain.dim != m or s.codomain.dim != n:
            raise FamilyMismatch("maps disagree on domain/codomain dimensions")
        if not (is_torus_like(s.domain) and is_torus_like(s.codomain)):
            raise FamilyMismatch("torus model needs torus domain and codomain")
    induced = {}
    for name, s in maps.items():
        mat, _ = as_torus_linear(s)
        at = RationalMatrix(n, m, [Fraction(v) for row in mat for v in row]).transpose()
        induced[name] = tuple(exterior_power(at, q) for q in range(max(m, n) + 1))
    return CohomologyModel(
        backend="analytic",
        dim_domain=m,
        dim_codomain=n,
        betti_domain=tuple(math.comb(m, q) for q in range(m + 1)),
        betti_codomain=tuple(math.comb(n, q) for q in range(n + 1)),
        pairing_domain=tuple(torus_pairing(m, q) for q in range(m + 1)),
        pairing_codomain=tuple(torus_pairing(n, q) for q in range(n + 1)),
        induced=induced,
    )


def sphere_degree(spec: SmoothMapSpec, order: int = 16, snap_tol: float = 1e-6) -> int:
    """Topological degree of a sphere self-map.

    Algebraic for reduced rational maps; the global solid-angle integral of
    the ambient map otherwise.
    """
    fam = spec.family
    if isinstance(fam, SphereRational):
        return fam.algebraic_degree()
    from .degree import NoConvergence

    try:
        res = global_sphere_degree(lambda pts: eval_ambient(spec, pts), spec.domain.dim,
                                   initial_order=order, snap_tol=snap_tol)
    except NoConvergence as exc:
        raise DegreeUnresolved("numerical sphere degree failed to snap: %s" % exc) from exc
    return res.value


def sphere_cohomology_model(maps: Dict[str, SmoothMapSpec], order: int = 16,
                            snap_tol: float = 1e-6) -> CohomologyModel:
    """Cohomology model on b = (1, 0, ..., 0, 1): the top map is deg(f)."""
    if not maps:
        raise ValueError("no maps given")
    specs = list(maps.values())
    m = specs[0].domain.dim
    for s in specs:
        if s.domain.kind != "sphere" or s.codomain.kind != "sphere" or s.domain.dim != m \
                or s.codomain.dim != m:
            raise FamilyMismatch("sphere model needs self-maps of a single sphere")
    one = RationalMatrix.identity(1)
    betti = tuple(1 if q in (0, m) else 0 for q in range(m + 1))
    pairing = tuple(
        one if q in (0, m) else RationalMatrix.zeros(0, 0) for q in range(m + 1)
    )
    induced = {}
    for name, s in maps.items():
        deg = sphere_degree(s, order=order, snap_tol=snap_tol)
        mats = [one] + [RationalMatrix.zeros(0, 0)] * (m - 1) + [
            RationalMatrix(1, 1, [Fraction(deg)])
        ]
        induced[name] = tuple(mats)
    return CohomologyModel(
        backend="analytic",
        dim_domain=m,
        dim_codomain=m,
        betti_domain=betti,
        betti_codomain=betti,
        pairing_domain=pairing,
        pairing_codomain=pairing,
        induced=induced,
    )
