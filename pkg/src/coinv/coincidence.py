"""Coincidence invariants of a pair of maps f, g: M -> N.

Global side: for equal dimensions the Lefschetz coincidence number

    L(f,g) = sum_q (-1)^q tr( H^q(f) . D_N^{-1} . H^{m-q}(g)^T . D_M )

computed from a cohomology model (the pairing matrices replace the usual
choice of dual bases).  For m > n with integer-affine maps on tori the
global class of the pair lives in H_{m-n}(T^m) and is computed exactly by
lattice algebra from the graph of g.

Local side: every isolated coincidence point contributes the local mapping
degree of h = g - f; a clean (m-n)-dimensional component contributes the
degree of h restricted to a transverse slice times the component's
fundamental class.

Orientation bookkeeping for the m > n case: a slice frame Q is positive for
the component orientation W when det[Q | W] > 0, the component class is then
W's wedge expanded over coordinate subtori, and the slice coefficient is the
local degree of h on the ball spanned by Q.  With the graph class convention
used here (the graph of g co-oriented by g(x) - y) these choices make the
global and local classes agree with overall sign +1; SLICE_ORIENTATION_SIGN
records that constant and the randomized fixtures pin it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from .analytic import (
    ChartExpr,
    CirclePower,
    FamilyMismatch,
    SmoothMapSpec,
    SphereRational,
    TorusLinear,
    as_torus_linear,
    best_sphere_chart,
    chart_function,
    eval_ambient,
    is_torus_like,
    sphere_chart_coords,
    sphere_cohomology_model,
    sphere_embed,
    torus_cohomology_model,
)
from .cohomology import CohomologyModel
from .degree import (
    DegenerateJacobian,
    DegreeConfig,
    DegreeResult,
    LocalZeroProblem,
    fd_jacobian,
    local_degree_jacobian,
    local_degree_kronecker,
    local_degree_oracle,
    winding_number,
)
from .exact_linalg import RationalMatrix
from .lattice import int_det, shuffle_sign, solve_torus_congruence

SLICE_ORIENTATION_SIGN = 1


class DimensionMismatch(Exception):
    pass


class NonIntegerTrace(Exception):
    pass


class DetectionInconclusive(Exception):
    pass


class FrameNotTransverse(Exception):
    pass


# -- component data -----------------------------------------------------------


@dataclass(frozen=True)
class IsolatedPoint:
    coords: tuple  # chart coordinates (exact Fractions for lattice solutions)
    chart: str  # "fund" for tori, "z"/"w" for spheres
    nondegenerate: bool
    ambient: Optional[tuple] = None  # sphere points carry R^(m+1) coordinates


@dataclass(frozen=True)
class SubmanifoldComponent:
    basepoint: tuple  # exact rational torus point
    directions: tuple  # (m-n) oriented integer direction vectors
    transverse_frame: tuple  # n integer frame vectors
    dim: int


@dataclass(frozen=True)
class ComponentResult:
    component: object
    value: int  # local index (m = n) or slice class coefficient (m > n)
    method: str
    residual: float
    homology_class: Optional[dict] = None  # m > n: subset tuple -> int


@dataclass(frozen=True)
class CoincidenceReport:
    dim_domain: int
    dim_codomain: int
    global_value: Optional[Fraction]  # m = n
    global_class: Optional[dict]  # m > n
    components: Tuple[ComponentResult, ...]
    local_total: object
    verdict: bool
    discrepancy: object
    symmetry_value: object = None
    symmetry_ok: Optional[bool] = None


@dataclass
class CoincidenceOptions:
    grid: int = 40
    dedup: float = 1e-5
    zero_tol: float = 1e-8
    radius_cap: float = 0.3
    degree: DegreeConfig = field(default_factory=DegreeConfig)
    seed: int = 0


# -- global invariants ----------------------------------------------------------


def lefschetz_coincidence_number(model: CohomologyModel, f: str, g: str) -> Fraction:
    """Alternating trace sum; exact, and asserted to be an integer."""
    if model.dim_domain != model.dim_codomain:
        raise DimensionMismatch(
            "trace formula needs equal dimensions, got %d and %d"
            % (model.dim_domain, model.dim_codomain)
        )
    m = model.dim_domain
    total = Fraction(0)
    for q in range(m + 1):
        p = m - q
        fq = model.induced_matrix(f, q)
        gp = model.induced_matrix(g, p)
        if fq.rows == 0 or gp.rows == 0:
            continue
        dn = model.pairing_codomain[p]
        dm = model.pairing_domain[p]
        term = (fq @ dn.inverse() @ gp.transpose() @ dm).trace()
        total += (-1) ** q * term
    if total.denominator != 1:
        raise NonIntegerTrace("trace sum %s is not an integer" % total)
    return total


def _linear_pair_data(f: SmoothMapSpec, g: SmoothMapSpec):
    a_mat, a_off = as_torus_linear(f)
    b_mat, b_off = as_torus_linear(g)
    n = len(a_mat)
    m = len(a_mat[0]) if n else 0
    c = [[b_mat[i][j] - a_mat[i][j] for j in range(m)] for i in range(n)]
    v = [a_off[i] - b_off[i] for i in range(n)]
    return c, v, m, n


def torus_global_class(f: SmoothMapSpec, g: SmoothMapSpec) -> Dict[tuple, int]:
    """Global coincidence class of an integer-affine pair on tori.

    Pulling the graph-of-g dual class back by x -> (x, f(x)) yields the
    n-form wedge of the rows of C = B - A; its Poincare dual expands over
    coordinate subtori T_K with the shuffle signs below.
    """
    c, _, m, n = _linear_pair_data(f, g)
    cls: Dict[tuple, int] = {}
    for s in combinations(range(m), n):
        minor = int_det([[c[i][j] for j in s] for i in range(n)])
        if minor == 0:
            continue
        comp = tuple(j for j in range(m) if j not in s)
        cls[comp] = cls.get(comp, 0) + shuffle_sign(s, comp) * minor
    return {k: val for k, val in cls.items() if val != 0}


# -- component detection ----------------------------------------------------------


def find_coincidence_components(f: SmoothMapSpec, g: SmoothMapSpec,
                                opts: Optional[CoincidenceOptions] = None) -> list:
    """Locate Coin(f,g) = {f = g}: exact lattice solve for integer-affine
    torus pairs, dense scan + Newton polish + dedup otherwise."""
    opts = opts or CoincidenceOptions()
    if f.domain != g.domain or f.codomain != g.codomain:
        raise DimensionMismatch("maps must share domain and codomain")
    m = f.domain.dim
    n = f.codomain.dim
    if _is_linear_torus_pair(f, g):
        return _find_lattice_components(f, g)
    if m != n:
        raise FrameNotTransverse(
            "only integer-affine torus pairs are supported for m > n"
        )
    if f.domain.kind == "sphere":
        return _find_sphere_coincidences(f, g, opts)
    if is_torus_like(f.domain):
        return _find_torus_coincidences(f, g, opts)
    raise FamilyMismatch("unsupported domain %r" % (f.domain,))


def _is_linear_torus_pair(f: SmoothMapSpec, g: SmoothMapSpec) -> bool:
    return (
        is_torus_like(f.domain)
        and is_torus_like(f.codomain)
        and isinstance(f.family, (TorusLinear, CirclePower))
        and isinstance(g.family, (TorusLinear, CirclePower))
    )


def _find_lattice_components(f: SmoothMapSpec, g: SmoothMapSpec) -> list:
    c, v, m, n = _linear_pair_data(f, g)
    sol = solve_torus_congruence(c, v)
    if sol is None:
        return []
    dim = sol.component_dim
    if dim == 0:
        if m != n:
            raise FrameNotTransverse(
                "coincidence points are isolated but m - n = %d" % (m - n)
            )
        return [
            IsolatedPoint(coords=bp, chart="fund", nondegenerate=True)
            for bp in sol.basepoints
        ]
    if dim != m - n:
        raise FrameNotTransverse(
            "coincidence set has dimension %d, expected m - n = %d" % (dim, m - n)
        )
    return [
        SubmanifoldComponent(
            basepoint=bp,
            directions=tuple(sol.directions),
            transverse_frame=tuple(sol.transverse),
            dim=dim,
        )
        for bp in sol.basepoints
    ]


def _find_sphere_coincidences(f: SmoothMapSpec, g: SmoothMapSpec,
                              opts: CoincidenceOptions) -> list:
    m = f.domain.dim
    if m > 3:
        raise DetectionInconclusive("sphere scans are limited to m <= 3")
    roots_ambient: List[np.ndarray] = []
    roots_chart: List[tuple] = []
    for chart in ("z", "w"):
        axes = [np.linspace(-1.05, 1.05, opts.grid) for _ in range(m)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([a.ravel() for a in mesh], axis=-1)
        amb = sphere_embed(pts, chart)
        dist = np.linalg.norm(eval_ambient(f, amb) - eval_ambient(g, amb), axis=1)
        shape = tuple([opts.grid] * m)
        dgrid = dist.reshape(shape)
        seeds = _local_minima(dgrid, threshold=0.7)
        for idx in seeds:
            seed = np.array([axes[d][idx[d]] for d in range(m)])
            root = _polish_sphere_root(f, g, seed, chart, opts)
            if root is None:
                continue
            coords, ambient = root
            if any(np.linalg.norm(ambient - r) < opts.dedup for r in roots_ambient):
                continue
            roots_ambient.append(ambient)
            roots_chart.append((chart, coords))
    _check_separation(roots_ambient, opts.dedup)
    out = []
    for (chart, coords), ambient in zip(roots_chart, roots_ambient):
        nondeg = _sphere_point_nondegenerate(f, g, coords, chart, opts)
        out.append(
            IsolatedPoint(
                coords=tuple(float(c) for c in coords),
                chart=chart,
                nondegenerate=nondeg,
                ambient=tuple(float(c) for c in ambient),
            )
        )
    return out


def _local_minima(grid: np.ndarray, threshold: float) -> list:
    """Indices of strictly-below-threshold local minima (cross neighborhoods)."""
    mins = []
    it = np.nditer(grid, flags=["multi_index"])
    shape = grid.shape
    for val in it:
        if float(val) >= threshold:
            continue
        idx = it.multi_index
        best = True
        for d in range(len(shape)):
            for step in (-1, 1):
                j = idx[d] + step
                if 0 <= j < shape[d]:
                    nb = idx[:d] + (j,) + idx[d + 1 :]
                    if grid[nb] < float(val):
                        best = False
        if best:
            mins.append(idx)
    return mins


def _sphere_h(f: SmoothMapSpec, g: SmoothMapSpec, in_chart: str, out_chart: str):
    ff = chart_function(f, in_chart=in_chart, out_chart=out_chart)
    gg = chart_function(g, in_chart=in_chart, out_chart=out_chart)
    return lambda pts: gg(pts) - ff(pts)


def _polish_sphere_root(f, g, seed, chart, opts):
    from .degree import _newton_solve

    amb_seed = sphere_embed(seed[None, :], chart)[0]
    image = eval_ambient(f, amb_seed[None, :])[0]
    out_chart = str(best_sphere_chart(image[None, :])[0])
    h = _sphere_h(f, g, chart, out_chart)
    root = _newton_solve(h, seed, np.zeros(seed.shape[0]), opts.zero_tol)
    if root is None or np.linalg.norm(root) > 1.2:
        return None
    ambient = sphere_embed(root[None, :], chart)[0]
    gap = np.linalg.norm(
        eval_ambient(f, ambient[None, :])[0] - eval_ambient(g, ambient[None, :])[0]
    )
    if gap > 10.0 * opts.zero_tol:
        return None
    return root, ambient


def _sphere_point_nondegenerate(f, g, coords, chart, opts) -> bool:
    image = eval_ambient(f, sphere_embed(np.asarray(coords)[None, :], chart))[0]
    out_chart = str(best_sphere_chart(image[None, :])[0])
    h = _sphere_h(f, g, chart, out_chart)
    jac, err = fd_jacobian(h, np.asarray(coords, dtype=float), len(coords))
    m = len(coords)
    det = float(np.linalg.det(jac))
    norm = float(np.linalg.norm(jac))
    thresh = max(
        opts.degree.nondegeneracy_rel * max(1.0, norm) ** m,
        20.0 * m * err * max(1.0, norm) ** (m - 1),
    )
    return abs(det) > thresh


def _find_torus_coincidences(f: SmoothMapSpec, g: SmoothMapSpec,
                             opts: CoincidenceOptions) -> list:
    m = f.domain.dim
    if m > 3:
        raise DetectionInconclusive("torus scans are limited to m <= 3")
    ff = chart_function(f, reduce_torus=False)
    gg = chart_function(g, reduce_torus=False)

    def hdist(pts):
        delta = gg(pts) - ff(pts)
        return np.linalg.norm(delta - np.round(delta), axis=1)

    axes = [np.linspace(0.0, 1.0, opts.grid, endpoint=False) for _ in range(m)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([a.ravel() for a in mesh], axis=-1)
    dgrid = hdist(pts).reshape(tuple([opts.grid] * m))
    seeds = _local_minima(dgrid, threshold=0.4)
    from .degree import _newton_solve

    roots: List[np.ndarray] = []
    for idx in seeds:
        seed = np.array([axes[d][idx[d]] for d in range(m)])
        shift = np.round(gg(seed[None, :])[0] - ff(seed[None, :])[0])

        def h(p, shift=shift):
            return gg(p) - ff(p) - shift[None, :]

        root = _newton_solve(h, seed, np.zeros(m), opts.zero_tol)
        if root is None:
            continue
        root = np.mod(root, 1.0)
        if hdist(root[None, :])[0] > 10.0 * opts.zero_tol:
            continue
        if any(_torus_dist(root, r) < opts.dedup for r in roots):
            continue
        roots.append(root)
    _check_separation(roots, opts.dedup, metric=_torus_dist)
    out = []
    for root in roots:
        jac_f, err_f = fd_jacobian(ff, root, m)
        jac_g, err_g = fd_jacobian(gg, root, m)
        jac = jac_g - jac_f
        det = float(np.linalg.det(jac))
        norm = float(np.linalg.norm(jac))
        thresh = max(
            opts.degree.nondegeneracy_rel * max(1.0, norm) ** m,
            20.0 * m * (err_f + err_g) * max(1.0, norm) ** (m - 1),
        )
        out.append(
            IsolatedPoint(
                coords=tuple(float(c) for c in root),
                chart="fund",
                nondegenerate=abs(det) > thresh,
            )
        )
    return out


def _torus_dist(a, b) -> float:
    d = np.abs(np.asarray(a) - np.asarray(b))
    d = np.minimum(d, 1.0 - d)
    return float(np.linalg.norm(d))


def _check_separation(points, dedup, metric=None):
    metric = metric or (lambda a, b: float(np.linalg.norm(np.asarray(a) - np.asarray(b))))
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d = metric(points[i], points[j])
            if dedup <= d < 5.0 * dedup:
                raise DetectionInconclusive(
                    "zeros separated by %.2e, too close to the dedup radius" % d
                )


# -- local invariants ---------------------------------------------------------


def _chart_pair_h(f: SmoothMapSpec, g: SmoothMapSpec, point: IsolatedPoint):
    """h = g - f around the point, as a map of chart coordinates."""
    m = f.domain.dim
    x0 = np.array([float(c) for c in point.coords])
    if point.chart == "fund":
        ff = chart_function(f, reduce_torus=False)
        gg = chart_function(g, reduce_torus=False)
        shift = np.round(gg(x0[None, :])[0] - ff(x0[None, :])[0])
        return (lambda pts: gg(pts) - ff(pts) - shift[None, :]), x0
    image = eval_ambient(f, sphere_embed(x0[None, :], point.chart))[0]
    out_chart = str(best_sphere_chart(image[None, :])[0])
    return _sphere_h(f, g, point.chart, out_chart), x0


def local_coincidence_index(f: SmoothMapSpec, g: SmoothMapSpec, point: IsolatedPoint,
                            radius: float = 0.25,
                            config: Optional[DegreeConfig] = None,
                            rng: Optional[np.random.Generator] = None) -> ComponentResult:
    """Local index at an isolated coincidence point: deg(g - f, p).

    Tries the Jacobian sign, then winding (m = 2), then the solid-angle
    integral, then the signed preimage oracle; provenance is recorded.
    """
    if f.codomain.dim != f.domain.dim:
        raise DimensionMismatch("local indices need m = n")
    config = config or DegreeConfig()
    h, x0 = _chart_pair_h(f, g, point)
    m = f.domain.dim
    if _is_linear_torus_pair(f, g):
        c, _, _, _ = _linear_pair_data(f, g)
        jac = np.array(c, dtype=float)
        prob = LocalZeroProblem(h, x0, radius, config=config, validate=False)
        res = local_degree_jacobian(prob, jac)
        return ComponentResult(point, res.value, res.method, res.residual)
    prob = LocalZeroProblem(h, x0, radius, config=config)
    jac, err = fd_jacobian(h, x0, m)
    try:
        res = local_degree_jacobian(prob, jac, jac_error=err)
    except DegenerateJacobian:
        res = _degenerate_degree(prob, m, rng)
    return ComponentResult(point, res.value, res.method, res.residual)


def _degenerate_degree(prob: LocalZeroProblem, m: int,
                       rng: Optional[np.random.Generator]) -> DegreeResult:
    if m == 2:
        return winding_number(prob)
    try:
        return local_degree_kronecker(prob)
    except Exception:
        if m <= 3:
            return local_degree_oracle(prob, rng=rng)
        raise


def submanifold_class_coefficient(f: SmoothMapSpec, g: SmoothMapSpec,
                                  comp: SubmanifoldComponent,
                                  config: Optional[DegreeConfig] = None) -> ComponentResult:
    """Class coefficient of a clean (m-n)-dimensional coincidence component.

    Restricts h = g - f to the n-ball spanned by the transverse frame at the
    basepoint and takes its local degree; the component orientation is chosen
    so that slice frame followed by component directions is positive in T^m.
    """
    m = f.domain.dim
    n = f.codomain.dim
    if m <= n:
        raise DimensionMismatch("submanifold coefficients need m > n")
    if len(comp.transverse_frame) != n or comp.dim != m - n:
        raise FrameNotTransverse("component does not carry a transverse n-frame")
    c, _, _, _ = _linear_pair_data(f, g)
    q_cols = [list(col) for col in comp.transverse_frame]
    cq = [
        [sum(c[i][r] * q_cols[j][r] for r in range(m)) for j in range(n)]
        for i in range(n)
    ]
    det_cq = int_det(cq)
    if det_cq == 0:
        raise FrameNotTransverse("slice frame is tangent to the component")
    coefficient = 1 if det_cq > 0 else -1

    # orient the component: frame followed by directions must be positive
    w_cols = [list(col) for col in comp.directions]
    full = [[q_cols[j][r] for j in range(n)] + [w_cols[j][r] for j in range(m - n)]
            for r in range(m)]
    orient = int_det(full)
    if orient == 0:
        raise FrameNotTransverse("frame does not complement the component directions")
    if orient < 0:
        w_cols[0] = [-a for a in w_cols[0]]

    cls: Dict[tuple, int] = {}
    for k in combinations(range(m), m - n):
        minor = int_det([[w_cols[j][r] for j in range(m - n)] for r in k])
        if minor != 0:
            cls[k] = SLICE_ORIENTATION_SIGN * coefficient * minor
    return ComponentResult(
        comp, coefficient, "jacobian_sign", 0.0, homology_class=cls
    )


# -- orchestration --------------------------------------------------------------


def _build_model(f: SmoothMapSpec, g: SmoothMapSpec) -> CohomologyModel:
    if is_torus_like(f.domain) and is_torus_like(f.codomain):
        if _is_linear_torus_pair(f, g):
            return torus_cohomology_model({"f": f, "g": g})
        raise FamilyMismatch("torus trace formula needs integer-affine maps")
    if f.domain.kind == "sphere" and f.codomain.kind == "sphere":
        return sphere_cohomology_model({"f": f, "g": g})
    raise FamilyMismatch("no analytic model for this domain/codomain pair")


def _radius_for(point: IsolatedPoint, components, cap: float) -> float:
    """Radius below half the distance to the nearest other detected zero."""
    best = math.inf
    here = np.array([float(c) for c in point.coords])
    for other in components:
        if other is point or not isinstance(other, IsolatedPoint):
            continue
        if other.chart == point.chart:
            d = float(np.linalg.norm(here - np.array([float(c) for c in other.coords])))
        elif point.chart in ("z", "w") and other.ambient is not None:
            try:
                oc = sphere_chart_coords(np.array(other.ambient)[None, :], point.chart)[0]
            except Exception:
                continue
            d = float(np.linalg.norm(here - oc))
        elif point.chart == "fund":
            d = _torus_dist(here, [float(c) for c in other.coords])
        else:
            continue
        best = min(best, d)
    if not math.isfinite(best):
        return cap
    return min(cap, 0.4 * best)


def verify_residue_formula(f: SmoothMapSpec, g: SmoothMapSpec,
                           opts: Optional[CoincidenceOptions] = None) -> CoincidenceReport:
    """Compute the global invariant and the local contributions, both ways.

    For m = n the verdict is L(f,g) == sum of local indices; for m > n on
    torus targets it is equality of the global class with the sum of the
    component classes, coefficient by coefficient.  The symmetry value
    reports the opposite-order global invariant, which must equal
    (-1)^n times the original.
    """
    opts = opts or CoincidenceOptions()
    m = f.domain.dim
    n = f.codomain.dim
    if (f.domain, f.codomain) != (g.domain, g.codomain):
        raise DimensionMismatch("maps must share domain and codomain")
    components = find_coincidence_components(f, g, opts)
    rng = np.random.default_rng(opts.seed)

    if m == n:
        model = _build_model(f, g)
        global_value = lefschetz_coincidence_number(model, "f", "g")
        results = []
        for comp in components:
            if not isinstance(comp, IsolatedPoint):
                raise FrameNotTransverse(
                    "component of dimension > 0 in an equal-dimension problem: %r" % (comp,)
                )
            radius = _radius_for(comp, components, opts.radius_cap)
            results.append(
                local_coincidence_index(f, g, comp, radius=radius,
                                         config=opts.degree, rng=rng)
            )
        local_total = sum((Fraction(r.value) for r in results), Fraction(0))
        verdict = global_value == local_total
        symmetry = lefschetz_coincidence_number(model, "g", "f")
        return CoincidenceReport(
            dim_domain=m,
            dim_codomain=n,
            global_value=global_value,
            global_class=None,
            components=tuple(results),
            local_total=local_total,
            verdict=verdict,
            discrepancy=global_value - local_total,
            symmetry_value=symmetry,
            symmetry_ok=symmetry == (-1) ** n * global_value,
        )

    # m > n: exact lattice route on torus targets
    global_class = torus_global_class(f, g)
    results = []
    total: Dict[tuple, int] = {}
    for comp in components:
        if not isinstance(comp, SubmanifoldComponent):
            raise FrameNotTransverse("expected submanifold components for m > n")
        res = submanifold_class_coefficient(f, g, comp, config=opts.degree)
        results.append(res)
        for k, val in res.homology_class.items():
            total[k] = total.get(k, 0) + val
    total = {k: v for k, v in total.items() if v != 0}
    verdict = total == global_class
    discrepancy = {
        k: global_class.get(k, 0) - total.get(k, 0)
        for k in set(global_class) | set(total)
        if global_class.get(k, 0) != total.get(k, 0)
    }
    sym_class = torus_global_class(g, f)
    expect = {k: (-1) ** n * v for k, v in global_class.items()}
    return CoincidenceReport(
        dim_domain=m,
        dim_codomain=n,
        global_value=None,
        global_class=global_class,
        components=tuple(results),
        local_total=total,
        verdict=verdict,
        discrepancy=discrepancy,
        symmetry_value=sym_class,
        symmetry_ok=sym_class == expect,
    )
