"""Local mapping degree of a map with an isolated zero, by several routes.

The degree of h: B^m -> R^m at an isolated zero p is the degree of the
normalized boundary map gamma = h/|h| from the radius-r sphere to the unit
sphere.  Four methods are provided, cross-checked in the tests:

* jacobian_sign: sgn det Dh(p) at a non-degenerate zero.
* kronecker: the solid-angle integral
      (1/area(S^{m-1})) * integral of det[gamma, d gamma/dt_1, ...]
  over the spherical parameter cube (Gauss-Legendre tensor quadrature,
  derivatives by central differences); the angular-form normalization
  1/area(S^{m-1}) makes the identity map integrate to exactly 1.
* winding: continuous-argument accumulation around the circle (m = 2 only).
* oracle: signed count of preimages of a small regular value (grid seeding,
  Newton polishing, dedup) -- the brute-force cross-check.

Raw values are snapped to the nearest integer; the residual is always
reported and a result is only returned when it is below the snap tolerance.
All quadrature reductions run in fixed index order (pairwise numpy sums), so
raw values are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class DegenerateJacobian(Exception):
    pass


class NoConvergence(Exception):
    pass


class BoundaryZero(Exception):
    """h vanishes on the boundary sphere within the separation threshold."""


class OracleInconclusive(Exception):
    pass


def sphere_area(k: int) -> float:
    """Surface area of the unit sphere S^(k-1) in R^k: 2 pi^(k/2) / Gamma(k/2)."""
    return 2.0 * math.pi ** (k / 2.0) / math.gamma(k / 2.0)


@dataclass(frozen=True)
class AngularFormSpec:
    """Normalized solid-angle density on R^m minus the origin."""

    dimension: int

    @property
    def normalization(self) -> float:
        return 1.0 / sphere_area(self.dimension)


@dataclass
class DegreeConfig:
    snap_tol: float = 1e-6
    newton_tol: float = 1e-12
    separation_rel: float = 1e-9
    zero_tol: float = 1e-6
    nondegeneracy_rel: float = 1e-6
    initial_order: int = 8
    initial_samples: int = 64
    max_evals: int = 2_000_000
    oracle_grid: int = 24
    oracle_retries: int = 5


@dataclass(frozen=True)
class DegreeResult:
    value: int
    raw: float
    residual: float
    method: str
    diagnostics: dict = field(default_factory=dict)


def _as_batched(h: Callable) -> Callable:
    """Wrap h so it accepts (npoints, m) arrays even if written pointwise."""

    def call(points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        try:
            out = np.asarray(h(pts), dtype=float)
            if out.shape == pts.shape:
                return out
        except Exception:
            pass
        return np.stack([np.asarray(h(p), dtype=float) for p in pts])

    return call


def _boundary_directions(m: int, count: int = 96) -> np.ndarray:
    """Deterministic unit directions for boundary separation checks."""
    if m == 1:
        return np.array([[-1.0], [1.0]])
    if m == 2:
        th = 2.0 * math.pi * np.arange(count) / count
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    # spherical Fibonacci points for m >= 3 (generalized via normalization)
    rng = np.random.default_rng(1234567)
    v = rng.standard_normal((count * 2, m))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


class LocalZeroProblem:
    """A map from an m-ball chart to R^m vanishing only at the center.

    Construction verifies that h(center) is small and that |h| stays above
    the separation threshold on sampled boundary directions.
    """

    def __init__(self, h: Callable, center, radius: float, dim: Optional[int] = None,
                 config: Optional[DegreeConfig] = None, validate: bool = True):
        self.center = np.asarray(center, dtype=float).reshape(-1)
        self.dim = dim if dim is not None else self.center.shape[0]
        self.radius = float(radius)
        self.config = config or DegreeConfig()
        self.h = _as_batched(h)
        dirs = _boundary_directions(self.dim)
        vals = self.h(self.center[None, :] + self.radius * dirs)
        norms = np.linalg.norm(vals, axis=1)
        self.boundary_scale = float(np.max(norms)) if norms.size else 0.0
        self.separation = self.config.separation_rel * (1.0 + self.boundary_scale)
        self.boundary_min = float(np.min(norms)) if norms.size else 0.0
        if validate:
            center_val = np.linalg.norm(self.h(self.center[None, :])[0])
            if center_val > self.config.zero_tol * (1.0 + self.boundary_scale):
                raise ValueError(
                    "h(center) = %.3e is not a zero within tolerance" % center_val
                )
            if self.boundary_min <= self.separation:
                raise BoundaryZero(
                    "h reaches %.3e on the boundary sphere" % self.boundary_min
                )


def _snap(raw: float, tol: float, method: str, diagnostics: dict) -> DegreeResult:
    value = round(raw)
    residual = abs(raw - value)
    if residual >= 0.5:
        raise NoConvergence("raw value %.6f has no nearest integer" % raw)
    if residual > tol:
        raise NoConvergence(
            "residual %.3e above snap tolerance %.1e (%s)" % (residual, tol, method)
        )
    return DegreeResult(int(value), raw, residual, method, diagnostics)


# -- jacobian sign -------------------------------------------------------------


def local_degree_jacobian(prob: LocalZeroProblem, jac_at_p: np.ndarray,
                          jac_error: float = 0.0) -> DegreeResult:
    """Sign of det Dh(p); raises DegenerateJacobian below the threshold."""
    jac = np.asarray(jac_at_p, dtype=float)
    m = prob.dim
    det = float(np.linalg.det(jac)) if jac.size else 1.0
    norm = float(np.linalg.norm(jac))
    thresh = prob.config.nondegeneracy_rel * max(1.0, norm) ** m
    if jac_error:
        thresh = max(thresh, 20.0 * m * jac_error * max(1.0, norm) ** (m - 1))
    if abs(det) <= thresh:
        raise DegenerateJacobian(
            "det %.3e below non-degeneracy threshold %.3e" % (det, thresh)
        )
    value = 1 if det > 0 else -1
    return DegreeResult(value, float(value), 0.0, "jacobian_sign",
                        {"det": det, "threshold": thresh})


# -- spherical parametrization and the Kronecker integral -----------------------


def _sphere_param(k: int):
    """Iterated-angle parametrization of S^(k-1) over its (k-1)-cube.

    Angles t_1..t_{k-2} in [0, pi], t_{k-1} in [0, 2 pi).  The metric factors
    are not split off: the pullback determinant below absorbs them.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    ranges = [(0.0, math.pi)] * (k - 2) + [(0.0, 2.0 * math.pi)]

    def embed(t: np.ndarray) -> np.ndarray:
        t = np.atleast_2d(t)
        out = np.empty((t.shape[0], k))
        sines = np.ones(t.shape[0])
        for i in range(k - 1):
            out[:, i] = sines * np.cos(t[:, i])
            sines = sines * np.sin(t[:, i])
        out[:, k - 1] = sines
        return out

    return ranges, embed


def _gauss_grid(ranges, order: int):
    """Tensor Gauss-Legendre nodes and weights over a box."""
    nodes_1d = []
    weights_1d = []
    for (a, b) in ranges:
        x, w = np.polynomial.legendre.leggauss(order)
        nodes_1d.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights_1d.append(0.5 * (b - a) * w)
    grids = np.meshgrid(*nodes_1d, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*weights_1d, indexing="ij")
    wts = np.ones(pts.shape[0])
    for g in wgrids:
        wts = wts * g.ravel()
    return pts, wts


def _pullback_integral(unit_map: Callable, k: int, order: int) -> float:
    """Integral over S^(k-1) parameters of det[gamma, d_1 gamma, ..., d_{k-1} gamma]."""
    ranges, _ = _sphere_param(k)
    pts, wts = _gauss_grid(ranges, order)
    npts = pts.shape[0]
    step = float(np.finfo(float).eps) ** (1.0 / 3.0)
    cols = np.empty((npts, k, k))
    cols[:, :, 0] = unit_map(pts)
    for j in range(k - 1):
        tp = pts.copy()
        tm = pts.copy()
        tp[:, j] += step
        tm[:, j] -= step
        cols[:, :, j + 1] = (unit_map(tp) - unit_map(tm)) / (2.0 * step)
    dets = np.linalg.det(cols)
    return float(np.dot(wts, dets))


def local_degree_kronecker(prob: LocalZeroProblem, order: Optional[int] = None) -> DegreeResult:
    """Solid-angle integral of h/|h| over the boundary sphere.

    Doubles the quadrature order until the snapped value stabilizes and the
    residual drops below the snap tolerance, or the evaluation budget runs
    out.
    """
    cfg = prob.config
    m = prob.dim
    if m == 1:
        pts = prob.center[None, :] + prob.radius * np.array([[-1.0], [1.0]])
        vals = prob.h(pts)[:, 0]
        if np.min(np.abs(vals)) <= prob.separation:
            raise BoundaryZero("h vanishes at a boundary point")
        raw = 0.5 * (math.copysign(1.0, vals[1]) - math.copysign(1.0, vals[0]))
        return _snap(raw, cfg.snap_tol, "kronecker",
                     {"order": 2, "radius": prob.radius, "evals": 2})

    min_norm = math.inf
    evals = 0

    def gamma(t: np.ndarray) -> np.ndarray:
        nonlocal min_norm, evals
        _, embed = _sphere_param(m)
        x = prob.center[None, :] + prob.radius * embed(t)
        v = prob.h(x)
        n = np.linalg.norm(v, axis=1)
        evals += t.shape[0]
        min_norm = min(min_norm, float(np.min(n)))
        return v / np.maximum(n, 1e-300)[:, None]

    order = order or cfg.initial_order
    area = sphere_area(m)
    prev_raw = None
    while True:
        raw = _pullback_integral(gamma, m, order) / area
        if min_norm <= prob.separation:
            raise BoundaryZero("h reaches %.3e on the boundary sphere" % min_norm)
        diagnostics = {"order": order, "radius": prob.radius, "evals": evals}
        if abs(raw - round(raw)) <= cfg.snap_tol and (
            prev_raw is None or abs(raw - prev_raw) <= 10.0 * cfg.snap_tol
        ):
            if prev_raw is None:
                prev_raw = raw
                order *= 2
                continue
            return _snap(raw, cfg.snap_tol, "kronecker", diagnostics)
        if evals > cfg.max_evals:
            raise NoConvergence(
                "quadrature budget exhausted at order %d (raw %.6f)" % (order, raw)
            )
        prev_raw = raw
        order *= 2


def global_sphere_degree(ambient_map: Callable, m: int, initial_order: int = 16,
                         snap_tol: float = 1e-6, max_evals: int = 2_000_000) -> DegreeResult:
    """Degree of a self-map of S^m via the global solid-angle integral.

    ambient_map sends (npoints, m+1) unit vectors to image unit vectors.
    """
    k = m + 1
    evals = 0

    def gamma(t: np.ndarray) -> np.ndarray:
        nonlocal evals
        _, embed = _sphere_param(k)
        v = np.asarray(ambient_map(embed(t)), dtype=float)
        evals += t.shape[0]
        n = np.linalg.norm(v, axis=1)
        return v / np.maximum(n, 1e-300)[:, None]

    area = sphere_area(k)
    order = initial_order
    prev_raw = None
    while True:
        raw = _pullback_integral(gamma, k, order) / area
        if abs(raw - round(raw)) <= snap_tol and prev_raw is not None \
                and abs(raw - prev_raw) <= 10.0 * snap_tol:
            return _snap(raw, snap_tol, "kronecker",
                         {"order": order, "evals": evals, "global": True})
        if evals > max_evals:
            raise NoConvergence("sphere-degree budget exhausted (raw %.6f)" % raw)
        prev_raw = raw
        order *= 2


# -- winding number (m = 2) ------------------------------------------------------


def winding_number(prob: LocalZeroProblem, samples: Optional[int] = None) -> DegreeResult:
    """Total continuous argument of h around the boundary circle, over 2 pi.

    Doubles the sample count until two consecutive counts agree and every
    step turns by less than pi/2.
    """
    if prob.dim != 2:
        raise ValueError("winding numbers need m = 2")
    cfg = prob.config
    n = samples or cfg.initial_samples
    prev: Optional[float] = None
    evals = 0
    while True:
        th = 2.0 * math.pi * np.arange(n + 1) / n
        pts = prob.center[None, :] + prob.radius * np.stack(
            [np.cos(th), np.sin(th)], axis=-1
        )
        vals = prob.h(pts)
        evals += n + 1
        norms = np.linalg.norm(vals, axis=1)
        if np.min(norms) <= prob.separation:
            raise BoundaryZero("h reaches %.3e on the boundary circle" % np.min(norms))
        args = np.arctan2(vals[:, 1], vals[:, 0])
        steps = np.diff(args)
        steps = (steps + math.pi) % (2.0 * math.pi) - math.pi
        ok = bool(np.max(np.abs(steps)) < math.pi / 2.0)
        raw = float(np.sum(steps) / (2.0 * math.pi))
        if ok and prev is not None and round(prev) == round(raw):
            return _snap(raw, cfg.snap_tol, "winding",
                         {"samples": n, "radius": prob.radius, "evals": evals})
        if evals > cfg.max_evals:
            raise NoConvergence("winding sampling budget exhausted (raw %.6f)" % raw)
        prev = raw if ok else None
        n *= 2


# -- finite differences ----------------------------------------------------------


def fd_jacobian(fn: Callable, x: np.ndarray, n_out: int, richardson: bool = True):
    """Central-difference Jacobian; one Richardson level when requested.

    Returns (jacobian, error_estimate); the estimate is the Richardson
    defect, 0.0 when extrapolation is disabled.
    """
    x = np.asarray(x, dtype=float)
    m = x.shape[0]
    base_step = float(np.finfo(float).eps) ** (1.0 / 3.0)

    def diff(scale):
        jac = np.empty((n_out, m))
        for j in range(m):
            h = base_step * scale * (1.0 + abs(x[j]))
            xp = x.copy()
            xm = x.copy()
            xp[j] += h
            xm[j] -= h
            jac[:, j] = (fn(xp[None, :])[0] - fn(xm[None, :])[0]) / (2.0 * h)
        return jac

    coarse = diff(1.0)
    if not richardson:
        return coarse, 0.0
    fine = diff(0.5)
    jac = (4.0 * fine - coarse) / 3.0
    err = float(np.max(np.abs(fine - coarse))) / 3.0 if coarse.size else 0.0
    return jac, err


# -- signed preimage-count oracle --------------------------------------------------


def _newton_solve(h: Callable, x0: np.ndarray, target: np.ndarray, tol: float,
                  max_iter: int = 50) -> Optional[np.ndarray]:
    x = np.asarray(x0, dtype=float).copy()
    m = x.shape[0]
    for _ in range(max_iter):
        val = h(x[None, :])[0] - target
        if np.linalg.norm(val) < tol:
            return x
        jac, _ = fd_jacobian(h, x, m, richardson=False)
        try:
            delta = np.linalg.solve(jac, val)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(delta)):
            return None
        x = x - delta
    return None


def local_degree_oracle(prob: LocalZeroProblem, grid: Optional[int] = None,
                        rng: Optional[np.random.Generator] = None) -> DegreeResult:
    """Degree as the signed number of preimages of a small regular value.

    Seeds Newton from a dense grid over the ball, deduplicates the roots and
    sums Jacobian signs; retries with a fresh regular value if any root looks
    singular.  Limited to m <= 3 by cost.
    """
    m = prob.dim
    if m > 3:
        raise ValueError("oracle degree limited to m <= 3")
    cfg = prob.config
    rng = rng or np.random.default_rng(987654321)
    res = grid or cfg.oracle_grid

    axes = [np.linspace(-prob.radius, prob.radius, res) for _ in range(m)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in mesh], axis=-1)
    inside = np.linalg.norm(pts, axis=1) <= prob.radius * 0.98
    pts = prob.center[None, :] + pts[inside]

    magnitude = 0.3 * prob.boundary_min
    for _ in range(cfg.oracle_retries):
        direction = rng.standard_normal(m)
        direction /= np.linalg.norm(direction)
        target = magnitude * direction
        vals = prob.h(pts)
        dist = np.linalg.norm(vals - target[None, :], axis=1)
        seeds = pts[np.argsort(dist)[: min(200, pts.shape[0])]]
        roots = []
        for seed in seeds:
            root = _newton_solve(prob.h, seed, target, cfg.newton_tol * (1.0 + prob.boundary_scale))
            if root is None:
                continue
            if np.linalg.norm(root - prob.center) >= prob.radius:
                continue
            if any(np.linalg.norm(root - r) < 1e-6 * (1.0 + prob.radius) for r in roots):
                continue
            roots.append(root)
        total = 0
        regular = True
        for root in roots:
            jac, err = fd_jacobian(prob.h, root, m)
            det = float(np.linalg.det(jac))
            norm = float(np.linalg.norm(jac))
            if abs(det) <= max(1e-8, 20.0 * m * err) * max(1.0, norm) ** (m - 1):
                regular = False
                break
            total += 1 if det > 0 else -1
        if regular:
            return DegreeResult(total, float(total), 0.0, "oracle",
                                {"grid": res, "radius": prob.radius,
                                 "preimages": len(roots)})
        magnitude *= 0.5
    raise OracleInconclusive("no regular value found within the retry budget")
