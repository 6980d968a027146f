import random
from fractions import Fraction

import numpy as np
import pytest

from coinv.analytic import (
    ChartDomainError,
    ChartExpr,
    CirclePower,
    FamilyMismatch,
    NotWellDefinedOnQuotient,
    SmoothMapSpec,
    SphereRational,
    TorusLinear,
    best_sphere_chart,
    eval_ambient,
    eval_map,
    exterior_power,
    jacobian,
    parse_map_expr,
    sphere,
    sphere_chart_coords,
    sphere_cohomology_model,
    sphere_degree,
    sphere_embed,
    sphere_transition,
    torus,
    torus_cohomology_model,
    torus_pairing,
)
from coinv.cohomology import betti_numbers, cup_pairing, induced_map, simplicial_cohomology_model
from coinv.exact_linalg import RationalMatrix
from coinv.expressions import ParseError, parse_expressions
from coinv.simplicial import SimplicialMapSpec, csaszar_torus

T1 = torus(1)
T2 = torus(2)
S2 = sphere(2)


def tl(matrix, offset=None):
    rows = tuple(tuple(r) for r in matrix)
    off = tuple(Fraction(x) for x in (offset or [0] * len(rows)))
    return TorusLinear(rows, off)


# -- parsing -------------------------------------------------------------------


def test_parse_recognizes_torus_linear():
    spec = parse_map_expr("2*x + y; x - y", T2, T2)
    assert isinstance(spec.family, TorusLinear)
    assert spec.family.matrix == ((2, 1), (1, -1))
    assert spec.family.offset == (Fraction(0), Fraction(0))


def test_parse_recognizes_offset():
    spec = parse_map_expr("x + 0.5; y", T2, T2)
    assert spec.family.matrix == ((1, 0), (0, 1))
    assert spec.family.offset == (Fraction(1, 2), Fraction(0))


def test_parse_error_position():
    with pytest.raises(ParseError):
        parse_map_expr("sin(x; )", T2, T2)


def test_non_integer_linear_rejected():
    with pytest.raises(NotWellDefinedOnQuotient):
        parse_map_expr("1.5*x; y", T2, T2)


def test_nonperiodic_rejected_by_sampling():
    with pytest.raises(NotWellDefinedOnQuotient):
        parse_map_expr("x*x; y", T2, T2)


def test_periodic_nonlinear_accepted():
    spec = parse_map_expr("x + sin(2*pi*y)", T2, T1)
    assert isinstance(spec.family, ChartExpr)


def test_arity_mismatch():
    from coinv.expressions import ArityMismatch

    with pytest.raises(ArityMismatch):
        parse_map_expr("x", T2, T2)


# -- evaluation ----------------------------------------------------------------


def test_eval_torus_identity():
    spec = SmoothMapSpec(T2, T2, tl([[1, 0], [0, 1]]))
    assert np.allclose(eval_map(spec, [0.3, 0.7]), [0.3, 0.7])


def test_eval_circle_power():
    spec = SmoothMapSpec(T1, T1, CirclePower(2))
    assert np.allclose(eval_map(spec, [0.3]), [0.6])


def test_eval_sphere_rational_identity_like():
    spec = SmoothMapSpec(S2, S2, SphereRational((0, 0, 1), (1,)))
    assert np.allclose(eval_map(spec, [1.0, 0.0]), [1.0, 0.0])


def test_torus_lattice_periodicity_exact():
    spec = SmoothMapSpec(T2, T2, tl([[2, 1], [1, 1]], [Fraction(1, 4), 0]))
    # dyadic points keep float arithmetic exact
    pts = [np.array([i / 64.0, j / 64.0]) for i, j in [(3, 5), (10, 40), (63, 1)]]
    for x in pts:
        base = eval_map(spec, x)
        for i in range(2):
            e = np.zeros(2)
            e[i] = 1.0
            assert np.array_equal(eval_map(spec, x + e), base)


# -- jacobians -----------------------------------------------------------------


def test_jacobian_torus_linear_exact():
    spec = SmoothMapSpec(T2, T2, tl([[2, 1], [1, 1]]))
    rng = np.random.default_rng(0)
    mats = [jacobian(spec, rng.uniform(0, 1, 2)) for _ in range(10)]
    for mat, err in mats:
        assert err == 0.0
        assert np.array_equal(mat, [[2.0, 1.0], [1.0, 1.0]])


def test_jacobian_circle_power():
    spec = SmoothMapSpec(T1, T1, CirclePower(3))
    mat, err = jacobian(spec, [0.2])
    assert err == 0.0 and np.array_equal(mat, [[3.0]])


def test_jacobian_finite_difference():
    spec = SmoothMapSpec(S2, S2, ChartExpr(parse_expressions("x*x; y", 2)))
    mat, err = jacobian(spec, [1.0, 0.0])
    assert np.max(np.abs(mat - [[2.0, 0.0], [0.0, 1.0]])) < 1e-8
    assert err < 1e-6


# -- sphere charts ---------------------------------------------------------------


def test_sphere_chart_roundtrip():
    rng = np.random.default_rng(1)
    pts = rng.standard_normal((20, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    for chart in ("z", "w"):
        ok = np.abs(pts[:, -1] - (1.0 if chart == "z" else -1.0)) > 1e-3
        coords = sphere_chart_coords(pts[ok], chart)
        back = sphere_embed(coords, chart)
        assert np.max(np.abs(back - pts[ok])) < 1e-12


def test_sphere_transition_involution():
    rng = np.random.default_rng(2)
    x = rng.uniform(-2, 2, (10, 2))
    assert np.max(np.abs(sphere_transition(sphere_transition(x)) - x)) < 1e-12


def test_transition_matches_charts():
    rng = np.random.default_rng(3)
    pts = rng.standard_normal((10, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    pts = pts[np.abs(pts[:, -1]) < 0.9]
    z = sphere_chart_coords(pts, "z")
    w = sphere_chart_coords(pts, "w")
    assert np.max(np.abs(sphere_transition(z) - w)) < 1e-12


def test_chart_pole_raises():
    with pytest.raises(ChartDomainError):
        sphere_chart_coords(np.array([[0.0, 0.0, 1.0]]), "z")


def test_transition_orientation_preserving():
    # Jacobian determinant of the z->w transition is positive
    from coinv.degree import fd_jacobian

    rng = np.random.default_rng(4)
    for _ in range(5):
        x = rng.uniform(0.2, 1.5, 2) * rng.choice([-1, 1], 2)
        jac, _ = fd_jacobian(lambda p: sphere_transition(p), x, 2)
        assert np.linalg.det(jac) > 0


# -- exterior powers and torus model ----------------------------------------------


def _rand_int_matrix(rng, n):
    return RationalMatrix.from_rows(
        [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    )


def test_exterior_power_top_is_det():
    rng = random.Random(17)
    for n in (2, 3):
        for _ in range(5):
            m = _rand_int_matrix(rng, n)
            top = exterior_power(m, n)
            assert top.rows == top.cols == 1
            assert top.entry(0, 0) == m.det()


def test_exterior_power_functorial():
    rng = random.Random(23)
    for _ in range(5):
        a = _rand_int_matrix(rng, 3)
        b = _rand_int_matrix(rng, 3)
        for q in (1, 2, 3):
            left = exterior_power((a @ b).transpose(), q)
            right = exterior_power(b.transpose(), q) @ exterior_power(a.transpose(), q)
            assert left == right


def test_torus_model_identity():
    spec = SmoothMapSpec(T2, T2, tl([[1, 0], [0, 1]]))
    model = torus_cohomology_model({"f": spec})
    assert model.betti_domain == (1, 2, 1)
    for q in range(3):
        mat = model.induced_matrix("f", q)
        assert mat == RationalMatrix.identity(mat.rows)


def test_torus_model_top_is_det():
    spec = SmoothMapSpec(T2, T2, tl([[2, 1], [1, 1]]))
    model = torus_cohomology_model({"f": spec})
    assert model.induced_matrix("f", 2).entry(0, 0) == 1  # det A


def test_torus_model_constant_map():
    spec = SmoothMapSpec(T2, T2, tl([[0, 0], [0, 0]]))
    model = torus_cohomology_model({"f": spec})
    for q in (1, 2):
        assert model.induced_matrix("f", q).is_zero()


def test_offsets_do_not_change_model():
    a = SmoothMapSpec(T2, T2, tl([[2, 1], [1, 1]]))
    b = SmoothMapSpec(T2, T2, tl([[2, 1], [1, 1]], [Fraction(1, 3), Fraction(2, 7)]))
    ma = torus_cohomology_model({"f": a})
    mb = torus_cohomology_model({"f": b})
    assert ma.induced["f"] == mb.induced["f"]
    assert ma.pairing_domain == mb.pairing_domain


def test_torus_pairing_shape_and_rank():
    for m in (1, 2, 3):
        for q in range(m + 1):
            d = torus_pairing(m, q)
            assert d.rows == d.cols or d.rank() == min(d.rows, d.cols)
            assert d.rank() == d.rows


def test_family_mismatch():
    spec = SmoothMapSpec(S2, S2, SphereRational((0, 1), (1,)))
    with pytest.raises(FamilyMismatch):
        torus_cohomology_model({"f": spec})


# -- sphere model ------------------------------------------------------------------


def test_sphere_degree_algebraic():
    assert sphere_degree(SmoothMapSpec(S2, S2, SphereRational((0, 0, 0, 1), (1,)))) == 3
    assert sphere_degree(SmoothMapSpec(S2, S2, SphereRational((0, 1), (1,)))) == 1


def test_rational_reduction():
    # (z^2 + z) / z reduces to z + 1: degree 1
    fam = SphereRational((0, 1, 1), (0, 1))
    assert fam.algebraic_degree() == 1


def test_sphere_degree_kronecker_antipodal():
    anti = parse_map_expr("-x/(x*x + y*y); -y/(x*x + y*y)", S2, S2)
    assert sphere_degree(anti) == -1


def test_antipodal_ambient():
    anti = parse_map_expr("-x/(x*x + y*y); -y/(x*x + y*y)", S2, S2)
    rng = np.random.default_rng(5)
    pts = rng.standard_normal((8, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    assert np.max(np.abs(eval_ambient(anti, pts) + pts)) < 1e-12


def test_sphere_model_top_matrices():
    f = SmoothMapSpec(S2, S2, SphereRational((0, 0, 1), (1,)))
    model = sphere_cohomology_model({"f": f})
    assert model.betti_domain == (1, 0, 1)
    assert model.induced_matrix("f", 2).entry(0, 0) == 2


# -- backend agreement ----------------------------------------------------------------


def test_backends_agree_on_torus_identity():
    k = csaszar_torus()
    smap = SimplicialMapSpec(k, k, list(range(7)))
    simp = simplicial_cohomology_model(k, k, {"f": smap})
    spec = SmoothMapSpec(T2, T2, tl([[1, 0], [0, 1]]))
    ana = torus_cohomology_model({"f": spec})
    assert simp.betti_domain == ana.betti_domain
    for q in range(3):
        assert simp.induced_matrix("f", q).trace() == ana.induced_matrix("f", q).trace()
