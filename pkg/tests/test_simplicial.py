import random
from fractions import Fraction

import pytest

from coinv.exact_linalg import RationalMatrix, rref
from coinv.simplicial import (
    NotClosedManifold,
    NotOrientable,
    NotSimplicial,
    DegreeOutOfRange,
    SimplicialMapSpec,
    boundary_matrix,
    build_complex,
    chain_map_matrix,
    circle,
    csaszar_torus,
    fundamental_cycle,
    octahedron,
    tetrahedron_boundary,
    validate_simplicial_map,
)


def test_tetrahedron_counts():
    k = tetrahedron_boundary()
    assert k.counts() == (4, 6, 4)
    assert k.euler_characteristic() == 2


def test_octahedron_counts_and_euler():
    k = octahedron()
    assert k.counts() == (6, 12, 8)
    assert k.euler_characteristic() == 2


def test_csaszar_torus_counts():
    k = csaszar_torus()
    assert k.counts() == (7, 21, 14)
    assert k.euler_characteristic() == 0


def test_duplicate_triangles_rejected():
    with pytest.raises(NotClosedManifold):
        build_complex([(1, (0, 1, 2)), (-1, (0, 1, 2))])


def test_open_surface_rejected():
    with pytest.raises(NotClosedManifold):
        build_complex([(1, (0, 1, 2)), (1, (0, 1, 3))])


def test_bad_orientation_rejected():
    # octahedron with one sign flipped: the top chain is no longer a cycle
    tops = [
        (1, (0, 1, 2)), (1, (0, 2, 3)), (1, (0, 3, 4)), (-1, (0, 1, 4)),
        (-1, (1, 2, 5)), (-1, (2, 3, 5)), (-1, (3, 4, 5)), (-1, (1, 4, 5)),
    ]
    with pytest.raises(NotOrientable):
        build_complex(tops)


def test_boundary_sign_convention():
    # on the 3-gon circle the edge (0,1) has boundary [1] - [0]
    k = circle(3)
    bd = boundary_matrix(k, 1)
    j = k.simplex_index(1, (0, 1))
    col = bd.col(j)
    assert col[k.simplex_index(0, (0,))] == -1
    assert col[k.simplex_index(0, (1,))] == 1


def test_boundary_degree_range():
    k = octahedron()
    with pytest.raises(DegreeOutOfRange):
        boundary_matrix(k, 0)
    with pytest.raises(DegreeOutOfRange):
        boundary_matrix(k, 3)


def test_boundary_squares_to_zero():
    for k in (tetrahedron_boundary(), octahedron(), csaszar_torus()):
        for q in range(2, k.dimension + 1):
            assert (boundary_matrix(k, q - 1) @ boundary_matrix(k, q)).is_zero()


def test_boundary_ranks_tetrahedron():
    k = tetrahedron_boundary()
    assert rref(boundary_matrix(k, 1))[1] == 3
    assert rref(boundary_matrix(k, 2))[1] == 3


def test_fundamental_cycle_is_cycle():
    for k in (tetrahedron_boundary(), octahedron(), csaszar_torus()):
        cyc = fundamental_cycle(k)
        assert set(cyc) <= {Fraction(1), Fraction(-1)}
        assert all(x == 0 for x in boundary_matrix(k, k.dimension).apply(cyc))


def test_fundamental_cycle_matches_kernel():
    # the cycle space of the top boundary operator is one-dimensional
    from coinv.exact_linalg import kernel_basis

    k = octahedron()
    ker = kernel_basis(boundary_matrix(k, 2))
    assert ker.cols == 1
    col = ker.col(0)
    cyc = fundamental_cycle(k)
    ratio = cyc[0] / col[0]
    assert [ratio * x for x in col] == cyc


def test_reversed_orientation_also_valid():
    k = octahedron()
    flipped = build_complex(
        [(-s, t) for s, t in zip(k.top_orientation, k.simplices[2])]
    )
    assert fundamental_cycle(flipped) == [-x for x in fundamental_cycle(k)]


def test_faces_shared_with_opposite_orientation():
    # equivalent statement: every (m-1)-row of the signed top boundary sums to 0
    k = csaszar_torus()
    bd = boundary_matrix(k, 2)
    signed = bd.apply(fundamental_cycle(k))
    assert all(x == 0 for x in signed)


def test_validate_identity_and_constant():
    k = octahedron()
    validate_simplicial_map(SimplicialMapSpec(k, k, list(range(6))))
    validate_simplicial_map(SimplicialMapSpec(k, k, [0] * 6))


def test_validate_rejects_non_simplicial():
    k = octahedron()
    # 0 and 5 are antipodal poles, not adjacent: edge (0,1) -> (0,5) fails
    image = [0, 5, 0, 0, 0, 0]
    with pytest.raises(NotSimplicial):
        validate_simplicial_map(SimplicialMapSpec(k, k, image))


def test_chain_map_commutes_with_boundary():
    k = tetrahedron_boundary()
    rng = random.Random(11)
    perms = [list(range(4))]
    for _ in range(5):
        p = list(range(4))
        rng.shuffle(p)
        perms.append(p)
    perms.append([0, 0, 0, 0])
    for p in perms:
        s = validate_simplicial_map(SimplicialMapSpec(k, k, p))
        for q in range(1, 3):
            left = chain_map_matrix(s, q - 1) @ boundary_matrix(k, q)
            right = boundary_matrix(k, q) @ chain_map_matrix(s, q)
            assert left == right
