import random
from fractions import Fraction

import pytest

from coinv.cohomology import (
    betti_numbers,
    coboundary_matrix,
    cohomology_basis,
    cup_pairing,
    induced_map,
    simplicial_cohomology_model,
)
from coinv.exact_linalg import RationalMatrix
from coinv.simplicial import (
    SimplicialMapSpec,
    build_complex,
    chain_map_matrix,
    csaszar_torus,
    octahedron,
    tetrahedron_boundary,
    validate_simplicial_map,
)

OCTA = octahedron()
TORUS = csaszar_torus()
TETRA = tetrahedron_boundary()


def test_betti_numbers():
    assert betti_numbers(OCTA) == (1, 0, 1)
    assert betti_numbers(TORUS) == (1, 2, 1)
    assert cohomology_basis(TETRA, 1).betti == 0


def test_euler_from_betti():
    for k in (OCTA, TORUS, TETRA):
        betti = betti_numbers(k)
        assert sum((-1) ** q * b for q, b in enumerate(betti)) == k.euler_characteristic()


def test_basis_cocycles_closed():
    for k in (OCTA, TORUS):
        for q in range(k.dimension + 1):
            basis = cohomology_basis(k, q)
            delta = coboundary_matrix(k, q)
            for j in range(basis.betti):
                assert all(x == 0 for x in delta.apply(basis.basis_cocycles.col(j)))


def test_pairing_degree_zero():
    pm = cup_pairing(OCTA, 0)
    assert pm.matrix.rows == 1 and pm.matrix.cols == 1
    assert pm.matrix.entry(0, 0) != 0


def test_pairings_full_rank():
    for k in (OCTA, TORUS, TETRA):
        for p in range(k.dimension + 1):
            pm = cup_pairing(k, p)
            assert pm.matrix.rank() == pm.matrix.rows == pm.matrix.cols


def test_torus_middle_pairing_antisymmetric():
    pm = cup_pairing(TORUS, 1)
    assert pm.matrix.rows == 2
    assert pm.matrix.transpose() == -pm.matrix
    assert pm.matrix.rank() == 2


def test_induced_identity():
    s = validate_simplicial_map(SimplicialMapSpec(OCTA, OCTA, list(range(6))))
    for q in range(3):
        mat = induced_map(s, q)
        assert mat == RationalMatrix.identity(mat.rows)


def test_induced_constant():
    s = validate_simplicial_map(SimplicialMapSpec(OCTA, OCTA, [0] * 6))
    assert induced_map(s, 0) == RationalMatrix.identity(1)
    for q in (1, 2):
        assert induced_map(s, q).is_zero()


def _tetra_map(perm):
    return validate_simplicial_map(SimplicialMapSpec(TETRA, TETRA, perm))


def test_functoriality_random_vertex_maps():
    rng = random.Random(5)
    for _ in range(6):
        p1 = list(range(4))
        p2 = list(range(4))
        rng.shuffle(p1)
        rng.shuffle(p2)
        phi = _tetra_map(p1)
        psi = _tetra_map(p2)
        composed = _tetra_map([p2[v] for v in p1])  # psi after phi
        for q in range(3):
            assert induced_map(composed, q) == induced_map(phi, q) @ induced_map(psi, q)


def test_pullback_commutes_with_coboundary():
    rng = random.Random(9)
    maps = [list(range(4)), [1, 2, 3, 0], [0, 0, 0, 0]]
    for _ in range(3):
        p = list(range(4))
        rng.shuffle(p)
        maps.append(p)
    for p in maps:
        s = _tetra_map(p)
        for q in range(2):
            pull_q = chain_map_matrix(s, q).transpose()
            pull_q1 = chain_map_matrix(s, q + 1).transpose()
            assert coboundary_matrix(TETRA, q) @ pull_q == pull_q1 @ coboundary_matrix(TETRA, q)


def _relabel(k, perm):
    tops = [
        (s, tuple(perm[v] for v in t))
        for s, t in zip(k.top_orientation, k.simplices[k.dimension])
    ]
    return build_complex(tops)


def test_vertex_relabeling_invariance():
    rng = random.Random(13)
    perm = list(range(7))
    rng.shuffle(perm)
    relabeled = _relabel(TORUS, perm)
    assert betti_numbers(relabeled) == (1, 2, 1)
    for p in range(3):
        assert cup_pairing(relabeled, p).matrix.rank() == cup_pairing(TORUS, p).matrix.rank()


def test_simplicial_model_assembly():
    ident = SimplicialMapSpec(OCTA, OCTA, list(range(6)))
    anti = SimplicialMapSpec(OCTA, OCTA, [5, 3, 4, 1, 2, 0])
    model = simplicial_cohomology_model(OCTA, OCTA, {"id": ident, "a": anti})
    assert model.betti_domain == (1, 0, 1)
    assert model.induced_matrix("a", 2).entry(0, 0) == -1
    assert model.induced_matrix("id", 2) == RationalMatrix.identity(1)
