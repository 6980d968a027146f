import random
from fractions import Fraction

import pytest

from coinv.exact_linalg import RationalMatrix, kernel_basis, rref, solve


def M(rows):
    return RationalMatrix.from_rows(rows)


def test_rref_identity():
    red, rank, pivots = rref(RationalMatrix.identity(2))
    assert rank == 2
    assert pivots == [0, 1]
    assert red == RationalMatrix.identity(2)


def test_rref_proportional_rows():
    red, rank, pivots = rref(M([[1, 2], [2, 4]]))
    assert rank == 1
    assert pivots == [0]
    assert red == M([[1, 2], [0, 0]])


def test_rref_zero_matrix():
    _, rank, pivots = rref(M([[0]]))
    assert rank == 0
    assert pivots == []


def _random_matrix(rng, rows, cols, span=6):
    return RationalMatrix(
        rows, cols,
        [Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(rows * cols)],
    )


def test_rref_idempotent_and_rank_transpose():
    rng = random.Random(42)
    for _ in range(20):
        m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        red, rank, _ = rref(m)
        red2, rank2, _ = rref(red)
        assert red2 == red
        assert rank2 == rank
        assert rref(m.transpose())[1] == rank


def test_kernel_identity_empty():
    assert kernel_basis(RationalMatrix.identity(2)).cols == 0


def test_kernel_rank_one():
    k = kernel_basis(M([[1, 2], [2, 4]]))
    assert k.cols == 1
    v = k.col(0)
    # proportional to (-2, 1)
    assert v[0] * 1 == v[1] * -2


def test_kernel_of_empty_constraints():
    k = kernel_basis(RationalMatrix.zeros(0, 3))
    assert k == RationalMatrix.identity(3)


def test_kernel_columns_annihilated():
    rng = random.Random(7)
    for _ in range(20):
        m = _random_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
        k = kernel_basis(m)
        assert k.cols == m.cols - rref(m)[1]
        for j in range(k.cols):
            assert all(x == 0 for x in m.apply(k.col(j)))


def test_solve_identity():
    assert solve(RationalMatrix.identity(2), [3, 5]) == [Fraction(3), Fraction(5)]


def test_solve_underdetermined():
    x = solve(M([[1, 1]]), [2])
    assert x is not None
    assert x[0] + x[1] == 2


def test_solve_inconsistent():
    assert solve(M([[1], [0]]), [0, 1]) is None


def test_solve_exactness_random():
    rng = random.Random(3)
    for _ in range(20):
        m = _random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        target = [Fraction(rng.randint(-4, 4)) for _ in range(m.cols)]
        b = m.apply(target)
        x = solve(m, b)
        assert x is not None
        assert m.apply(x) == b


def test_inverse_and_det():
    m = M([[2, 1], [1, 1]])
    assert m.det() == 1
    assert m.inverse() @ m == RationalMatrix.identity(2)
    singular = M([[1, 2], [2, 4]])
    assert singular.det() == 0
    with pytest.raises(ValueError):
        singular.inverse()


def test_shapes_and_immutability():
    m = M([[1, 2], [3, 4]])
    with pytest.raises(AttributeError):
        m.rows = 5
    with pytest.raises(ValueError):
        RationalMatrix(2, 2, [1, 2, 3])
    with pytest.raises(TypeError):
        RationalMatrix(1, 1, [0.5])
