import random

from fractions import Fraction

from opcalc.fields import QQ, PrimeField, field_from_name
from opcalc.linalg import Matrix, Subspace

import pytest

F5 = PrimeField(5)
F7 = PrimeField(7)


def test_field_basics():
    assert QQ("2/4") == Fraction(1, 2)
    assert F5(7) == 2
    assert F5.inv(3) == 2
    with pytest.raises(ValueError):
        PrimeField(6)
    with pytest.raises(ValueError):
        PrimeField(2 ** 31 + 11)
    assert field_from_name("fp:5").p == 5
    assert field_from_name("q") == QQ


def test_kernel_identity_f5():
    m = Matrix.identity(F5, 3)
    assert m.kernel_basis() == []


def test_kernel_zero_matrix():
    m = Matrix.zeros(QQ, 2, 3)
    kb = m.kernel_basis()
    assert len(kb) == 3


def test_kernel_rank_one_qq():
    # [[1,2],[2,4]] has kernel spanned by (2,-1) up to scale
    m = Matrix(QQ, [[QQ(1), QQ(2)], [QQ(2), QQ(4)]])
    kb = m.kernel_basis()
    assert len(kb) == 1
    v = kb[0]
    # proportional to (2, -1)
    assert v[0] * QQ(-1) == v[1] * QQ(2)
    assert m.apply(v) == [QQ.zero, QQ.zero]


def test_rank_nullity_randomized():
    rng = random.Random(12345)
    for field in (QQ, F5, F7):
        for _ in range(25):
            nr = rng.randrange(0, 13)
            nc = rng.randrange(1, 13)
            rows = [[field(rng.randrange(-4, 5)) for _ in range(nc)] for _ in range(nr)]
            m = Matrix(field, rows, nc)
            assert m.rank() + len(m.kernel_basis()) == nc
            # kernel vectors really are in the kernel
            for v in m.kernel_basis():
                assert all(field.is_zero(x) for x in m.apply(v))


def test_solve_and_inverse():
    m = Matrix(F7, [[1, 2], [3, 4]])
    inv = m.inverse()
    assert m.matmul(inv) == Matrix.identity(F7, 2)
    x = m.solve([1, 0])
    assert m.apply(x) == [1, 0]
    singular = Matrix(F7, [[1, 1], [1, 1]])
    assert singular.solve([1, 0]) is None


def test_numpy_path_matches_generic():
    # force both paths on the same F_7 matrix
    rng = random.Random(99)
    rows = [[rng.randrange(7) for _ in range(30)] for _ in range(25)]
    big = Matrix(F7, rows)
    import opcalc.linalg as L

    old = L._NP_THRESHOLD
    try:
        L._NP_THRESHOLD = 10 ** 9
        r1, p1 = big.rref()
        L._NP_THRESHOLD = 0
        r2, p2 = big.rref()
    finally:
        L._NP_THRESHOLD = old
    assert p1 == p2
    assert r1.rows == r2.rows


def test_subspace():
    s = Subspace(QQ, 3)
    assert s.add([QQ(1), QQ(0), QQ(1)])
    assert not s.add([QQ(2), QQ(0), QQ(2)])
    assert s.add([QQ(0), QQ(1), QQ(0)])
    assert s.dim() == 2
    assert s.contains([QQ(3), QQ(5), QQ(3)])
    assert not s.contains([QQ(0), QQ(0), QQ(1)])
