import random
from fractions import Fraction

import pytest

from orbichern.exactnum import Cyclotomic
from orbichern.linalg import Matrix, block

E = Cyclotomic.root_of_unity


def rand_matrix(rng, r, c, order=1):
    return Matrix.from_rows(
        [
            [
                Cyclotomic(order, [rng.randint(-3, 3) for _ in range(1)])
                for _ in range(c)
            ]
            for _ in range(r)
        ],
        ncols=c,
    )


def test_identity_and_mul():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    assert Matrix.identity(2) * a == a
    assert a * Matrix.identity(2) == a
    b = Matrix.from_rows([[0, 1], [1, 0]])
    assert (a * b) == Matrix.from_rows([[2, 1], [4, 3]])


def test_rref_kernel_rank():
    a = Matrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    assert a.rank() == 2
    k = a.kernel()
    assert k.ncols == 1
    assert (a * k).is_zero()


def test_kernel_with_cyclotomic_entries():
    # eigenvector computation for a rotation by zeta_4
    m = Matrix.from_rows([[0, -1], [1, 0]])
    shifted = m - Matrix.identity(2).scale(E(4))
    k = shifted.kernel()
    assert k.ncols == 1
    assert (shifted * k).is_zero()


def test_solve_consistent_and_inconsistent():
    a = Matrix.from_rows([[1, 0], [0, 1], [1, 1]])
    rhs = Matrix.from_rows([[1], [2], [3]])
    x = a.solve(rhs)
    assert a * x == rhs
    bad = Matrix.from_rows([[1], [2], [4]])
    with pytest.raises(ValueError):
        a.solve(bad)


def test_det_and_minor():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    assert a.det() == -2
    assert a.minor((0,), (1,)) == 2
    assert Matrix.zero(0, 0).det() == 1
    assert Matrix.from_rows([[1, 2], [2, 4]]).det() == 0


def test_det_multiplicative_random():
    rng = random.Random(11)
    for _ in range(50):
        a = rand_matrix(rng, 3, 3)
        b = rand_matrix(rng, 3, 3)
        assert (a * b).det() == a.det() * b.det()


def test_kron_mixed_product():
    rng = random.Random(3)
    a = rand_matrix(rng, 2, 2)
    b = rand_matrix(rng, 2, 2)
    c = rand_matrix(rng, 2, 2)
    d = rand_matrix(rng, 2, 2)
    assert a.kron(b) * c.kron(d) == (a * c).kron(b * d)


def test_column_space_spans():
    a = Matrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 0, 1]])
    cs = a.column_space()
    assert cs.ncols == a.rank()
    # every column of a solvable against the basis
    cs.solve(a)


def test_zero_dimensional_edges():
    z = Matrix.zero(0, 3)
    assert z.kernel().ncols == 3
    assert z.rank() == 0
    e = Matrix.zero(3, 0)
    assert (e.transpose() * e).shape() == (0, 0)
    assert Matrix.identity(0).det() == 1


def test_block_assembly():
    a = Matrix.identity(2)
    b = Matrix.from_rows([[5]])
    m = block([[a, None], [None, b]], [2, 1], [2, 1])
    assert m.shape() == (3, 3)
    assert m[2, 2] == 5
    assert m[0, 2] == 0
