# test_quatlin.py
from fractions import Fraction

import pytest

from models.errors import ShapeError
from models.quatlin import (
    I,
    J,
    K,
    ONE,
    ZERO,
    QMat,
    Quat,
    commutator,
    conj_transpose,
    real_basis,
    real_trace,
    realify,
    realify_sparse,
    to_fraction,
    unrealify,
)


def random_quat(rng, bound=3):
    return Quat(*(int(v) for v in rng.integers(-bound, bound + 1, size=4)))


def random_qmat(rng, rows, cols):
    return QMat(rows, cols, tuple(random_quat(rng) for _ in range(rows * cols)))


def test_hamilton_units():
    assert I * J == K
    assert J * K == I
    assert K * I == J
    assert J * I == -K
    assert I * I == -ONE
    assert I * J * K == -ONE


def test_to_fraction_accepts_exact_values_only():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(2) == Fraction(2)
    with pytest.raises(TypeError):
        to_fraction(1.5)


def test_quat_coerces_components():
    q = Quat("1/2", 0, 3, "-2")
    assert q.components() == (Fraction(1, 2), 0, 3, -2)
    assert q.re() == Fraction(1, 2)
    assert q.im() == Quat(0, 0, 3, -2)
    assert not q.is_imaginary()
    assert q.im().is_imaginary()


def test_norm_is_multiplicative(rng):
    for _ in range(20):
        p, q = random_quat(rng), random_quat(rng)
        assert (p * q).norm2() == p.norm2() * q.norm2()
        assert (p * q).conj() == q.conj() * p.conj()


def test_product_is_associative(rng):
    for _ in range(20):
        p, q, r = random_quat(rng), random_quat(rng), random_quat(rng)
        assert (p * q) * r == p * (q * r)


def test_inverse():
    q = Quat(1, 2, 0, -1)
    assert q * q.inverse() == ONE
    assert q.inverse() * q == ONE
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_scalar_arithmetic():
    q = Quat(1, 1, 0, 0)
    assert 2 * q == Quat(2, 2, 0, 0)
    assert q / 2 == Quat(Fraction(1, 2), Fraction(1, 2), 0, 0)
    assert 1 - q == Quat(0, -1, 0, 0)


def test_quat_from_json_rejects_wrong_length():
    with pytest.raises(ValueError):
        Quat.from_json(["1", "0"])
    assert Quat.from_json(["1", "0", "-1/2", "0"]) == Quat(1, 0, Fraction(-1, 2), 0)


def test_matmul_is_associative(rng):
    a, b, c = random_qmat(rng, 2, 3), random_qmat(rng, 3, 2), random_qmat(rng, 2, 2)
    assert (a @ b) @ c == a @ (b @ c)


def test_conj_transpose_reverses_products(rng):
    a, b = random_qmat(rng, 3, 2), random_qmat(rng, 2, 3)
    assert conj_transpose(a @ b) == conj_transpose(b) @ conj_transpose(a)
    assert conj_transpose(conj_transpose(a)) == a


def test_shape_errors():
    with pytest.raises(ShapeError):
        QMat.zeros(2, 2) + QMat.zeros(2, 3)
    with pytest.raises(ShapeError):
        QMat.zeros(2, 3) @ QMat.zeros(2, 3)
    with pytest.raises(ShapeError):
        QMat.from_rows([[ONE, ZERO], [ONE]])
    with pytest.raises(ShapeError):
        QMat(2, 2, (ONE,))
    with pytest.raises(ShapeError):
        commutator(QMat.zeros(2, 3), QMat.zeros(2, 3))
    with pytest.raises(ShapeError):
        real_trace(QMat.zeros(1, 2))


def test_block_assembly():
    M = QMat.block([1, 2], [1, 2], {(0, 0): QMat.scalar(1, J), (1, 1): QMat.identity(2)})
    assert M == QMat.diag([J, ONE, ONE])
    with pytest.raises(ShapeError):
        QMat.block([1, 2], [1, 2], {(0, 1): QMat.identity(2)})


def test_left_and_right_scaling_differ():
    X = QMat.column([I])
    assert X.left_scale(J) == QMat.column([-K])
    assert X.right_scale(J) == QMat.column([K])


def test_real_trace():
    assert real_trace(QMat.identity(3)) == 12
    assert real_trace(QMat.diag([I, J])) == 0
    assert real_trace(QMat.diag([Quat(2, 1, 0, 0), ONE])) == 12


def test_commutator_of_trace_vanishes(rng):
    a, b = random_qmat(rng, 3, 3), random_qmat(rng, 3, 3)
    assert real_trace(commutator(a, b)) == 0


def test_realify_order_and_inverse(rng):
    M = QMat.from_rows([[Quat(1, 2, 3, 4), ZERO], [ZERO, K]])
    assert realify(M)[:4] == (1, 2, 3, 4)
    assert realify(M)[-4:] == (0, 0, 0, 1)
    assert realify_sparse(M) == {0: 1, 1: 2, 2: 3, 3: 4, 15: 1}
    a = random_qmat(rng, 2, 3)
    assert unrealify(realify(a), 2, 3) == a
    with pytest.raises(ShapeError):
        unrealify((0, 0, 0), 1, 1)


def test_real_basis_matches_realify():
    basis = real_basis(2, 1)
    assert len(basis) == 8
    for index, E in enumerate(basis):
        assert realify_sparse(E) == {index: 1}


def test_commutator_satisfies_jacobi(rng):
    for _ in range(5):
        m, n, p = (random_qmat(rng, 3, 3) for _ in range(3))
        total = commutator(commutator(m, n), p) + commutator(commutator(n, p), m) + commutator(commutator(p, m), n)
        assert total.is_zero()


def test_conj_transpose_examples():
    assert conj_transpose(QMat.column([I, Quat(1, 0, 0, 1)])) == QMat.row([-I, Quat(1, 0, 0, -1)])
    assert conj_transpose(QMat.identity(3)) == QMat.identity(3)
    assert commutator(QMat.scalar(1, I), QMat.scalar(1, J)) == QMat.scalar(1, K * 2)
