from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orbifusion import exactmat as xm


def check_snf(A):
    res = xm.snf(A)
    assert xm.mat_eq(xm.mat_mul(xm.mat_mul(res.U, A), res.V), res.S)
    assert abs(xm.det_int(res.U)) == 1
    assert abs(xm.det_int(res.V)) == 1
    d = res.diagonal
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        if b:
            assert a != 0 and b % a == 0
    # off-diagonal must vanish
    for i, row in enumerate(res.S):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    return res


def test_snf_already_diagonal():
    res = check_snf([[2, 0], [0, 2]])
    assert res.diagonal == [2, 2]


def test_snf_a2_gram():
    # by-hand row/column reduction of [[2,1],[1,2]] gives diag(1,3)
    res = check_snf([[2, 1], [1, 2]])
    assert res.diagonal == [1, 3]
    assert res.invariant_factors() == [3]


def test_snf_zero_rectangular():
    res = check_snf([[0, 0, 0], [0, 0, 0]])
    assert res.S == [[0, 0, 0], [0, 0, 0]]


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.data())
def test_snf_roundtrip_random(m, n, data):
    A = [[data.draw(st.integers(-9, 9)) for _ in range(n)] for _ in range(m)]
    check_snf(A)


def test_hnf_membership():
    A = [[2, 0], [0, 2], [1, 1]]
    H, U = xm.hnf(A)
    assert xm.mat_eq(xm.mat_mul(U, A), H)
    assert abs(xm.det_int(U)) == 1
    basis = xm.hnf_basis(A)
    assert basis == [[1, 1], [0, 2]]


def test_left_kernel():
    A = [[1, 2], [2, 4], [3, 6]]
    K = xm.left_kernel(A)
    assert len(K) == 2
    for row in K:
        assert all(x == 0 for x in xm.vec_mat(row, A))


def test_rat_inverse_identity():
    I = xm.frac_matrix(xm.identity(3))
    assert xm.mat_eq(xm.rat_inverse(I), I)


def test_rat_inverse_a2():
    # adjugate/determinant: inverse of the A2 Gram is (1/3)[[2,-1],[-1,2]]
    inv = xm.rat_inverse([[2, 1], [1, 2]])
    assert inv == [[Fraction(2, 3), Fraction(-1, 3)],
                   [Fraction(-1, 3), Fraction(2, 3)]]


def test_rat_inverse_scalar():
    assert xm.rat_inverse([[8]]) == [[Fraction(1, 8)]]


def test_rat_inverse_singular():
    with pytest.raises(xm.SingularMatrix):
        xm.rat_inverse([[1, 2], [2, 4]])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.data())
def test_rat_inverse_random(n, data):
    A = [[Fraction(data.draw(st.integers(-9, 9)), data.draw(st.integers(1, 5)))
          for _ in range(n)] for _ in range(n)]
    if xm.det_frac(A) == 0:
        return
    inv = xm.rat_inverse(A)
    assert xm.is_identity(xm.mat_mul(A, inv))


def test_charpoly_diag():
    # det(xI - diag(1,2)) = x^2 - 3x + 2
    assert xm.charpoly([[1, 0], [0, 2]]) == [1, -3, 2]


def test_frame_shape_identity():
    assert xm.frame_shape(xm.identity(5), 1) == {1: 5}


def test_frame_shape_minus_identity():
    # char poly (x+1)^24 = (x^2-1)^24 / (x-1)^24: exponents go negative
    M = [[-1 if i == j else 0 for j in range(24)] for i in range(24)]
    shape = xm.frame_shape(M, 2)
    assert shape == {1: -24, 2: 24}
    assert sum(d * m for d, m in shape.items()) == 24


def test_frame_shape_reconstructs_charpoly():
    # block with a 3-cycle and a fixed vector
    M = [[0, 0, 1, 0],
         [1, 0, 0, 0],
         [0, 1, 0, 0],
         [0, 0, 0, 1]]
    shape = xm.frame_shape(M, 3)
    assert shape == {1: 1, 3: 1}
    num, den = xm.shape_poly(shape)
    assert num == xm.poly_mul(den, xm.charpoly(M))


def test_frame_shape_negative_reconstruction():
    M = [[-1 if i == j else 0 for j in range(8)] for i in range(8)]
    shape = xm.frame_shape(M, 2)
    num, den = xm.shape_poly(shape)
    assert num == xm.poly_mul(den, xm.charpoly(M))


def test_cyclotomic():
    assert xm.cyclotomic(1) == [1, -1]
    assert xm.cyclotomic(2) == [1, 1]
    assert xm.cyclotomic(4) == [1, 0, 1]
    assert xm.cyclotomic(6) == [1, -1, 1]


def test_frame_shape_rejects_non_frame():
    # charpoly x^2 + 1 has no roots of order dividing 2
    M = [[0, -1], [1, 0]]
    with pytest.raises(xm.NotFrameShaped):
        xm.frame_shape(M, 2)
    # but it does factor over fourth roots of unity: (x^4-1)/(x^2-1)
    assert xm.frame_shape(M, 4) == {4: 1, 2: -1}


def test_sqrt_rational():
    x = xm.SqrtRational.sqrt(8)
    assert x.coef == 2 and x.radicand == 2
    assert x * x == 8
    assert xm.SqrtRational.sqrt(16) == 4
    y = xm.SqrtRational(Fraction(1, 4)) * xm.SqrtRational.sqrt(4)
    assert y == Fraction(1, 2)
    assert (xm.SqrtRational.sqrt(12) / xm.SqrtRational.sqrt(3)) == 2
