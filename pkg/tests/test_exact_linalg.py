import random
from fractions import Fraction

import pytest

from roothk.exact_linalg import (
    IntMatrix,
    RatMatrix,
    hermite_normal_form,
    integer_rank,
    rational_kernel,
    rational_rank,
    smith_normal_form,
    stack_and_common_kernel,
)


def test_snf_a2_gram():
    # Row/column reduction by hand gives invariant factors (1, 3); det is 3.
    sf = smith_normal_form(IntMatrix.from_rows([[2, -1], [-1, 2]]))
    assert sf.diag == (1, 3)


def test_snf_identity():
    for n in (1, 2, 5):
        sf = smith_normal_form(IntMatrix.identity(n))
        assert sf.diag == (1,) * n


def test_snf_negative_entry_normalized():
    sf = smith_normal_form(IntMatrix.from_rows([[-2]]))
    assert sf.diag == (2,)


def test_snf_zero_matrix():
    sf = smith_normal_form(IntMatrix.zeros(2, 3))
    assert sf.diag == (0, 0)


@pytest.mark.parametrize("seed", range(20))
def test_snf_reconstruction_on_random_matrices(seed):
    rng = random.Random(seed)
    rows = rng.randint(1, 5)
    cols = rng.randint(1, 5)
    m = IntMatrix(rows, cols, (rng.randint(-6, 6) for _ in range(rows * cols)))
    sf = smith_normal_form(m)
    # Reconstruction identity, unimodular transforms, nonnegative chain.
    assert sf.left @ m @ sf.right == sf.diagonal_matrix(rows, cols)
    assert abs(sf.left.det()) == 1
    assert abs(sf.right.det()) == 1
    nonzero = [d for d in sf.diag if d]
    assert all(d > 0 for d in nonzero)
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    # Transposing the input permutes nothing: same invariant factors.
    assert smith_normal_form(m.transpose()).diag == sf.diag


def test_hnf_row_lattice_basis():
    m = IntMatrix.from_rows([[2, 0], [1, 1], [3, 1]])
    h, left = hermite_normal_form(m)
    assert left @ m == h
    assert abs(left.det()) == 1
    assert h.to_rows() == [[1, 1], [0, 2], [0, 0]]


@pytest.mark.parametrize("seed", range(10))
def test_hnf_random_properties(seed):
    rng = random.Random(100 + seed)
    rows = rng.randint(1, 5)
    cols = rng.randint(1, 5)
    m = IntMatrix(rows, cols, (rng.randint(-5, 5) for _ in range(rows * cols)))
    h, left = hermite_normal_form(m)
    assert left @ m == h
    assert abs(left.det()) == 1
    # Echelon structure with positive pivots and reduced entries above them.
    last = -1
    for i in range(h.rows):
        row = h.row(i)
        piv = next((j for j, x in enumerate(row) if x), None)
        if piv is None:
            assert all(not any(h.row(k)) for k in range(i, h.rows))
            break
        assert piv > last
        last = piv
        assert row[piv] > 0
        for k in range(i):
            assert 0 <= h[k, piv] < row[piv]


def test_kernel_zero_matrix():
    basis = rational_kernel(RatMatrix.zeros(2, 2))
    assert len(basis) == 2
    assert basis[0] == (Fraction(1), Fraction(0))
    assert basis[1] == (Fraction(0), Fraction(1))


def test_kernel_identity_empty():
    assert rational_kernel(RatMatrix.identity(3)) == []


def test_kernel_rank_one_row():
    basis = rational_kernel(RatMatrix.from_rows([[1, 1]]))
    assert len(basis) == 1
    v = basis[0]
    assert v[0] + v[1] == 0 and v != (0, 0)


@pytest.mark.parametrize("seed", range(15))
def test_kernel_annihilates_and_rank_nullity(seed):
    rng = random.Random(200 + seed)
    rows = rng.randint(1, 5)
    cols = rng.randint(1, 5)
    m = RatMatrix(
        rows, cols, (Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(rows * cols))
    )
    basis = rational_kernel(m)
    assert len(basis) == cols - rational_rank(m)
    for v in basis:
        image = [sum((a * b for a, b in zip(m.row(i), v)), Fraction(0)) for i in range(rows)]
        assert all(x == 0 for x in image)
    # Basis vectors are echelon-normalized: 1 at own free column (the last
    # nonzero coordinate), 0 at the free columns of the other vectors.
    free = [max(j for j, x in enumerate(v) if x) for v in basis]
    for i, v in enumerate(basis):
        for j, f in enumerate(free):
            assert v[f] == (1 if i == j else 0)


def test_common_kernel_identity_is_empty():
    assert stack_and_common_kernel([RatMatrix.identity(2)]) == []


def test_common_kernel_of_zeros_is_full():
    basis = stack_and_common_kernel([RatMatrix.zeros(1, 3), RatMatrix.zeros(2, 3)])
    assert len(basis) == 3


def test_common_kernel_complementary_projections():
    m1 = RatMatrix.from_rows([[1, 0], [0, 0]])
    m2 = RatMatrix.from_rows([[0, 0], [0, 1]])
    assert stack_and_common_kernel([m1, m2]) == []


def test_common_kernel_rejects_mismatched_columns():
    with pytest.raises(ValueError):
        stack_and_common_kernel([RatMatrix.zeros(1, 2), RatMatrix.zeros(1, 3)])


def test_det_and_rank():
    m = IntMatrix.from_rows([[2, -1], [-1, 2]])
    assert m.det() == 3
    assert integer_rank(m) == 2
    assert IntMatrix.from_rows([[1, 2], [2, 4]]).det() == 0
    assert integer_rank(IntMatrix.from_rows([[1, 2], [2, 4]])) == 1


@pytest.mark.parametrize("seed", range(10))
def test_rat_inverse_roundtrip(seed):
    rng = random.Random(300 + seed)
    n = rng.randint(1, 4)
    while True:
        m = RatMatrix(n, n, (Fraction(rng.randint(-3, 3)) for _ in range(n * n)))
        if m.det() != 0:
            break
    assert m @ m.inverse() == RatMatrix.identity(n)


def test_primitive_integer_rescaling():
    m = RatMatrix.from_rows([[Fraction(1, 2), Fraction(-1, 4)], [Fraction(-1, 4), Fraction(1, 2)]])
    prim, scale = m.primitive_integer()
    assert prim == IntMatrix.from_rows([[2, -1], [-1, 2]])
    assert scale == Fraction(1, 4)
    assert prim.to_rat().scale(scale) == m


def test_matmul_and_transpose():
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    b = IntMatrix.from_rows([[0, 1], [1, 0]])
    assert (a @ b).to_rows() == [[2, 1], [4, 3]]
    assert a.transpose().to_rows() == [[1, 3], [2, 4]]


def test_kron():
    a = RatMatrix.from_rows([[1, 2]])
    b = RatMatrix.from_rows([[3], [4]])
    assert a.kron(b).to_rows() == [[3, 6], [4, 8]]
