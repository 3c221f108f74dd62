import random
from fractions import Fraction

import pytest
from flint import fmpq_mat
from hypothesis import given, strategies as st

from ncrat.algebra import (Mat, bareiss_echelon, block_matrix, column_basis, commutation_matrix,
                           direct_sum, kron, kron_all, parse_word, rank, rational_str, row_basis,
                           swap_factors, to_rational, word_concat, word_reverse, word_str,
                           words_of_length, words_upto)
from ncrat.errors import DimensionMismatch, SingularMatrixError

from conftest import rand_mat

small = st.integers(-6, 6)


def mats(r, c):
    return st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r).map(Mat)


def test_to_rational_accepts_common_inputs():
    assert to_rational(3) == to_rational("3")
    assert to_rational(Fraction(2, 4)) == to_rational("1/2")
    assert rational_str(to_rational("-6/4")) == "-3/2"


def test_json_round_trip_and_encoding():
    M = Mat([[1, "1/2"], [0, -3]])
    assert M.to_json() == [["1", "1/2"], ["0", "-3"]]
    assert Mat.from_json(M.to_json()) == M
    with pytest.raises(ValueError):
        Mat.from_json("not a matrix")


def test_inverse_and_singular():
    A = Mat([[2, 1], [1, 1]])
    assert A @ A.inv() == Mat.identity(2)
    with pytest.raises(SingularMatrixError):
        Mat([[1, 2], [2, 4]]).inv()


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        Mat.identity(2) + Mat.identity(3)
    with pytest.raises(DimensionMismatch):
        Mat.zeros(2, 3) @ Mat.zeros(2, 3)


@given(mats(3, 4))
def test_bareiss_rank_matches_flint(M):
    ref = fmpq_mat(M.tolist()).rank()
    assert rank(M) == ref == len(bareiss_echelon(M))


@given(mats(4, 3))
def test_bases_have_full_rank(M):
    cols = column_basis(M)
    rows = row_basis(M)
    r = rank(M)
    assert len(cols) == len(rows) == r
    if r:
        assert rank(M.select(cols=cols)) == r
        assert rank(M.select(rows=rows)) == r


@given(mats(2, 3), mats(3, 2))
def test_kron_mixed_product(A, B):
    C, D = A.T, B.T
    assert kron(A, B) @ kron(C, D) == kron(A @ C, B @ D)


@given(mats(2, 3), mats(3, 2))
def test_commutation_matrix_swaps_kron_factors(A, B):
    (p, q), (m, n) = A.shape, B.shape
    assert commutation_matrix(p, m).T @ kron(A, B) @ commutation_matrix(q, n) == kron(B, A)


def test_commutation_matrix_definition():
    P = commutation_matrix(2, 3)
    for i in range(2):
        for j in range(3):
            assert P[i * 3 + j, j * 2 + i] == 1
    assert P @ P.T == Mat.identity(6)


def test_swap_factors_on_three_factor_product(rng):
    A, B, C = rand_mat(rng, 2, 1), rand_mat(rng, 3, 2), rand_mat(rng, 1, 2)
    M = kron_all(A, B, C)
    got = swap_factors(M, (2, 3, 1, 1), (1, 2, 2, 1))
    assert got == kron_all(A, C, B)


def test_block_helpers():
    I = Mat.identity(1)
    assert block_matrix([[I, Mat.zeros(1, 1)], [Mat.zeros(1, 1), I]]) == Mat.identity(2)
    assert direct_sum(Mat.identity(1), Mat.identity(2)) == Mat.identity(3)


def test_words():
    assert words_of_length(2, 2) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert words_upto(2, 1) == [(), (1,), (2,)]
    assert len(words_upto(3, 3)) == 1 + 3 + 9 + 27
    assert word_reverse((1, 2, 2)) == (2, 2, 1)
    assert word_concat((1,), (2,)) == (1, 2)
    assert parse_word(word_str((1, 2, 1))) == (1, 2, 1)


def test_pow_and_det():
    A = Mat([[1, 1], [0, 1]])
    assert A ** 3 == Mat([[1, 3], [0, 1]])
    assert A.det() == 1
    assert Mat([[2, 0], [0, 3]]).det() == 6


def test_random_rank_deficient_products():
    r = random.Random(3)
    for _ in range(20):
        A, B = rand_mat(r, 4, 2), rand_mat(r, 2, 5)
        assert rank(A @ B) <= 2
