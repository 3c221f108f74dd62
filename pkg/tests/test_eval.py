import random

import pytest
from hypothesis import given, strategies as st

from ncrat.algebra import Mat, commutation_matrix, direct_sum, kron
from ncrat.errors import DimensionMismatch, GenerationFailed, NotInDomain
from ncrat.evaluation import (EvalPoint, TensorValue, contract, evaluate, evaluate_multi,
                              find_witness, in_domain, regular_at_zero)
from ncrat.expr import Iota, MatPoly, Tensor, add, const, mul, parse, poly, random_expr, var

from conftest import rand_mat, rand_point

PAIR_R1 = "z1*z2*inv(z1*z2 - z2*z1)"
PAIR_R2 = "1 + z2*z1*inv(z1*z2 - z2*z1)"


def test_coordinate_function(rng):
    Z = rand_point(rng, 2, 3)
    assert evaluate(var(1, 2), Z) == Z[1]


def test_commutator_inverse_not_defined_on_scalars():
    r = parse("inv(z1*z2 - z2*z1)", 2)
    with pytest.raises(NotInDomain) as info:
        evaluate(r, EvalPoint.scalars(3, 4))
    assert "Inv" in info.value.path or info.value.path == "root"
    assert info.value.size == 1


def test_pair_agrees_on_common_domain():
    r1, r2 = parse(PAIR_R1, 2), parse(PAIR_R2, 2)
    rng = random.Random(50)
    hits = 0
    for _ in range(50):
        Z = rand_point(rng, 2, 2)
        if in_domain(r1, Z) and in_domain(r2, Z):
            hits += 1
            assert evaluate(r1, Z) == evaluate(r2, Z)
    assert hits >= 40


def test_coefficient_first_layout():
    C = Mat([[1, 2], [3, 4]])
    e = poly(MatPoly(1, 2, 2, {(1,): C}))
    Z = EvalPoint([Mat([[0, 1], [1, 0]])])
    assert evaluate(e, Z) == kron(C, Z[1])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        evaluate(var(1, 2), EvalPoint.scalars(1))
    with pytest.raises(DimensionMismatch):
        EvalPoint([Mat.identity(2), Mat.identity(3)])


@given(st.integers(0, 500))
def test_homomorphism(seed):
    r = random.Random(seed)
    try:
        a = random_expr(seed, 2, 2, (2, 2))
        b = random_expr(seed + 1, 2, 2, (2, 2))
    except GenerationFailed:
        return
    Z = rand_point(r, 2, 2)
    if not (in_domain(a, Z) and in_domain(b, Z)):
        return
    A, B = evaluate(a, Z), evaluate(b, Z)
    assert evaluate(add(a, b), Z) == A + B
    assert evaluate(mul(a, b), Z) == A @ B


def test_tensor_of_monomials(rng):
    Z, Zp = rand_point(rng, 2, 2), rand_point(rng, 2, 3)
    t = Tensor(var(1, 2), var(1, 2))
    assert evaluate_multi(t, (Z, Zp)).data == kron(Z[1], Zp[1])


def test_tensor_merges_coefficients_first(rng):
    A, B = rand_mat(rng, 1, 2), rand_mat(rng, 2, 1)
    Z, Zp = rand_point(rng, 2, 2), rand_point(rng, 2, 3)
    t = Tensor(poly(MatPoly(2, 1, 2, {(1,): A})), poly(MatPoly(2, 2, 1, {(2,): B})))
    v = evaluate_multi(t, (Z, Zp))
    # value is (A (x) B) (x) Z1 (x) Z'2 in canonical order
    assert v.data == kron(kron(A, B), kron(Z[1], Zp[2]))


def test_iota_on_constant(rng):
    c = const(Mat([[2, 1], [0, 3]]), 2)
    Z, Zp = rand_point(rng, 2, 2), rand_point(rng, 2, 3)
    v = evaluate_multi(Iota(c), (Z, Zp))
    assert v.data == kron(Mat([[2, 1], [0, 3]]), Mat.identity(6))


def test_contract_elementary_and_sum(rng):
    A, B, C, D = (rand_mat(rng, 2, 2) for _ in range(4))
    H = rand_mat(rng, 2, 2)
    v1 = TensorValue((1, 1), (2, 2), kron(A, B))
    v2 = TensorValue((1, 1), (2, 2), kron(C, D))
    assert contract(v1, [H]) == A @ H @ B
    v = TensorValue((1, 1), (2, 2), kron(A, B) + kron(C, D))
    assert contract(v, [H]) == A @ H @ B + C @ H @ D
    vi = TensorValue((1, 1), (2, 2), kron(A, Mat.identity(2)))
    assert contract(vi, [Mat.identity(2)]) == A


def test_contract_is_linear(rng):
    A, B = rand_mat(rng, 2, 2), rand_mat(rng, 3, 3)
    H1, H2 = rand_mat(rng, 2, 3), rand_mat(rng, 2, 3)
    v = TensorValue((1, 1), (2, 3), kron(A, B))
    assert contract(v, [H1]) == A @ H1 @ B
    assert contract(v, [H1 + H2]) == contract(v, [H1]) + contract(v, [H2])
    with pytest.raises(DimensionMismatch):
        contract(v, [Mat.identity(2)])


def test_direct_sum_point(rng):
    e = random_expr(11, 2, 3, (2, 2))
    for _ in range(10):
        Z, Zp = rand_point(rng, 2, 2), rand_point(rng, 2, 1)
        if not (in_domain(e, Z) and in_domain(e, Zp)):
            continue
        V = evaluate(e, Z.direct_sum(Zp))
        p = 2
        T = commutation_matrix(3, p) @ V @ commutation_matrix(3, p).T
        a = commutation_matrix(2, p) @ evaluate(e, Z) @ commutation_matrix(2, p).T
        b = commutation_matrix(1, p) @ evaluate(e, Zp) @ commutation_matrix(1, p).T
        assert T == direct_sum(a, b)


def test_find_witness_and_regularity():
    e = parse("z1*z2 - z2*z1", 2)
    w = find_witness(e, random.Random(0))
    assert w is not None and w[0].n >= 2
    assert regular_at_zero(parse("inv(1 - z1)", 1))
    assert not regular_at_zero(parse("inv(z1)", 1))
