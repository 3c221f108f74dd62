import random

import pytest
from hypothesis import given, strategies as st

from ncrat.algebra import Mat
from ncrat.errors import ExprSyntaxError, GenerationFailed, ShapeError
from ncrat.evaluation import EvalPoint, evaluate, in_domain
from ncrat.expr import (Block, Inv, MatPoly, Poly, Tensor, add, as_polynomial, const,
                        format_expr, mul, normalize, parse, random_expr, random_poly, read_nce,
                        var, write_nce)

from conftest import rand_point

R1 = "[[1, 0]] * inv([[1 - z1, -z2], [-z2, 1 - z1]]) * [[1], [0]]"


def test_commutator_collapses_to_one_leaf():
    e = parse("z1*z2 - z2*z1", 2)
    assert isinstance(e, Poly)
    assert e.poly.terms == {(1, 2): Mat([[1]]), (2, 1): Mat([[-1]])}


def test_inverse_node():
    e = parse("inv(z1*z2 - z2*z1)", 2)
    assert isinstance(e, Inv) and isinstance(e.inner, Poly)
    # the witness makes the inner value invertible
    assert e.witness[0].n >= 2


def test_matrix_literal_is_block():
    e = parse("[[1-z1, -z2],[-z2, 1-z1]]", 2)
    assert isinstance(e, Block) and e.shape == (2, 2)
    assert all(c.shape == (1, 1) for row in e.grid for c in row)


def test_format_simple():
    assert format_expr(parse("z1", 1)) == "z1"
    assert format_expr(parse("2/3*z1 - 1", 1)) in ("-1 + 2/3*z1", "2/3*z1 - 1")


def test_round_trip_r1():
    e = parse(R1, 2)
    assert normalize(parse(format_expr(e), 2)) == normalize(e)


@given(st.integers(0, 10_000), st.integers(0, 4), st.sampled_from([(1, 1), (1, 2), (2, 2)]))
def test_round_trip_random(seed, depth, shape):
    try:
        e = random_expr(seed, 2, depth, shape)
    except GenerationFailed:
        return
    assert normalize(parse(format_expr(e), 2)) == normalize(e)


def test_round_trip_hundred_seeds():
    for s in range(100):
        e = random_expr(s, 2, 3, (1, 1))
        assert normalize(parse(format_expr(e), 2)) == normalize(e)


def test_syntax_error_carries_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse("z1 + * z2", 2)
    assert info.value.pos is not None


def test_letter_out_of_range():
    with pytest.raises((ExprSyntaxError, ValueError)):
        parse("z3", 2)


def test_shape_errors_name_the_node():
    with pytest.raises(ShapeError):
        parse("[[1, 0]] + 1", 2)
    with pytest.raises(ShapeError):
        parse("inv([[1, z1]])", 2)
    with pytest.raises(ShapeError):
        parse("[[1, 0], [z1]]", 2)


def test_power_and_rationals():
    e = parse("(1 + z1)^2", 1)
    assert as_polynomial(e) == MatPoly.from_scalar_terms(1, {(): 1, (1,): 2, (1, 1): 1})
    assert as_polynomial(parse("1/2 + 1/2", 1)).const_term() == Mat([[1]])


def test_nce_round_trip():
    e = parse(R1, 2)
    text = write_nce(e)
    assert text.startswith("d=2\n")
    assert normalize(read_nce(text)) == normalize(e)
    with pytest.raises(ExprSyntaxError):
        read_nce("z1 + z2")


def test_generator_determinism_and_depth_zero():
    assert random_expr(5, 2, 3, (2, 2)) == random_expr(5, 2, 3, (2, 2))
    assert isinstance(random_expr(5, 2, 0), Poly)


def test_generated_expressions_have_sampled_domain():
    r = random.Random(0)
    for s in range(300):
        try:
            e = random_expr(s, 2, 3, r.choice([(1, 1), (2, 2), (1, 2)]))
        except GenerationFailed:
            continue
        assert any(in_domain(e, rand_point(r, 2, n)) for n in (1, 2, 3, 3, 4, 4))


def test_tensor_shape():
    t = Tensor(const(Mat([[1, 2]]), 2), var(1, 2))
    assert t.shape == (1, 2) and t.arity == 2


@given(st.integers(0, 1000))
def test_matpoly_arithmetic_agrees_with_evaluation(seed):
    r = random.Random(seed)
    p = random_poly(r, 2, 3, (2, 2))
    q = random_poly(r, 2, 3, (2, 2))
    Z = rand_point(r, 2, 2)
    assert (p * q).evaluate(Z.mats) == p.evaluate(Z.mats) @ q.evaluate(Z.mats)
    assert (p + q).evaluate(Z.mats) == p.evaluate(Z.mats) + q.evaluate(Z.mats)


def test_smart_constructors_collapse_polynomials():
    e = add(mul(var(1, 2), var(2, 2)), const(3, 2))
    assert isinstance(e, Poly)
    Z = EvalPoint.scalars(2, 5)
    assert evaluate(e, Z) == Mat([[13]])
