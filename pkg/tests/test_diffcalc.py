import random

import pytest
from hypothesis import given, strategies as st

from ncrat.algebra import Mat, words_upto
from ncrat.errors import GenerationFailed, NotInDomain, NotRegularAtZero
from ncrat.evaluation import EvalPoint, evaluate, evaluate_multi, in_domain
from ncrat.expr import (MatPoly, Tensor, as_polynomial, const, format_expr, mul, parse,
                        poly, random_expr, random_poly)
from ncrat.diffcalc import (contract_last, delta, delta_numeric, delta_numeric_multi,
                            delta_symbolic_value, delta_word, delta_word_at_zero,
                            directional_derivative, finite_difference, hessian,
                            hessian_symbolic, iota, left_shift, leibniz_expansion, push_iota,
                            right_shift, series_of_delta)
from ncrat.oracles import delta_word_poly_oracle, second_derivative_oracle, first_derivative_oracle
from ncrat.realize import random_realization, recognizable_expr
from ncrat.series import expand

from conftest import rand_mat, rand_point

P = "1 + 2*z1 + 3*z2 + 5*z1^2 + 7*z1*z2 + 11*z2*z1 + 13*z2^2"
R1 = "[[1, 0]] * inv([[1 - z1, -z2], [-z2, 1 - z1]]) * [[1], [0]]"
R2 = "inv(1 - z1 - z2*inv(1 - z1)*z2)"


def _dirs(rng, d, n, n2):
    return [rand_mat(rng, n, n2, -3, 3) for _ in range(d)]


def test_worked_example_display():
    assert format_expr(delta(parse(P, 2), 1)) == "2 + 5*z1 + 11*z2 + 5*z1' + 7*z2'"


def test_delta_of_constant_is_zero(rng):
    D = delta(const(Mat([[1, 2]]), 2), 1)
    v = evaluate_multi(D, (rand_point(rng, 2, 2), rand_point(rng, 2, 3)))
    assert D.arity == 2 and v.data.is_zero()


def test_degenerate_delta_keeps_product_domain(rng):
    e = parse("inv(z1)", 2)
    D = delta(e, 2)
    for _ in range(20):
        Z, Zp = rand_point(rng, 2, 2), rand_point(rng, 2, 2)
        if in_domain(D, (Z, Zp)):
            assert evaluate_multi(D, (Z, Zp)).data.is_zero()
    Z = EvalPoint([Mat.identity(2), Mat.identity(2)])
    Zsing = EvalPoint([Mat([[1, 1], [1, 1]]), Mat.identity(2)])
    for pts in ((Z, Zsing), (Zsing, Z)):
        with pytest.raises(NotInDomain):
            evaluate_multi(D, pts)


def test_recognizable_delta_matches_factored_form(rng):
    r = random_realization(rng, 2, 3)
    A, B, C = list(r.A), r.B[0], r.C
    R = recognizable_expr(A, B, C)
    for j in (1, 2):
        left = recognizable_expr(A, A[j - 1], C)   # C inv(I - sum A z) A_j
        right = recognizable_expr(A, B, Mat.identity(3))  # inv(I - sum A z) B
        want = mul(Tensor(left, const(1, 2)), Tensor(const(1, 2), right))
        D = delta(R, j)
        for _ in range(20):
            pts = (rand_point(rng, 2, rng.randint(1, 3), -2, 2), rand_point(rng, 2, rng.randint(1, 3), -2, 2))
            try:
                a = evaluate_multi(D, pts).data
            except NotInDomain:
                continue
            assert a == evaluate_multi(want, pts).data


def test_iota_semantics(rng):
    e = random_expr(3, 2, 2, (2, 2), arity=2)
    Z, Zp, Zpp = rand_point(rng, 2, 1), rand_point(rng, 2, 2), rand_point(rng, 2, 2)
    try:
        a = evaluate_multi(iota(e), (Z, Zp, Zpp)).data
    except NotInDomain:
        return
    assert a == evaluate_multi(push_iota(e), (Z, Zp, Zpp)).data


@given(st.integers(0, 10_000), st.lists(st.integers(1, 2), min_size=1, max_size=3))
def test_iterated_delta_on_polynomials_matches_splitting(seed, w):
    r = random.Random(seed)
    Pm = random_poly(r, 2, 4, (1, 2))
    e = poly(Pm)
    pts = tuple(rand_point(r, 2, r.randint(1, 2), -3, 3) for _ in range(len(w) + 1))
    assert evaluate_multi(delta_word(e, w), pts).data == delta_word_poly_oracle(Pm, w, pts)


def test_series_of_monomial_splits():
    sd = series_of_delta(parse("z1*z2*z1", 2), 1, 3)
    nz = {k for k, v in sd.items() if not v.is_zero()}
    assert nz == {((), (2, 1)), ((1, 2), ())}


def test_series_of_delta_realization_form():
    rng = random.Random(6)
    r = random_realization(rng, 2, 2)
    A, B, C = list(r.A), r.B[0], r.C
    sd = series_of_delta(recognizable_expr(A, B, C), 2, 3)

    def Aw(w):
        M = Mat.identity(2)
        for j in w:
            M = M @ A[j - 1]
        return M
    for (u, v), c in sd.items():
        assert c == C @ Aw(u) @ A[1] @ Aw(v) @ B


def test_delta_at_zero_reversed_word():
    e = parse("inv(1 - 2*z1*z2 - z2)", 2)
    s = expand(e, 3)
    for w in words_upto(2, 3):
        if w:
            assert delta_word_at_zero(e, w) == s.coeff(tuple(reversed(w)))


def test_equivalence_preserved_by_delta(rng):
    a, b = parse(R1, 2), parse(R2, 2)
    hits = 0
    for _ in range(50):
        pts = (rand_point(rng, 2, 2), rand_point(rng, 2, 2))
        for j in (1, 2):
            try:
                va = evaluate_multi(delta(a, j), pts).data
                vb = evaluate_multi(delta(b, j), pts).data
            except NotInDomain:
                continue
            hits += 1
            assert va == vb
    assert hits > 50


@given(st.integers(0, 3000))
def test_cross_route_agreement(seed):
    r = random.Random(seed)
    try:
        e = random_expr(seed, 2, 3, r.choice([(1, 1), (2, 2), (2, 1)]))
    except GenerationFailed:
        return
    Z, Zp = rand_point(r, 2, r.randint(1, 3)), rand_point(r, 2, r.randint(1, 3))
    if not (in_domain(e, Z) and in_domain(e, Zp)):
        return
    W = _dirs(r, 2, Z.n, Zp.n)
    assert delta_numeric(e, Z, Zp, W) == delta_symbolic_value(e, Z, Zp, W)


@given(st.integers(0, 3000))
def test_last_slot_numeric_route(seed):
    r = random.Random(seed)
    try:
        e = random_expr(seed, 2, 2, (2, 2))
    except GenerationFailed:
        return
    X = delta(e, r.randint(1, 2))
    pts = [rand_point(r, 2, r.randint(1, 2)) for _ in range(3)]
    W = _dirs(r, 2, pts[1].n, pts[2].n)
    try:
        num = delta_numeric_multi(X, pts[:1], pts[1], pts[2], W)
    except NotInDomain:
        return
    sym = None
    for j in (1, 2):
        v = contract_last(evaluate_multi(delta(X, j), pts), W[j - 1])
        sym = v if sym is None else sym + v
    assert num == sym


def test_leibniz_expansion_matches_iterated_delta(rng):
    e1, e2 = parse("inv(1 - z1*z2)", 2), parse("z2 + inv(2 - z1)", 2)
    for w in [(1,), (2,), (1, 2), (2, 2)]:
        pts = tuple(rand_point(rng, 2, 2) for _ in range(len(w) + 1))
        try:
            a = evaluate_multi(delta_word(mul(e1, e2), w), pts).data
        except NotInDomain:
            continue
        assert a == evaluate_multi(leibniz_expansion(e1, e2, w), pts).data


def test_shifts_of_worked_example():
    p = parse(P, 2)
    want = {
        (right_shift, 1): {(): 2, (1,): 5, (2,): 11},
        (left_shift, 1): {(): 2, (1,): 5, (2,): 7},
        (right_shift, 2): {(): 3, (1,): 7, (2,): 13},
        (left_shift, 2): {(): 3, (1,): 11, (2,): 13},
    }
    for (fn, j), terms in want.items():
        assert as_polynomial(fn(p, j)) == MatPoly.from_scalar_terms(2, terms)


def test_shifts_strip_letters():
    e = parse(R1, 2)
    s = expand(e, 5)
    for j in (1, 2):
        rs, ls = expand(right_shift(e, j), 4), expand(left_shift(e, j), 4)
        for w in words_upto(2, 4):
            assert rs.coeff(w) == s.coeff(w + (j,))
            assert ls.coeff(w) == s.coeff((j,) + w)


def test_shift_requires_regularity():
    with pytest.raises(NotRegularAtZero):
        right_shift(parse("inv(z1)", 1), 1)


def test_directional_and_finite_difference(rng):
    e = parse(R2, 2)
    done = 0
    while done < 10:
        Z0, Z = rand_point(rng, 2, 2), rand_point(rng, 2, 2)
        if not (in_domain(e, Z0) and in_domain(e, Z)):
            continue
        W = _dirs(rng, 2, 2, 2)
        assert directional_derivative(e, Z, W) == first_derivative_oracle(e, Z, W)
        assert finite_difference(e, Z0, Z) == evaluate(e, Z) - evaluate(e, Z0)
        done += 1


def test_hessian_examples(rng):
    I = Mat.identity(2)
    Z = rand_point(rng, 2, 2)
    assert hessian(parse("z1^2", 2), Z, [I, Mat.zeros(2, 2)]) == I * 2
    assert hessian(parse("3 + z1 - 2*z2", 2), Z, _dirs(rng, 2, 2, 2)).is_zero()
    e = parse(R2, 2)
    for _ in range(10):
        Z = rand_point(rng, 2, 2)
        if not in_domain(e, Z):
            continue
        W = _dirs(rng, 2, 2, 2)
        h = hessian(e, Z, W)
        assert h == second_derivative_oracle(e, Z, W)
        assert h == hessian_symbolic(e, Z, W)
