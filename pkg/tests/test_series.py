import random

import pytest
from hypothesis import given, strategies as st

from ncrat.algebra import Mat, words_upto
from ncrat.errors import GenerationFailed, NotRegularAtZero, SingularConstantTerm
from ncrat.expr import add, as_polynomial, mul, parse, random_expr, random_poly, poly
from ncrat.series import TruncSeries, expand, series_from_words, series_invert

from conftest import rand_mat


def test_geometric_series():
    s = expand(parse("inv(1 - z1)", 1), 3)
    assert [s.coeff(w)[0, 0] for w in [(), (1,), (1, 1), (1, 1, 1)]] == [1, 1, 1, 1]


def test_not_regular_at_zero():
    with pytest.raises(NotRegularAtZero):
        expand(parse("z1*inv(z1)", 1), 3)


def test_invert_constant_and_two_letter_geometric():
    one = TruncSeries(2, (1, 1), 4, {(): Mat([[1]])})
    assert series_invert(one) == one
    s = expand(parse("1 - z1 - z2", 2), 4)
    t = series_invert(s)
    assert all(t.coeff(w) == Mat([[1]]) for w in words_upto(2, 4))
    assert s * t == one


def test_invert_singular_constant():
    s = TruncSeries(1, (1, 1), 2, {(1,): Mat([[1]])})
    with pytest.raises(SingularConstantTerm):
        series_invert(s)


@given(st.integers(0, 1000))
def test_random_series_inverse(seed):
    r = random.Random(seed)
    c0 = Mat([[r.randint(1, 3), 1], [0, r.randint(1, 3)]])
    s = series_from_words(2, (2, 2), 3, lambda w: c0 if not w else rand_mat(r, 2, 2, -2, 2))
    one = series_from_words(2, (2, 2), 3, lambda w: Mat.identity(2) if not w else Mat.zeros(2, 2))
    assert s * series_invert(s) == one
    assert series_invert(s) * s == one


def test_cauchy_product_definition():
    r = random.Random(4)
    s = series_from_words(2, (1, 1), 3, lambda w: rand_mat(r, 1, 1))
    t = series_from_words(2, (1, 1), 3, lambda w: rand_mat(r, 1, 1))
    st_ = s * t
    for w in words_upto(2, 3):
        want = Mat.zeros(1, 1)
        for k in range(len(w) + 1):
            want = want + s.coeff(w[:k]) @ t.coeff(w[k:])
        assert st_.coeff(w) == want


@given(st.integers(0, 2000))
def test_expand_is_additive_and_multiplicative(seed):
    try:
        a = random_expr(seed, 2, 2, (2, 2), regular_at_zero=True)
        b = random_expr(seed + 7, 2, 2, (2, 2), regular_at_zero=True)
    except GenerationFailed:
        return
    L = 3
    assert expand(add(a, b), L) == expand(a, L) + expand(b, L)
    assert expand(mul(a, b), L) == expand(a, L) * expand(b, L)


def test_polynomial_expansion_is_its_coefficient_map():
    r = random.Random(9)
    for _ in range(20):
        P = random_poly(r, 2, 4, (1, 2))
        s = expand(poly(P), 4)
        assert {w: m for w, m in s.coeffs.items() if not m.is_zero()} == P.terms


def test_json_keys_are_digit_strings():
    s = expand(parse("z1*z2", 2), 2)
    assert s.to_json()["12"] == [["1"]]
