import random

import pytest
from hypothesis import given, strategies as st

from ncrat.decide import (EQUIVALENT_EXACT, EQUIVALENT_SAMPLED, INCONCLUSIVE, NONZERO_EXACT,
                          NOT_EQUIVALENT, ZERO_EXACT, SamplingPolicy, check_witness, corner_block,
                          equivalent, is_zero, nilpotent_point, polynomial_size_schedule)
from ncrat.errors import GenerationFailed, ShapeMismatch
from ncrat.evaluation import evaluate
from ncrat.expr import parse, poly, random_expr, random_poly
from ncrat.oracles import alternating_polynomial
from ncrat.series import expand

R1 = "[[1, 0]] * inv([[1 - z1, -z2], [-z2, 1 - z1]]) * [[1], [0]]"


def test_sampled_pair():
    v = equivalent(parse("z1*z2*inv(z1*z2 - z2*z1)", 2), parse("1 + z2*z1*inv(z1*z2 - z2*z1)", 2))
    assert v.kind == EQUIVALENT_SAMPLED and not v.exact
    hits = v.details["common_domain_hits"]
    assert hits["1"] == 0 and hits["2"] > 0 and hits["3"] > 0


def test_exact_schur_pair():
    v = equivalent(parse(R1, 2), parse("inv(1 - z1 - z2*inv(1 - z1)*z2)", 2))
    assert v.kind == EQUIVALENT_EXACT and v.route == "realization"


def test_not_equivalent_monomials():
    a, b = parse("z1*z2", 2), parse("z2*z1", 2)
    v = equivalent(a, b)
    assert v.kind == NOT_EQUIVALENT and v.witness.n == 2
    assert check_witness(v, a, b)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        equivalent(parse("[[z1, 1]]", 2), parse("z1", 2))


def test_commutator_needs_size_two():
    v = is_zero(parse("z1*z2 - z2*z1", 2), SamplingPolicy(sizes=(1,), seed=7))
    assert v.kind == NONZERO_EXACT and v.witness.n == 2


def test_alternating_polynomial():
    S3 = poly(alternating_polynomial(2))
    assert S3.poly.degree() == 6 and len(S3.poly.terms) == 6
    v = is_zero(S3)
    assert v.kind == NONZERO_EXACT and v.witness.n == 3 and check_witness(v, S3)


def test_zero_examples():
    assert is_zero(parse("(z1) + (-z1)", 1)).kind == ZERO_EXACT
    assert is_zero(parse("0", 1)).kind == ZERO_EXACT
    v = is_zero(parse("(-1) + ((inv(z1))*(z1))", 1))
    assert v.kind == EQUIVALENT_SAMPLED and not v.exact


def test_inconclusive_when_domain_is_rarely_hit():
    v = equivalent(parse("inv(z1*z2 - z2*z1)", 2), parse("inv(z1*z2 - z2*z1)", 2),
                   SamplingPolicy(sizes=(1,)))
    assert v.kind == INCONCLUSIVE


def test_nilpotent_point_reads_a_coefficient():
    e = parse("inv(1 - z1 - 3*z2*z1)", 2)
    s = expand(e, 3)
    for w in [(1,), (2, 1), (1, 2, 1)]:
        Z = nilpotent_point(w, 2)
        assert corner_block(evaluate(e, Z), 1, 1, Z.n) == s.coeff(w)


def test_schedule_respects_degree_bound():
    pol = SamplingPolicy()
    for deg in range(0, 13):
        assert 2 * max(polynomial_size_schedule(deg, pol)) > deg


@given(st.integers(0, 10_000))
def test_polynomial_zero_test_agrees_with_coefficients(seed):
    r = random.Random(seed)
    P = random_poly(r, 2, r.randint(0, 6), coef_range=2)
    v = is_zero(poly(P), SamplingPolicy(seed=seed))
    assert (v.kind == ZERO_EXACT) == P.is_zero()
    if v.kind == NONZERO_EXACT:
        assert check_witness(v, poly(P))


def test_exact_and_sampled_routes_agree():
    from ncrat.decide import _sampled_equivalence
    pol = SamplingPolicy(samples=10)
    checked = 0
    for seed in range(40):
        try:
            a = random_expr(seed, 2, 2, (1, 1), regular_at_zero=True)
            b = random_expr(seed + 1000, 2, 2, (1, 1), regular_at_zero=True)
        except GenerationFailed:
            continue
        for x, y in ((a, a), (a, b)):
            exact = equivalent(x, y, pol)
            sampled = _sampled_equivalence(x, y, pol)
            assert exact.exact
            if exact.kind == EQUIVALENT_EXACT:
                assert sampled.kind != NOT_EQUIVALENT
            else:
                assert check_witness(exact, x, y)
                assert sampled.kind != EQUIVALENT_SAMPLED
            checked += 1
    assert checked >= 60


def test_verdict_json():
    v = is_zero(parse("z1*z2 - z2*z1", 2))
    obj = v.to_json()
    assert obj["result"] == NONZERO_EXACT and obj["exact"] is True
    assert obj["witness"]["n"] == 2
