from ncrat.algebra import Mat
from ncrat.evaluation import EvalPoint
from ncrat.expr import parse
from ncrat.oracles import (Jet, alternating_polynomial, hankel_rank, jet_evaluate,
                           recognizable_coefficients)
from ncrat.series import expand


def test_jet_inverse():
    X = Jet(Mat([[2]]), Mat([[1]]), Mat([[0]]))
    Y = X.inv()
    one = X @ Y
    assert one.c == (Mat([[1]]), Mat([[0]]), Mat([[0]]))


def test_jet_on_square():
    Z = EvalPoint.scalars(3)
    j = jet_evaluate(parse("z1^2", 1), Z.mats, [Mat([[1]])])
    # (3 + t)^2 = 9 + 6t + t^2
    assert j.c == (Mat([[9]]), Mat([[6]]), Mat([[1]]))


def test_alternating_polynomial_small_case():
    # S_2: the identity gives z2 (z1 z2), the transposition gives -(z1 z2) z2
    P = alternating_polynomial(1)
    assert P.terms == {(2, 1, 2): Mat([[1]]), (1, 2, 2): Mat([[-1]])}


def test_hankel_rank_of_geometric_series():
    s = expand(parse("inv(1 - z1 - z2)", 2), 4)
    assert hankel_rank(s.coeffs, 2, 2, (1, 1)) == 1


def test_recognizable_coefficients():
    A = [Mat([[0, 1], [0, 0]]), Mat.zeros(2, 2)]
    c = recognizable_coefficients(A, Mat([[0], [1]]), Mat([[1, 0]]), 2)
    assert c[(1,)] == Mat([[1]]) and c[(1, 1)] == Mat([[0]]) and c[()] == Mat([[0]])
