"""Noncommutative rational functions over Q.

Expressions, exact evaluation on matrix tuples, truncated power series,
state-space realizations, equivalence testing and the difference-differential
calculus.
"""
from .algebra import Mat, Rational, to_rational
from .decide import SamplingPolicy, Verdict, equivalent, is_zero
from .diffcalc import (delta, delta_numeric, delta_word, directional_derivative,
                       finite_difference, hessian, iota, left_shift, right_shift, series_of_delta)
from .errors import NcratError, NotInDomain, NotRegularAtZero
from .evaluation import EvalPoint, evaluate, evaluate_multi
from .expr import RatExpr, format_expr, parse, random_expr, read_nce, write_nce
from .realize import (FmRealization, hankel_realize, minimize, realize, similarity,
                      transfer_expr)
from .series import TruncSeries, expand

__version__ = "0.1.0"

__all__ = [
    "Mat", "Rational", "to_rational", "SamplingPolicy", "Verdict", "equivalent", "is_zero",
    "delta", "delta_numeric", "delta_word", "directional_derivative", "finite_difference",
    "hessian", "iota", "left_shift", "right_shift", "series_of_delta", "NcratError",
    "NotInDomain", "NotRegularAtZero", "EvalPoint", "evaluate", "evaluate_multi", "RatExpr",
    "format_expr", "parse", "random_expr", "read_nce", "write_nce", "FmRealization",
    "hankel_realize", "minimize", "realize", "similarity", "transfer_expr", "TruncSeries",
    "expand",
]
