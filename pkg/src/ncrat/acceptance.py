"""The acceptance suite: ten exact checks, each returning a Criterion record.

Every check is seeded and uses exact rational arithmetic, so results are
reproducible bit for bit.  ``run_all`` is what ``ncrat selftest`` and the
pytest acceptance module call.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .algebra import Mat, block_matrix, word_reverse, words_upto
from .decide import (EQUIVALENT_EXACT, EQUIVALENT_SAMPLED, NONZERO_EXACT, NOT_EQUIVALENT,
                     ZERO_EXACT, SamplingPolicy, check_witness, equivalent, is_zero,
                     polynomial_size_schedule)
from .diffcalc import (BlockIdentityError, block_evaluation, contract_last, delta,
                       delta_numeric, delta_numeric_multi, delta_symbolic_value, delta_word,
                       delta_word_at_zero, directional_derivative, finite_difference,
                       left_shift, leibniz_expansion, right_shift, series_of_delta)
from .errors import GenerationFailed, NotInDomain
from .evaluation import (EvalPoint, Evaluator, contract, evaluate, evaluate_multi, in_domain)
from .expr import (Inv, MatPoly, Tensor, add, as_polynomial, const, iota, mul, neg, parse,
                   poly, random_expr, random_poly, var)
from .oracles import (alternating_polynomial, delta_word_poly_oracle, fm_coefficients,
                      first_derivative_oracle, hankel_rank, recognizable_coefficients)
from .realize import (hankel_realize, is_controllable, is_observable, minimize,
                      pencil_domain_check, random_realization, realize, recognizable_expr,
                      similarity)
from .series import expand

P_TEXT = "1 + 2*z1 + 3*z2 + 5*z1^2 + 7*z1*z2 + 11*z2*z1 + 13*z2^2"
R1_TEXT = "[[1, 0]] * inv([[1 - z1, -z2], [-z2, 1 - z1]]) * [[1], [0]]"
R2_SCHUR_TEXT = "inv(1 - z1 - z2*inv(1 - z1)*z2)"
R3_TEXT = "-inv(z2)*(1 - z1)*inv(z2 - (1 - z1)*inv(z2)*(1 - z1))"
PAIR_R1_TEXT = "z1*z2*inv(z1*z2 - z2*z1)"
PAIR_R2_TEXT = "1 + z2*z1*inv(z1*z2 - z2*z1)"
ZERO_TEXTS = ("(z1) + (-z1)", "(-1) + ((inv(z1))*(z1))", "0")
COMMUTATOR_TEXT = "z1*z2 - z2*z1"

SHAPES = ((1, 1), (1, 2), (2, 1), (2, 2))


@dataclass
class Criterion:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self, timing: bool = True) -> str:
        mark = "PASS" if self.passed else "FAIL"
        s = f"[{mark}] criterion {self.number:2d} {self.name}: {self.detail}"
        return s + f" ({self.seconds:.1f}s)" if timing else s


class _Tally:
    def __init__(self):
        self.ok = 0
        self.bad: list = []

    def check(self, cond: bool, label: str):
        if cond:
            self.ok += 1
        else:
            self.bad.append(label)

    @property
    def passed(self):
        return not self.bad and self.ok > 0

    def summary(self, extra=""):
        s = f"{self.ok} checks passed, {len(self.bad)} failed"
        if self.bad:
            s += f" (first: {self.bad[0]})"
        return s + (f"; {extra}" if extra else "")


def _p():
    return parse(P_TEXT, 2)


def _tensor_sum(terms, d=2):
    """sum c * (a (x) b) with a, b in {1, z1, z2} (0 means the constant 1)."""
    def leaf(j):
        return const(1, d) if j == 0 else var(j, d)
    out = None
    for c, a, b in terms:
        t = mul(const(c, d, 2), Tensor(leaf(a), leaf(b)))
        out = t if out is None else add(out, t)
    return out


def _random_dirs(rng, d, n, n2, lo=-3, hi=3):
    return [Mat([[rng.randint(lo, hi) for _ in range(n2)] for _ in range(n)]) for _ in range(d)]


def _domain_point(e, rng, n, tries=12, ev=None):
    for _ in range(tries):
        Z = EvalPoint.random(rng, e.d, n)
        if in_domain(e, Z, ev):
            return Z
    return None


def _exprs(seed, count, *, depth=(1, 4), shapes=SHAPES, regular=False, max_degree=2, d=2):
    """``count`` seeded random expressions (seeds that fail to generate are skipped)."""
    rng = random.Random(seed)
    out = []
    s = seed * 100003
    while len(out) < count:
        s += 1
        shape = rng.choice(shapes)
        dep = rng.randint(*depth)
        try:
            out.append(random_expr(s, d, dep, shape, regular_at_zero=regular, max_degree=max_degree))
        except GenerationFailed:
            continue
    return out


# -- 1 ------------------------------------------------------------------------------

def criterion_1() -> Criterion:
    p = _p()
    P = as_polynomial(p)
    t = _Tally()
    want = {
        1: _tensor_sum([(2, 0, 0), (5, 0, 1), (5, 1, 0), (7, 0, 2), (11, 2, 0)]),
        2: _tensor_sum([(3, 0, 0), (7, 1, 0), (11, 0, 1), (13, 0, 2), (13, 2, 0)]),
    }
    coeff_want = {
        1: {((), ()): 2, ((), (1,)): 5, ((1,), ()): 5, ((), (2,)): 7, ((2,), ()): 11},
        2: {((), ()): 3, ((1,), ()): 7, ((), (1,)): 11, ((), (2,)): 13, ((2,), ()): 13},
    }
    rng = random.Random(101)
    for j in (1, 2):
        D = delta(p, j)
        for k in range(20):
            n, n2 = rng.randint(1, 3), rng.randint(1, 3)
            pts = (EvalPoint.random(rng, 2, n), EvalPoint.random(rng, 2, n2))
            value = evaluate_multi(D, pts).data
            t.check(value == evaluate_multi(want[j], pts).data, f"Delta_{j} value at pair {k}")
            t.check(value == delta_word_poly_oracle(P, [j], pts), f"Delta_{j} splitting oracle {k}")
        got = {k: v[0, 0] for k, v in series_of_delta(p, j, 3).items() if not v.is_zero()}
        t.check(got == coeff_want[j], f"Delta_{j} coefficient map")
    return Criterion(1, "delta worked example", t.passed, t.summary())


# -- 2 ------------------------------------------------------------------------------

def criterion_2() -> Criterion:
    p = _p()
    t = _Tally()
    want = {
        ("right", 1): {(): 2, (1,): 5, (2,): 11},
        ("left", 1): {(): 2, (1,): 5, (2,): 7},
        ("right", 2): {(): 3, (1,): 7, (2,): 13},
        ("left", 2): {(): 3, (1,): 11, (2,): 13},
    }
    rng = random.Random(202)
    for (side, j), terms in want.items():
        s = (right_shift if side == "right" else left_shift)(p, j)
        target = MatPoly.from_scalar_terms(2, terms)
        P = as_polynomial(s)
        t.check(P is not None and P == target, f"{side} shift {j} coefficients")
        for k in range(5):
            Z = EvalPoint.random(rng, 2, rng.randint(1, 3))
            t.check(evaluate(s, Z) == target.evaluate(Z.mats), f"{side} shift {j} value {k}")
    L = 6
    for k in range(20):
        m = rng.randint(1, 3)
        r = random_realization(rng, 2, m)
        A, B, C = list(r.A), r.B[0], r.C
        e = recognizable_expr(A, B, C)
        for j in (1, 2):
            R = expand(right_shift(e, j), L).coeffs
            Lft = expand(left_shift(e, j), L).coeffs
            R_want = recognizable_coefficients(A, A[j - 1] @ B, C, L)
            L_want = recognizable_coefficients(A, B, C @ A[j - 1], L)
            t.check(all(R.get(w, Mat.zeros(1, 1)) == R_want[w] for w in R_want),
                    f"realization right shift {j}, case {k}")
            t.check(all(Lft.get(w, Mat.zeros(1, 1)) == L_want[w] for w in L_want),
                    f"realization left shift {j}, case {k}")
    return Criterion(2, "backward shifts", t.passed, t.summary())


# -- 3 ------------------------------------------------------------------------------

def criterion_3(count: int = 200) -> Criterion:
    t = _Tally()
    rng = random.Random(303)
    skipped = 0
    for i, e in enumerate(_exprs(3, count)):
        ev = Evaluator()
        n, n2 = rng.randint(1, 3), rng.randint(1, 3)
        Z = _domain_point(e, rng, n, ev=ev)
        Zp = _domain_point(e, rng, n2, ev=ev)
        if Z is None or Zp is None:
            skipped += 1
            continue
        W = _random_dirs(rng, 2, n, n2)
        b = block_evaluation(e, Z, Zp, W, ev)
        t.check(b.diagonal_ok, f"diagonal blocks, expression {i}")
        t.check(b.off_diagonal == delta_symbolic_value(e, Z, Zp, W, ev), f"off-diagonal, expression {i}")
    return Criterion(3, "block-triangular identity", t.passed and skipped <= count // 10,
                     t.summary(f"{skipped} expressions without a sampled domain point"))


# -- 4 ------------------------------------------------------------------------------

def criterion_4(count: int = 100) -> Criterion:
    t = _Tally()
    rng = random.Random(404)
    exprs = _exprs(4, 2 * count)
    done_fd = done_dd = 0
    for i, e in enumerate(exprs):
        ev = Evaluator()
        n = rng.randint(1, 3)
        Z0 = _domain_point(e, rng, n, ev=ev)
        Z = _domain_point(e, rng, n, ev=ev)
        if Z0 is None or Z is None:
            continue
        if done_fd < count:
            t.check(finite_difference(e, Z0, Z) == evaluate(e, Z, ev) - evaluate(e, Z0, ev),
                    f"finite difference {i}")
            done_fd += 1
        if done_dd < count:
            W = _random_dirs(rng, 2, n, n)
            t.check(directional_derivative(e, Z, W) == first_derivative_oracle(e, Z, W),
                    f"directional derivative {i}")
            done_dd += 1
        if done_fd >= count and done_dd >= count:
            break
    ok = t.passed and done_fd == count and done_dd == count
    return Criterion(4, "finite difference and directional derivative", ok,
                     t.summary(f"{done_fd} difference and {done_dd} derivative instances"))


# -- 5 ------------------------------------------------------------------------------

def _pair(rng, seed):
    """Random e1 (p x k), e2 (k x q) of small depth."""
    p, k, q = rng.randint(1, 2), rng.randint(1, 2), rng.randint(1, 2)
    for s in range(seed * 7, seed * 7 + 7):
        try:
            e1 = random_expr(s, 2, rng.randint(0, 2), (p, k))
            e2 = random_expr(s + 50000, 2, rng.randint(0, 2), (k, q))
            return e1, e2
        except GenerationFailed:
            continue
    return None


def _contract_sum(values, W):
    out = None
    for v, w in zip(values, W):
        c = contract(v, [w])
        out = c if out is None else out + c
    return out


def _contract_last_sum(values, W):
    out = None
    for v, w in zip(values, W):
        c = contract_last(v, w)
        out = c if out is None else out + c
    return out


def _leibniz_instance(rng, seed, t, label):
    """Check the four product/inverse rules on one random instance; False if out of domain."""
    got = _pair(rng, seed)
    if got is None:
        return False
    e1, e2 = got
    d = 2
    one = const(1, d)
    prod = mul(e1, e2)
    ev = Evaluator()
    n, n2, n3 = rng.randint(1, 2), rng.randint(1, 2), rng.randint(1, 2)
    Z = _domain_point(prod, rng, n, ev=ev)
    Zp = _domain_point(prod, rng, n2, ev=ev)
    Zpp = _domain_point(prod, rng, n3, ev=ev)
    if Z is None or Zp is None or Zpp is None:
        return False
    W = _random_dirs(rng, d, n, n2)
    # first-order product rule against the numeric route on the product
    rule = [add(mul(delta(e1, j), Tensor(one, e2)), mul(Tensor(e1, one), delta(e2, j)))
            for j in (1, 2)]
    lhs = _contract_sum([evaluate_multi(r, (Z, Zp), ev) for r in rule], W)
    t.check(lhs == delta_numeric(prod, Z, Zp, W, ev), f"product rule, {label}")

    # two-tuple product rule with the embedding, against the last-slot numeric route
    i = rng.randint(1, 2)
    X1 = delta(e1, i)
    X2 = delta(e2, i)
    Y = mul(X1, X2)
    W3 = _random_dirs(rng, d, n2, n3)
    rule2 = [add(mul(delta(X1, j), iota(X2)), mul(Tensor(X1, one), delta(X2, j))) for j in (1, 2)]
    try:
        lhs2 = _contract_last_sum([evaluate_multi(r, (Z, Zp, Zpp), ev) for r in rule2], W3)
        t.check(lhs2 == delta_numeric_multi(Y, (Z,), Zp, Zpp, W3, ev), f"two-tuple product rule, {label}")
    except NotInDomain:
        return False

    # inverse rule on a square factor (one tuple and two tuples)
    sq = mul(e1, _transpose_like(e1))
    sq = add(sq, const(Mat.identity(sq.rows) * rng.randint(1, 3), d))
    try:
        wit = (_domain_point(sq, rng, 1, ev=ev),)
        if wit[0] is None or not evaluate(sq, wit[0], ev).is_invertible():
            return False
        S = Inv(sq, wit)
        if not (in_domain(S, Z, ev) and in_domain(S, Zp, ev)):
            return False
        Wsq = _random_dirs(rng, d, n, n2)
        rule3 = [neg(mul(mul(Tensor(S, one), delta(sq, j)), Tensor(one, S))) for j in (1, 2)]
        lhs3 = _contract_sum([evaluate_multi(r, (Z, Zp), ev) for r in rule3], Wsq)
        t.check(lhs3 == delta_numeric(S, Z, Zp, Wsq, ev), f"inverse rule, {label}")

        X = add(Tensor(const(1, d), sq), delta(sq, i))
        Xi = Inv(X, (Z, Zp))
        if in_domain(Xi, (Z, Zp), ev) and in_domain(Xi, (Z, Zpp), ev):
            W4 = _random_dirs(rng, d, n2, n3)
            rule4 = [neg(mul(mul(Tensor(Xi, one), delta(X, j)), iota(Xi))) for j in (1, 2)]
            lhs4 = _contract_last_sum([evaluate_multi(r, (Z, Zp, Zpp), ev) for r in rule4], W4)
            t.check(lhs4 == delta_numeric_multi(Xi, (Z,), Zp, Zpp, W4, ev), f"two-tuple inverse rule, {label}")
    except NotInDomain:
        return False

    # higher-order rule for a word of length <= 2
    w = tuple(rng.randint(1, 2) for _ in range(rng.randint(1, 2)))
    pts = (Z, Zp, Zpp)[:len(w) + 1]
    try:
        a = evaluate_multi(delta_word(prod, w), pts, ev).data
        b = evaluate_multi(leibniz_expansion(e1, e2, w), pts, ev).data
    except NotInDomain:
        return False
    t.check(a == b, f"higher-order rule for word {w}, {label}")
    return True


def _transpose_like(e):
    """A q x p expression (so e * it is square): the transpose of e's constant part plus z1."""
    d = e.d
    p, q = e.shape
    return add(const(Mat([[1 if a == b else 0 for b in range(p)] for a in range(q)]), d),
               poly(MatPoly(d, q, p, {(1,): Mat([[1] * p for _ in range(q)])})))


def criterion_5(count: int = 100) -> Criterion:
    t = _Tally()
    rng = random.Random(505)
    done = 0
    seed = 0
    while done < count and seed < 20 * count:
        seed += 1
        if _leibniz_instance(rng, seed, t, f"instance {seed}"):
            done += 1
    return Criterion(5, "Leibniz rules", t.passed and done == count,
                     t.summary(f"{done} instances"))


# -- 6 ------------------------------------------------------------------------------

def criterion_6(count: int = 30) -> Criterion:
    t = _Tally()
    L = 5
    for i, e in enumerate(_exprs(6, count, depth=(1, 3), shapes=((1, 1), (1, 2), (2, 2)), regular=True)):
        s = expand(e, L)
        for j in (1, 2):
            sd = series_of_delta(e, j, L - 1)
            zero = Mat.zeros(*e.shape)
            for u in words_upto(2, L - 1):
                for v in words_upto(2, L - 1 - len(u)):
                    t.check(sd.get((u, v), zero) == s.coeff(u + (j,) + v),
                            f"expression {i}, letter {j}, split {(u, v)}")
        for w in words_upto(2, 3):
            if w:
                t.check(delta_word_at_zero(e, w) == s.coeff(word_reverse(w)),
                        f"expression {i}, word {w} at zero")
    return Criterion(6, "power-series identities", t.passed, t.summary())


# -- 7 ------------------------------------------------------------------------------

def criterion_7(count: int = 30, max_dim: int = 4) -> Criterion:
    t = _Tally()
    found = 0
    dims = []
    s = 0
    while found < count and s < 40 * count:
        s += 1
        try:
            e = random_expr(7000 + s, 2, 1 + s % 3, (1, 1) if s % 4 else (2, 2), regular_at_zero=True)
        except GenerationFailed:
            continue
        r = realize(e)
        rm = minimize(r)
        if rm.m > max_dim:
            continue
        found += 1
        m = rm.m
        dims.append(m)
        order = 2 * m + 2
        ser = expand(e, order)
        t.check(r.series(order) == ser, f"round trip of realize, case {s}")
        t.check(rm.series(order) == ser, f"round trip of minimize, case {s}")
        oracle = fm_coefficients(rm, order)
        t.check(all(ser.coeff(w) == c for w, c in oracle.items()), f"explicit products, case {s}")
        t.check(is_controllable(rm) and is_observable(rm), f"minimality, case {s}")
        k = max_dim
        t.check(hankel_rank(expand(e, 2 * k).coeffs, 2, k, e.shape) == m, f"Hankel rank, case {s}")
        h = hankel_realize(expand(e, 2 * k + 1), k)
        S = similarity(h, rm)
        ok = S is not None and h.m == rm.m
        if ok and m:
            ok = (all(S @ a1 == a2 @ S for a1, a2 in zip(h.A, rm.A))
                  and all(S @ b1 == b2 for b1, b2 in zip(h.B, rm.B))
                  and h.C == rm.C @ S and h.D == rm.D and S.is_invertible())
        t.check(ok, f"Hankel realization similar, case {s}")
    hist = {k: dims.count(k) for k in sorted(set(dims))}
    return Criterion(7, "realization suite", t.passed and found == count,
                     t.summary(f"{found} expressions, minimal dimensions {hist}"))


# -- 8 ------------------------------------------------------------------------------

def _r1_pencil_det(Z: EvalPoint) -> bool:
    n = Z.n
    I = Mat.identity(n)
    M = block_matrix([[I - Z[1], -Z[2]], [-Z[2], I - Z[1]]])
    return M.det() != 0


def _singular(rng, n):
    """Random n x n integer matrix of rank < n."""
    rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n - 1)]
    c = [rng.randint(-2, 2) for _ in range(n - 1)]
    rows.append([sum(ci * r[k] for ci, r in zip(c, rows)) for k in range(n)])
    rng.shuffle(rows)
    return Mat(rows)


def criterion_8() -> Criterion:
    t = _Tally()
    R1 = parse(R1_TEXT, 2)
    rm = minimize(realize(R1))
    rng = random.Random(808)
    sing = 0
    for n in (2, 3):
        for k in range(100):
            if k % 2:
                Z2 = EvalPoint.random(rng, 1, n).mats[0]
                K = _singular(rng, n)
                Z = EvalPoint([Mat.identity(n) - Z2 - K, Z2])
            else:
                Z = EvalPoint.random(rng, 2, n)
            expect = _r1_pencil_det(Z)
            sing += not expect
            t.check(pencil_domain_check(rm, Z) == expect, f"pencil check, size {n}, point {k}")
    r2 = parse(R2_SCHUR_TEXT, 2)
    witness = None
    for _ in range(50):
        n = rng.randint(2, 3)
        Z = EvalPoint([Mat.identity(n) - _singular(rng, n), EvalPoint.random(rng, 1, n).mats[0]])
        if not in_domain(r2, Z) and pencil_domain_check(rm, Z) and in_domain(R1, Z):
            witness = Z
            break
    t.check(witness is not None, "point outside the Schur-complement domain with a regular pencil")
    extra = f"minimal dimension {rm.m}, {sing} singular pencils"
    if witness is not None:
        extra += f", strict-inclusion witness of size {witness.n}"
    return Criterion(8, "pencil domain check", t.passed, t.summary(extra))


# -- 9 ------------------------------------------------------------------------------

def criterion_9(count: int = 1000) -> Criterion:
    t = _Tally()
    com = parse(COMMUTATOR_TEXT, 2)
    rng = random.Random(909)
    t.check(all(evaluate(com, EvalPoint.random(rng, 2, 1)).is_zero() for _ in range(20)),
            "commutator vanishes on scalars")
    v = is_zero(com, SamplingPolicy(sizes=(1,), seed=7))
    t.check(v.kind == NONZERO_EXACT and v.witness is not None and v.witness.n == 2
            and check_witness(v, com), "commutator certified nonzero at size 2")

    S3 = poly(alternating_polynomial(2))
    t.check(all(evaluate(S3, EvalPoint.random(rng, 2, 2)).is_zero() for _ in range(100)),
            "alternating polynomial vanishes on 2 x 2 pairs")
    v = is_zero(S3)
    t.check(v.kind == NONZERO_EXACT and v.witness is not None and v.witness.n == 3
            and check_witness(v, S3), "alternating polynomial certified nonzero at size 3")

    policy = SamplingPolicy()
    sampled_hits = 0
    for k in range(count):
        P = random_poly(rng, 2, rng.randint(1, 6))
        if P.is_zero():
            continue
        if max(polynomial_size_schedule(P.degree(), policy)) * 2 <= P.degree():
            t.check(False, f"size schedule too small for degree {P.degree()}")
        v = is_zero(poly(P), SamplingPolicy(seed=k))
        t.check(v.kind == NONZERO_EXACT and check_witness(v, poly(P)), f"random polynomial {k}")
        sampled_hits += v.witness is not None and "word" not in v.details
    return Criterion(9, "identity testing", t.passed,
                     t.summary(f"{sampled_hits} random polynomials certified by a sampled point"))


# -- 10 -----------------------------------------------------------------------------

def corpus_verdicts(policy: SamplingPolicy | None = None) -> list:
    """(label, verdict, expected kinds) for the fixed equivalence corpus."""
    policy = policy or SamplingPolicy()
    R1 = parse(R1_TEXT, 2)
    out = [
        ("r1 ~ r2", equivalent(parse(PAIR_R1_TEXT, 2), parse(PAIR_R2_TEXT, 2), policy),
         {EQUIVALENT_SAMPLED}),
        ("R1 ~ r2_schur", equivalent(R1, parse(R2_SCHUR_TEXT, 2), policy), {EQUIVALENT_EXACT}),
        ("R1 ~ r3", equivalent(R1, parse(R3_TEXT, 2), policy), {EQUIVALENT_SAMPLED}),
        ("z1*z2 ~ z2*z1", equivalent(parse("z1*z2", 2), parse("z2*z1", 2), policy), {NOT_EQUIVALENT}),
    ]
    expected_zero = ({ZERO_EXACT}, {EQUIVALENT_SAMPLED}, {ZERO_EXACT})
    for text, exp in zip(ZERO_TEXTS, expected_zero):
        out.append((f"zero? {text}", is_zero(parse(text, 1), policy), exp))
    return out


def criterion_10() -> Criterion:
    t = _Tally()
    parts = []
    for label, v, exp in corpus_verdicts():
        ok = v.kind in exp
        if v.kind == NOT_EQUIVALENT:
            ok = ok and v.witness is not None and v.witness.n == 2
        t.check(ok, f"{label}: got {v.kind}")
        parts.append(f"{label} -> {v.kind}")
    return Criterion(10, "equivalence corpus", t.passed, t.summary("; ".join(parts)))


CRITERIA: dict[int, Callable[[], Criterion]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run(number: int) -> Criterion:
    start = time.perf_counter()
    try:
        c = CRITERIA[number]()
    except Exception as exc:  # a crash is a failure, reported like one
        c = Criterion(number, CRITERIA[number].__name__, False, f"raised {type(exc).__name__}: {exc}")
    c.seconds = time.perf_counter() - start
    return c


def run_all(numbers=None) -> list:
    return [run(k) for k in (numbers or sorted(CRITERIA))]


__all__ = ["Criterion", "run", "run_all", "corpus_verdicts", "CRITERIA"]
