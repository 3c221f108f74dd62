"""Equivalence and zero testing.

Exact routes: coefficient comparison for polynomials, minimal realizations
for expressions regular at zero.  Everything else is decided by seeded
sampling, and sampled verdicts say so.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Mat, word_str, words_upto
from .errors import NotInDomain, ShapeMismatch
from .evaluation import EvalPoint, Evaluator, evaluate, regular_at_zero
from .expr import RatExpr, as_polynomial
from .realize import minimize, realize, similarity

EQUIVALENT_EXACT = "EquivalentExact"
EQUIVALENT_SAMPLED = "EquivalentSampled"
NOT_EQUIVALENT = "NotEquivalent"
ZERO_EXACT = "ZeroExact"
NONZERO_EXACT = "NonzeroExact"
INCONCLUSIVE = "Inconclusive"

EXACT_KINDS = {EQUIVALENT_EXACT, NOT_EQUIVALENT, ZERO_EXACT, NONZERO_EXACT}


@dataclass
class SamplingPolicy:
    sizes: tuple = (1, 2, 3)
    samples: int = 40
    seed: int = 0
    lo: int = -9
    hi: int = 9
    min_hits: int = 10

    @classmethod
    def up_to(cls, max_size: int, **kw) -> "SamplingPolicy":
        return cls(sizes=tuple(range(1, max_size + 1)), **kw)


@dataclass
class Verdict:
    kind: str
    route: str
    witness: EvalPoint | None = None
    details: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.kind in EXACT_KINDS

    def to_json(self) -> dict:
        out = {"result": self.kind, "exact": self.exact, "route": self.route}
        if self.witness is not None:
            out["witness"] = {"n": self.witness.n, "Z": self.witness.to_json()}
        out.update(self.details)
        return out


def nilpotent_point(w: Sequence[int], d: int) -> EvalPoint:
    """Z_j = sum of E_{t,t+1} over positions t with w_t = j (size |w| + 1).

    For e regular at zero, e at this point has the coefficient of w in its
    (first, last) block, and the point is always in the domain.
    """
    w = tuple(w)
    n = len(w) + 1
    mats = []
    for j in range(1, d + 1):
        rows = [[0] * n for _ in range(n)]
        for t, letter in enumerate(w):
            if letter == j:
                rows[t][t + 1] = 1
        mats.append(Mat(rows))
    return EvalPoint(mats)


def corner_block(V: Mat, p: int, q: int, n: int) -> Mat:
    """The p x q matrix of (first row, last column) entries of each n x n block."""
    return V.select([a * n for a in range(p)], [b * n + n - 1 for b in range(q)])


def _first_difference(r1, r2, L):
    for w in words_upto(r1.d, L):
        if r1.coefficient(w) != r2.coefficient(w):
            return w
    return None


def _sample_points(policy: SamplingPolicy, d: int, sizes):
    rng = random.Random(policy.seed)
    for n in sizes:
        for _ in range(policy.samples):
            yield n, EvalPoint.random(rng, d, n, policy.lo, policy.hi)


def _try_eval(e, Z, ev):
    try:
        return evaluate(e, Z, ev)
    except NotInDomain:
        return None


def equivalent(e1: RatExpr, e2: RatExpr, policy: SamplingPolicy | None = None) -> Verdict:
    policy = policy or SamplingPolicy()
    if e1.shape != e2.shape or e1.d != e2.d or e1.arity != 1 or e2.arity != 1:
        raise ShapeMismatch(f"cannot compare {e1.shape} (d={e1.d}) with {e2.shape} (d={e2.d})")
    if regular_at_zero(e1) and regular_at_zero(e2):
        r1 = minimize(realize(e1))
        r2 = minimize(realize(e2))
        S = similarity(r1, r2)
        info = {"dims": [r1.m, r2.m]}
        if S is not None:
            return Verdict(EQUIVALENT_EXACT, "realization", None, info)
        w = _first_difference(r1, r2, r1.m + r2.m + 1)
        if w is not None:
            info["word"] = word_str(w)
            Z = _sampled_witness(e1, e2, policy) or nilpotent_point(w, e1.d)
            return Verdict(NOT_EQUIVALENT, "realization", Z, info)
    return _sampled_equivalence(e1, e2, policy)


def _sampled_witness(e1, e2, policy):
    """First sampled point in both domains where the values differ (e2 None: nonzero)."""
    ev1, ev2 = Evaluator(), Evaluator()
    for _, Z in _sample_points(policy, e1.d, policy.sizes):
        a = _try_eval(e1, Z, ev1)
        if a is None:
            continue
        if e2 is None:
            if not a.is_zero():
                return Z
            continue
        b = _try_eval(e2, Z, ev2)
        if b is not None and a != b:
            return Z
    return None


def _sampled_equivalence(e1, e2, policy):
    hits = {}
    ev1, ev2 = Evaluator(), Evaluator()
    for n, Z in _sample_points(policy, e1.d, policy.sizes):
        hits.setdefault(n, 0)
        a = _try_eval(e1, Z, ev1)
        if a is None:
            continue
        b = _try_eval(e2, Z, ev2)
        if b is None:
            continue
        hits[n] += 1
        if a != b:
            return Verdict(NOT_EQUIVALENT, "sampled", Z, {"seed": policy.seed})
    return _sampled_tail(EQUIVALENT_SAMPLED, hits, policy)


def _sampled_tail(kind, hits, policy):
    info = {"seed": policy.seed, "sizes": list(policy.sizes), "samples_per_size": policy.samples,
            "common_domain_hits": {str(n): h for n, h in hits.items()}}
    total = sum(hits.values())
    if total >= policy.min_hits:
        return Verdict(kind, "sampled", None, info)
    info["reason"] = f"only {total} sampled points in the domain (need {policy.min_hits})"
    return Verdict(INCONCLUSIVE, "sampled", None, info)


def polynomial_size_schedule(degree: int, policy: SamplingPolicy) -> tuple:
    """Sizes 1..N with N large enough that 2N > degree (a nonzero polynomial of
    degree < 2n cannot vanish on all n x n matrices)."""
    top = max(max(policy.sizes), degree // 2 + 1)
    return tuple(range(1, top + 1))


def is_zero(e: RatExpr, policy: SamplingPolicy | None = None) -> Verdict:
    policy = policy or SamplingPolicy()
    p, q = e.shape
    P = as_polynomial(e)
    if P is not None:
        if P.is_zero():
            return Verdict(ZERO_EXACT, "polynomial", None, {"degree": -1})
        sizes = polynomial_size_schedule(P.degree(), policy)
        ev = Evaluator()
        for n, Z in _sample_points(policy, e.d, sizes):
            if not evaluate(e, Z, ev).is_zero():
                return Verdict(NONZERO_EXACT, "polynomial", Z,
                               {"degree": P.degree(), "sizes": list(sizes), "seed": policy.seed})
        w = next(iter(P.terms))
        return Verdict(NONZERO_EXACT, "polynomial", nilpotent_point(w, e.d),
                       {"degree": P.degree(), "word": word_str(w), "sizes": list(sizes)})
    if regular_at_zero(e):
        r = minimize(realize(e))
        if r.m == 0 and r.D.is_zero():
            return Verdict(ZERO_EXACT, "realization", None, {"dim": 0})
        for w in words_upto(e.d, r.m):
            if not r.coefficient(w).is_zero():
                Z = _sampled_witness(e, None, policy) or nilpotent_point(w, e.d)
                return Verdict(NONZERO_EXACT, "realization", Z, {"dim": r.m, "word": word_str(w)})
    hits = {}
    ev = Evaluator()
    for n, Z in _sample_points(policy, e.d, policy.sizes):
        hits.setdefault(n, 0)
        v = _try_eval(e, Z, ev)
        if v is None:
            continue
        hits[n] += 1
        if not v.is_zero():
            return Verdict(NONZERO_EXACT, "sampled", Z, {"seed": policy.seed})
    return _sampled_tail(EQUIVALENT_SAMPLED, hits, policy)


def check_witness(verdict: Verdict, e1: RatExpr, e2: RatExpr | None = None) -> bool:
    """Re-evaluate a NotEquivalent / NonzeroExact certificate."""
    Z = verdict.witness
    if Z is None:
        return False
    try:
        a = evaluate(e1, Z)
        if e2 is None:
            return not a.is_zero()
        return a != evaluate(e2, Z)
    except NotInDomain:
        return False


__all__ = [
    "SamplingPolicy", "Verdict", "equivalent", "is_zero", "nilpotent_point", "corner_block",
    "check_witness", "polynomial_size_schedule", "EQUIVALENT_EXACT", "EQUIVALENT_SAMPLED",
    "NOT_EQUIVALENT", "ZERO_EXACT", "NONZERO_EXACT", "INCONCLUSIVE", "EXACT_KINDS",
]
