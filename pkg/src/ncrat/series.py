"""Truncated NC power series with matrix coefficients.

Series in several tuples are keyed by tuples of words (one word per tuple)
and truncated by total length.  ``TruncSeries`` is the one-tuple case keyed
by plain words.
"""
from __future__ import annotations

from itertools import product
from typing import Iterable

from .algebra import Mat, block_matrix, kron, word_str, words_of_length, words_upto
from .errors import NotRegularAtZero, ShapeError, SingularConstantTerm, SingularMatrixError
from .expr import Add, Block, Inv, Iota, Mul, Poly, RatExpr, Tensor


def _klen(key) -> int:
    return sum(len(w) for w in key)


def _concat(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _keys_of_length(d: int, arity: int, k: int):
    """All keys (tuples of ``arity`` words) of total length k, deterministic order."""
    if arity == 1:
        return [(w,) for w in words_of_length(d, k)]
    out = []
    for first in range(k, -1, -1):
        for w in words_of_length(d, first):
            for rest in _keys_of_length(d, arity - 1, k - first):
                out.append((w,) + rest)
    return out


def _splits(key):
    """All (a, b) with concat(a, b) == key."""
    for cut in product(*[range(len(w) + 1) for w in key]):
        yield tuple(w[:c] for w, c in zip(key, cut)), tuple(w[c:] for w, c in zip(key, cut))


def _sort_key(key):
    return (_klen(key), tuple(len(w) for w in key), key)


class MultiSeries:
    """Series in ``arity`` tuples: dict key -> p x q matrix, keys of total length <= order."""

    __slots__ = ("d", "arity", "shape", "order", "coeffs")

    def __init__(self, d: int, arity: int, shape, order: int, coeffs: dict | None = None):
        self.d = d
        self.arity = arity
        self.shape = tuple(shape)
        self.order = order
        clean = {}
        for k, m in (coeffs or {}).items():
            k = tuple(tuple(w) for w in k)
            if len(k) != arity:
                raise ShapeError(f"key {k} does not have {arity} words")
            if _klen(k) > order or m.is_zero():
                continue
            if m.shape != self.shape:
                raise ShapeError(f"coefficient shape {m.shape} differs from {self.shape}")
            clean[k] = m
        self.coeffs = {k: clean[k] for k in sorted(clean, key=_sort_key)}

    def zero_coeff(self) -> Mat:
        return Mat.zeros(*self.shape)

    def coeff(self, key) -> Mat:
        return self.coeffs.get(tuple(tuple(w) for w in key), self.zero_coeff())

    def truncate(self, L: int) -> "MultiSeries":
        return MultiSeries(self.d, self.arity, self.shape, min(L, self.order), self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (self.d, self.arity, self.shape, self.order) == (other.d, other.arity, other.shape, other.order) \
            and self.coeffs.keys() == other.coeffs.keys() \
            and all(self.coeffs[k] == other.coeffs[k] for k in self.coeffs)

    __hash__ = None

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        _compatible(self, other)
        out = dict(self.coeffs)
        for k, m in other.coeffs.items():
            out[k] = out[k] + m if k in out else m
        return MultiSeries(self.d, self.arity, self.shape, min(self.order, other.order), out)

    def __neg__(self):
        return MultiSeries(self.d, self.arity, self.shape, self.order,
                           {k: -m for k, m in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "MultiSeries") -> "MultiSeries":
        return cauchy(self, other)


def _compatible(s, t):
    if s.d != t.d or s.arity != t.arity:
        raise ShapeError("series over different alphabets or tuple counts")
    if s.shape != t.shape:
        raise ShapeError(f"series shapes {s.shape} and {t.shape} differ")


def _n_keys(d, arity, L):
    from math import comb
    return sum(comb(k + arity - 1, arity - 1) * d ** k for k in range(L + 1))


def cauchy(s: MultiSeries, t: MultiSeries, L: int | None = None) -> MultiSeries:
    """Cauchy product: coefficient of key is the sum over all splittings key = a b of s_a t_b."""
    if s.d != t.d or s.arity != t.arity:
        raise ShapeError("series over different alphabets or tuple counts")
    if s.shape[1] != t.shape[0]:
        raise ShapeError(f"cannot multiply series shapes {s.shape} and {t.shape}")
    L = min(s.order, t.order) if L is None else L
    shape = (s.shape[0], t.shape[1])
    out: dict = {}
    pair_cost = len(s.coeffs) * len(t.coeffs)
    split_cost = _n_keys(s.d, s.arity, L) * (L + 1) ** s.arity
    if pair_cost <= split_cost:
        by_len: dict = {}
        for k, m in t.coeffs.items():
            by_len.setdefault(_klen(k), []).append((k, m))
        for ka, a in s.coeffs.items():
            la = _klen(ka)
            for lb in range(0, L - la + 1):
                for kb, b in by_len.get(lb, ()):
                    key = _concat(ka, kb)
                    ab = a @ b
                    out[key] = out[key] + ab if key in out else ab
    else:
        sc, tc = s.coeffs, t.coeffs
        for k in range(L + 1):
            for key in _keys_of_length(s.d, s.arity, k):
                acc = None
                for ka, kb in _splits(key):
                    a = sc.get(ka)
                    if a is None:
                        continue
                    b = tc.get(kb)
                    if b is None:
                        continue
                    ab = a @ b
                    acc = ab if acc is None else acc + ab
                if acc is not None:
                    out[key] = acc
    return MultiSeries(s.d, s.arity, shape, L, out)


def invert(s: MultiSeries, L: int | None = None) -> MultiSeries:
    """Inverse series, degree by degree: t_k = -s_0^{-1} sum_{a nonempty} s_a t_b."""
    L = s.order if L is None else L
    empty = tuple(() for _ in range(s.arity))
    if s.shape[0] != s.shape[1]:
        raise ShapeError(f"cannot invert a series of shape {s.shape}")
    try:
        s0inv = s.coeff(empty).inv()
    except SingularMatrixError:
        raise SingularConstantTerm("constant term is singular") from None
    rest = [(k, m) for k, m in s.coeffs.items() if k != empty]
    t: dict = {empty: s0inv}
    by_len: dict = {0: [(empty, s0inv)]}
    dense = len(rest) > 2 * (L + 1) ** s.arity
    for k in range(1, L + 1):
        acc: dict = {}
        if not dense:
            for ka, a in rest:
                la = _klen(ka)
                if la > k:
                    continue
                for kb, b in by_len.get(k - la, ()):
                    key = _concat(ka, kb)
                    ab = a @ b
                    acc[key] = acc[key] + ab if key in acc else ab
        else:
            sc = s.coeffs
            for key in _keys_of_length(s.d, s.arity, k):
                tot = None
                for ka, kb in _splits(key):
                    if ka == empty:
                        continue
                    a = sc.get(ka)
                    if a is None:
                        continue
                    b = t.get(kb)
                    if b is None:
                        continue
                    ab = a @ b
                    tot = ab if tot is None else tot + ab
                if tot is not None:
                    acc[key] = tot
        level = []
        for key, m in acc.items():
            v = -(s0inv @ m)
            if not v.is_zero():
                t[key] = v
                level.append((key, v))
        by_len[k] = level
    return MultiSeries(s.d, s.arity, s.shape, L, t)


def expand_multi(e: RatExpr, L: int) -> MultiSeries:
    """Power-series expansion of an expression in any number of tuples, truncated at total length L."""
    memo: dict = {}

    def go(x, path):
        hit = memo.get(id(x))
        if hit is not None:
            return hit[1]
        r = compute(x, path)
        memo[id(x)] = (x, r)
        return r

    def compute(x, path):
        ar = x.arity
        if isinstance(x, Poly):
            coeffs = {}
            for w, c in x.poly.terms.items():
                if len(w) <= L:
                    key = tuple(w if i == x.slot - 1 else () for i in range(ar))
                    coeffs[key] = c
            return MultiSeries(x.d, ar, x.shape, L, coeffs)
        if isinstance(x, Add):
            return go(x.left, path + "/Add.left") + go(x.right, path + "/Add.right")
        if isinstance(x, Mul):
            return cauchy(go(x.left, path + "/Mul.left"), go(x.right, path + "/Mul.right"), L)
        if isinstance(x, Inv):
            s = go(x.inner, path + "/Inv")
            try:
                return invert(s, L)
            except SingularConstantTerm:
                raise NotRegularAtZero(path) from None
        if isinstance(x, Block):
            subs = [[go(c, f"{path}/Block[{a}][{b}]") for b, c in enumerate(r)]
                    for a, r in enumerate(x.grid)]
            keys = sorted({k for r in subs for s in r for k in s.coeffs}, key=_sort_key)
            coeffs = {k: block_matrix([[s.coeff(k) for s in r] for r in subs]) for k in keys}
            return MultiSeries(x.d, ar, x.shape, L, coeffs)
        if isinstance(x, Tensor):
            a = go(x.left, path + "/Tensor.left")
            b = go(x.right, path + "/Tensor.right")
            coeffs = {}
            for ka, ma in a.coeffs.items():
                la = _klen(ka)
                for kb, mb in b.coeffs.items():
                    if la + _klen(kb) <= L:
                        coeffs[ka + kb] = kron(ma, mb)
            return MultiSeries(x.d, ar, x.shape, L, coeffs)
        if isinstance(x, Iota):
            s = go(x.inner, path + "/Iota")
            coeffs = {k[:ar - 2] + ((),) + k[ar - 2:]: m for k, m in s.coeffs.items()}
            return MultiSeries(x.d, ar, x.shape, L, coeffs)
        raise TypeError(type(x).__name__)

    return go(e, "root")


class TruncSeries:
    """One-tuple series: Word -> p x q matrix for words of length <= order."""

    __slots__ = ("_s",)

    def __init__(self, d: int, shape, order: int, coeffs: dict | None = None):
        self._s = MultiSeries(d, 1, shape, order, {(tuple(w),): m for w, m in (coeffs or {}).items()})

    @classmethod
    def _wrap(cls, ms: MultiSeries) -> "TruncSeries":
        if ms.arity != 1:
            raise ShapeError("a one-tuple series is required")
        obj = object.__new__(cls)
        obj._s = ms
        return obj

    @property
    def d(self):
        return self._s.d

    @property
    def shape(self):
        return self._s.shape

    @property
    def order(self):
        return self._s.order

    @property
    def coeffs(self) -> dict:
        return {k[0]: m for k, m in self._s.coeffs.items()}

    @property
    def multi(self) -> MultiSeries:
        return self._s

    def coeff(self, w) -> Mat:
        return self._s.coeff((tuple(w),))

    def truncate(self, L):
        return TruncSeries._wrap(self._s.truncate(L))

    def __eq__(self, other):
        return isinstance(other, TruncSeries) and self._s == other._s

    __hash__ = None

    def __add__(self, other):
        return TruncSeries._wrap(self._s + other._s)

    def __sub__(self, other):
        return TruncSeries._wrap(self._s - other._s)

    def __neg__(self):
        return TruncSeries._wrap(-self._s)

    def __mul__(self, other):
        return TruncSeries._wrap(cauchy(self._s, other._s))

    def __repr__(self):
        return f"TruncSeries(d={self.d}, shape={self.shape}, order={self.order}, nnz={len(self._s.coeffs)})"

    def to_json(self) -> dict:
        return {word_str(w): m.to_json() for w, m in self.coeffs.items()}

    def words(self) -> list:
        return words_upto(self.d, self.order)


def expand(e: RatExpr, L: int) -> TruncSeries:
    """Series of an arity-1 expression regular at zero, truncated at word length L."""
    if e.arity != 1:
        raise ShapeError("expand takes a one-tuple expression; use expand_multi")
    return TruncSeries._wrap(expand_multi(e, L))


def series_invert(s: TruncSeries, L: int | None = None) -> TruncSeries:
    return TruncSeries._wrap(invert(s.multi, L))


def series_from_words(d: int, shape, order: int, fn) -> TruncSeries:
    """Series whose coefficient at w is fn(w), for all words of length <= order."""
    return TruncSeries(d, shape, order, {w: fn(w) for w in words_upto(d, order)})


__all__ = ["MultiSeries", "TruncSeries", "cauchy", "invert", "expand", "expand_multi",
           "series_invert", "series_from_words"]
