"""Difference-differential operators on expressions, and their numeric counterparts.

``delta(e, j)`` acts on the last tuple of an expression in l tuples and
returns an expression in l + 1 tuples.  The numeric routines evaluate an
arity-1 expression on block upper-triangular points and read the answer off
an off-diagonal block; no symbolic work is involved there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import Mat, commutation_matrix
from .errors import NotRegularAtZero, ShapeError
from .evaluation import (_LETTERS, EvalPoint, Evaluator, _from_array, _to_array, block_point,
                         contract, evaluate, evaluate_multi, regular_at_zero)
from .expr import (Add, Block, Inv, Iota, MatPoly, Mul, Poly, RatExpr, Tensor, add,
                   block, const, mul, neg)
from .series import expand_multi


def _one(d: int) -> Poly:
    return const(1, d, 1)


def _zero_like(x: RatExpr, arity: int) -> Poly:
    return Poly(MatPoly(x.d, x.rows, x.cols), 1, arity)


def iota(e: RatExpr) -> RatExpr:
    """Embed an l-tuple expression into l + 1 tuples (trivial slot before the last)."""
    return Iota(e)


def _insert_trivial(witness: tuple, k: int, d: int) -> tuple:
    if not witness:
        return witness
    return witness[:k - 1] + (EvalPoint.zero(d, 1),) + witness[k - 1:]


def push_iota(x: RatExpr, memo: dict | None = None) -> RatExpr:
    """An expression equal to iota(x) whose root is not an Iota node."""
    memo = {} if memo is None else memo
    d = x.d

    def go(y):
        hit = memo.get(id(y))
        if hit is not None:
            return hit[1]
        k = y.arity
        if k == 1:
            r = Tensor(_one(d), y)
        elif isinstance(y, Poly):
            if y.is_constant():
                r = Poly(y.poly, 1, k + 1)
            else:
                r = Poly(y.poly, y.slot + (1 if y.slot == k else 0), k + 1)
        elif isinstance(y, Add):
            r = add(go(y.left), go(y.right))
        elif isinstance(y, Mul):
            r = mul(go(y.left), go(y.right))
        elif isinstance(y, Inv):
            r = Inv(go(y.inner), _insert_trivial(y.witness, k, d))
        elif isinstance(y, Block):
            r = block([[go(c) for c in row] for row in y.grid])
        elif isinstance(y, Tensor):
            if y.right.arity >= 2:
                r = Tensor(y.left, go(y.right))
            else:
                r = Tensor(y.left, Tensor(_one(d), y.right))
        elif isinstance(y, Iota):
            r = go(go(y.inner))
        else:
            raise TypeError(type(y).__name__)
        memo[id(y)] = (y, r)
        return r

    return go(x)


class _Delta:
    def __init__(self, j: int, d: int):
        if not 1 <= j <= d:
            raise ValueError(f"letter {j} outside 1..{d}")
        self.j = j
        self.d = d
        self.memo: dict = {}
        self.iota_memo: dict = {}

    def __call__(self, x: RatExpr) -> RatExpr:
        hit = self.memo.get(id(x))
        if hit is not None:
            return hit[1]
        r = self._rule(x)
        self.memo[id(x)] = (x, r)
        return r

    def _poly(self, x: Poly) -> RatExpr:
        ell = x.arity
        if x.is_constant() or x.slot < ell:
            return _zero_like(x, ell + 1)
        groups: dict = {}
        for w, c in x.poly.terms.items():
            for k, letter in enumerate(w):
                if letter == self.j:
                    u, v = w[:k], w[k + 1:]
                    groups.setdefault(v, {})
                    g = groups[v]
                    g[u] = g[u] + c if u in g else c
        out = None
        q = x.cols
        for v in sorted(groups, key=lambda v: (len(v), v)):
            left = Poly(MatPoly(x.d, x.rows, q, groups[v]), ell, ell + 1)
            if left.poly.is_zero():
                continue
            right = Poly(MatPoly(x.d, q, q, {v: Mat.identity(q)}), ell + 1, ell + 1)
            term = mul(left, right)
            out = term if out is None else add(out, term)
        return out if out is not None else _zero_like(x, ell + 1)

    def _rule(self, x: RatExpr) -> RatExpr:
        one = _one(self.d)
        if isinstance(x, Poly):
            return self._poly(x)
        if isinstance(x, Add):
            return add(self(x.left), self(x.right))
        if isinstance(x, Mul):
            return add(mul(self(x.left), Iota(x.right)), mul(Tensor(x.left, one), self(x.right)))
        if isinstance(x, Inv):
            return neg(mul(mul(Tensor(x, one), self(x.inner)), Iota(x)))
        if isinstance(x, Block):
            return block([[self(c) for c in row] for row in x.grid])
        if isinstance(x, Tensor):
            return Tensor(x.left, self(x.right))
        if isinstance(x, Iota):
            return self(push_iota(x.inner, self.iota_memo))
        raise TypeError(type(x).__name__)


def delta(e: RatExpr, j: int) -> RatExpr:
    """The difference-differential operator for letter j (acts on the last tuple)."""
    return _Delta(j, e.d)(e)


def delta_word(e: RatExpr, w: Sequence[int]) -> RatExpr:
    """Iterated operator for the stored word w = [i_l, ..., i_1]: the last letter acts first."""
    out = e
    for j in reversed(tuple(w)):
        out = delta(out, j)
    return out


def ones(d: int, arity: int) -> Poly:
    """The scalar 1 (x) ... (x) 1 in ``arity`` tuples."""
    return const(1, d, arity)


def leibniz_expansion(e1: RatExpr, e2: RatExpr, w: Sequence[int]) -> RatExpr:
    """Sum over w = u v of (D^v(e1) (x) 1...1)(1...1 (x) D^u(e2))."""
    w = tuple(w)
    out = None
    for k in range(len(w) + 1):
        u, v = w[:k], w[k:]
        left = delta_word(e1, v)
        right = delta_word(e2, u)
        if len(u):
            left = Tensor(left, ones(e1.d, len(u)))
        if len(v):
            right = Tensor(ones(e1.d, len(v)), right)
        term = mul(left, right)
        out = term if out is None else add(out, term)
    return out


# -- zero substitution --------------------------------------------------------------

def _absorb_right(A: RatExpr, K: Mat) -> RatExpr:
    """Arity-1 expression with the value of A (x) K (coefficient factors merged, A's first)."""
    d = A.d
    p, q = A.shape
    p2, q2 = K.shape
    if (p2, q2) == (1, 1):
        c = K[0, 0]
        return A if c == 1 else mul(A, const(Mat.scalar(c, q), d))
    diag = block([[A if a == b else _zero_like(A, 1) for b in range(p2)] for a in range(p2)])
    left = mul(mul(const(commutation_matrix(p, p2), d), diag), const(commutation_matrix(q, p2).T, d))
    from .algebra import kron
    return mul(left, const(kron(Mat.identity(q), K), d))


def _absorb_left(K: Mat, B: RatExpr) -> RatExpr:
    """Arity-1 expression with the value of K (x) B."""
    from .algebra import kron
    d = B.d
    p, q = K.shape
    p2, q2 = B.shape
    if (p, q) == (1, 1):
        c = K[0, 0]
        return B if c == 1 else mul(const(Mat.scalar(c, p2), d), B)
    diag = block([[B if a == b else _zero_like(B, 1) for b in range(q)] for a in range(q)])
    return mul(const(kron(K, Mat.identity(p2)), d), diag)


def freeze(e: RatExpr, slot: int) -> RatExpr:
    """Substitute the size-1 zero tuple into ``slot`` of a two-tuple expression."""
    if e.arity != 2 or slot not in (1, 2):
        raise ShapeError("freeze expects a two-tuple expression and slot 1 or 2")
    d = e.d
    zero = EvalPoint.zero(d, 1)
    ev = Evaluator()
    memo: dict = {}

    def at_zero(x):
        return ev.value(x, (zero,) * x.arity)

    def go(x):
        hit = memo.get(id(x))
        if hit is not None:
            return hit[1]
        if isinstance(x, Poly):
            if x.is_constant():
                r = Poly(x.poly, 1, 1)
            elif x.slot == slot:
                r = const(x.poly.const_term(), d)
            else:
                r = Poly(x.poly, 1, 1)
        elif isinstance(x, Add):
            r = add(go(x.left), go(x.right))
        elif isinstance(x, Mul):
            r = mul(go(x.left), go(x.right))
        elif isinstance(x, Inv):
            r = Inv(go(x.inner), (zero,))
        elif isinstance(x, Block):
            r = block([[go(c) for c in row] for row in x.grid])
        elif isinstance(x, Tensor):
            if slot == 2:
                r = _absorb_right(x.left, at_zero(x.right))
            else:
                r = _absorb_left(at_zero(x.left), x.right)
        elif isinstance(x, Iota):
            r = const(at_zero(x.inner), d) if slot == 2 else x.inner
        else:
            raise TypeError(type(x).__name__)
        memo[id(x)] = (x, r)
        return r

    return go(e)


def _require_regular(e: RatExpr):
    if not regular_at_zero(e):
        raise NotRegularAtZero("root")


def right_shift(e: RatExpr, j: int) -> RatExpr:
    """Delta_j(e)(Z, 0) as a one-tuple expression."""
    _require_regular(e)
    return freeze(delta(e, j), 2)


def left_shift(e: RatExpr, j: int) -> RatExpr:
    """Delta_j(e)(0, Z) as a one-tuple expression."""
    _require_regular(e)
    return freeze(delta(e, j), 1)


# -- numeric route -------------------------------------------------------------------

@dataclass
class BlockEvaluation:
    """Blocks of P(N,p) e([[Z, W], [0, Z']]) P(N,q)^T, N = n + n'."""
    top_left: Mat
    bottom_right: Mat
    bottom_left: Mat
    off_diagonal: Mat  # already returned to (coefficient, tuple) order
    expected_top_left: Mat
    expected_bottom_right: Mat

    @property
    def diagonal_ok(self) -> bool:
        return (self.top_left == self.expected_top_left
                and self.bottom_right == self.expected_bottom_right
                and self.bottom_left.is_zero())


class BlockIdentityError(AssertionError):
    pass


def block_evaluation(e: RatExpr, Z: EvalPoint, Zp: EvalPoint, W: Sequence[Mat],
                     evaluator: Evaluator | None = None) -> BlockEvaluation:
    ev = evaluator or Evaluator()
    p, q = e.shape
    n, n2 = Z.n, Zp.n
    N = n + n2
    V = evaluate(e, block_point(Z, Zp, list(W)), ev)
    T = commutation_matrix(N, p) @ V @ commutation_matrix(N, q).T
    tl = T.submatrix(0, n * p, 0, n * q)
    br = T.submatrix(n * p, N * p, n * q, N * q)
    bl = T.submatrix(n * p, N * p, 0, n * q)
    od = T.submatrix(0, n * p, n * q, N * q)
    exp_tl = commutation_matrix(n, p) @ evaluate(e, Z, ev) @ commutation_matrix(n, q).T
    exp_br = commutation_matrix(n2, p) @ evaluate(e, Zp, ev) @ commutation_matrix(n2, q).T
    off = commutation_matrix(n, p).T @ od @ commutation_matrix(n2, q)
    return BlockEvaluation(tl, br, bl, off, exp_tl, exp_br)


def delta_numeric(e: RatExpr, Z: EvalPoint, Zp: EvalPoint, W: Sequence[Mat],
                  evaluator: Evaluator | None = None) -> Mat:
    """sum_j Delta_j(e)(Z, Z')(W_j), read off one block upper-triangular evaluation."""
    if e.arity != 1:
        raise ShapeError("delta_numeric takes a one-tuple expression")
    b = block_evaluation(e, Z, Zp, W, evaluator)
    if not b.diagonal_ok:
        raise BlockIdentityError("diagonal blocks do not reproduce e(Z) and e(Z')")
    return b.off_diagonal


def delta_symbolic_value(e: RatExpr, Z: EvalPoint, Zp: EvalPoint, W: Sequence[Mat],
                         evaluator: Evaluator | None = None) -> Mat:
    """Same quantity as delta_numeric, via the symbolic operators and contraction."""
    ev = evaluator or Evaluator()
    out = None
    for j in range(1, e.d + 1):
        v = contract(evaluate_multi(delta(e, j), (Z, Zp), ev), [W[j - 1]])
        out = v if out is None else out + v
    return out


def contract_last(v, H: Mat) -> Mat:
    """Contract only the last direction slot of an l-tuple value with H.

    The result is indexed (coef, i_1..i_{l-1}, i_l) x (coef, j_1..j_{l-1}, j_{l+1}).
    """
    sizes = v.sizes
    ell = len(sizes) - 1
    if ell < 1 or H.shape != (sizes[-2], sizes[-1]):
        raise ShapeError(f"cannot contract the last slot of sizes {sizes} with {H.shape}")
    p, q = v.shape
    data = _to_array(v.data).reshape((p,) + sizes + (q,) + sizes)
    I = _LETTERS[2:3 + ell]
    J = _LETTERS[3 + ell:4 + 2 * ell]
    subscripts = f"a{I}b{J},{J[-2]}{I[-1]}->a{I[:-1]}b{J[:-2]}{J[-1]}"
    res = np.einsum(subscripts, data, _to_array(H), optimize=False)
    rows = p * math.prod(sizes[:-1])
    return _from_array(res.reshape(rows, q * math.prod(sizes[:-2]) * sizes[-1]))


def delta_numeric_multi(e: RatExpr, prefix: Sequence[EvalPoint], Z: EvalPoint, Zp: EvalPoint,
                        W: Sequence[Mat], evaluator: Evaluator | None = None) -> Mat:
    """Block-triangular route in the last tuple of an l-tuple expression.

    Evaluates e at (prefix, [[Z, W], [0, Z']]), checks the diagonal blocks in
    the last tensor factor, and returns the off-diagonal block in the layout
    of :func:`contract_last`.
    """
    ev = evaluator or Evaluator()
    prefix = tuple(prefix)
    if len(prefix) + 1 != e.arity:
        raise ShapeError(f"need {e.arity - 1} leading tuples")
    p, q = e.shape
    n, n2 = Z.n, Zp.n
    N = n + n2
    lead = tuple(pt.n for pt in prefix)
    V = evaluate_multi(e, prefix + (block_point(Z, Zp, list(W)),), ev).data
    arr = _to_array(V).reshape((p,) + lead + (N, q) + lead + (N,))
    k = 1 + len(lead)
    R = math.prod(lead)

    def part(rs, cs):
        idx = [slice(None)] * arr.ndim
        idx[k], idx[2 * k + 1] = rs, cs
        sub = arr[tuple(idx)]
        rlen = rs.stop - rs.start
        clen = cs.stop - cs.start
        return _from_array(sub.reshape(p * R * rlen, q * R * clen))

    top, bot = slice(0, n), slice(n, N)
    diag_ok = (part(top, top) == evaluate_multi(e, prefix + (Z,), ev).data
               and part(bot, bot) == evaluate_multi(e, prefix + (Zp,), ev).data
               and part(bot, top).is_zero())
    if not diag_ok:
        raise BlockIdentityError("diagonal blocks do not reproduce the last-slot values")
    return part(top, bot)


def directional_derivative(e: RatExpr, Z: EvalPoint, W: Sequence[Mat]) -> Mat:
    """d/dt e(Z + tW) at t = 0."""
    return delta_numeric(e, Z, Z, W)


def finite_difference(e: RatExpr, Z0: EvalPoint, Z: EvalPoint) -> Mat:
    """sum_j Delta_j(e)(Z0, Z)(Z_j - Z0_j); equals e(Z) - e(Z0)."""
    if Z0.n != Z.n:
        raise ShapeError("finite_difference needs points of equal size")
    return delta_numeric(e, Z0, Z, [z - z0 for z, z0 in zip(Z.mats, Z0.mats)])


def hessian(e: RatExpr, Z: EvalPoint, W: Sequence[Mat]) -> Mat:
    """d^2/dt^2 e(Z + tW) at t = 0, from one evaluation at [[Z,W,0],[0,Z,W],[0,0,Z]].

    The (1,3) block of that evaluation is the t^2 coefficient; the second
    derivative is twice it.
    """
    n = Z.n
    p, q = e.shape
    zero = Mat.zeros(n, n)
    from .algebra import block_matrix
    mats = [block_matrix([[z, w, zero], [zero, z, w], [zero, zero, z]]) for z, w in zip(Z.mats, W)]
    V = evaluate(e, EvalPoint(mats))
    rows = [a * 3 * n + i for a in range(p) for i in range(n)]
    cols = [b * 3 * n + 2 * n + i for b in range(q) for i in range(n)]
    return V.select(rows, cols) * 2


def hessian_symbolic(e: RatExpr, Z: EvalPoint, W: Sequence[Mat]) -> Mat:
    """2 sum_{i,j} Delta^{[i,j]}(e)(Z,Z,Z)(W_j, W_i) (second-order operators contracted)."""
    ev = Evaluator()
    out = None
    for i in range(1, e.d + 1):
        for j in range(1, e.d + 1):
            v = contract(evaluate_multi(delta_word(e, (i, j)), (Z, Z, Z), ev), [W[j - 1], W[i - 1]])
            out = v if out is None else out + v
    return out * 2


def series_of_delta(e: RatExpr, j: int, L: int) -> dict:
    """{(u, v): coefficient} of Delta_j(e), for |u| + |v| <= L."""
    _require_regular(e)
    s = expand_multi(delta(e, j), L)
    return {(k[0], k[1]): m for k, m in s.coeffs.items()}


def delta_word_at_zero(e: RatExpr, w: Sequence[int]) -> Mat:
    """Delta^w(e) evaluated at size-1 zero tuples."""
    dw = delta_word(e, w)
    return evaluate_multi(dw, (EvalPoint.zero(e.d, 1),) * dw.arity).data


__all__ = [
    "delta", "delta_word", "iota", "push_iota", "ones", "leibniz_expansion", "freeze",
    "right_shift", "left_shift", "block_evaluation", "BlockEvaluation", "BlockIdentityError",
    "delta_numeric", "delta_symbolic_value", "contract_last", "delta_numeric_multi", "directional_derivative", "finite_difference",
    "hessian", "hessian_symbolic", "series_of_delta", "delta_word_at_zero",
]
