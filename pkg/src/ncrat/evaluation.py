"""Evaluation of expressions on matrix tuples.

A value of a p x q expression in l tuples at points of sizes n_1..n_l is a
(p N) x (q N) matrix, N = n_1 ... n_l, whose row and column indices are
ordered (coefficient, tuple 1, ..., tuple l).  Only Poly, Tensor and Iota
nodes ever reorder factors; every other node works on the flat matrices.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from flint import fmpq_mat

from .algebra import Mat, block_matrix, kron, swap_factors
from .errors import DimensionMismatch, NotInDomain, SingularMatrixError
from .expr import Add, Block, Inv, Iota, Mul, Poly, RatExpr, Tensor


class EvalPoint:
    """A d-tuple of n x n rational matrices."""

    __slots__ = ("d", "n", "mats")

    def __init__(self, mats: Sequence[Mat]):
        mats = tuple(m if isinstance(m, Mat) else Mat(m) for m in mats)
        if not mats:
            raise DimensionMismatch("an evaluation point needs at least one matrix")
        n = mats[0].rows
        if n < 1 or any(m.shape != (n, n) for m in mats):
            raise DimensionMismatch("point matrices must be square of one common size >= 1")
        self.d = len(mats)
        self.n = n
        self.mats = mats

    @classmethod
    def zero(cls, d: int, n: int = 1) -> "EvalPoint":
        z = Mat.zeros(n, n)
        return cls([z] * d)

    @classmethod
    def random(cls, rng: random.Random, d: int, n: int, lo: int = -9, hi: int = 9) -> "EvalPoint":
        return cls([Mat([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
                    for _ in range(d)])

    @classmethod
    def scalars(cls, *values) -> "EvalPoint":
        return cls([Mat([[v]]) for v in values])

    def __getitem__(self, j: int) -> Mat:
        """1-based access: ``Z[1]`` is Z_1."""
        return self.mats[j - 1]

    def __eq__(self, other):
        return isinstance(other, EvalPoint) and self.mats == other.mats

    __hash__ = None

    def __repr__(self):
        return f"EvalPoint(n={self.n}, mats={[m.to_json() for m in self.mats]})"

    def to_json(self):
        return [m.to_json() for m in self.mats]

    @classmethod
    def from_json(cls, obj) -> "EvalPoint":
        if isinstance(obj, dict):
            obj = obj.get("mats", obj.get("Z"))
        return cls([Mat.from_json(m) for m in obj])

    def direct_sum(self, other: "EvalPoint") -> "EvalPoint":
        return block_point(self, other, [Mat.zeros(self.n, other.n)] * self.d)

    def plus(self, W: Sequence[Mat], t=1) -> "EvalPoint":
        return EvalPoint([z + w * t for z, w in zip(self.mats, W)])


def block_point(Z: EvalPoint, Zp: EvalPoint, W: Sequence[Mat]) -> EvalPoint:
    """The point with entries [[Z_j, W_j], [0, Z'_j]]."""
    if len(W) != Z.d or Zp.d != Z.d:
        raise DimensionMismatch("direction count must equal d")
    mats = []
    for z, zp, w in zip(Z.mats, Zp.mats, W):
        if w.shape != (Z.n, Zp.n):
            raise DimensionMismatch(f"direction of shape {w.shape}, expected {(Z.n, Zp.n)}")
        mats.append(block_matrix([[z, w], [Mat.zeros(Zp.n, Z.n), zp]]))
    return EvalPoint(mats)


@dataclass(frozen=True)
class TensorValue:
    shape: tuple  # (p, q)
    sizes: tuple  # (n_1, ..., n_l)
    data: Mat

    def __post_init__(self):
        N = math.prod(self.sizes)
        if self.data.shape != (self.shape[0] * N, self.shape[1] * N):
            raise DimensionMismatch(f"tensor data {self.data.shape} inconsistent with "
                                    f"shape {self.shape} and sizes {self.sizes}")


def _path_label(node, i=None):
    name = type(node).__name__
    return name if i is None else f"{name}[{i}]"


class Evaluator:
    """Memoizing evaluator; keep one instance to share work across calls."""

    def __init__(self):
        self._cache: dict = {}
        self._ident: dict = {}

    def clear(self):
        self._cache.clear()

    def identity(self, n: int) -> Mat:
        m = self._ident.get(n)
        if m is None:
            m = self._ident[n] = Mat.identity(n)
        return m

    def value(self, e: RatExpr, pts: tuple) -> Mat:
        return self._ev(e, pts, "root")

    def _ev(self, e, pts, path):
        key = (id(e), tuple(map(id, pts)))
        hit = self._cache.get(key)
        if hit is not None:
            return hit[2]
        val = self._compute(e, pts, path)
        self._cache[key] = (e, pts, val)
        return val

    def _compute(self, e, pts, path):
        if isinstance(e, Poly):
            return self._poly(e, pts)
        if isinstance(e, Add):
            return self._ev(e.left, pts, path + "/Add.left") + self._ev(e.right, pts, path + "/Add.right")
        if isinstance(e, Mul):
            return self._ev(e.left, pts, path + "/Mul.left") @ self._ev(e.right, pts, path + "/Mul.right")
        if isinstance(e, Inv):
            x = self._ev(e.inner, pts, path + "/Inv")
            try:
                return x.inv()
            except SingularMatrixError:
                raise NotInDomain(path, tuple(p.n for p in pts) if len(pts) > 1 else pts[0].n) from None
        if isinstance(e, Block):
            grid = [[self._ev(c, pts, f"{path}/Block[{a}][{b}]") for b, c in enumerate(r)]
                    for a, r in enumerate(e.grid)]
            return block_matrix(grid)
        if isinstance(e, Tensor):
            t = e.left.arity
            L = self._ev(e.left, pts[:t], path + "/Tensor.left")
            R = self._ev(e.right, pts[t:], path + "/Tensor.right")
            N1 = math.prod(p.n for p in pts[:t])
            N2 = math.prod(p.n for p in pts[t:])
            p, q = e.left.shape
            p2, q2 = e.right.shape
            # (p, N1, p', N2) -> (p, p', N1, N2)
            return swap_factors(kron(L, R), (p, N1, p2, N2), (q, N1, q2, N2))
        if isinstance(e, Iota):
            ell = e.arity
            inner_pts = pts[:ell - 2] + pts[ell - 1:]
            X = self._ev(e.inner, inner_pts, path + "/Iota")
            nt = pts[ell - 2].n
            nl = pts[ell - 1].n
            Nlo = math.prod(p.n for p in pts[:ell - 2])
            p, q = e.shape
            # (p Nlo, n_l, n_trivial) -> (p Nlo, n_trivial, n_l)
            return swap_factors(kron(X, self.identity(nt)), (p * Nlo, nl, nt, 1), (q * Nlo, nl, nt, 1))
        raise TypeError(type(e).__name__)

    def _poly(self, e: Poly, pts):
        sizes = [p.n for p in pts]
        N = math.prod(sizes)
        if e.is_constant():
            c = e.poly.const_term()
            return c if N == 1 else kron(c, self.identity(N))
        s = e.slot
        M = e.poly.evaluate(pts[s - 1].mats)
        ns = sizes[s - 1]
        lo = math.prod(sizes[:s - 1])
        hi = math.prod(sizes[s:])
        if lo * hi == 1:
            return M
        M = kron(M, self.identity(lo * hi))
        p, q = e.shape
        # (p, n_s, lo, hi) -> (p, lo, n_s, hi)
        return swap_factors(M, (p, ns, lo, hi), (q, ns, lo, hi))


def _check_points(e: RatExpr, points):
    if len(points) != e.arity:
        raise DimensionMismatch(f"expression has {e.arity} tuple(s), got {len(points)} point(s)")
    for p in points:
        if p.d != e.d:
            raise DimensionMismatch(f"point has d={p.d}, expression d={e.d}")


def evaluate(e: RatExpr, Z: EvalPoint, evaluator: Evaluator | None = None) -> Mat:
    """Value of an arity-1 expression at Z; raises NotInDomain off the domain."""
    _check_points(e, (Z,))
    return (evaluator or Evaluator()).value(e, (Z,))


def evaluate_multi(e: RatExpr, points: Sequence[EvalPoint], evaluator: Evaluator | None = None) -> TensorValue:
    pts = tuple(points)
    _check_points(e, pts)
    data = (evaluator or Evaluator()).value(e, pts)
    return TensorValue(e.shape, tuple(p.n for p in pts), data)


def in_domain(e: RatExpr, points, evaluator: Evaluator | None = None) -> bool:
    pts = (points,) if isinstance(points, EvalPoint) else tuple(points)
    try:
        (evaluator or Evaluator()).value(e, pts)
        return True
    except NotInDomain:
        return False


def find_witness(e: RatExpr, rng: random.Random, sizes=(1, 2, 3, 4), attempts: int = 16,
                 lo: int = -9, hi: int = 9):
    """A tuple of points (one per slot) where ``e`` is defined and invertible, or None."""
    for n in sizes:
        for _ in range(attempts):
            pts = tuple(EvalPoint.random(rng, e.d, n, lo, hi) for _ in range(e.arity))
            try:
                v = Evaluator().value(e, pts)
            except NotInDomain:
                continue
            if v.is_invertible():
                return pts
    return None


def regular_at_zero(e: RatExpr) -> bool:
    pts = tuple(EvalPoint.zero(e.d, 1) for _ in range(e.arity))
    return in_domain(e, pts)


def _to_array(M: Mat) -> np.ndarray:
    return np.array(M.entries(), dtype=object).reshape(M.rows, M.cols)


def _from_array(a: np.ndarray) -> Mat:
    r, c = a.shape
    return Mat._wrap(fmpq_mat(r, c, list(a.reshape(-1))))


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def contract(v: TensorValue, H: Sequence[Mat]) -> Mat:
    """Apply the multilinear map encoded by ``v`` to directions H_1..H_l.

    For v = A_1 (x) ... (x) A_{l+1} this is A_1 H_1 A_2 ... H_l A_{l+1},
    extended linearly (and blockwise over the coefficient indices).
    """
    sizes = v.sizes
    ell = len(sizes) - 1
    if len(H) != ell:
        raise DimensionMismatch(f"need {ell} direction matrices, got {len(H)}")
    for k, h in enumerate(H):
        if h.shape != (sizes[k], sizes[k + 1]):
            raise DimensionMismatch(f"H_{k + 1} has shape {h.shape}, expected {(sizes[k], sizes[k + 1])}")
    p, q = v.shape
    if ell == 0:
        return v.data
    data = _to_array(v.data).reshape((p,) + sizes + (q,) + sizes)
    # row letters: a, i_1..i_{l+1}; column letters: b, j_1..j_{l+1}
    a, b = "a", "b"
    I = _LETTERS[2:2 + ell + 1]
    J = _LETTERS[2 + ell + 1:2 + 2 * (ell + 1)]
    subs = [a + I + b + J]
    for k in range(ell):
        subs.append(J[k] + I[k + 1])
    out = a + I[0] + b + J[ell]
    subscripts = ",".join(subs) + "->" + out
    res = np.einsum(subscripts, data, *[_to_array(h) for h in H], optimize=False)
    return _from_array(res.reshape(p * sizes[0], q * sizes[-1]))


__all__ = [
    "EvalPoint", "TensorValue", "Evaluator", "block_point", "evaluate", "evaluate_multi",
    "in_domain", "find_witness", "regular_at_zero", "contract",
]
