"""Independent reference computations used to check the main routines.

Nothing here shares code paths with the routines it checks: the truncated
polynomial-ring evaluator recurses over the tree on its own, the word
splitting oracle works from polynomial coefficients directly, and series of
realizations come from explicit matrix products.
"""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .algebra import Mat, block_matrix, kron, kron_all, words_upto
from .errors import NotInDomain, SingularMatrixError
from .expr import Add, Block, Inv, MatPoly, Mul, Poly, RatExpr


# -- evaluation over Q[t]/(t^3) ------------------------------------------------

class Jet:
    """X0 + X1 t + X2 t^2 with t^3 = 0 (matrix coefficients)."""

    __slots__ = ("c",)

    def __init__(self, c0: Mat, c1: Mat, c2: Mat):
        self.c = (c0, c1, c2)

    def __add__(self, o):
        return Jet(*(a + b for a, b in zip(self.c, o.c)))

    def __matmul__(self, o):
        a, b = self.c, o.c
        return Jet(a[0] @ b[0], a[0] @ b[1] + a[1] @ b[0], a[0] @ b[2] + a[1] @ b[1] + a[2] @ b[0])

    def inv(self):
        y0 = self.c[0].inv()
        y1 = -(y0 @ self.c[1] @ y0)
        y2 = -(y0 @ (self.c[1] @ y1 + self.c[2] @ y0))
        return Jet(y0, y1, y2)


def _jet_poly(P: MatPoly, Z: Sequence[Mat], W: Sequence[Mat]) -> Jet:
    n = Z[0].rows
    zero = Mat.zeros(n, n)
    vars_ = [Jet(z, w, zero) for z, w in zip(Z, W)]
    out = None
    for word, coef in P.terms.items():
        x = Jet(Mat.identity(n), zero, zero)
        for j in word:
            x = x @ vars_[j - 1]
        term = Jet(*(kron(coef, c) for c in x.c))
        out = term if out is None else out + term
    if out is None:
        z = Mat.zeros(P.rows * n, P.cols * n)
        out = Jet(z, z, z)
    return out


def jet_evaluate(e: RatExpr, Z: Sequence[Mat], W: Sequence[Mat]) -> Jet:
    """e(Z + tW) in Q[t]/(t^3), by its own recursion over the tree."""
    if isinstance(e, Poly):
        return _jet_poly(e.poly, Z, W)
    if isinstance(e, Add):
        return jet_evaluate(e.left, Z, W) + jet_evaluate(e.right, Z, W)
    if isinstance(e, Mul):
        return jet_evaluate(e.left, Z, W) @ jet_evaluate(e.right, Z, W)
    if isinstance(e, Inv):
        try:
            return jet_evaluate(e.inner, Z, W).inv()
        except SingularMatrixError:
            raise NotInDomain("jet", Z[0].rows) from None
    if isinstance(e, Block):
        subs = [[jet_evaluate(c, Z, W) for c in r] for r in e.grid]
        return Jet(*(block_matrix([[s.c[k] for s in r] for r in subs]) for k in range(3)))
    raise TypeError(f"{type(e).__name__} is not a one-tuple node")


def first_derivative_oracle(e, Z, W) -> Mat:
    return jet_evaluate(e, Z.mats, W).c[1]


def second_derivative_oracle(e, Z, W) -> Mat:
    return jet_evaluate(e, Z.mats, W).c[2] * 2


# -- word splitting -------------------------------------------------------------

def _power(mats, word, n):
    out = Mat.identity(n)
    for j in word:
        out = out @ mats[j - 1]
    return out


def delta_word_poly_oracle(P: MatPoly, w: Sequence[int], points) -> Mat:
    """Canonical-layout value of the iterated operator on a polynomial.

    For the stored word w = [i_l, ..., i_1] the operator splits every support
    word v as v = u_1 i_1 u_2 i_2 ... i_l u_{l+1} and contributes
    P_v (x) Z1^{u_1} (x) ... (x) Z_{l+1}^{u_{l+1}}.
    """
    pattern = tuple(reversed(tuple(w)))
    ell = len(pattern)
    sizes = [pt.n for pt in points]
    N = 1
    for s in sizes:
        N *= s
    out = Mat.zeros(P.rows * N, P.cols * N)
    for v, coef in P.terms.items():
        for pos in combinations(range(len(v)), ell):
            if any(v[p] != pattern[k] for k, p in enumerate(pos)):
                continue
            cuts = (-1,) + pos + (len(v),)
            parts = [v[cuts[k] + 1:cuts[k + 1]] for k in range(ell + 1)]
            factors = [_power(points[k].mats, parts[k], sizes[k]) for k in range(ell + 1)]
            out = out + kron_all(coef, *factors)
    return out


# -- series of realizations --------------------------------------------------------

def recognizable_coefficients(A: Sequence[Mat], B: Mat, C: Mat, L: int) -> dict:
    """{w: C A_{w_1} ... A_{w_k} B} for |w| <= L."""
    d = len(A)
    m = B.rows
    return {w: C @ _power(A, w, m) @ B for w in words_upto(d, L)}


def fm_coefficients(r, L: int) -> dict:
    """{w: coefficient} of D + C (I - sum A z)^{-1} sum B z, by explicit products."""
    out = {(): r.D}
    for w in words_upto(r.d, L):
        if w:
            out[w] = r.C @ _power(r.A, w[:-1], r.m) @ r.B[w[-1] - 1]
    return out


def hankel_rank(coeffs: dict, d: int, k: int, shape) -> int:
    """Rank of the Hankel block [s_{u v j}] over |u|, |v| <= k - 1."""
    from .algebra import rank
    p, q = shape
    zero = Mat.zeros(p, q)
    rows = words_upto(d, k - 1)
    cols = [(v, j) for v in words_upto(d, k - 1) for j in range(1, d + 1)]
    H = block_matrix([[coeffs.get(u + v + (j,), zero) for (v, j) in cols] for u in rows])
    return rank(H)


def alternating_polynomial(n: int) -> MatPoly:
    """sum over S_{n+1} of sign(pi) x1^{pi(1)-1} x2 ... x1^{pi(n+1)-1} x2 (x1 = z1, x2 = z2)."""
    from itertools import permutations
    terms = {}
    for perm in permutations(range(n + 1)):
        inv_count = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
        sign = -1 if inv_count % 2 else 1
        word = ()
        for k in perm:
            word += (1,) * k + (2,)
        terms[word] = terms.get(word, 0) + sign
    return MatPoly.from_scalar_terms(2, terms)


__all__ = [
    "Jet", "jet_evaluate", "first_derivative_oracle", "second_derivative_oracle",
    "delta_word_poly_oracle", "recognizable_coefficients", "fm_coefficients", "hankel_rank",
    "alternating_polynomial",
]
