"""State-space (Fornasini-Marchesini) realizations over Q.

A realization (A_1..A_d, B_1..B_d, C, D) of state dimension m presents

    T(z) = D + C (I_m - A_1 z_1 - ... - A_d z_d)^{-1} (B_1 z_1 + ... + B_d z_d),

whose series coefficient at a word w = w_1 ... w_k (k >= 1) is
C A_{w_1} ... A_{w_{k-1}} B_{w_k}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .algebra import (Mat, block_matrix, column_basis, direct_sum, hstack, kron, rank,
                      row_basis, vstack, words_upto)
from .errors import (InsufficientOrder, NotMinimal, NotRegularAtZero, RankMismatch,
                     ShapeError, SingularMatrixError)
from .evaluation import EvalPoint
from .expr import (Add, Block, Inv, Iota, MatPoly, Mul, Poly, RatExpr, Tensor, add,
                   const, mul, walk)
from .series import TruncSeries


@dataclass(frozen=True)
class FmRealization:
    d: int
    p: int
    q: int
    m: int
    A: tuple
    B: tuple
    C: Mat
    D: Mat

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(self.A))
        object.__setattr__(self, "B", tuple(self.B))
        if len(self.A) != self.d or len(self.B) != self.d:
            raise ShapeError("need one A_j and one B_j per letter")
        for a in self.A:
            if a.shape != (self.m, self.m):
                raise ShapeError(f"A_j has shape {a.shape}, expected {(self.m, self.m)}")
        for b in self.B:
            if b.shape != (self.m, self.q):
                raise ShapeError(f"B_j has shape {b.shape}, expected {(self.m, self.q)}")
        if self.C.shape != (self.p, self.m) or self.D.shape != (self.p, self.q):
            raise ShapeError("C or D has the wrong shape")

    @classmethod
    def make(cls, A, B, C, D) -> "FmRealization":
        return cls(len(A), D.rows, D.cols, C.cols, tuple(A), tuple(B), C, D)

    @classmethod
    def constant(cls, D: Mat, d: int) -> "FmRealization":
        return cls(d, D.rows, D.cols, 0, (Mat.zeros(0, 0),) * d, (Mat.zeros(0, D.cols),) * d,
                   Mat.zeros(D.rows, 0), D)

    @property
    def shape(self):
        return (self.p, self.q)

    # -- series ---------------------------------------------------------------
    def observability_rows(self, L: int) -> dict:
        """{u: C A_u} for all words |u| <= L (A_u = A_{u_1} ... A_{u_k})."""
        out = {(): self.C}
        for u in words_upto(self.d, L):
            if u:
                out[u] = out[u[:-1]] @ self.A[u[-1] - 1]
        return out

    def coefficient(self, w) -> Mat:
        w = tuple(w)
        if not w:
            return self.D
        x = self.B[w[-1] - 1]
        for j in reversed(w[:-1]):
            x = self.A[j - 1] @ x
        return self.C @ x

    def series(self, L: int) -> TruncSeries:
        coeffs = {(): self.D}
        if self.m and L >= 1:
            obs = self.observability_rows(L - 1)
            for u, cu in obs.items():
                for j in range(1, self.d + 1):
                    coeffs[u + (j,)] = cu @ self.B[j - 1]
        return TruncSeries(self.d, self.shape, L, coeffs)

    def conjugate(self, S: Mat) -> "FmRealization":
        """The similar realization (S A S^-1, S B, C S^-1, D)."""
        Si = S.inv()
        return FmRealization(self.d, self.p, self.q, self.m, [S @ a @ Si for a in self.A],
                             [S @ b for b in self.B], self.C @ Si, self.D)

    # -- JSON -----------------------------------------------------------------------
    def to_json(self) -> dict:
        return {"d": self.d, "p": self.p, "q": self.q, "m": self.m,
                "A": [a.to_json() for a in self.A], "B": [b.to_json() for b in self.B],
                "C": self.C.to_json(), "D": self.D.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "FmRealization":
        d, p, q, m = (int(obj[k]) for k in ("d", "p", "q", "m"))

        def mat(x, r, c):
            M = Mat.from_json(x) if x else Mat.zeros(r, c)
            if M.rows == 0 and r:
                M = Mat.zeros(r, c)
            if M.shape != (r, c):
                if M.rows == 0 or M.cols == 0:
                    M = Mat.zeros(r, c)
            return M

        return cls(d, p, q, m, [mat(a, m, m) for a in obj["A"]], [mat(b, m, q) for b in obj["B"]],
                   mat(obj["C"], p, m), mat(obj["D"], p, q))

    def __eq__(self, other):
        return isinstance(other, FmRealization) and self.to_json() == other.to_json()

    __hash__ = None


# -- state-space arithmetic -----------------------------------------------------

def r_add(r1: FmRealization, r2: FmRealization) -> FmRealization:
    if r1.shape != r2.shape:
        raise ShapeError(f"sum of realizations with shapes {r1.shape} and {r2.shape}")
    A = [direct_sum(a1, a2) for a1, a2 in zip(r1.A, r2.A)]
    B = [vstack([b1, b2]) for b1, b2 in zip(r1.B, r2.B)]
    return FmRealization(r1.d, r1.p, r1.q, r1.m + r2.m, A, B, hstack([r1.C, r2.C]), r1.D + r2.D)


def r_mul(r1: FmRealization, r2: FmRealization) -> FmRealization:
    if r1.q != r2.p:
        raise ShapeError(f"product of realizations with shapes {r1.shape} and {r2.shape}")
    m1, m2 = r1.m, r2.m
    A = [block_matrix([[a1, b1 @ r2.C], [Mat.zeros(m2, m1), a2]])
         for a1, a2, b1 in zip(r1.A, r2.A, r1.B)]
    B = [vstack([b1 @ r2.D, b2]) for b1, b2 in zip(r1.B, r2.B)]
    C = hstack([r1.C, r1.D @ r2.C])
    return FmRealization(r1.d, r1.p, r2.q, m1 + m2, A, B, C, r1.D @ r2.D)


def r_inv(r: FmRealization) -> FmRealization:
    try:
        Di = r.D.inv()
    except SingularMatrixError:
        raise NotRegularAtZero() from None
    A = [a - b @ Di @ r.C for a, b in zip(r.A, r.B)]
    B = [b @ Di for b in r.B]
    return FmRealization(r.d, r.p, r.q, r.m, A, B, -(Di @ r.C), Di)


def r_scale(L: Mat, r: FmRealization, R: Mat) -> FmRealization:
    """Realization of L T(z) R for constant matrices L, R."""
    return FmRealization(r.d, L.rows, R.cols, r.m, r.A, [b @ R for b in r.B], L @ r.C, L @ r.D @ R)


def r_block(grid: Sequence[Sequence[FmRealization]]) -> FmRealization:
    heights = [row[0].p for row in grid]
    widths = [x.q for x in grid[0]]
    P, Q = sum(heights), sum(widths)
    out = None
    r0 = 0
    for a, row in enumerate(grid):
        c0 = 0
        for b, x in enumerate(row):
            E = block_matrix([[Mat.zeros(r0, x.p)], [Mat.identity(x.p)], [Mat.zeros(P - r0 - x.p, x.p)]]) \
                if P else Mat.zeros(0, x.p)
            F = hstack([Mat.zeros(x.q, c0), Mat.identity(x.q), Mat.zeros(x.q, Q - c0 - x.q)])
            term = r_scale(E, x, F)
            out = term if out is None else r_add(out, term)
            c0 += x.q
        r0 += heights[a]
    return out


def r_poly(P: MatPoly) -> FmRealization:
    """Suffix shift register: one q-block of state per nonempty suffix of a support word."""
    d, p, q = P.d, P.rows, P.cols
    states = sorted({w[k:] for w in P.terms for k in range(len(w))}, key=lambda v: (len(v), v))
    index = {v: i for i, v in enumerate(states)}
    m = len(states) * q
    A = []
    for i in range(1, d + 1):
        grid = [[Mat.zeros(q, q)] * len(states) for _ in states]
        for v in states:
            iv = (i,) + v
            if iv in index:
                grid[index[iv]][index[v]] = Mat.identity(q)
        A.append(block_matrix([list(r) for r in grid]) if states else Mat.zeros(0, 0))
    B = []
    for j in range(1, d + 1):
        blocks = [Mat.identity(q) if v == (j,) else Mat.zeros(q, q) for v in states]
        B.append(vstack(blocks) if states else Mat.zeros(0, q))
    C = hstack([P.coeff(v) for v in states]) if states else Mat.zeros(p, 0)
    return FmRealization(d, p, q, m, A, B, C, P.const_term())


def realize(e: RatExpr) -> FmRealization:
    """Realization of an expression regular at zero, built by state-space arithmetic."""
    if e.arity != 1:
        raise ShapeError("realize takes a one-tuple expression")
    memo: dict = {}

    def go(x, path):
        hit = memo.get(id(x))
        if hit is not None:
            return hit[1]
        if isinstance(x, Poly):
            r = r_poly(x.poly)
        elif isinstance(x, Add):
            r = r_add(go(x.left, path + "/Add.left"), go(x.right, path + "/Add.right"))
        elif isinstance(x, Mul):
            r = r_mul(go(x.left, path + "/Mul.left"), go(x.right, path + "/Mul.right"))
        elif isinstance(x, Inv):
            try:
                r = r_inv(go(x.inner, path + "/Inv"))
            except NotRegularAtZero:
                raise NotRegularAtZero(path) from None
        elif isinstance(x, Block):
            r = r_block([[go(c, f"{path}/Block[{a}][{b}]") for b, c in enumerate(row)]
                         for a, row in enumerate(x.grid)])
        else:
            raise ShapeError(f"{type(x).__name__} nodes have no one-tuple realization")
        memo[id(x)] = (x, r)
        return r

    return go(e, "root")


def from_recognizable(A: Sequence[Mat], B: Mat, C: Mat) -> FmRealization:
    """FM data of C (I - sum A_j z_j)^{-1} B."""
    return FmRealization.make(list(A), [a @ B for a in A], C, C @ B)


def _pencil_poly(A: Sequence[Mat], m: int, d: int) -> MatPoly:
    terms = {(): Mat.identity(m)}
    for j, a in enumerate(A, start=1):
        terms[(j,)] = -a
    return MatPoly(d, m, m, terms)


def transfer_expr(r: FmRealization) -> RatExpr:
    """The expression D + C inv(I - sum A_j z_j) (sum B_j z_j)."""
    d = r.d
    if r.m == 0:
        return const(r.D, d)
    zero = (EvalPoint.zero(d, 1),)
    pencil = Inv(Poly(_pencil_poly(r.A, r.m, d)), zero)
    Bz = Poly(MatPoly(d, r.m, r.q, {(j,): b for j, b in enumerate(r.B, start=1)}))
    body = mul(mul(const(r.C, d), pencil), Bz)
    return add(const(r.D, d), body)


def recognizable_expr(A: Sequence[Mat], B: Mat, C: Mat) -> RatExpr:
    """The expression C inv(I - sum A_j z_j) B."""
    d = len(A)
    m = B.rows
    zero = (EvalPoint.zero(d, 1),)
    pencil = Inv(Poly(_pencil_poly(A, m, d)), zero)
    return mul(mul(const(C, d), pencil), const(B, d))


# -- controllability / observability -----------------------------------------------

def _closure(start: Mat, ops: Sequence[Mat]) -> Mat:
    """Basis (as columns) of the smallest ops-invariant subspace containing ran(start)."""
    m = start.rows
    if m == 0 or start.cols == 0:
        return Mat.zeros(m, 0)
    piv = column_basis(start)
    basis = start.select(cols=piv)
    frontier = basis
    while frontier.cols and basis.cols < m:
        cand = hstack([basis] + [a @ frontier for a in ops])
        piv = column_basis(cand)
        new = [c for c in piv if c >= basis.cols]
        if not new:
            break
        frontier = cand.select(cols=new)
        basis = cand.select(cols=piv)
    return basis


def controllable_basis(r: FmRealization) -> Mat:
    return _closure(hstack(list(r.B)) if r.q else Mat.zeros(r.m, 0), r.A)


def observable_basis(r: FmRealization) -> Mat:
    """Rows spanning span_w rows(C A^w); its kernel is the unobservable subspace."""
    return _closure(r.C.T if r.p else Mat.zeros(r.m, 0), [a.T for a in r.A]).T


def is_controllable(r: FmRealization) -> bool:
    return controllable_basis(r).cols == r.m


def is_observable(r: FmRealization) -> bool:
    return observable_basis(r).rows == r.m


def is_minimal(r: FmRealization) -> bool:
    return is_controllable(r) and is_observable(r)


def restrict(r: FmRealization, V: Mat) -> FmRealization:
    """Restriction to an invariant subspace containing every ran B_j (columns of V a basis)."""
    k = V.cols
    if k == r.m:
        return r
    I = row_basis(V)
    VIi = V.select(rows=I).inv()
    A = [VIi @ (a @ V).select(rows=I) for a in r.A]
    B = [VIi @ b.select(rows=I) for b in r.B]
    return FmRealization(r.d, r.p, r.q, k, A, B, r.C @ V, r.D)


def quotient(r: FmRealization, W: Mat) -> FmRealization:
    """Quotient by ker W, W having full row rank and A-invariant kernel inside ker C."""
    k = W.rows
    if k == r.m:
        return r
    J = column_basis(W)
    WJi = W.select(cols=J).inv()
    A = [(W @ a).select(cols=J) @ WJi for a in r.A]
    B = [W @ b for b in r.B]
    C = r.C.select(cols=J) @ WJi
    return FmRealization(r.d, r.p, r.q, k, A, B, C, r.D)


def minimize(r: FmRealization) -> FmRealization:
    """Controllable part first, then the observable quotient of it."""
    rc = restrict(r, controllable_basis(r))
    return quotient(rc, observable_basis(rc))


# -- Hankel construction --------------------------------------------------------

def _hankel(s: TruncSeries, row_words, col_words, shift=()):
    """Scalar Hankel matrix: row (u, a), column ((v, j), b) -> s_{u shift v j}[a, b]."""
    p, q = s.shape
    coeffs = s.coeffs
    zero = Mat.zeros(p, q)
    grid = [[coeffs.get(u + shift + v + (j,), zero) for (v, j) in col_words] for u in row_words]
    if not grid or not grid[0]:
        return Mat.zeros(len(row_words) * p, len(col_words) * q)
    return block_matrix(grid)


def hankel_realize(s: TruncSeries, k: int) -> FmRealization:
    """Minimal realization read off the Hankel matrix of s (state dimension <= k assumed)."""
    if s.order < 2 * k + 1:
        raise InsufficientOrder(f"series order {s.order} < 2*{k}+1")
    d = s.d
    p, q = s.shape
    D = s.coeff(())
    if k == 0:
        r = FmRealization.constant(D, d)
        if r.series(s.order) != s:
            raise RankMismatch("series is not constant")
        return r
    rows = words_upto(d, k - 1)
    cols = [(v, j) for v in words_upto(d, k - 1) for j in range(1, d + 1)]
    H = _hankel(s, rows, cols)
    rows_x = words_upto(d, k)
    cols_x = [(v, j) for v in words_upto(d, k) for j in range(1, d + 1)]
    Hx = _hankel(s, rows_x, cols_x)
    I = row_basis(H)
    m = len(I)
    if m > k or rank(Hx) != m:
        raise RankMismatch(f"Hankel ranks {m} (bound {k}) and {rank(Hx)} (extended) disagree")
    if m == 0:
        r = FmRealization.constant(D, d)
    else:
        J = column_basis(H.select(rows=I))
        H0i = H.select(rows=I, cols=J).inv()
        A = [H0i @ _hankel(s, rows, cols, (i,)).select(rows=I, cols=J) for i in range(1, d + 1)]
        first = [(() , j) for j in range(1, d + 1)]
        Hb = _hankel(s, rows, first).select(rows=I)
        B = [H0i @ Hb.select(cols=list(range((j - 1) * q, j * q))) for j in range(1, d + 1)]
        C = H.select(rows=list(range(p)), cols=J)
        r = FmRealization(d, p, q, m, A, B, C, D)
    if r.series(s.order) != s:
        raise RankMismatch("realization read off the Hankel matrix does not reproduce the series")
    return r


def similarity(r1: FmRealization, r2: FmRealization) -> Mat | None:
    """The S with S A1 = A2 S, S B1 = B2, C1 = C2 S, D1 = D2, or None if none exists."""
    for r in (r1, r2):
        if not is_minimal(r):
            raise NotMinimal(f"realization of dimension {r.m} is not minimal")
    if r1.d != r2.d or r1.shape != r2.shape or r1.m != r2.m or r1.D != r2.D:
        return None
    m = r1.m
    if m == 0:
        return Mat.zeros(0, 0)
    L = m - 1
    O1 = vstack(list(r1.observability_rows(L).values()))
    O2 = vstack(list(r2.observability_rows(L).values()))
    I = row_basis(O2)
    S = O2.select(rows=I).inv() @ O1.select(rows=I)
    if O2 @ S != O1 or not S.is_invertible():
        return None
    ok = all(S @ a1 == a2 @ S for a1, a2 in zip(r1.A, r2.A)) and \
        all(S @ b1 == b2 for b1, b2 in zip(r1.B, r2.B)) and r1.C == r2.C @ S
    return S if ok else None


def pencil_domain_check(r: FmRealization, Z: EvalPoint) -> bool:
    """True iff det(I - sum_j A_j (x) Z_j) != 0."""
    if r.m == 0:
        return True
    n = Z.n
    L = Mat.identity(r.m * n)
    for a, z in zip(r.A, Z.mats):
        L = L - kron(a, z)
    return L.det() != 0


def random_realization(rng: random.Random, d: int, m: int, p: int = 1, q: int = 1,
                       lo: int = -3, hi: int = 3) -> FmRealization:
    def rm(r, c):
        return Mat([[rng.randint(lo, hi) for _ in range(c)] for _ in range(r)])
    return FmRealization(d, p, q, m, [rm(m, m) for _ in range(d)], [rm(m, q) for _ in range(d)],
                         rm(p, m), rm(p, q))


__all__ = [
    "FmRealization", "realize", "transfer_expr", "recognizable_expr", "from_recognizable",
    "minimize", "hankel_realize", "similarity", "pencil_domain_check", "controllable_basis",
    "observable_basis", "is_controllable", "is_observable", "is_minimal", "r_add", "r_mul",
    "r_inv", "r_block", "r_poly", "r_scale", "restrict", "quotient", "random_realization",
]
