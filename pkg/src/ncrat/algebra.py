"""Exact linear algebra over Q, Kronecker/commutation machinery and words.

Matrices are immutable :class:`Mat` values backed by FLINT's ``fmpq_mat``;
scalars are ``flint.fmpq`` (normalized, positive denominator).  Ranks and
pivot selections use a fraction-free (Bareiss) elimination written here, so
no pivot tolerance is ever involved.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from flint import fmpq, fmpq_mat

Rational = fmpq
Word = tuple  # tuple[int, ...], letters in 1..d, multiplication order

__all__ = [
    "Rational", "Word", "Mat", "SingularMatrixError", "DimensionMismatch",
    "to_rational", "rational_str", "kron", "kron_all", "commutation_matrix",
    "swap_factors", "block_matrix", "hstack", "vstack", "direct_sum",
    "bareiss_echelon", "rank", "column_basis", "row_basis",
    "word_concat", "word_reverse", "words_of_length", "words_upto",
    "check_word", "word_str", "parse_word",
]


class SingularMatrixError(ArithmeticError):
    pass


class DimensionMismatch(ValueError):
    pass


def to_rational(x) -> fmpq:
    """Coerce int, Fraction, fmpq or a ``"num/den"`` string to an exact rational."""
    if isinstance(x, fmpq):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            den_i = int(den)
            if den_i == 0:
                raise ZeroDivisionError(f"zero denominator in {x!r}")
            return fmpq(int(num), den_i)
        return fmpq(int(s))
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def rational_str(x) -> str:
    x = to_rational(x)
    if x.q == 1:
        return str(int(x.p))
    return f"{int(x.p)}/{int(x.q)}"


class Mat:
    """Dense immutable matrix over Q."""

    __slots__ = ("_m",)

    def __init__(self, rows: Sequence[Sequence] | None = None):
        if rows is None:
            rows = []
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        if any(len(r) != nc for r in rows):
            raise DimensionMismatch("ragged rows")
        self._m = fmpq_mat(nr, nc, [to_rational(x) for r in rows for x in r])

    @classmethod
    def _wrap(cls, m: fmpq_mat) -> "Mat":
        obj = object.__new__(cls)
        obj._m = m
        return obj

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable) -> "Mat":
        ents = [to_rational(x) for x in entries]
        if len(ents) != nrows * ncols:
            raise DimensionMismatch(f"{len(ents)} entries for a {nrows}x{ncols} matrix")
        return cls._wrap(fmpq_mat(nrows, ncols, ents))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Mat":
        return cls._wrap(fmpq_mat(nrows, ncols))

    @classmethod
    def identity(cls, n: int) -> "Mat":
        m = fmpq_mat(n, n)
        for i in range(n):
            m[i, i] = 1
        return cls._wrap(m)

    @classmethod
    def scalar(cls, c, n: int = 1) -> "Mat":
        c = to_rational(c)
        m = fmpq_mat(n, n)
        for i in range(n):
            m[i, i] = c
        return cls._wrap(m)

    @classmethod
    def unit(cls, nrows: int, ncols: int, i: int, j: int) -> "Mat":
        m = fmpq_mat(nrows, ncols)
        m[i, j] = 1
        return cls._wrap(m)

    # -- shape and access -------------------------------------------------
    @property
    def rows(self) -> int:
        return self._m.nrows()

    @property
    def cols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return (self._m.nrows(), self._m.ncols())

    def is_square(self) -> bool:
        return self._m.nrows() == self._m.ncols()

    def entries(self) -> list:
        return self._m.entries()

    def tolist(self) -> list[list]:
        nc = self.cols
        e = self._m.entries()
        return [e[i * nc:(i + 1) * nc] for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self._m[i, j]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Mat":
        e = self._m.entries()
        nc = self.cols
        return Mat.from_entries(
            r1 - r0, c1 - c0,
            [e[i * nc + j] for i in range(r0, r1) for j in range(c0, c1)])

    def select(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "Mat":
        """Rows/columns picked (and possibly reordered) by index lists."""
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else cols
        e = self._m.entries()
        nc = self.cols
        return Mat._wrap(fmpq_mat(len(rows), len(cols), [e[i * nc + j] for i in rows for j in cols]))

    # -- arithmetic ---------------------------------------------------------
    def _check_same(self, other: "Mat"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat._wrap(self._m + other._m)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat._wrap(self._m - other._m)

    def __neg__(self) -> "Mat":
        return Mat._wrap(-self._m)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return Mat._wrap(self._m * other._m)

    def __mul__(self, other):
        if isinstance(other, Mat):
            return self @ other
        return Mat._wrap(self._m * to_rational(other))

    def __rmul__(self, other):
        return Mat._wrap(self._m * to_rational(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self._m == other._m

    __hash__ = None

    def __pow__(self, k: int) -> "Mat":
        if not self.is_square() or k < 0:
            raise DimensionMismatch("power needs a square matrix and k >= 0")
        out = Mat.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def T(self) -> "Mat":
        return Mat._wrap(self._m.transpose())

    def det(self) -> fmpq:
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        return self._m.det()

    def inv(self) -> "Mat":
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        try:
            return Mat._wrap(self._m.inv())
        except ZeroDivisionError:
            raise SingularMatrixError("matrix is singular") from None

    def is_invertible(self) -> bool:
        return self.is_square() and (self.rows == 0 or self._m.det() != 0)

    def solve(self, rhs: "Mat") -> "Mat":
        """Solve ``self @ X = rhs`` for square invertible ``self``."""
        return self.inv() @ rhs

    def is_zero(self) -> bool:
        return all(x == 0 for x in self._m.entries())

    def rank(self) -> int:
        return rank(self)

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "Mat":
        """Return M' with ``M'[i, j] = M[row_perm[i], col_perm[j]]``."""
        return self.select(row_perm, col_perm)

    # -- I/O ------------------------------------------------------------------
    def to_json(self) -> list[list[str]]:
        return [[rational_str(x) for x in row] for row in self.tolist()]

    @classmethod
    def from_json(cls, obj) -> "Mat":
        if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
            raise ValueError("matrix JSON must be an array of rows")
        return cls(obj)

    def __repr__(self) -> str:
        return f"Mat({self.to_json()!r})"

    def pretty(self) -> str:
        cells = [[rational_str(x) for x in row] for row in self.tolist()]
        if not cells:
            return f"[] ({self.rows}x{self.cols})"
        w = max(len(c) for row in cells for c in row) if cells[0] else 1
        return "\n".join("[" + " ".join(c.rjust(w) for c in row) + "]" for row in cells)


# -- Kronecker products and commutation matrices ---------------------------

def kron(A: Mat, B: Mat) -> Mat:
    """Kronecker product; the (i, j) block is ``A[i, j] * B``."""
    ar, ac = A.shape
    br, bc = B.shape
    ea, eb = A.entries(), B.entries()
    out = [None] * (ar * br * ac * bc)
    ncol = ac * bc
    for i in range(ar):
        for j in range(ac):
            a = ea[i * ac + j]
            for k in range(br):
                base = (i * br + k) * ncol + j * bc
                row_b = eb[k * bc:(k + 1) * bc]
                if a == 0:
                    for l in range(bc):
                        out[base + l] = a
                else:
                    for l in range(bc):
                        out[base + l] = a * row_b[l]
    return Mat._wrap(fmpq_mat(ar * br, ac * bc, out))


def kron_all(*mats: Mat) -> Mat:
    out = Mat.identity(1)
    for m in mats:
        out = kron(out, m)
    return out


@lru_cache(maxsize=None)
def _commutation_perm(p: int, n: int) -> tuple[int, ...]:
    # row (i, j) of P(p, n) (i < p major) carries its 1 in column (j, i) (j < n major)
    return tuple(j * p + i for i in range(p) for j in range(n))


def commutation_matrix(p: int, n: int) -> Mat:
    """The pn x pn permutation matrix P(p, n) = [E_ij^T], E_ij in Q^{p x n}.

    Satisfies ``kron(A, B) == P(n, p) @ kron(B, A) @ P(m, q).T`` for A n x m, B p x q.
    """
    if p < 1 or n < 1:
        raise ValueError("commutation_matrix needs p, n >= 1")
    perm = _commutation_perm(p, n)
    m = fmpq_mat(p * n, p * n)
    for r, c in enumerate(perm):
        m[r, c] = 1
    return Mat._wrap(m)


@lru_cache(maxsize=4096)
def _swap_perm(a: int, x: int, y: int, b: int) -> tuple[int, ...]:
    # index map of kron(I_a, P(y, x), I_b)
    inner = _commutation_perm(y, x)
    return tuple((ia * x * y + inner[k]) * b + ib
                 for ia in range(a) for k in range(x * y) for ib in range(b))


def swap_factors(M: Mat, rdims: tuple[int, int, int, int], cdims: tuple[int, int, int, int]) -> Mat:
    """Exchange two adjacent tensor factors on both sides of ``M``.

    With row factors ``(a, x, y, b)`` and column factors ``(a', x', y', b')`` this
    returns ``L M R^T`` where ``L = I_a (x) P(y, x) (x) I_b`` and
    ``R = I_a' (x) P(y', x') (x) I_b'``; the result has factor order
    ``(a, y, x, b)`` / ``(a', y', x', b')``.  Applied as an index permutation.
    """
    a, x, y, b = rdims
    a2, x2, y2, b2 = cdims
    if a * x * y * b != M.rows or a2 * x2 * y2 * b2 != M.cols:
        raise DimensionMismatch(f"factor dims {rdims}/{cdims} do not match {M.shape}")
    if (x == 1 or y == 1) and (x2 == 1 or y2 == 1):
        return M
    return M.permute(_swap_perm(a, x, y, b), _swap_perm(a2, x2, y2, b2))


# -- block assembly -----------------------------------------------------------

def block_matrix(grid: Sequence[Sequence[Mat]]) -> Mat:
    """Assemble a block matrix; blocks in a block-row share height, in a block-column width."""
    if not grid or not grid[0]:
        raise DimensionMismatch("empty block grid")
    ncols_grid = len(grid[0])
    if any(len(r) != ncols_grid for r in grid):
        raise DimensionMismatch("ragged block grid")
    heights = [row[0].rows for row in grid]
    widths = [blk.cols for blk in grid[0]]
    for a, row in enumerate(grid):
        for b, blk in enumerate(row):
            if blk.shape != (heights[a], widths[b]):
                raise DimensionMismatch(f"block ({a},{b}) has shape {blk.shape}, "
                                        f"expected {(heights[a], widths[b])}")
    total_c = sum(widths)
    out = []
    for a, row in enumerate(grid):
        lists = [blk.tolist() for blk in row]
        for i in range(heights[a]):
            line = []
            for bl in lists:
                line.extend(bl[i])
            out.extend(line)
    return Mat._wrap(fmpq_mat(sum(heights), total_c, out))


def hstack(mats: Sequence[Mat]) -> Mat:
    return block_matrix([list(mats)])


def vstack(mats: Sequence[Mat]) -> Mat:
    return block_matrix([[m] for m in mats])


def direct_sum(*mats: Mat) -> Mat:
    grid = []
    for i, mi in enumerate(mats):
        grid.append([mi if i == j else Mat.zeros(mi.rows, mj.cols) for j, mj in enumerate(mats)])
    return block_matrix(grid)


# -- fraction-free elimination ------------------------------------------------

def _integer_rows(M: Mat) -> list[list[int]]:
    rows = []
    for row in M.tolist():
        den = 1
        for x in row:
            den = math.lcm(den, int(x.q))
        rows.append([int(x.p) * (den // int(x.q)) for x in row])
    return rows


def bareiss_echelon(M: Mat) -> list[int]:
    """Pivot columns of ``M`` from fraction-free Gaussian elimination.

    Rows are scaled to integers first (row scaling preserves rank and the
    pivot pattern); every division in the sweep is exact.
    """
    a = _integer_rows(M)
    nr, nc = M.shape
    prev = 1
    r = 0
    pivots = []
    for c in range(nc):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        arc = a[r][c]
        ar = a[r]
        for i in range(r + 1, nr):
            ai = a[i]
            aic = ai[c]
            for k in range(c + 1, nc):
                ai[k] = (arc * ai[k] - aic * ar[k]) // prev
            ai[c] = 0
        prev = arc
        pivots.append(c)
        r += 1
    return pivots


def rank(M: Mat) -> int:
    return len(bareiss_echelon(M))


def column_basis(M: Mat) -> list[int]:
    """Indices of columns forming a basis of the column space."""
    return bareiss_echelon(M)


def row_basis(M: Mat) -> list[int]:
    """Indices of rows forming a basis of the row space."""
    return bareiss_echelon(M.T)


# -- words --------------------------------------------------------------------

def check_word(w: Sequence[int], d: int) -> Word:
    w = tuple(int(x) for x in w)
    for x in w:
        if not 1 <= x <= d:
            raise ValueError(f"letter {x} out of range 1..{d}")
    return w


def word_concat(u: Sequence[int], v: Sequence[int]) -> Word:
    return tuple(u) + tuple(v)


def word_reverse(w: Sequence[int]) -> Word:
    return tuple(reversed(tuple(w)))


def words_of_length(d: int, k: int) -> list[Word]:
    """All words of length k in lexicographic order (1 < 2 < ... < d)."""
    return [tuple(w) for w in product(range(1, d + 1), repeat=k)]


def words_upto(d: int, L: int) -> list[Word]:
    """All words of length <= L in degree-lexicographic order."""
    out = []
    for k in range(L + 1):
        out.extend(words_of_length(d, k))
    return out


def word_str(w: Sequence[int]) -> str:
    """Digit-string encoding used in JSON (letters joined by '.' once d > 9)."""
    w = tuple(w)
    if not w:
        return ""
    if max(w) <= 9:
        return "".join(str(x) for x in w)
    return ".".join(str(x) for x in w)


def parse_word(s: str) -> Word:
    s = s.strip()
    if not s:
        return ()
    if "." in s:
        return tuple(int(x) for x in s.split("."))
    return tuple(int(ch) for ch in s)
