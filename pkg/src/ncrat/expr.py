"""Matrix-valued NC polynomials and rational expression trees.

Expressions live in ``arity`` tuples of ``d`` noncommuting indeterminates.
Ordinary (user-facing) expressions have arity 1; the multi-tuple nodes
``Tensor`` and ``Iota`` only appear in the output of the difference
operators.  Values are immutable; the only rewriting ever performed is the
collapse of purely polynomial subtrees into a single ``Poly`` leaf.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import (Mat, Word, block_matrix, check_word, kron, rational_str,
                      to_rational, words_upto)
from .errors import ExprSyntaxError, GenerationFailed, ShapeError


def _deglex(w):
    return (len(w), w)


class MatPoly:
    """Finite map Word -> coefficient matrix (all of one shape, zeros dropped)."""

    __slots__ = ("d", "rows", "cols", "terms")

    def __init__(self, d: int, rows: int, cols: int, terms: dict | None = None):
        if d < 1:
            raise ValueError("need at least one indeterminate")
        self.d = d
        self.rows = rows
        self.cols = cols
        clean = {}
        for w, c in (terms or {}).items():
            w = check_word(w, d)
            if not isinstance(c, Mat):
                c = Mat.scalar(c, 1) if rows == cols == 1 else Mat(c)
            if c.shape != (rows, cols):
                raise ShapeError(f"coefficient of {w} has shape {c.shape}, expected {(rows, cols)}")
            if not c.is_zero():
                clean[w] = clean[w] + c if w in clean else c
        self.terms = {w: clean[w] for w in sorted(clean, key=_deglex) if not clean[w].is_zero()}

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, d, rows=1, cols=1):
        return cls(d, rows, cols)

    @classmethod
    def constant(cls, M, d: int) -> "MatPoly":
        if not isinstance(M, Mat):
            M = Mat.scalar(M, 1)
        return cls(d, M.rows, M.cols, {(): M})

    @classmethod
    def variable(cls, j: int, d: int) -> "MatPoly":
        return cls(d, 1, 1, {(j,): 1})

    @classmethod
    def monomial(cls, w: Sequence[int], d: int, coef=1) -> "MatPoly":
        c = coef if isinstance(coef, Mat) else Mat.scalar(coef, 1)
        return cls(d, c.rows, c.cols, {tuple(w): c})

    @classmethod
    def from_scalar_terms(cls, d: int, terms: dict) -> "MatPoly":
        return cls(d, 1, 1, {w: Mat.scalar(c, 1) for w, c in terms.items()})

    # -- queries ----------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(len(w) == 0 for w in self.terms)

    def const_term(self) -> Mat:
        return self.terms.get((), Mat.zeros(self.rows, self.cols))

    def coeff(self, w) -> Mat:
        return self.terms.get(tuple(w), Mat.zeros(self.rows, self.cols))

    def entry(self, i: int, j: int) -> "MatPoly":
        return MatPoly(self.d, 1, 1, {w: Mat.scalar(c[i, j], 1) for w, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatPoly):
            return NotImplemented
        return (self.d, self.rows, self.cols) == (other.d, other.rows, other.cols) and \
            self.terms.keys() == other.terms.keys() and \
            all(self.terms[w] == other.terms[w] for w in self.terms)

    __hash__ = None

    def __repr__(self):
        return f"MatPoly(d={self.d}, shape={self.shape}, terms={ {w: c.to_json() for w, c in self.terms.items()} })"

    # -- arithmetic ---------------------------------------------------------------
    def _same(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"polynomial shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "MatPoly") -> "MatPoly":
        self._same(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t[w] + c if w in t else c
        return MatPoly(max(self.d, other.d), self.rows, self.cols, t)

    def __neg__(self) -> "MatPoly":
        return MatPoly(self.d, self.rows, self.cols, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "MatPoly") -> "MatPoly":
        return self + (-other)

    def scale(self, c) -> "MatPoly":
        return MatPoly(self.d, self.rows, self.cols, {w: m * c for w, m in self.terms.items()})

    def __mul__(self, other: "MatPoly") -> "MatPoly":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply polynomial shapes {self.shape} and {other.shape}")
        t: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                ab = a @ b
                t[w] = t[w] + ab if w in t else ab
        return MatPoly(max(self.d, other.d), self.rows, other.cols, t)

    def lmul(self, M: Mat) -> "MatPoly":
        return MatPoly(self.d, M.rows, self.cols, {w: M @ c for w, c in self.terms.items()})

    def rmul(self, M: Mat) -> "MatPoly":
        return MatPoly(self.d, self.rows, M.cols, {w: c @ M for w, c in self.terms.items()})

    @staticmethod
    def from_blocks(grid: Sequence[Sequence["MatPoly"]]) -> "MatPoly":
        d = max(p.d for row in grid for p in row)
        words = sorted({w for row in grid for p in row for w in p.terms}, key=_deglex)
        heights = [row[0].rows for row in grid]
        widths = [p.cols for p in grid[0]]
        terms = {w: block_matrix([[p.coeff(w) for p in row] for row in grid]) for w in words}
        return MatPoly(d, sum(heights), sum(widths), terms)

    # -- evaluation --------------------------------------------------------------
    def evaluate(self, mats: Sequence[Mat]) -> Mat:
        """Sum of kron(P_w, Z^w) (coefficient factor first)."""
        n = mats[0].rows
        out = Mat.zeros(self.rows * n, self.cols * n)
        powers = {(): Mat.identity(n)}
        scalar = self.rows == self.cols == 1
        for w, c in self.terms.items():
            zw = powers.get(w)
            if zw is None:
                for k in range(1, len(w) + 1):
                    pre = w[:k]
                    if pre not in powers:
                        powers[pre] = powers[w[:k - 1]] @ mats[w[k - 1] - 1]
                zw = powers[w]
            out = out + (zw * c[0, 0] if scalar else kron(c, zw))
        return out


# ---------------------------------------------------------------------------
# expression nodes


class RatExpr:
    """Base class of expression nodes.  ``shape``, ``arity`` and ``d`` are derived."""

    shape: tuple
    arity: int
    d: int

    @property
    def rows(self):
        return self.shape[0]

    @property
    def cols(self):
        return self.shape[1]

    def _set(self, shape, arity, d):
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "d", d)

    def children(self) -> tuple:
        return ()

    def __repr__(self):
        return f"{type(self).__name__}<{format_expr(self)}>"

    # operator sugar for building expressions in code
    def __add__(self, other):
        return add(self, _lift(other, self))

    def __radd__(self, other):
        return add(_lift(other, self), self)

    def __sub__(self, other):
        return sub(self, _lift(other, self))

    def __rsub__(self, other):
        return sub(_lift(other, self), self)

    def __mul__(self, other):
        return mul(self, _lift(other, self))

    def __rmul__(self, other):
        return mul(_lift(other, self), self)

    def __neg__(self):
        return neg(self)


@dataclass(frozen=True, eq=True, repr=False)
class Poly(RatExpr):
    poly: MatPoly
    slot: int = 1
    arity_: int = 1

    def __post_init__(self):
        if self.poly.is_constant():
            object.__setattr__(self, "slot", 1)
        if not 1 <= self.slot <= self.arity_:
            raise ShapeError(f"slot {self.slot} outside 1..{self.arity_}")
        self._set(self.poly.shape, self.arity_, self.poly.d)

    def is_constant(self):
        return self.poly.is_constant()


@dataclass(frozen=True, eq=True, repr=False)
class Add(RatExpr):
    left: RatExpr
    right: RatExpr

    def __post_init__(self):
        _same_context(self.left, self.right, "Add")
        if self.left.shape != self.right.shape:
            raise ShapeError(f"Add of shapes {self.left.shape} and {self.right.shape}", "Add")
        self._set(self.left.shape, self.left.arity, self.left.d)

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True, repr=False)
class Mul(RatExpr):
    left: RatExpr
    right: RatExpr

    def __post_init__(self):
        _same_context(self.left, self.right, "Mul")
        if self.left.cols != self.right.rows:
            raise ShapeError(f"Mul of shapes {self.left.shape} and {self.right.shape}", "Mul")
        self._set((self.left.rows, self.right.cols), self.left.arity, self.left.d)

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True, repr=False)
class Inv(RatExpr):
    inner: RatExpr
    # tuple of EvalPoints (one per tuple slot) where the inner value is invertible
    witness: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.inner.rows != self.inner.cols:
            raise ShapeError(f"inverse of non-square shape {self.inner.shape}", "Inv")
        self._set(self.inner.shape, self.inner.arity, self.inner.d)

    def children(self):
        return (self.inner,)


@dataclass(frozen=True, eq=True, repr=False)
class Block(RatExpr):
    grid: tuple  # tuple of tuples of RatExpr

    def __post_init__(self):
        grid = tuple(tuple(r) for r in self.grid)
        object.__setattr__(self, "grid", grid)
        if not grid or not grid[0] or any(len(r) != len(grid[0]) for r in grid):
            raise ShapeError("block grid must be a nonempty rectangle", "Block")
        first = grid[0][0]
        for a, row in enumerate(grid):
            for b, x in enumerate(row):
                _same_context(first, x, "Block")
                if x.rows != row[0].rows or x.cols != grid[0][b].cols:
                    raise ShapeError(f"block entry ({a},{b}) has shape {x.shape}, not conformable",
                                     f"Block[{a}][{b}]")
        rows = sum(r[0].rows for r in grid)
        cols = sum(x.cols for x in grid[0])
        self._set((rows, cols), first.arity, first.d)

    def children(self):
        return tuple(x for r in self.grid for x in r)


@dataclass(frozen=True, eq=True, repr=False)
class Tensor(RatExpr):
    left: RatExpr
    right: RatExpr

    def __post_init__(self):
        if self.left.d != self.right.d:
            raise ShapeError("Tensor factors use different d", "Tensor")
        self._set((self.left.rows * self.right.rows, self.left.cols * self.right.cols),
                  self.left.arity + self.right.arity, self.left.d)

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True, repr=False)
class Iota(RatExpr):
    """Insert a trivial tuple slot just before the last one."""
    inner: RatExpr

    def __post_init__(self):
        self._set(self.inner.shape, self.inner.arity + 1, self.inner.d)

    def children(self):
        return (self.inner,)


def _same_context(a: RatExpr, b: RatExpr, op: str):
    if a.d != b.d:
        raise ShapeError(f"{op} operands use d={a.d} and d={b.d}", op)
    if a.arity != b.arity:
        raise ShapeError(f"{op} operands have arities {a.arity} and {b.arity}", op)


def _lift(x, like: RatExpr) -> RatExpr:
    if isinstance(x, RatExpr):
        return x
    if isinstance(x, Mat):
        return const(x, like.d, like.arity)
    return const(Mat.scalar(x, like.rows), like.d, like.arity)


# ---------------------------------------------------------------------------
# smart constructors (collapse polynomial subtrees, nothing else)


def const(M, d: int, arity: int = 1) -> Poly:
    if not isinstance(M, Mat):
        M = Mat.scalar(M, 1)
    return Poly(MatPoly.constant(M, d), 1, arity)


def var(j: int, d: int, slot: int = 1, arity: int = 1) -> Poly:
    return Poly(MatPoly.variable(j, d), slot, arity)


def poly(p: MatPoly, slot: int = 1, arity: int = 1) -> Poly:
    return Poly(p, slot, arity)


def identity(n: int, d: int, arity: int = 1) -> Poly:
    return const(Mat.identity(n), d, arity)


def _poly_pair(a, b):
    """Common slot if a and b are Poly leaves that may be merged, else None."""
    if isinstance(a, Poly) and isinstance(b, Poly) and a.arity == b.arity:
        if a.is_constant():
            return b.slot
        if b.is_constant() or a.slot == b.slot:
            return a.slot
    return None


def add(a: RatExpr, b: RatExpr) -> RatExpr:
    s = _poly_pair(a, b)
    if s is not None:
        if a.shape != b.shape:
            raise ShapeError(f"Add of shapes {a.shape} and {b.shape}", "Add")
        return Poly(a.poly + b.poly, s, a.arity)
    return Add(a, b)


def mul(a: RatExpr, b: RatExpr) -> RatExpr:
    s = _poly_pair(a, b)
    if s is not None:
        if a.cols != b.rows:
            raise ShapeError(f"Mul of shapes {a.shape} and {b.shape}", "Mul")
        return Poly(a.poly * b.poly, s, a.arity)
    return Mul(a, b)


def neg(a: RatExpr) -> RatExpr:
    if isinstance(a, Poly):
        return Poly(-a.poly, a.slot, a.arity)
    return Mul(const(-Mat.identity(a.rows), a.d, a.arity), a)


def sub(a: RatExpr, b: RatExpr) -> RatExpr:
    return add(a, neg(b))


def block(grid) -> RatExpr:
    return Block(tuple(tuple(r) for r in grid))


def tensor(a: RatExpr, b: RatExpr) -> RatExpr:
    return Tensor(a, b)


def iota(a: RatExpr) -> RatExpr:
    return Iota(a)


def inv(a: RatExpr, witness=None, *, seed: int = 0) -> Inv:
    """Inverse node; searches for a witness point when none is given."""
    if a.rows != a.cols:
        raise ShapeError(f"inverse of non-square shape {a.shape}", "Inv")
    if witness is None:
        from .evaluation import find_witness
        witness = find_witness(a, random.Random(seed))
        if witness is None:
            raise GenerationFailed(f"no invertibility witness found for {format_expr(a)}")
    return Inv(a, tuple(witness))


def power(a: RatExpr, k: int, *, seed: int = 0) -> RatExpr:
    if k < 0:
        return power(inv(a, seed=seed), -k)
    if a.rows != a.cols:
        raise ShapeError(f"power of non-square shape {a.shape}", "Pow")
    if k == 0:
        return identity(a.rows, a.d, a.arity)
    out = a
    for _ in range(k - 1):
        out = mul(out, a)
    return out


def map_tree(e: RatExpr, leaf, memo=None) -> RatExpr:
    """Rebuild ``e`` bottom-up with the smart constructors; ``leaf`` maps Poly nodes."""
    memo = {} if memo is None else memo

    def go(x):
        hit = memo.get(id(x))
        if hit is not None:
            return hit[1]
        if isinstance(x, Poly):
            y = leaf(x)
        elif isinstance(x, Add):
            y = add(go(x.left), go(x.right))
        elif isinstance(x, Mul):
            y = mul(go(x.left), go(x.right))
        elif isinstance(x, Inv):
            y = Inv(go(x.inner), x.witness)
        elif isinstance(x, Block):
            y = block_or_poly([[go(c) for c in r] for r in x.grid])
        elif isinstance(x, Tensor):
            y = Tensor(go(x.left), go(x.right))
        elif isinstance(x, Iota):
            y = Iota(go(x.inner))
        else:
            raise TypeError(type(x).__name__)
        memo[id(x)] = (x, y)
        return y

    return go(e)


def block_or_poly(grid) -> RatExpr:
    """Block node, collapsed to one Poly when every entry is a mergeable Poly leaf."""
    cells = [c for r in grid for c in r]
    if all(isinstance(c, Poly) for c in cells):
        slots = {c.slot for c in cells if not c.is_constant()}
        if len(slots) <= 1:
            Block(tuple(tuple(r) for r in grid))  # shape validation
            p = MatPoly.from_blocks([[c.poly for c in r] for r in grid])
            return Poly(p, slots.pop() if slots else 1, cells[0].arity)
    return block(grid)


def normalize(e: RatExpr) -> RatExpr:
    """Collapse every purely polynomial subtree (including blocks of polynomials)."""
    return map_tree(e, lambda x: x)


def walk(e: RatExpr):
    """Distinct nodes of the DAG, children before parents."""
    seen = set()
    order = []
    stack = [(e, False)]
    while stack:
        x, done = stack.pop()
        if done:
            order.append(x)
            continue
        if id(x) in seen:
            continue
        seen.add(id(x))
        stack.append((x, True))
        for c in reversed(x.children()):
            stack.append((c, False))
    return order


def node_count(e: RatExpr) -> int:
    return len(walk(e))


def is_polynomial(e: RatExpr) -> bool:
    return all(not isinstance(x, (Inv, Tensor, Iota)) for x in walk(e))


def as_polynomial(e: RatExpr) -> MatPoly | None:
    """The MatPoly of an arity-1 inverse-free expression, else None."""
    if e.arity != 1 or not is_polynomial(e):
        return None
    n = normalize(e)
    return n.poly if isinstance(n, Poly) else None


# ---------------------------------------------------------------------------
# printing

_SUM, _PROD, _NEG, _ATOM = "sum", "prod", "neg", "atom"


def _var_name(j: int, slot: int, arity: int) -> str:
    return f"z{j}" + "'" * (slot - 1)


def _monomial(c, w, slot, arity) -> str:
    vs = "*".join(_var_name(j, slot, arity) for j in w)
    if not w:
        return rational_str(c)
    if c == 1:
        return vs
    if c == -1:
        return "-" + vs
    return f"{rational_str(c)}*{vs}"


def _scalar_poly_text(p: MatPoly, slot: int, arity: int) -> tuple[str, str]:
    items = [(w, c[0, 0]) for w, c in p.terms.items()]
    if not items:
        return "0", _ATOM
    parts = []
    for k, (w, c) in enumerate(items):
        if k == 0:
            parts.append(_monomial(c, w, slot, arity))
        elif c < 0:
            parts.append(" - " + _monomial(-c, w, slot, arity))
        else:
            parts.append(" + " + _monomial(c, w, slot, arity))
    text = "".join(parts)
    if len(items) > 1:
        return text, _SUM
    w, c = items[0]
    if c < 0:
        return text, _NEG
    if (len(w) == 1 and c == 1) or not w:
        return text, _ATOM
    return text, _PROD


def _poly_text(p: MatPoly, slot: int, arity: int) -> tuple[str, str]:
    if p.shape == (1, 1):
        return _scalar_poly_text(p, slot, arity)
    rows = []
    for i in range(p.rows):
        rows.append("[" + ", ".join(_scalar_poly_text(p.entry(i, j), slot, arity)[0]
                                    for j in range(p.cols)) + "]")
    return "[" + ", ".join(rows) + "]", _ATOM


def _is_minus_identity(x: RatExpr) -> bool:
    if not (isinstance(x, Poly) and x.is_constant() and x.rows == x.cols):
        return False
    return x.poly.const_term() == -Mat.identity(x.rows)


def _paren(t: tuple[str, str], kinds) -> str:
    return f"({t[0]})" if t[1] in kinds else t[0]


def _fmt(e: RatExpr) -> tuple[str, str]:
    if isinstance(e, Poly):
        return _poly_text(e.poly, e.slot, e.arity)
    if isinstance(e, Add):
        left = _fmt(e.left)[0]
        r = e.right
        if isinstance(r, Mul) and _is_minus_identity(r.left):
            return f"{left} - {_paren(_fmt(r.right), (_SUM, _NEG))}", _SUM
        if isinstance(r, Poly) and r.shape == (1, 1) and r.poly.terms:
            lead = next(iter(r.poly.terms.values()))[0, 0]
            if lead < 0:
                return f"{left} - {_paren(_fmt(Poly(-r.poly, r.slot, r.arity)), (_SUM, _NEG))}", _SUM
        return f"{left} + {_paren(_fmt(r), (_SUM, _NEG))}", _SUM
    if isinstance(e, Mul):
        if _is_minus_identity(e.left):
            return "-" + _paren(_fmt(e.right), (_SUM, _PROD, _NEG)), _NEG
        left = _paren(_fmt(e.left), (_SUM,))
        right = _paren(_fmt(e.right), (_SUM, _PROD, _NEG))
        return f"{left}*{right}", _PROD
    if isinstance(e, Inv):
        return f"inv({_fmt(e.inner)[0]})", _ATOM
    if isinstance(e, Block):
        rows = ["[" + ", ".join(_fmt(c)[0] for c in r) + "]" for r in e.grid]
        return "[" + ", ".join(rows) + "]", _ATOM
    if isinstance(e, Tensor):
        return f"tensor({_fmt(e.left)[0]}, {_fmt(e.right)[0]})", _ATOM
    if isinstance(e, Iota):
        return f"iota({_fmt(e.inner)[0]})", _ATOM
    raise TypeError(type(e).__name__)


def format_expr(e: RatExpr) -> str:
    """Text form; for arity 1 it parses back to the same tree (after normalize)."""
    return _fmt(e)[0]


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>z\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),\[\]]))")


def _tokenize(text: str):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, d: int, seed: int):
        self.toks = _tokenize(text)
        self.i = 0
        self.d = d
        self.seed = seed
        self.n_inv = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None, kind=None, expected=None):
        k, v, p = self.toks[self.i]
        if (value is not None and v != value) or (kind is not None and k != kind):
            raise ExprSyntaxError(f"unexpected {v or 'end of input'!r}", p, expected or value or kind)
        self.i += 1
        return v, p

    def shape_guard(self, fn, pos, *args):
        try:
            return fn(*args)
        except ShapeError as exc:
            raise ShapeError(str(exc), f"offset {pos}") from None

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op, pos = self.take()
            rhs = self.term()
            node = self.shape_guard(add if op == "+" else sub, pos, node, rhs)
        return node

    def term(self):
        negate = False
        if self.peek()[1] == "-":
            self.take("-")
            negate = True
        node = self.power()
        if negate:
            node = neg(node)
        while self.peek()[1] == "*":
            _, pos = self.take("*")
            rhs = self.power()
            node = self.shape_guard(mul, pos, node, rhs)
        return node

    def power(self):
        node = self.factor()
        if self.peek()[1] == "^":
            _, pos = self.take("^")
            sign = 1
            if self.peek()[1] == "-":
                self.take("-")
                sign = -1
            v, _ = self.take(kind="num", expected="integer exponent")
            k = sign * int(v)
            if k < 0:
                self.n_inv += 1
            node = self.shape_guard(power, pos, node, k, )
        return node

    def factor(self):
        k, v, p = self.peek()
        if k == "name":
            if v != "inv":
                raise ExprSyntaxError(f"unknown function {v!r}", p, "inv")
            self.take()
            self.take("(")
            inner = self.expr()
            self.take(")")
            self.n_inv += 1
            try:
                return inv(inner, seed=self.seed + self.n_inv)
            except ShapeError as exc:
                raise ShapeError(str(exc), f"offset {p}") from None
        return self.atom()

    def atom(self):
        k, v, p = self.peek()
        if k == "num":
            self.take()
            num = int(v)
            if self.peek()[1] == "/":
                self.take("/")
                dv, dp = self.take(kind="num", expected="positive integer")
                if int(dv) == 0:
                    raise ExprSyntaxError("zero denominator", dp, "positive integer")
                return const(to_rational(f"{num}/{dv}"), self.d)
            return const(num, self.d)
        if k == "var":
            self.take()
            j = int(v[1:])
            if not 1 <= j <= self.d:
                raise ExprSyntaxError(f"variable {v} outside z1..z{self.d}", p)
            return var(j, self.d)
        if v == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        if v == "[":
            return self.matrix()
        raise ExprSyntaxError(f"unexpected {v or 'end of input'!r}", p,
                              "number, variable, '(', '[' or 'inv'")

    def matrix(self):
        _, p0 = self.take("[")
        rows = [self.row()]
        while self.peek()[1] == ",":
            self.take(",")
            rows.append(self.row())
        self.take("]")
        try:
            return block(rows)
        except ShapeError as exc:
            raise ShapeError(str(exc), f"offset {p0}") from None

    def row(self):
        self.take("[", expected="'[' starting a matrix row")
        items = [self.expr()]
        while self.peek()[1] == ",":
            self.take(",")
            items.append(self.expr())
        self.take("]", expected="',' or ']'")
        return items


def parse(text: str, d: int, *, seed: int = 0) -> RatExpr:
    """Parse expression text in ``d`` indeterminates (arity 1).

    Inverse witnesses are found by seeded sampling, so the same text and seed
    always give the same tree.
    """
    if d < 1:
        raise ValueError("d must be positive")
    ps = _Parser(text, d, seed)
    node = ps.expr()
    ps.take(kind="end", expected="end of input")
    return node


def read_nce(text: str, *, seed: int = 0) -> RatExpr:
    """Parse the ``.nce`` file format: a ``d=<count>`` header line then the expression."""
    lines = text.splitlines()
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines or not re.fullmatch(r"\s*d\s*=\s*\d+\s*", lines[0]):
        raise ExprSyntaxError("missing 'd=<count>' header line", 0, "d=<count>")
    d = int(lines[0].split("=")[1])
    return parse("\n".join(lines[1:]), d, seed=seed)


def write_nce(e: RatExpr) -> str:
    return f"d={e.d}\n{format_expr(e)}\n"


# ---------------------------------------------------------------------------
# random generation


class _Generator:
    def __init__(self, rng: random.Random, d: int, regular: bool, max_degree: int):
        self.rng = rng
        self.d = d
        self.regular = regular
        self.words = words_upto(d, max_degree)

    def coef(self, shape):
        r = self.rng
        return Mat([[r.choice((-3, -2, -1, 0, 1, 1, 2, 3)) for _ in range(shape[1])]
                    for _ in range(shape[0])])

    def leaf(self, shape, arity):
        r = self.rng
        while True:
            terms = {}
            for w in r.sample(self.words, min(len(self.words), r.randint(1, 3))):
                terms[w] = self.coef(shape)
            p = MatPoly(self.d, shape[0], shape[1], terms)
            if not p.is_zero():
                return Poly(p, r.randint(1, arity), arity)

    def build(self, depth: int, shape, arity: int) -> RatExpr:
        r = self.rng
        if depth <= 0:
            return self.leaf(shape, arity)
        p, q = shape
        ops = ["leaf", "add", "add", "mul", "mul"]
        if p == q:
            ops += ["inv", "inv"]
        if p * q > 1:
            ops.append("block")
        if arity > 1:
            ops += ["tensor", "tensor"]
        op = r.choice(ops)
        if op == "leaf":
            return self.leaf(shape, arity)
        if op == "add":
            return add(self.build(depth - 1, shape, arity), self.build(depth - 1, shape, arity))
        if op == "mul":
            k = r.randint(1, 2)
            return mul(self.build(depth - 1, (p, k), arity), self.build(depth - 1, (k, q), arity))
        if op == "inv":
            return self.make_inv(self.build(depth - 1, shape, arity))
        if op == "block":
            rs = r.choice([x for x in range(1, p + 1) if p % x == 0])
            cs = r.choice([x for x in range(1, q + 1) if q % x == 0])
            if rs * cs == 1:
                rs, cs = (p, 1) if p > 1 else (1, q)
            sub_shape = (p // rs, q // cs)
            return block([[self.build(depth - 1, sub_shape, arity) for _ in range(cs)]
                          for _ in range(rs)])
        # tensor: split the tuples and the shape between the two factors
        t = r.randint(1, arity - 1)
        p1 = r.choice([x for x in range(1, p + 1) if p % x == 0])
        q1 = r.choice([x for x in range(1, q + 1) if q % x == 0])
        return Tensor(self.build(depth - 1, (p1, q1), t),
                      self.build(depth - 1, (p // p1, q // q1), arity - t))

    def make_inv(self, inner: RatExpr) -> Inv:
        from .evaluation import EvalPoint, evaluate_multi, find_witness
        from .errors import NotInDomain
        n = inner.rows
        if self.regular:
            zero = tuple(EvalPoint.zero(self.d, 1) for _ in range(inner.arity))
            for c in range(0, n + 2):
                cand = inner if c == 0 else add(inner, const(Mat.scalar(c, n), self.d, inner.arity))
                try:
                    if evaluate_multi(cand, zero).data.is_invertible():
                        return Inv(cand, zero)
                except NotInDomain:
                    break
            raise GenerationFailed("could not make the inverse regular at zero")
        for c in (0, 1):
            cand = inner if c == 0 else add(inner, identity(n, self.d, inner.arity))
            w = find_witness(cand, self.rng)
            if w is not None:
                return Inv(cand, w)
        raise GenerationFailed("no invertibility witness within the attempt budget")


def random_expr(seed, d: int, depth: int, shape=(1, 1), *, arity: int = 1,
                regular_at_zero: bool = False, max_degree: int = 2) -> RatExpr:
    """Seeded random expression (deterministic in all arguments)."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    gen = _Generator(random.Random(seed), d, regular_at_zero, max_degree)
    return gen.build(depth, tuple(shape), arity)


def random_poly(rng: random.Random, d: int, max_degree: int, shape=(1, 1), n_terms=None,
                coef_range=3) -> MatPoly:
    words = words_upto(d, max_degree)
    k = n_terms if n_terms is not None else rng.randint(1, min(6, len(words)))
    terms = {}
    for w in rng.sample(words, min(k, len(words))):
        terms[w] = Mat([[rng.randint(-coef_range, coef_range) for _ in range(shape[1])]
                        for _ in range(shape[0])])
    return MatPoly(d, shape[0], shape[1], terms)


__all__ = [
    "MatPoly", "RatExpr", "Poly", "Add", "Mul", "Inv", "Block", "Tensor", "Iota",
    "const", "var", "poly", "identity", "add", "mul", "neg", "sub", "inv", "power", "block",
    "block_or_poly", "tensor", "iota", "normalize", "map_tree", "walk", "node_count",
    "is_polynomial", "as_polynomial", "format_expr", "parse", "read_nce", "write_nce",
    "random_expr", "random_poly", "Word",
]
