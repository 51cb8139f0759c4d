"""Exact multivariate polynomial arithmetic with named variables and gradings.

A Ring fixes an ordered list of variable names, zero or more integer weight
rows (gradings), and a coefficient field: the rationals (p == 0) or a prime
field GF(p).  A Poly is an immutable sparse polynomial over one Ring, stored
as a mapping from dense exponent tuples to nonzero coefficients.  Rational
coefficients are `fractions.Fraction`; prime-field coefficients are ints in
[0, p).

The canonical term order used for rendering, hashing and equality is
graded reverse lexicographic with respect to the registry order of the
variable names.

Polynomial text grammar accepted by `parse_poly` (and produced by `render`):

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := NUMBER | IDENT | '(' expr ')' | factor '^' UINT
    NUMBER := INT | INT '/' UINT
    IDENT  := [A-Za-z][A-Za-z0-9_]*

Implicit multiplication is forbidden ("2x" is a syntax error).  The optional
leading sign and the NUMBER fraction form are strict supersets of the base
grammar, kept so that every rendered polynomial parses back.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "Ring",
    "Poly",
    "PolyMatrix",
    "WeightedParts",
    "make_ring",
    "parse_poly",
    "poly_arith",
    "substitute",
    "diff",
    "eval",
    "weighted_parts",
    "min_weight",
    "matrix_minor",
    "divide_out_var",
    "truncate",
    "truncated_mul",
    "grevlex_key",
]

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Ring:
    """A named-variable polynomial ring with integer weight rows.

    `p == 0` means rational coefficients, otherwise coefficients in GF(p).
    """

    names: tuple
    gradings: tuple
    p: int

    def __post_init__(self):
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} in ring {self.names}")

    def has(self, name: str) -> bool:
        return name in self._index

    # -- coefficient field helpers -------------------------------------

    def coeff(self, value):
        """Normalize a python number into this ring's coefficient field."""
        if self.p == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(
                    f"denominator of {value} vanishes mod {self.p}"
                )
            return (value.numerator % self.p) * pow(den, self.p - 2, self.p) % self.p
        return int(value) % self.p

    def coeff_inv(self, value):
        if self.p == 0:
            return Fraction(1) / value
        return pow(value % self.p, self.p - 2, self.p)

    # -- constructors ---------------------------------------------------

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, value) -> "Poly":
        c = self.coeff(value)
        if c == 0:
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "Poly":
        i = self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.coeff(1)})

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "Poly":
        e = [0] * self.nvars
        for nm, k in exps.items():
            e[self.index(nm)] = k
        c = self.coeff(coeff)
        if c == 0:
            return self.zero()
        return Poly(self, {tuple(e): c})

    def grading_row(self, row: int) -> tuple:
        if not (0 <= row < len(self.gradings)):
            raise IndexError(f"ring has {len(self.gradings)} grading rows, not {row + 1}")
        return self.gradings[row]


def make_ring(names: Iterable[str], gradings: Iterable[Iterable[int]] = (), field: int = 0) -> Ring:
    """Build a Ring.  `field` is 0 for the rationals or an odd prime p.

    Raises ValueError on duplicate names, malformed identifiers, grading rows
    of the wrong length, or a composite `field`.
    """
    names = tuple(names)
    if not names:
        raise ValueError("a ring needs at least one variable")
    seen = set()
    for n in names:
        if not _IDENT_RE.fullmatch(n):
            raise ValueError(f"bad variable name {n!r}")
        if n in seen:
            raise ValueError(f"duplicate variable name {n!r}")
        seen.add(n)
    rows = tuple(tuple(int(w) for w in row) for row in gradings)
    for row in rows:
        if len(row) != len(names):
            raise ValueError(
                f"grading row has {len(row)} entries for {len(names)} variables"
            )
    field = int(field)
    if field != 0 and not _is_prime(field):
        raise ValueError(f"field must be 0 (rationals) or a prime, got {field}")
    return Ring(names, rows, field)


def grevlex_key(e: tuple):
    """Sort key; larger key = larger monomial in grevlex w.r.t. registry order."""
    return (sum(e), tuple(-x for x in reversed(e)))


class Poly:
    """Immutable sparse polynomial.  Do not mutate `terms` after creation."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- basic protocol --------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            items = tuple(sorted(self.terms.items()))
            self._hash = hash((self.ring.names, self.ring.p, items))
        return self._hash

    def sorted_terms(self):
        """Terms in descending canonical (grevlex) order."""
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        if not self.terms:
            return 0
        return max(e[i] for e in self.terms)

    def variables(self) -> set:
        """Names of variables that actually occur."""
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.names[i])
        return used

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.coeff(0))

    def coefficient_of(self, exps: Mapping[str, int]):
        e = [0] * self.ring.nvars
        for nm, k in exps.items():
            e[self.ring.index(nm)] = k
        return self.terms.get(tuple(e), self.ring.coeff(0))

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        self._check(other)
        out = dict(self.terms)
        p = self.ring.p
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if p:
                s %= p
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Poly(self.ring, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        p = self.ring.p
        if p:
            return Poly(self.ring, {e: (-c) % p for e, c in self.terms.items()})
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return (self.__neg__()).__add__(self.ring.const(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = self.ring.coeff(other)
            if c == 0:
                return self.ring.zero()
            p = self.ring.p
            if p:
                return Poly(self.ring, {e: (v * c) % p for e, v in self.terms.items()})
            return Poly(self.ring, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        return _mul(self, other, None, 0)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def scale(self, c):
        return self.__mul__(c)

    # -- rendering ----------------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{self.ring.names[i]}^{k}" if k > 1 else self.ring.names[i]
                for i, k in enumerate(e)
                if k
            )
            if self.ring.p == 0:
                neg = c < 0
                mag = -c if neg else c
                coeff_s = _render_q(mag)
            else:
                neg = False
                coeff_s = str(c)
            if mono:
                body = mono if coeff_s == "1" else f"{coeff_s}*{mono}"
            else:
                body = coeff_s
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self):
        return self.render()


def _render_q(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _mul(a: Poly, b: Poly, cap_weights, cap: int) -> Poly:
    """Product, optionally dropping monomials whose cap_weights-degree exceeds cap."""
    ring = a.ring
    p = ring.p
    out: dict = {}
    if cap_weights is not None:
        wa = {e: sum(w * k for w, k in zip(cap_weights, e)) for e in a.terms}
        wb = {e: sum(w * k for w, k in zip(cap_weights, e)) for e in b.terms}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            if cap_weights is not None and wa[ea] + wb[eb] > cap:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e, 0) + ca * cb
            if p:
                s %= p
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
    return Poly(ring, out)


def truncate(p: Poly, bound: int, weights=None) -> Poly:
    """Drop monomials of weighted degree > bound (default weights all 1)."""
    if weights is None:
        weights = (1,) * p.ring.nvars
    kept = {
        e: c
        for e, c in p.terms.items()
        if sum(w * k for w, k in zip(weights, e)) <= bound
    }
    return Poly(p.ring, kept)


def truncated_mul(a: Poly, b: Poly, bound: int, weights=None) -> Poly:
    """Product with monomials of weighted degree > bound dropped as they form."""
    if a.ring != b.ring:
        raise ValueError("polynomials live in different rings")
    if weights is None:
        weights = (1,) * a.ring.nvars
    return _mul(a, b, tuple(weights), bound)


# ---------------------------------------------------------------------------
# parser


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        self.pos = pos
        super().__init__(f"{msg} at position {pos}: ...{text[pos:pos + 20]!r}")


class _Parser:
    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\n":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> Poly:
        sign = 1
        ch = self.peek()
        if ch in "+-":
            self.pos += 1
            sign = -1 if ch == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                acc = acc + self.term()
            elif ch == "-":
                self.pos += 1
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self.peek() == "*":
            self.pos += 1
            acc = acc * self.factor()
        return acc

    def factor(self) -> Poly:
        base = self.primary()
        while self.peek() == "^":
            self.pos += 1
            k = self.uint()
            base = base ** k
        return base

    def uint(self) -> int:
        self.skip_ws()
        m = re.match(r"\d+", self.text[self.pos:])
        if not m:
            raise ParseError(self.text, self.pos, "expected unsigned integer")
        self.pos += m.end()
        return int(m.group())

    def primary(self) -> Poly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                raise ParseError(self.text, self.pos, "expected ')'")
            self.pos += 1
            return inner
        if ch.isdigit():
            num = self.uint()
            if self.peek() == "/":
                self.pos += 1
                den = self.uint()
                if den == 0:
                    raise ParseError(self.text, self.pos, "zero denominator")
                return self.ring.const(Fraction(num, den))
            return self.ring.const(num)
        m = _IDENT_RE.match(self.text, self.pos) if ch else None
        if m and m.start() == self.pos:
            name = m.group()
            self.pos = m.end()
            if not self.ring.has(name):
                raise ParseError(self.text, m.start(), f"unknown identifier {name!r}")
            return self.ring.var(name)
        raise ParseError(self.text, self.pos, "expected factor")


def parse_poly(ring: Ring, text: str) -> Poly:
    """Parse `text` into a Poly over `ring`.  See the module docstring grammar."""
    p = _Parser(ring, text)
    result = p.expr()
    p.skip_ws()
    if p.pos != len(text):
        raise ParseError(text, p.pos, "trailing input")
    return result


# ---------------------------------------------------------------------------
# spec-level operations


def poly_arith(op: str, a: Poly, b) -> Poly:
    """Dispatch {add, sub, mul, pow}; `b` is a Poly, a scalar, or an exponent."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown op {op!r}")


def substitute(p: Poly, assignment: Mapping[str, Poly], target: Ring | None = None,
               cap: int = 0, cap_weights=None) -> Poly:
    """Apply the ring homomorphism sending each assigned variable to its image.

    All images must share one ring (the target).  Variables of `p` that are
    not assigned must exist by name in the target ring.  With `cap` > 0,
    every intermediate product drops monomials of weighted degree > cap
    (weights default to all ones), which keeps truncated germ computations
    bounded; the result then equals the exact image truncated at `cap`
    provided images carry no negative-weight monomials.
    """
    ring = p.ring
    if target is None:
        for img in assignment.values():
            target = img.ring
            break
        else:
            target = ring
    for name, img in assignment.items():
        ring.index(name)
        if img.ring != target:
            raise ValueError(f"image of {name!r} lives in a different ring")
    if cap and cap_weights is None:
        cap_weights = (1,) * target.nvars

    # variable index in p -> image Poly in target
    images: dict[int, Poly] = {}
    for name, img in assignment.items():
        images[ring.index(name)] = img

    def carried_var(i: int) -> Poly:
        name = ring.names[i]
        if not target.has(name):
            raise KeyError(
                f"variable {name!r} is unassigned and missing from the target ring"
            )
        return target.var(name)

    # incremental power cache
    powers: dict[tuple, Poly] = {}

    def power(i: int, k: int) -> Poly:
        key = (i, k)
        got = powers.get(key)
        if got is not None:
            return got
        if k == 1:
            base = images[i] if i in images else carried_var(i)
            powers[key] = base
            return base
        half = power(i, k // 2)
        val = _mul(half, half, cap_weights if cap else None, cap)
        if k % 2:
            val = _mul(val, power(i, 1), cap_weights if cap else None, cap)
        powers[key] = val
        return val

    if ring.p and target.p != ring.p:
        raise ValueError("cannot move prime-field coefficients into a different field")
    total = target.zero()
    for e, c in p.terms.items():
        term = target.const(c)
        if term.is_zero():
            continue
        for i, k in enumerate(e):
            if k == 0:
                continue
            term = _mul(term, power(i, k), cap_weights if cap else None, cap)
            if term.is_zero():
                break
        total = total + term
    return total


def diff(p: Poly, name: str) -> Poly:
    """Formal partial derivative with respect to the named variable."""
    i = p.ring.index(name)
    ring = p.ring
    out: dict = {}
    for e, c in p.terms.items():
        k = e[i]
        if k == 0:
            continue
        ne = list(e)
        ne[i] = k - 1
        v = c * k
        if ring.p:
            v %= ring.p
            if v == 0:
                continue
        out[tuple(ne)] = v
    return Poly(ring, out)


def eval(p: Poly, point: Mapping[str, object]):  # noqa: A001 - spec-fixed name
    """Evaluate at a fully assigned point; returns a Fraction or an int mod p."""
    ring = p.ring
    vals = []
    for name in ring.names:
        if name not in point:
            raise KeyError(f"no value for variable {name!r}")
        vals.append(ring.coeff(point[name]))
    total = ring.coeff(0)
    for e, c in p.terms.items():
        term = c
        for i, k in enumerate(e):
            if k:
                if ring.p:
                    term = term * pow(vals[i], k, ring.p) % ring.p
                else:
                    term *= vals[i] ** k
        total = total + term
        if ring.p:
            total %= ring.p
    return total


class WeightedParts(dict):
    """Mapping weight -> homogeneous part, with the minimum exposed.

    For the zero polynomial `min_weight` is +infinity and `min_part` is zero.
    """

    def __init__(self, ring: Ring, parts: dict):
        super().__init__(parts)
        self._ring = ring

    @property
    def min_weight(self):
        return min(self) if self else math.inf

    @property
    def min_part(self) -> Poly:
        if not self:
            return self._ring.zero()
        return self[self.min_weight]


def weighted_parts(p: Poly, grading_row: int = 0) -> WeightedParts:
    """Split into weight-homogeneous parts for the given grading row."""
    row = p.ring.grading_row(grading_row)
    buckets: dict = {}
    for e, c in p.terms.items():
        w = sum(wi * k for wi, k in zip(row, e))
        buckets.setdefault(w, {})[e] = c
    return WeightedParts(p.ring, {w: Poly(p.ring, t) for w, t in buckets.items()})


def min_weight(p: Poly, grading_row: int = 0):
    return weighted_parts(p, grading_row).min_weight


@dataclass(frozen=True)
class PolyMatrix:
    """A rectangular grid of Poly entries over one ring."""

    entries: tuple

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("empty matrix")
        width = len(self.entries[0])
        ring = self.entries[0][0].ring
        for row in self.entries:
            if len(row) != width:
                raise ValueError("ragged matrix")
            for cell in row:
                if cell.ring != ring:
                    raise ValueError("matrix entries live in different rings")

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0])

    @property
    def ring(self) -> Ring:
        return self.entries[0][0].ring

    def at(self, i: int, j: int) -> Poly:
        return self.entries[i][j]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(tuple(zip(*self.entries)))


def matrix_minor(A: PolyMatrix, rows: Iterable[int], cols: Iterable[int]) -> Poly:
    """Determinant of the selected square submatrix (exact cofactor expansion).

    Repeated indices are allowed and give 0, matching the alternating property.
    """
    rows = list(rows)
    cols = list(cols)
    if len(rows) != len(cols):
        raise ValueError("minor needs equally many rows and columns")
    for i in rows:
        if not 0 <= i < A.nrows:
            raise IndexError(f"row {i} out of range")
    for j in cols:
        if not 0 <= j < A.ncols:
            raise IndexError(f"column {j} out of range")
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        return A.ring.zero()

    memo: dict = {}

    def det(rws: tuple, cls: tuple) -> Poly:
        if len(rws) == 1:
            return A.at(rws[0], cls[0])
        key = (rws, cls)
        got = memo.get(key)
        if got is not None:
            return got
        total = A.ring.zero()
        r0 = rws[0]
        rest = rws[1:]
        for idx, j in enumerate(cls):
            cell = A.at(r0, j)
            if cell.is_zero():
                continue
            sub = det(rest, cls[:idx] + cls[idx + 1:])
            piece = cell * sub
            total = total + piece if idx % 2 == 0 else total - piece
        memo[key] = total
        return total

    return det(tuple(rows), tuple(cols))


def divide_out_var(p: Poly, name: str) -> tuple:
    """Write p = v^k * q with v not dividing q; returns (q, k).

    Raises ValueError for the zero polynomial.
    """
    if p.is_zero():
        raise ValueError("cannot divide a variable out of the zero polynomial")
    i = p.ring.index(name)
    k = min(e[i] for e in p.terms)
    if k == 0:
        return p, 0
    out = {}
    for e, c in p.terms.items():
        ne = list(e)
        ne[i] = e[i] - k
        out[tuple(ne)] = c
    return Poly(p.ring, out), k
