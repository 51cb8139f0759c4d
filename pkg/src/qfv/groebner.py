"""Groebner bases over Q and GF(p) with Buchberger's algorithm.

Internally, rational-coefficient polynomials are cleared to primitive integer
vectors and reduced by fraction-free pseudo-division with periodic content
stripping; prime-field polynomials are kept monic.  Pair handling uses the
normal selection strategy (smallest lcm in the active order) together with
the Gebauer-Moeller criteria.  Every elementary reduction step counts against
a budget; exceeding it raises BudgetExceeded so long-running instances can be
reported distinctly from failures.

Public entry points: groebner, normal_form, contains, ideal_equal, eliminate,
radical_member, dim, s_polynomial, and the monomial orders grevlex, lex,
block(names, inner).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable

from qfv.rings import Poly, Ring, make_ring, substitute

__all__ = [
    "MonomialOrder",
    "grevlex",
    "lex",
    "block",
    "GroebnerBasis",
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "groebner",
    "normal_form",
    "contains",
    "ideal_equal",
    "eliminate",
    "radical_member",
    "dim",
    "s_polynomial",
]

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    """Raised when a basis computation spends its reduction-step budget."""

    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"computation exceeded its budget of {steps} reduction steps")


# ---------------------------------------------------------------------------
# monomial orders


class MonomialOrder:
    """A term order; `keyfunc(ring)` returns exponent -> sort key, larger = bigger."""

    name = "?"

    def keyfunc(self, ring: Ring):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class _Grevlex(MonomialOrder):
    name = "grevlex"

    def keyfunc(self, ring):
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))


class _Lex(MonomialOrder):
    name = "lex"

    def keyfunc(self, ring):
        return lambda e: e


grevlex = _Grevlex()
lex = _Lex()


class block(MonomialOrder):  # noqa: N801 - reads like a constructor
    """Elimination order: the named variables dominate, compared by grevlex
    among themselves; ties fall through to `inner` on the remaining variables.
    """

    def __init__(self, elim: Iterable[str], inner: MonomialOrder = grevlex):
        self.elim = tuple(elim)
        self.inner = inner

    @property
    def name(self):
        return f"block({','.join(self.elim)};{self.inner.name})"

    def keyfunc(self, ring):
        elim_idx = tuple(ring.index(n) for n in self.elim)
        taken = set(elim_idx)
        rest_idx = tuple(i for i in range(ring.nvars) if i not in taken)
        rest_ring = make_ring(
            [ring.names[i] for i in rest_idx] or ["pad0"], field=ring.p
        )
        inner_key = self.inner.keyfunc(rest_ring)

        def key(e):
            head = tuple(e[i] for i in elim_idx)
            tail = tuple(e[i] for i in rest_idx)
            return (sum(head), tuple(-x for x in reversed(head)), inner_key(tail))

        return key


# ---------------------------------------------------------------------------
# internal integer-coefficient term arithmetic
#
# A working polynomial is a dict exponent-tuple -> int.  Over Q the ints are
# genuine integers (content-stripped); over GF(p) they live in [0, p).


class _Budget:
    __slots__ = ("used", "limit")

    def __init__(self, limit: int):
        self.used = 0
        self.limit = limit

    def tick(self, n: int = 1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(self.limit)


def _content(terms: dict) -> int:
    g = 0
    for c in terms.values():
        g = gcd(g, c)
        if g == 1:
            return 1
    return g or 1


def _strip_int(terms: dict) -> dict:
    g = _content(terms)
    if g > 1:
        return {e: c // g for e, c in terms.items()}
    return terms


def _to_int_terms(p: Poly) -> dict:
    """Clear denominators and strip content; GF(p) terms pass through."""
    if p.ring.p:
        return dict(p.terms)
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    terms = {e: int(c * den) for e, c in p.terms.items()}
    return _strip_int(terms)


def _lead(terms: dict, keyf) -> tuple:
    return max(terms, key=keyf)


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _mono_mul(terms: dict, shift: tuple, scalar: int, p: int) -> dict:
    if p:
        return {
            tuple(x + s for x, s in zip(e, shift)): (c * scalar) % p
            for e, c in terms.items()
        }
    return {
        tuple(x + s for x, s in zip(e, shift)): c * scalar
        for e, c in terms.items()
    }


def _add_into(dst: dict, src: dict, p: int):
    for e, c in src.items():
        s = dst.get(e, 0) + c
        if p:
            s %= p
        if s == 0:
            dst.pop(e, None)
        else:
            dst[e] = s


class _Rev:
    """Wraps an order key so heapq's min-heap pops the largest monomial."""

    __slots__ = ("key", "exp")

    def __init__(self, key, exp):
        self.key = key
        self.exp = exp

    def __lt__(self, other):
        return self.key > other.key


class _Reducer:
    """A basis element prepared for division: leading data plus the tail."""

    __slots__ = ("lt", "lc", "tail", "support")

    def __init__(self, terms: dict, keyf):
        self.lt = _lead(terms, keyf)
        self.lc = terms[self.lt]
        self.tail = {e: c for e, c in terms.items() if e != self.lt}
        self.support = tuple(i for i, x in enumerate(self.lt) if x)

    def full(self) -> dict:
        d = dict(self.tail)
        d[self.lt] = self.lc
        return d


def _reduce(terms: dict, reducers: list, keyf, p: int, budget: _Budget,
            track_multiplier: bool = False):
    """Full multivariate division of `terms` by `reducers`.

    Returns (remainder, multiplier): over Q the invariant is
    multiplier * input = (ideal combination) + remainder, with integer
    coefficients throughout; over GF(p) multiplier is always 1.
    """
    work = dict(terms)
    remainder: dict = {}
    mult = 1
    heap = [_Rev(keyf(e), e) for e in work]
    heapq.heapify(heap)
    steps_since_strip = 0
    while heap:
        top = heapq.heappop(heap)
        e = top.exp
        c = work.get(e)
        if not c:
            continue
        hit = None
        for red in reducers:
            lt = red.lt
            ok = True
            for i in red.support:
                if e[i] < lt[i]:
                    ok = False
                    break
            if ok:
                hit = red
                break
        if hit is None:
            del work[e]
            remainder[e] = c
            continue
        budget.tick()
        del work[e]
        if p:
            scalar = (-c * pow(hit.lc, p - 2, p)) % p
            grew = _mono_mul(hit.tail, tuple(a - b for a, b in zip(e, hit.lt)), scalar, p)
        else:
            g = gcd(c, hit.lc)
            lam = abs(hit.lc) // g
            mu = c // g if hit.lc > 0 else -(c // g)
            if lam != 1:
                for k in list(work):
                    work[k] *= lam
                for k in list(remainder):
                    remainder[k] *= lam
                mult *= lam
            grew = _mono_mul(hit.tail, tuple(a - b for a, b in zip(e, hit.lt)), -mu, 0)
        new_exps = [k for k in grew if k not in work]
        _add_into(work, grew, p)
        for k in new_exps:
            if k in work:
                heapq.heappush(heap, _Rev(keyf(k), k))
        steps_since_strip += 1
        if not p and steps_since_strip >= 32:
            steps_since_strip = 0
            g = gcd(gcd(_content(work), _content(remainder)), mult)
            if g > 1:
                work = {k: v // g for k, v in work.items()}
                remainder = {k: v // g for k, v in remainder.items()}
                mult //= g
    if not p and remainder and not track_multiplier:
        remainder = _strip_int(remainder)
        mult = 1
    return remainder, mult


def _normalize(terms: dict, p: int) -> dict:
    """Canonical scaling: monic over GF(p); primitive, positive-leading over Z."""
    if not terms:
        return terms
    if p:
        keyf = grevlex.keyfunc(None)  # key ignores the ring
        lc = terms[_lead(terms, keyf)]
        inv = pow(lc, p - 2, p)
        return {e: (c * inv) % p for e, c in terms.items()}
    terms = _strip_int(terms)
    keyf = grevlex.keyfunc(None)
    if terms[_lead(terms, keyf)] < 0:
        terms = {e: -c for e, c in terms.items()}
    return terms


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder = grevlex) -> Poly:
    """The S-polynomial of f and g in the given order (exact coefficients)."""
    if f.ring != g.ring:
        raise ValueError("polynomials live in different rings")
    ring = f.ring
    keyf = order.keyfunc(ring)
    tf, tg = _to_int_terms(f), _to_int_terms(g)
    if not tf or not tg:
        raise ValueError("S-polynomial of zero")
    lf, lg = _lead(tf, keyf), _lead(tg, keyf)
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    p = ring.p
    cf, cg = tf[lf], tg[lg]
    if p:
        a = _mono_mul(tf, tuple(x - y for x, y in zip(lcm, lf)), cg, p)
        b = _mono_mul(tg, tuple(x - y for x, y in zip(lcm, lg)), cf, p)
    else:
        gg = gcd(cf, cg)
        a = _mono_mul(tf, tuple(x - y for x, y in zip(lcm, lf)), cg // gg, 0)
        b = _mono_mul(tg, tuple(x - y for x, y in zip(lcm, lg)), cf // gg, 0)
    out = dict(a)
    _add_into(out, {e: (-c) % p if p else -c for e, c in b.items()}, p)
    return _poly_from_int(ring, out)


def _poly_from_int(ring: Ring, terms: dict) -> Poly:
    if ring.p:
        return Poly(ring, dict(terms))
    return Poly(ring, {e: Fraction(c) for e, c in terms.items()})


# ---------------------------------------------------------------------------
# Buchberger with Gebauer-Moeller pair pruning


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis; elements are canonically scaled and sorted."""

    ring: Ring
    order: MonomialOrder
    polys: tuple

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def is_unit_ideal(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].total_degree() == 0 and bool(self.polys[0])

    def leading_exponents(self) -> tuple:
        keyf = self.order.keyfunc(self.ring)
        return tuple(_lead(p.terms, keyf) for p in self.polys if not p.is_zero())


def _lcm_exp(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def groebner(gens: Iterable[Poly], order: MonomialOrder = grevlex,
             budget: int = DEFAULT_BUDGET) -> GroebnerBasis:
    """Compute the reduced Groebner basis of the ideal generated by `gens`."""
    gens = [g for g in gens if isinstance(g, Poly)]
    if not gens:
        raise ValueError("need at least one generator (possibly zero)")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators live in different rings")
    keyf = order.keyfunc(ring)
    p = ring.p
    bud = _Budget(budget)

    basis: list[_Reducer] = []   # grows; never shrinks during the loop
    pairs: list = []             # heap of (lcm_key, i, j)

    def add_poly(terms: dict):
        """Gebauer-Moeller update for one new basis element."""
        terms = _normalize(terms, p)
        h = _Reducer(terms, keyf)
        hidx = len(basis)
        # candidate new pairs, filtered by the M criterion among themselves
        cand = []
        for i, g in enumerate(basis):
            cand.append((i, _lcm_exp(h.lt, g.lt)))
        kept = []
        for i, l in cand:
            dominated = False
            for j, l2 in cand:
                if j == i:
                    continue
                if l2 != l and _divides(l2, l):
                    dominated = True
                    break
                if l2 == l and j < i and any(k == j for k, _ in kept):
                    dominated = True
                    break
            if not dominated:
                kept.append((i, l))
        # Buchberger's coprimality criterion
        kept = [(i, l) for i, l in kept if not _coprime(h.lt, basis[i].lt)]
        # filter old pairs via the new leading term
        survivors = []
        for entry in pairs:
            _, i, j, l = entry
            if _divides(h.lt, l) and _lcm_exp(basis[i].lt, h.lt) != l \
                    and _lcm_exp(basis[j].lt, h.lt) != l:
                continue
            survivors.append(entry)
        pairs.clear()
        pairs.extend(survivors)
        heapq.heapify(pairs)
        for i, l in kept:
            heapq.heappush(pairs, (keyf(l), i, hidx, l))
        basis.append(h)

    for g in gens:
        if g.is_zero():
            continue
        red, _ = _reduce(_to_int_terms(g), basis, keyf, p, bud)
        if red:
            add_poly(red)
    if not basis:
        return GroebnerBasis(ring, order, (ring.zero(),))

    while pairs:
        _, i, j, l = heapq.heappop(pairs)
        f, g = basis[i], basis[j]
        # chain criterion could apply here too; the update filter is enough
        sf = _mono_mul(f.full(), tuple(a - b for a, b in zip(l, f.lt)), g.lc, p)
        sg_scalar = f.lc
        if not p:
            gg = gcd(f.lc, g.lc)
            sf = {e: c // gg for e, c in sf.items()}
            sg_scalar = f.lc // gg
        sg = _mono_mul(g.full(), tuple(a - b for a, b in zip(l, g.lt)), sg_scalar, p)
        spoly = dict(sf)
        _add_into(spoly, {e: (-c) % p if p else -c for e, c in sg.items()}, p)
        if not spoly:
            continue
        red, _ = _reduce(spoly, basis, keyf, p, bud)
        if red:
            add_poly(red)

    # minimalize: drop elements whose leading term another leading term divides
    keep = []
    for i, g in enumerate(basis):
        redundant = False
        for j, h in enumerate(basis):
            if i == j:
                continue
            if _divides(h.lt, g.lt) and (h.lt != g.lt or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(g)
    # autoreduce tails
    final = []
    for i, g in enumerate(keep):
        others = [h for j, h in enumerate(keep) if j != i]
        red, _ = _reduce(g.full(), others, keyf, p, bud)
        final.append(_normalize(red, p))
    final.sort(key=lambda t: keyf(_lead(t, keyf)))
    return GroebnerBasis(ring, order, tuple(_poly_from_int(ring, t) for t in final))


def _as_basis(gens, order: MonomialOrder, budget: int) -> GroebnerBasis:
    if isinstance(gens, GroebnerBasis):
        return gens
    return groebner(gens, order, budget)


def normal_form(poly: Poly, gb, order: MonomialOrder = grevlex,
                budget: int = DEFAULT_BUDGET) -> Poly:
    """The canonical remainder of `poly` on division by a Groebner basis."""
    gb = _as_basis(gb, order, budget)
    if poly.ring != gb.ring:
        raise ValueError("polynomial and basis live in different rings")
    keyf = gb.order.keyfunc(gb.ring)
    p = gb.ring.p
    reducers = [_Reducer(_to_int_terms(g), keyf) for g in gb.polys if not g.is_zero()]
    bud = _Budget(budget)
    if p:
        red, _ = _reduce(dict(poly.terms), reducers, keyf, p, bud)
        return Poly(gb.ring, red)
    den = 1
    for c in poly.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    int_terms = {e: int(c * den) for e, c in poly.terms.items()}
    red, mult = _reduce(int_terms, reducers, keyf, 0, bud, track_multiplier=True)
    scale = Fraction(1, mult * den)
    return Poly(gb.ring, {e: c * scale for e, c in red.items()})


def contains(gens, poly: Poly, order: MonomialOrder = grevlex,
             budget: int = DEFAULT_BUDGET) -> bool:
    """Ideal membership: does `poly` reduce to zero modulo the ideal?"""
    return normal_form(poly, _as_basis(gens, order, budget), order, budget).is_zero()


def ideal_equal(gens_a, gens_b, order: MonomialOrder = grevlex,
                budget: int = DEFAULT_BUDGET) -> bool:
    """Equality of ideals via equality of reduced Groebner bases."""
    a = _as_basis(gens_a, order, budget)
    b = _as_basis(gens_b, order, budget)
    if a.ring != b.ring:
        raise ValueError("ideals live in different rings")
    return set(a.polys) == set(b.polys)


def eliminate(gens, drop: Iterable[str], budget: int = DEFAULT_BUDGET) -> list:
    """Generators of the elimination ideal obtained by dropping the named
    variables: the basis elements of a block-order basis that avoid them.
    The returned polynomials still live in the original ring."""
    drop = list(drop)
    gens = list(gens.polys) if isinstance(gens, GroebnerBasis) else list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    ring = gens[0].ring
    idx = {ring.index(n) for n in drop}
    gb = groebner(gens, block(drop), budget)
    out = []
    for g in gb.polys:
        if all(all(e[i] == 0 for i in idx) for e in g.terms):
            out.append(g)
    return out


def radical_member(gens, poly: Poly, budget: int = DEFAULT_BUDGET) -> bool:
    """Rabinowitsch test: poly lies in the radical iff adding 1 - y*poly
    (fresh variable y) makes the ideal the whole ring."""
    gens = list(gens.polys) if isinstance(gens, GroebnerBasis) else list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    ring = gens[0].ring
    fresh = "radaux"
    while ring.has(fresh):
        fresh += "0"
    big = make_ring(list(ring.names) + [fresh], field=ring.p)
    lift = {}
    lifted = [substitute(g, lift, target=big) for g in gens]
    y = big.var(fresh)
    p_lift = substitute(poly, lift, target=big)
    lifted.append(big.one() - y * p_lift)
    gb = groebner(lifted, grevlex, budget)
    return gb.is_unit_ideal()


def dim(gens, order: MonomialOrder = grevlex, budget: int = DEFAULT_BUDGET) -> int:
    """Dimension of the affine vanishing set: the maximum size of a variable
    subset meeting the support of no leading term.  Returns -1 when the ideal
    is the whole ring (empty set)."""
    gb = _as_basis(gens, order, budget)
    if gb.is_unit_ideal():
        return -1
    n = gb.ring.nvars
    supports = []
    for e in gb.leading_exponents():
        supports.append(frozenset(i for i, x in enumerate(e) if x))
    supports = [s for s in supports if s]
    best = 0

    def extend(start: int, chosen: frozenset):
        nonlocal best
        if len(chosen) + (n - start) <= best:
            return
        if start == n:
            best = max(best, len(chosen))
            return
        trial = chosen | {start}
        if not any(s <= trial for s in supports):
            extend(start + 1, trial)
        extend(start + 1, chosen)

    extend(0, frozenset())
    return best
