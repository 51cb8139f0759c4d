"""Terminality and singularity classification for cyclic quotients and germs.

reid_tai applies the age inequality to a finite cyclic quotient type after a
well-formedness screen: types with a zero weight, a kernel element, or a
quasi-reflection are reported inapplicable rather than judged, since the
plain criterion presumes a faithful action free of reflections.

classify_cA decides whether a four-variable hypersurface germ x1*x2 + g is an
ordinary compound-A singularity of its weight: the three hypotheses on g are
checked one by one, and the verdict reduces to squarefreeness of the leading
binary form in the two weight-one variables.

The six numbered predicates at the bottom record the conditions under which
a divisorial contraction to a curve is simple of type (2,1).  They evaluate
explicit data computed elsewhere; no geometric conclusion is drawn here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from qfv import groebner as gb
from qfv.rings import Poly, Ring, diff, eval as poly_eval, make_ring, substitute, weighted_parts
from qfv.toric import CyclicQuotientType

__all__ = [
    "ReidTaiReport",
    "reid_tai",
    "jacobian_rank",
    "singular_dim",
    "CAClassification",
    "classify_cA",
    "quadratic_rank",
    "quotient_types_equivalent",
    "contraction_hypothesis_1",
    "contraction_hypothesis_2",
    "contraction_hypothesis_3",
    "contraction_hypothesis_4",
    "contraction_hypothesis_5",
    "contraction_hypothesis_6",
]


# ---------------------------------------------------------------------------
# Reid-Tai


@dataclass(frozen=True)
class ReidTaiReport:
    verdict: str          # terminal | canonical_not_terminal | not_canonical | inapplicable
    r: int
    weights: tuple        # reduced mod r
    min_age: Fraction | None
    witness: int | None   # group element k realizing min_age
    reason: str | None = None


def reid_tai(t: CyclicQuotientType) -> ReidTaiReport:
    """Age test for 1/r(a_1,...,a_n): terminal when every nontrivial element
    has age strictly above one.

    The screen refuses (verdict "inapplicable") when a weight vanishes mod r,
    when some element acts trivially (non-faithful action), or when some
    element moves only one coordinate (a quasi-reflection)."""
    r = t.r
    if r < 1:
        raise ValueError(f"order must be positive, got {r}")
    weights = tuple(a % r for a in t.weights)
    if r == 1:
        return ReidTaiReport("terminal", 1, weights, None, None, "trivial group")
    if any(a == 0 for a in weights):
        return ReidTaiReport("inapplicable", r, weights, None, None,
                             "a weight is divisible by the order")
    min_age = None
    witness = None
    for k in range(1, r):
        residues = [(k * a) % r for a in weights]
        nonzero = sum(1 for x in residues if x)
        if nonzero == 0:
            return ReidTaiReport("inapplicable", r, weights, None, k,
                                 "the action has a kernel element")
        if nonzero == 1:
            return ReidTaiReport("inapplicable", r, weights, None, k,
                                 "the action contains a quasi-reflection")
        age = Fraction(sum(residues), r)
        if min_age is None or age < min_age:
            min_age = age
            witness = k
    if min_age > 1:
        verdict = "terminal"
    elif min_age == 1:
        verdict = "canonical_not_terminal"
    else:
        verdict = "not_canonical"
    return ReidTaiReport(verdict, r, weights, min_age, witness)


def quotient_types_equivalent(t: CyclicQuotientType, r: int,
                              weights: Sequence[int]) -> bool:
    """Is t the type 1/r(weights) up to the choice of group generator?
    Types agree when some unit u mod r carries one weight multiset onto the
    other."""
    if t.r != r:
        return False
    mine = sorted(a % r for a in t.weights)
    target = sorted(a % r for a in weights)
    if len(mine) != len(target):
        return False
    for u in range(1, r):
        if gcd(u, r) != 1:
            continue
        if sorted((u * a) % r for a in mine) == target:
            return True
    return r == 1 and mine == target


# ---------------------------------------------------------------------------
# Jacobian rank and singular locus dimension


def _field_rank(rows: list, p: int) -> int:
    """Rank of a matrix given as list of coefficient lists (Fractions or ints
    mod p), by Gaussian elimination."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while col < ncols and rank < len(rows):
        sel = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                sel = i
                break
        if sel is None:
            col += 1
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        inv = pow(rows[rank][col], p - 2, p) if p else Fraction(1) / rows[rank][col]
        rows[rank] = [(v * inv) % p if p else v * inv for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                if p:
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
                else:
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def jacobian_rank(polys: Sequence[Poly], point: Mapping) -> int:
    """Exact rank of the Jacobian matrix of the system at the given point."""
    polys = list(polys)
    if not polys:
        return 0
    ring = polys[0].ring
    for q in polys:
        if q.ring != ring:
            raise ValueError("system spans several rings")
    rows = []
    for q in polys:
        rows.append([poly_eval(diff(q, v), point) for v in ring.names])
    return _field_rank(rows, ring.p)


def singular_dim(hyp: Poly, restrict: Mapping | None = None,
                 order=gb.grevlex, budget: int = gb.DEFAULT_BUDGET) -> int:
    """Dimension of the singular locus of the hypersurface {hyp = 0}, after
    optionally fixing some variables to constants.  Returns -1 when the
    singular locus is empty; raises BudgetExceeded when the basis computation
    runs out of budget."""
    ring = hyp.ring
    if restrict:
        keep = [n for n in ring.names if n not in restrict]
        if not keep:
            raise ValueError("restriction fixes every variable")
        sub_ring = make_ring(keep, field=ring.p)
        images = {name: sub_ring.const(val) for name, val in restrict.items()}
        hyp = substitute(hyp, images, target=sub_ring)
        ring = sub_ring
    if hyp.is_zero():
        raise ValueError("the hypersurface vanished identically")
    gens = [hyp] + [diff(hyp, v) for v in ring.names]
    gens = [g for g in gens if not g.is_zero()] or [hyp]
    return gb.dim(gens, order, budget)


# ---------------------------------------------------------------------------
# compound-A classifier


@dataclass(frozen=True)
class CAClassification:
    verdict: str              # "ordinary_cA" | "hypothesis_failed" | "not_squarefree"
    r: int
    leading_form: Poly | None
    index: int | None = None  # r - 1 when ordinary
    reason: str | None = None

    def render(self) -> str:
        if self.verdict == "ordinary_cA":
            return f"ordinary cA_{self.index}"
        if self.verdict == "not_squarefree":
            return "leading binary form not squarefree"
        return f"hypothesis failed: {self.reason}"


def _univariate_coeffs(form: Poly, z: str, w: str) -> list:
    """Coefficient list c[i] of z^i w^(deg-i) for a binary form in z, w."""
    ring = form.ring
    iz, iw = ring.index(z), ring.index(w)
    deg = max(e[iz] + e[iw] for e in form.terms)
    coeffs = [ring.coeff(0)] * (deg + 1)
    for e, c in form.terms.items():
        coeffs[e[iz]] = c
    return coeffs


def _poly_gcd_degree(a: list, b: list, p: int) -> int:
    """Degree of gcd of two univariate coefficient lists over the field."""

    def trim(u):
        while u and not u[-1]:
            u.pop()
        return u

    a, b = trim(list(a)), trim(list(b))
    while b:
        # a mod b
        inv = pow(b[-1], p - 2, p) if p else Fraction(1) / b[-1]
        while len(a) >= len(b) and a:
            f = a[-1] * inv
            if p:
                f %= p
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + shift] = (a[i + shift] - f * c) % p if p else a[i + shift] - f * c
            trim(a)
        a, b = b, a
    return len(a) - 1 if a else -1


def _binary_form_squarefree(form: Poly, z: str, w: str, p: int) -> bool:
    coeffs = _univariate_coeffs(form, z, w)
    deg = len(coeffs) - 1
    lo = next(i for i, c in enumerate(coeffs) if c)      # multiplicity of w... of z
    hi = next(i for i in range(deg, -1, -1) if coeffs[i])
    z_mult = lo           # z^lo divides the form
    w_mult = deg - hi
    if z_mult >= 2 or w_mult >= 2:
        return False
    reduced = coeffs[lo:hi + 1]
    if len(reduced) == 1:
        return True  # a single linear-power z or w factor only
    deriv = [(i + 1) * reduced[i + 1] for i in range(len(reduced) - 1)]
    if p:
        deriv = [c % p for c in deriv]
    return _poly_gcd_degree(reduced, deriv, p) <= 0


def classify_cA(f: Poly, axis_vars: Sequence[str], transverse_vars: Sequence[str],
                weights: Sequence[int]) -> CAClassification:
    """Classify the germ f = x1*x2 + g at the origin, where the four named
    variables carry weights (r1, r2, 1, 1) and r = r1 + r2.

    Hypotheses checked, in order:
      (1) r1 >= r2 >= 0;
      (2) the total-degree order of g is at least 3 (at least 2 when r = 2,
          where the quadratic leading form is the whole story);
      (3) g has minimal weight exactly r, attained only on monomials in the
          two weight-one variables.
    When all hold, the verdict is ordinary exactly when the weight-r binary
    form is squarefree.  A missing or non-unit x1*x2 monomial is a usage
    error, not a verdict."""
    x1, x2 = axis_vars
    z, w = transverse_vars
    if len(weights) != 4 or weights[2] != 1 or weights[3] != 1:
        raise ValueError("weights must be (r1, r2, 1, 1)")
    r1, r2 = int(weights[0]), int(weights[1])
    r = r1 + r2
    ring = f.ring
    c = f.coefficient_of({x1: 1, x2: 1})
    if not c:
        raise ValueError("germ lacks the product monomial of the two axis variables")
    f = f * ring.coeff_inv(c)
    g = f - ring.monomial({x1: 1, x2: 1})

    extra = g.variables() - {x1, x2, z, w}
    if extra:
        return CAClassification("hypothesis_failed", r, None,
                                reason=f"residual involves other variables: {sorted(extra)}")
    if not (r1 >= r2 >= 0):
        return CAClassification("hypothesis_failed", r, None,
                                reason="axis weights not in decreasing nonnegative order")
    if r < 2:
        return CAClassification("hypothesis_failed", r, None,
                                reason="total weight below 2")
    if g.is_zero():
        return CAClassification("hypothesis_failed", r, None,
                                reason="residual vanishes; no leading form")
    order_bound = 2 if r == 2 else 3
    ord_g = min(sum(e) for e in g.terms)
    if ord_g < order_bound:
        return CAClassification("hypothesis_failed", r, None,
                                reason=f"residual has order {ord_g} < {order_bound}")
    wvec = [0] * ring.nvars
    for name, wt in zip((x1, x2, z, w), (r1, r2, 1, 1)):
        wvec[ring.index(name)] = wt
    buckets = {}
    for e, cf in g.terms.items():
        wt = sum(a * b for a, b in zip(wvec, e))
        buckets.setdefault(wt, {})[e] = cf
    wmin = min(buckets)
    if wmin != r:
        return CAClassification("hypothesis_failed", r, None,
                                reason=f"residual has weight {wmin}, expected {r}")
    g_r = Poly(ring, buckets[wmin])
    iz, iw = ring.index(z), ring.index(w)
    for e in g_r.terms:
        if e[iz] + e[iw] != r:
            return CAClassification(
                "hypothesis_failed", r, g_r,
                reason="weight-r part meets the axis variables")
    if _binary_form_squarefree(g_r, z, w, ring.p):
        return CAClassification("ordinary_cA", r, g_r, index=r - 1)
    return CAClassification("not_squarefree", r, g_r)


def quadratic_rank(f: Poly, variables: Sequence[str]) -> int:
    """Rank of the quadratic part of f in the named variables, via the
    symmetric coefficient matrix (characteristic 0 or odd)."""
    ring = f.ring
    idx = [ring.index(v) for v in variables]
    n = len(idx)
    half = Fraction(1, 2) if ring.p == 0 else pow(2, ring.p - 2, ring.p)
    H = [[ring.coeff(0)] * n for _ in range(n)]
    for e, c in f.terms.items():
        if sum(e) != 2:
            continue
        active = [(k, e[i]) for k, i in enumerate(idx) if e[i]]
        if sum(m for _, m in active) != 2:
            continue
        if len(active) == 1:
            k = active[0][0]
            H[k][k] = (H[k][k] + c) % ring.p if ring.p else H[k][k] + c
        else:
            (k1, _), (k2, _) = active
            v = c * half
            if ring.p:
                v %= ring.p
            H[k1][k2] = (H[k1][k2] + v) % ring.p if ring.p else H[k1][k2] + v
            H[k2][k1] = H[k1][k2]
    return _field_rank(H, ring.p)


# ---------------------------------------------------------------------------
# simple (2,1)-contraction hypotheses, as predicates over explicit data


def contraction_hypothesis_1(target: CAClassification) -> bool:
    """The target point is Gorenstein terminal: an ordinary compound-A
    hypersurface point qualifies."""
    return target.verdict == "ordinary_cA"


def contraction_hypothesis_2(curve_jacobian_rank: int, ambient_vars: int = 4) -> bool:
    """The contracted curve is smooth at the point: its defining functions
    have independent linear parts cutting a smooth curve germ."""
    return curve_jacobian_rank == ambient_vars - 1


def contraction_hypothesis_3(off_fiber_singular_dim: int,
                             generic_fiber_is_line: bool) -> bool:
    """The source is smooth away from the central fiber and the nearby
    fibers are single rational curves."""
    return off_fiber_singular_dim <= -1 and generic_fiber_is_line


def contraction_hypothesis_4(divisor_is_normal: bool) -> bool:
    """The exceptional divisor is a normal surface (recorded as supplied)."""
    return divisor_is_normal


def contraction_hypothesis_5(quotient_at_p: CyclicQuotientType,
                             singular_point_count: int,
                             fiber_component_count: int) -> bool:
    """The central fiber has exactly one singular point, of type
    1/r(1,1,r-1) with r at least 2, and exactly r components through it."""
    r = quotient_at_p.r
    return (singular_point_count == 1 and r >= 2
            and fiber_component_count == r
            and quotient_types_equivalent(quotient_at_p, r, (1, 1, r - 1)))


def contraction_hypothesis_6(restriction_degree: int, r: int,
                             meets_vertex: bool,
                             distinct_intersection_points: int) -> bool:
    """On the weighted blow-up at p, the strict transform of the divisor cuts
    the exceptional surface in a degree r-1 rational curve meeting the fiber
    components at r distinct points; for r >= 3 it must miss the vertex."""
    if restriction_degree != r - 1:
        return False
    if distinct_intersection_points != r:
        return False
    return r == 2 or not meets_vertex
