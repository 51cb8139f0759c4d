"""Named verification checks C1-C14 with structured, reproducible reports.

Each check is a pure function of its configuration: the same (check, family,
d, prime, seed, budget) always produces the same report, byte for byte,
except for the elapsed-time field.  C1-C13 form the default suite; C14 is a
long-running stretch computation that only runs when named explicitly.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from pathlib import Path

from . import catalog
from .groebner import (BudgetExceeded, DEFAULT_BUDGET, groebner, normal_form,
                       radical_member)
from .rings import (Poly, PolyMatrix, diff, make_ring, matrix_minor,
                    parse_poly, substitute, truncate, weighted_parts)
from .rings import eval as poly_eval
from .singular import (classify_cA, quadratic_rank, quotient_types_equivalent,
                       reid_tai, singular_dim)
from .toric import (CyclicQuotientType, chamber_scan, chart_quotients,
                    crossing_type, wall_map)

DP_DS = (7, 6, 5, 4)
DIV_DS = (4, 3, 2)
DP_FAMILIES = (501, 512, 550, 872)

CHECK_IDS = tuple(f"C{i}" for i in range(1, 15))

_PER_FAMILY = ("C7", "C9", "C10")
_PER_DP_FAMILY = ("C11", "C13")
_PER_D = {"C8": ("Dp", DP_DS), "C12": ("Div", DIV_DS)}

_C14_DEFAULT_PRIME = 32003

_CATALOGUE = (
    ("C1", "minor-ideal-equality",
     "the ideal of all twenty 3x3 minors of the 3x6 matrix equals the ideal "
     "of the eight tabulated ones"),
    ("C2", "minors-vanish-on-rank-one-locus",
     "every tabulated 3x3 minor reduces to zero against the 2x2 minor ideal"),
    ("C3", "parametrization-annihilates-minors",
     "the exceptional parametrization sends all eight tabulated minors to "
     "zero identically"),
    ("C4", "gradient-nonzero-at-witness",
     "the key quintic vanishes at the tabulated witness point but its "
     "gradient does not"),
    ("C5", "chart-transition-roundtrip",
     "chart transition functions compose to the identity in both directions "
     "after clearing denominators"),
    ("C6", "unprojection-eliminates-linearly",
     "the unprojection equation is unit-linear in the extra coordinate on "
     "each chart that carries one"),
    ("C7", "stage-one-chamber-scan",
     "the first-stage weight matrix yields three chambers, four ray "
     "quotients, and the expected first wall map"),
    ("C8", "stage-two-dp-scan",
     "the second-stage Dp matrix shows the fibration fiber weights and the "
     "flip wall signed weights at the given d"),
    ("C9", "blowup-chart-quotient-type",
     "section substitution and linear elimination reduce the distinguished "
     "chart to a 1/(d+1)(1,1,d) quotient"),
    ("C10", "terminal-quotient-charts",
     "age bounds certify terminal quotient singularities on every chart "
     "dataset and on 1/(d+1)(1,1,d)"),
    ("C11", "flipped-germ-classification",
     "the singular point on the flipped chart slice is an ordinary "
     "compound-A point (an ordinary double point for family 872)"),
    ("C12", "stage-two-div-scan",
     "the second-stage Div matrix shows the final quotient weights, the "
     "exceptional fiber weights, and the conic image curve"),
    ("C13", "del-pezzo-fiber-relation",
     "a generic fiber reduces to a single sextic relation in coordinates of "
     "weights (1,1,2,3)"),
    ("C14", "rank-one-radical-containment",
     "stretch: modular reduction of the 45 products against the 4x4 minor "
     "ideal, radical membership, and the singular-locus dimension"),
)


class ConfigError(ValueError):
    """A malformed check configuration: unknown id, bad prime, missing family."""


class DegenerateDraw(RuntimeError):
    """A random draw hit a degenerate locus; the caller may reseed."""


class _Inapplicable(Exception):
    """The configuration is valid but outside the check's mathematical scope."""


@dataclass(frozen=True)
class CheckConfig:
    check: str
    family: int | None = None
    d: int | None = None
    prime: int = 0
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    output: str | None = None


@dataclass
class Assertion:
    anchor: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    check: str
    verdict: str
    mode: str
    family: int | None
    seed: int
    elapsed_ms: int
    assertions: list

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "verdict": self.verdict,
            "mode": self.mode,
            "family": self.family,
            "seed": self.seed,
            "elapsed_ms": self.elapsed_ms,
            "assertions": [
                {"anchor": a.anchor, "ok": a.ok, "detail": a.detail}
                for a in self.assertions
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def list_checks() -> list:
    """The stable check catalogue as (id, anchor, description) triples."""
    return [tuple(row) for row in _CATALOGUE]


# ---------------------------------------------------------------------------
# configuration plumbing


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


def _effective_prime(cfg: CheckConfig) -> int:
    if cfg.check not in CHECK_IDS:
        raise ConfigError(f"unknown check {cfg.check!r}; expected C1..C14")
    p = cfg.prime
    if p == 0 and cfg.check == "C14":
        p = _C14_DEFAULT_PRIME
    if p:
        # sampled coefficients are fractions with |num| <= 50 and den <= 50,
        # so any odd prime above 100 keeps them distinct and invertible
        if p <= 100 or not _is_prime(p):
            raise ConfigError(
                "prime must be 0 (exact) or an odd prime above 100")
    if cfg.budget <= 0:
        raise ConfigError("budget must be a positive step count")
    if not isinstance(cfg.seed, int) or isinstance(cfg.seed, bool) or cfg.seed < 0:
        raise ConfigError("seed must be a nonnegative integer")
    return p


def _family_required(cfg: CheckConfig):
    if cfg.family is None:
        raise ConfigError(
            f"{cfg.check} needs a family id, one of {catalog.FAMILY_IDS}")
    try:
        return catalog.family(cfg.family)
    except KeyError:
        raise ConfigError(
            f"unknown family {cfg.family}; known ids: {catalog.FAMILY_IDS}"
        ) from None


def _resolve_d(cfg: CheckConfig, kind: str, allowed: tuple) -> int:
    if cfg.d is not None:
        if cfg.d not in allowed:
            raise ConfigError(f"{cfg.check} runs at d in {allowed}, got {cfg.d}")
        return cfg.d
    if cfg.family is not None:
        rec = _family_required(cfg)
        if rec.kind != kind:
            raise ConfigError(
                f"{cfg.check} scans {kind} data; family {rec.id} is {rec.kind}")
        return rec.d
    raise ConfigError(f"{cfg.check} needs --d (one of {allowed}) or a {kind} family")


def expand_configs(selector: str, family: int | None = None, d: int | None = None,
                   prime: int = 0, seed: int = 0,
                   budget: int = DEFAULT_BUDGET) -> tuple:
    """Expand a check name (or 'all') into concrete configurations.

    'all' covers C1-C13 over every applicable instance; C14 only expands
    when named explicitly.  A family or d argument narrows parameterized
    checks to the matching instances; under 'all', checks that cannot match
    are dropped rather than erroring.
    """
    if selector == "all":
        ids, strict = [c for c in CHECK_IDS if c != "C14"], False
    elif selector in CHECK_IDS:
        ids, strict = [selector], True
    else:
        raise ConfigError(f"unknown check {selector!r}; expected C1..C14 or 'all'")
    if family is not None and family not in catalog.FAMILY_IDS:
        raise ConfigError(
            f"unknown family {family}; known ids: {catalog.FAMILY_IDS}")

    out = []
    for cid in ids:
        base = {"prime": prime, "seed": seed, "budget": budget}
        if cid in _PER_FAMILY:
            fams = [family] if family is not None else list(catalog.FAMILY_IDS)
            if d is not None:
                fams = [f for f in fams if catalog.family(f).d == d]
                if not fams and strict:
                    raise ConfigError(f"no family matches d = {d}")
            out += [CheckConfig(cid, family=f, **base) for f in fams]
        elif cid in _PER_DP_FAMILY:
            if family is not None:
                if catalog.family(family).kind != "Dp" and not strict:
                    continue
                fams = [family]
            else:
                fams = list(DP_FAMILIES)
            if d is not None:
                fams = [f for f in fams
                        if catalog.family(f).kind == "Dp"
                        and catalog.family(f).d == d]
                if not fams and strict:
                    raise ConfigError(f"no Dp family matches d = {d}")
            out += [CheckConfig(cid, family=f, **base) for f in fams]
        elif cid in _PER_D:
            kind, allowed = _PER_D[cid]
            if d is not None:
                if d not in allowed:
                    if strict:
                        raise ConfigError(
                            f"{cid} runs at d in {allowed}, got {d}")
                    continue
                ds = [d]
            elif family is not None:
                rec = catalog.family(family)
                if rec.kind != kind:
                    if strict:
                        raise ConfigError(
                            f"{cid} scans {kind} data; family {family} is {rec.kind}")
                    continue
                ds = [rec.d]
            else:
                ds = list(allowed)
            out += [CheckConfig(cid, d=dd, **base) for dd in ds]
        else:
            out.append(CheckConfig(cid, **base))
    return tuple(out)


class _Run:
    """Mutable assertion collector handed to each check implementation."""

    def __init__(self, cfg: CheckConfig, prime: int):
        self.cfg = cfg
        self.prime = prime
        self.assertions: list[Assertion] = []

    def note(self, anchor: str, ok, detail: str = "") -> bool:
        self.assertions.append(Assertion(anchor, bool(ok), detail))
        return bool(ok)


def run_check(cfg: CheckConfig) -> VerificationReport:
    """Execute one configured check and return its report."""
    prime = _effective_prime(cfg)
    start = time.perf_counter()
    run = _Run(cfg, prime)
    forced = None
    try:
        _IMPLEMENTATIONS[cfg.check](run)
    except BudgetExceeded as exc:
        run.note("budget", True, f"stopped early: {exc}")
        forced = "budget_exceeded"
    except _Inapplicable as exc:
        run.note("applicability", True, str(exc))
        forced = "inapplicable"
    if any(not a.ok for a in run.assertions):
        verdict = "fail"
    else:
        verdict = forced or "pass"
    report = VerificationReport(
        check=cfg.check,
        verdict=verdict,
        mode="exact" if prime == 0 else f"modular({prime})",
        family=cfg.family,
        seed=cfg.seed,
        elapsed_ms=int((time.perf_counter() - start) * 1000),
        assertions=run.assertions,
    )
    if cfg.output:
        Path(cfg.output).write_text(report.to_json() + "\n", encoding="utf-8")
    return report


def run_suite(configs, workers: int = 1) -> list:
    """Run a batch of configurations, optionally on a thread pool.

    Each check is internally sequential and deterministic; the result list
    always follows the input order.
    """
    configs = list(configs)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_check, configs))
    return [run_check(cfg) for cfg in configs]


# ---------------------------------------------------------------------------
# shared machinery


def _var_coefficient(p: Poly, name: str, k: int = 1) -> Poly:
    """The polynomial coefficient of name**k (terms of exact degree k)."""
    i = p.ring.index(name)
    out = {}
    for e, c in p.terms.items():
        if e[i] == k:
            ne = list(e)
            ne[i] = 0
            out[tuple(ne)] = c
    return Poly(p.ring, out)


def _solve_series(eq: Poly, name: str, cap: int, cap_weights=None,
                  max_iter: int = 80) -> Poly:
    """Solve eq = 0 for `name` as a truncated series in the other variables.

    Needs the plain `name` monomial to carry a nonzero scalar; iterates
    x -> x - eq(x)/a0 until the image stabilizes under the cap.
    """
    ring = eq.ring
    a0 = eq.coefficient_of({name: 1})
    if not a0:
        raise DegenerateDraw(f"no invertible linear coefficient on {name}")
    inv = ring.coeff_inv(a0)
    x = ring.zero()
    for _ in range(max_iter):
        val = substitute(eq, {name: x}, target=ring, cap=cap,
                         cap_weights=cap_weights)
        if val.is_zero():
            return x
        nx = x - val.scale(inv)
        if nx == x:
            raise DegenerateDraw(f"solving for {name} stalled")
        x = nx
    raise DegenerateDraw(f"solving for {name} did not settle in {max_iter} passes")


class _Eliminator:
    """Iterated implicit-function elimination with back-substitution.

    Images are kept closed: every stored image only mentions variables that
    are still free, so applying `reduce` once rewrites any polynomial into
    the current chart coordinates.
    """

    def __init__(self, ring, cap: int, cap_weights=None):
        self.ring = ring
        self.cap = cap
        self.cap_weights = cap_weights
        self.images: dict[str, Poly] = {}
        self.chain: list[str] = []

    def reduce(self, p: Poly) -> Poly:
        return substitute(p, self.images, target=self.ring, cap=self.cap,
                          cap_weights=self.cap_weights)

    def solve(self, label: str, equation: Poly, name: str) -> Poly:
        img = _solve_series(self.reduce(equation), name, self.cap,
                            self.cap_weights)
        step = {name: img}
        for known in list(self.images):
            self.images[known] = substitute(
                self.images[known], step, target=self.ring, cap=self.cap,
                cap_weights=self.cap_weights)
        self.images[name] = img
        self.chain.append(f"{name}<-{label}")
        return img


def _chart_frees(kind: str, chart: str) -> tuple:
    """Free coordinates of a second-stage chart, in matrix column order."""
    coords = ("w",) + catalog.cone_names(kind) + catalog.S_VARIABLES
    gone = set(catalog.chart_eliminated(chart)) | {chart}
    uv = catalog.chart_unprojection_variable(chart)
    if uv:
        gone.add(uv)
    return tuple(n for n in coords if n not in gone)


def _well_formed_type(r: int, names, weights) -> CyclicQuotientType:
    """Normalize a cyclic quotient: drop zero weights mod r, divide out the
    common factor of r and the remaining weights."""
    pairs = [(n, w % r) for n, w in zip(names, weights)]
    pairs = [(n, w) for n, w in pairs if w]
    g = r
    for _, w in pairs:
        g = gcd(g, w)
    if g > 1:
        r //= g
        pairs = [(n, w // g) for n, w in pairs]
    return CyclicQuotientType(r, tuple(n for n, _ in pairs),
                              tuple(w for _, w in pairs))


def _draw_fraction(tag: str, seed: int) -> Fraction:
    digest = hashlib.sha256(f"{tag}:{seed}".encode()).digest()
    rng = random.Random(int.from_bytes(digest[:8], "big"))
    num = 0
    while num == 0:
        num = rng.randint(-50, 50)
    return Fraction(num, rng.randint(1, 50))


def _uni_trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _uni_coeffs(p: Poly, name: str) -> list:
    """Coefficient list of a univariate polynomial, constant term first."""
    if p.is_zero():
        return []
    i = p.ring.index(name)
    out = [p.ring.coeff(0)] * (max(e[i] for e in p.terms) + 1)
    for e, c in p.terms.items():
        if any(k and j != i for j, k in enumerate(e)):
            raise ValueError(f"polynomial is not univariate in {name}")
        out[e[i]] = c
    return _uni_trim(out)


def _uni_mod(a: list, b: list, p: int) -> list:
    a = _uni_trim(list(a))
    db = len(b) - 1
    inv = pow(b[-1], -1, p) if p else Fraction(1) / b[-1]
    while a and len(a) - 1 >= db:
        q = a[-1] * inv
        if p:
            q %= p
        shift = len(a) - 1 - db
        for j in range(db + 1):
            a[shift + j] = a[shift + j] - q * b[j]
            if p:
                a[shift + j] %= p
        a = _uni_trim(a)
    return a


def _uni_gcd(a: list, b: list, p: int) -> list:
    a = _uni_trim(list(a))
    b = _uni_trim(list(b))
    while b:
        a, b = b, _uni_mod(a, b, p)
    return a


# ---------------------------------------------------------------------------
# C1-C6: the key variety


def _check_c1(run: _Run) -> None:
    p, budget = run.prime, run.cfg.budget
    M = catalog.matrix_M(field=p)
    listed = {t: catalog.minor_D(t, field=p) for t in catalog.MINOR_TRIPLES}
    minors = {}
    for trio in combinations(range(6), 3):
        key = "".join(str(c + 1) for c in trio)
        minors[key] = matrix_minor(M, (0, 1, 2), trio)
    match = all(listed[t] == minors[t] for t in listed)
    run.note("minors-match-table", match,
             "each tabulated generator is literally one of the twenty minors, "
             "so containment in the full minor ideal is syntactic")
    gb = groebner(list(listed.values()), budget=budget)
    run.note("generator-basis-computed", True, f"{len(gb)} basis elements")
    bad = []
    for key in sorted(minors):
        if key in listed:
            continue
        rem = normal_form(minors[key], gb, budget=budget)
        if not rem.is_zero():
            bad.append(f"minor {key} leaves {rem.render()}")
    run.note("extra-minors-reduce-to-zero", not bad,
             "; ".join(bad) if bad else "all twelve untabulated minors reduce to zero")
    run.note("minor-ideal-equality", match and not bad,
             "one containment is syntactic, the other certified by reduction")


def _check_c2(run: _Run) -> None:
    p, budget = run.prime, run.cfg.budget
    M = catalog.matrix_M(field=p)
    gens = [matrix_minor(M, rows, cols)
            for rows in combinations(range(3), 2)
            for cols in combinations(range(6), 2)]
    gb = groebner(gens, budget=budget)
    run.note("rank-one-basis-computed", True,
             f"{len(gens)} generators, {len(gb)} basis elements")
    for t in catalog.MINOR_TRIPLES:
        rem = normal_form(catalog.minor_D(t, field=p), gb, budget=budget)
        run.note(f"minor-{t}-reduces-to-zero", rem.is_zero(),
                 "" if rem.is_zero() else f"remainder {rem.render()}")


def _check_c3(run: _Run) -> None:
    p = run.prime
    names = ("p1", "p2", "p3", "p4", "s2", "t1") + catalog.T_VARIABLES
    ring = make_ring(names, field=p)
    s2, t1 = ring.var("s2"), ring.var("t1")
    p1, p2, p3, p4 = (ring.var(n) for n in ("p1", "p2", "p3", "p4"))
    images = {
        "t2": s2 ** 3 + s2 * t1,
        "u1": p1 * s2 + p2 * s2 ** 2,
        "u2": p3 * s2 + p4 * s2 ** 2,
    }
    for t in catalog.MINOR_TRIPLES:
        img = substitute(catalog.minor_D(t, field=p), images, target=ring)
        run.note(f"minor-{t}-vanishes", img.is_zero(),
                 "" if img.is_zero() else f"image {img.render()}")
    img = substitute(catalog.F_bar_Pi(field=p), images, target=ring)
    run.note("quintic-vanishes", img.is_zero(),
             "the parametrized locus lies inside the quintic hypersurface"
             if img.is_zero() else f"image {img.render()}")


def _check_c4(run: _Run) -> None:
    F = catalog.F_bar_Pi(field=run.prime)
    point = {n: 0 for n in F.ring.names}
    point.update({"p1": 1, "p4": 1, "u1": 1, "u2": 1, "t2": 1})
    run.note("witness-on-quintic", not poly_eval(F, point),
             "p1 = p4 = u1 = u2 = t2 = 1, all other coordinates 0")
    nonzero = {}
    for n in F.ring.names:
        v = poly_eval(diff(F, n), point)
        if v:
            nonzero[n] = v
    run.note("gradient-nonzero-at-witness", bool(nonzero),
             ", ".join(f"d/d{n} = {v}" for n, v in nonzero.items())
             if nonzero else "every partial derivative vanishes at the point")


def _check_c5(run: _Run) -> None:
    p = run.prime
    tr = catalog.transition_ring(field=p)
    fwd = catalog.transition_functions("to_s123", field=p)
    bwd = catalog.transition_functions("to_s135", field=p)
    ell = tr.var("ell")

    def compose(outer, inner):
        # entries of `outer` are polynomials in variables that `inner`
        # rewrites as num / ell**k; clear powers of ell term by term
        images = {name: num for name, (num, _) in inner.items()}
        results = {}
        for lhs, (bnum, bk) in outer.items():
            spread = []
            for expo, coeff in bnum.terms.items():
                extra = sum(k * expo[tr.index(name)]
                            for name, (_, k) in inner.items())
                spread.append((expo, coeff, extra))
            top = max((x for _, _, x in spread), default=0)
            total = tr.zero()
            for expo, coeff, extra in spread:
                part = substitute(Poly(tr, {expo: coeff}), images, target=tr)
                total = total + part * ell ** (top - extra)
            results[lhs] = (total, bk + top)
        return results

    for anchor, outer, inner in (
        ("roundtrip-via-s123-chart", bwd, fwd),
        ("roundtrip-via-s135-chart", fwd, bwd),
    ):
        got = compose(outer, inner)
        bad = [lhs for lhs, (num, k) in sorted(got.items())
               if num != tr.var(lhs) * ell ** k]
        run.note(anchor, not bad,
                 f"mismatched: {', '.join(bad)}" if bad else
                 f"identity on {', '.join(sorted(got))}")


def _check_c6(run: _Run) -> None:
    p = run.prime
    ring = catalog.chart_ring(field=p)
    I = catalog.unprojection_I(field=p)
    lin = _var_coefficient(I, "t135", 1)
    run.note("unprojection-coefficient-is-chart-variable",
             I.degree_in("t135") == 1 and lin == ring.var("s135"),
             "the only t135 term of the unprojection equation is t135*s135")
    for chart in ("s135", "s124", "s123"):
        tvar = catalog.chart_unprojection_variable(chart)
        rels = catalog.chart_equations(chart, field=p)
        sc = ring.var(chart)
        maxk = max(rel.power for rel in rels)
        images = {rel.var: rel.numerator * sc ** (maxk - rel.power)
                  for rel in rels}
        assigned = [ring.index(v) for v in images]
        total = ring.zero()
        clean = True
        for expo, coeff in I.terms.items():
            hits = sum(expo[i] for i in assigned)
            part = substitute(Poly(ring, {expo: coeff}), images, target=ring)
            if hits == 0:
                part = part * sc ** maxk
            elif hits > 1:
                clean = False
            total = total + part
        run.note(f"{chart}-clearing-single-denominator", clean,
                 "every term of the unprojection equation meets at most one "
                 "chart relation")
        run.note(f"{chart}-unprojection-linear", total.degree_in(tvar) == 1,
                 f"degree in {tvar} is {total.degree_in(tvar)}")
        co = total.coefficient_of({tvar: 1, chart: maxk + 1})
        tcoef = _var_coefficient(total, tvar, 1)
        unit = bool(co) and tcoef == ring.const(co) * sc ** (maxk + 1)
        run.note(f"{chart}-unprojection-unit-coefficient", unit,
                 f"coefficient {co} * {chart}^{maxk + 1}; solving for {tvar} "
                 "reproduces the remaining terms exactly")
    run.note("s246-has-no-extra-coordinate",
             catalog.chart_unprojection_variable("s246") is None,
             "the fourth chart carries no unprojection coordinate")


# ---------------------------------------------------------------------------
# C7, C8, C12: wall-and-chamber scans


def _check_c7(run: _Run) -> None:
    rec = _family_required(run.cfg)
    kind, d = rec.kind, rec.d
    W = catalog.weight_matrix_by_kind("one", kind, d)
    scan = chamber_scan(W)
    cone = set(catalog.cone_names(kind))
    dirs = [r.direction for r in scan.rays]
    want = [(0, -1), (d + 1, -1), (d + 2, -1), (d + 3, -1), (1, 0)]
    run.note("stage-one-ray-order", dirs == want, f"ray directions {dirs}")
    run.note("stage-one-ray-quotients",
             len(scan.rays) == 5
             and [set(r.columns) for r in scan.rays]
             == [{"w"}, {"s1"}, {"s2"}, {"s3"}, cone],
             "rays carry w | s1 | s2 | s3 | the cone coordinates")
    run.note("stage-one-chamber-count",
             scan.chambers == ((0, 1), (1, 2), (2, 3), (3, 4)),
             f"chambers between consecutive rays: {scan.chambers}")
    cr = crossing_type(W, 1)
    run.note("first-wall-divisorial",
             cr.kind == "divisorial" and cr.divisor_column == "w",
             f"crossing kind {cr.kind}; contracted coordinate w")
    wts = catalog.ambient_weights(kind, d)
    run.note("first-wall-denominator", wts["s1"] == d + 1,
             f"w(s1) = {wts['s1']} with d = {d}")
    wm = wall_map(W, 1, 1)
    want_exp = {"s1": Fraction(0), "s2": Fraction(1, d + 1),
                "s3": Fraction(2, d + 1)}
    for v in cone:
        want_exp[v] = Fraction(wts[v], d + 1)
    run.note("first-wall-map-exponents",
             wm.eliminated == "w" and wm.exponents == want_exp,
             "v -> v * w^(w(v)/w(s1)) on every coordinate")


def _check_c8(run: _Run) -> None:
    d = _resolve_d(run.cfg, "Dp", DP_DS)
    W = catalog.weight_matrix_by_kind("two", "Dp", d)
    scan = chamber_scan(W)
    last = len(scan.rays) - 1
    cols = set(scan.rays[last].columns)
    cr = crossing_type(W, last)
    run.note(f"d{d}-fibration-wall",
             cols == {"s123", "s135"} and cr.kind == "fibration"
             and W.column("s123") == W.column("s135"),
             f"last ray carries {sorted(cols)} with equal columns; "
             f"crossing kind {cr.kind}")
    run.note(f"d{d}-base-coordinate-weight", cr.phi["s123"] == 0,
             "the functional vanishes on the base pair")
    fiber = sorted(cr.phi[n] for n in _chart_frees("Dp", "s135")
                   if n != "s123")
    want = sorted([1, 1, 2, 2, 2, 3, 3, 4, 4, 5, 6, d - 3, d - 2, d - 1])
    run.note(f"d{d}-fiber-weights", fiber == want,
             f"computed {fiber}"
             + ("" if fiber == want else f"; tabulated {want}"))
    flip = scan.ray_of("s124")
    fcols = set(scan.rays[flip].columns)
    fc = crossing_type(W, flip)
    run.note(f"d{d}-flip-wall",
             fcols == {"s124", "s136"} and fc.kind == "flip",
             f"ray of s124 carries {sorted(fcols)}; crossing kind {fc.kind}")
    frees = [n for n in _chart_frees("Dp", "s124")
             if n not in ("s123", "s125")]
    pos = sorted(fc.phi[n] for n in frees)
    want_pos = sorted([1, 1, 2, 2, 3, 4, 4, 5, 6, 6, d - 3, d - 1, d])
    run.note(f"d{d}-flip-positive-weights",
             pos == want_pos and all(fc.phi[n] > 0 for n in frees),
             f"computed {pos}"
             + ("" if pos == want_pos else f"; tabulated {want_pos}"))
    neg = {n: fc.phi[n] for n in ("s123", "s125")}
    run.note(f"d{d}-flip-negative-weights",
             neg == {"s123": -2, "s125": -1},
             f"phi(s123) = {neg['s123']}, phi(s125) = {neg['s125']}")


def _check_c12(run: _Run) -> None:
    d = _resolve_d(run.cfg, "Div", DIV_DS)
    p = run.prime
    W = catalog.weight_matrix_by_kind("two", "Div", d)
    scan = chamber_scan(W)
    idx = scan.ray_of("s124")
    cols = set(scan.rays[idx].columns)
    cr = crossing_type(W, idx)
    run.note(f"d{d}-divisorial-wall",
             cols == {"s124", "s125", "s135"} and cr.kind == "divisorial"
             and cr.divisor_column == "s123",
             f"ray carries {sorted(cols)}; crossing kind {cr.kind}; "
             "contracted coordinate s123")
    wm = wall_map(W, idx - 1, idx)
    wts = catalog.ambient_weights("Div", d)
    want_exp = {"w": Fraction(3 * d + 3), "s246": Fraction(3),
                "s245": Fraction(2), "s126": Fraction(1),
                "s136": Fraction(1), "s124": Fraction(0),
                "s125": Fraction(0), "s135": Fraction(0)}
    for v in catalog.cone_names("Div"):
        want_exp[v] = Fraction(wts[v])
    run.note(f"d{d}-contraction-exponents",
             wm.eliminated == "s123" and wm.exponents == want_exp,
             "v -> v * s123^w(v), with the first-stage weights on the cone")
    c0, c1 = W.column("s123")
    psi = {n: W.column(n)[0] - c0 * W.column(n)[1] for n in W.names}
    quot = sorted(psi[n] for n in _chart_frees("Div", "s123"))
    want_q = sorted([1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, d - 1, d, d])
    run.note(f"d{d}-final-quotient-weights", c1 == 1 and quot == want_q,
             f"computed {quot}"
             + ("" if quot == want_q else f"; tabulated {want_q}"))
    frees = _chart_frees("Div", "s124")
    pos = sorted(cr.phi[n] for n in frees if cr.phi[n] > 0)
    zero = [n for n in frees if cr.phi[n] == 0]
    neg = [n for n in frees if cr.phi[n] < 0]
    want_f = sorted([1, 1, 2, 2, 2, 3, 3, 3, 4, d - 1, d, d + 1])
    run.note(f"d{d}-fiber-weights",
             pos == want_f and zero == ["s125"] and neg == ["s123"],
             f"positives {pos}; zero on {zero}; negative on {neg}")
    ring = catalog.chart_ring(field=p)
    rel = next(r for r in catalog.chart_equations("s124", field=p)
               if r.var == "s135")
    at0 = substitute(rel.numerator, {"s123": ring.zero()}, target=ring)
    run.note(f"d{d}-conic-image",
             rel.power == 2 and at0 == parse_poly(ring, "s124*s125^2"),
             "at s123 = 0 the s135 relation reads s124^2*s135 = s124*s125^2, "
             "so the image satisfies s124*s135 = s125^2")


# ---------------------------------------------------------------------------
# C9: the blow-up chart at the distinguished point


def _check_c9(run: _Run) -> None:
    rec = _family_required(run.cfg)
    p, d, kind = run.prime, rec.d, rec.kind
    cap = 2 * (d + 1)
    inst = catalog.sections(rec.id, seed=run.cfg.seed, field=p)
    off = []
    for tpl in rec.templates:
        parts = weighted_parts(inst.assignments[tpl.target], 0)
        if len(parts) != 1 or parts.min_weight != tpl.weight:
            off.append(tpl.target)
    run.note("section-tables-homogeneous", not off,
             f"inhomogeneous: {off}" if off else
             f"{len(rec.templates)} sections, each of its tabulated weight")

    names = tuple(n for n in catalog.ambient_names(kind) if n != "s1")
    ring = make_ring(names, field=p)
    consumed = {t for t in inst.assignments if t != "t2"}
    images = {"s1": ring.one(), "w": ring.one()}
    for t in consumed:
        images[t] = substitute(inst.assignments[t], {}, target=ring)
    eqs = []
    for F in catalog.equations_F(field=p):
        use = {k: v for k, v in images.items() if F.ring.has(k)}
        eqs.append(substitute(F, use, target=ring, cap=cap))
    run.note("equations-vanish-at-origin",
             all(not eq.constant_term() for eq in eqs),
             "all nine equations pass through the chart origin")

    elim = _Eliminator(ring, cap)
    try:
        for label, var in (("F1", "u1"), ("F2", "u2"), ("F7", "s3"),
                           ("F8", "t2")):
            elim.solve(label, eqs[int(label[1:]) - 1], var)
        tpl_t2 = substitute(inst.assignments["t2"], {}, target=ring)
        spent = consumed | set(elim.images)
        pick = None
        for v in names:
            if v not in spent and tpl_t2.coefficient_of({v: 1}):
                pick = v
                break
        if pick is None:
            run.note("elimination-chain", False,
                     "the t2 section relation offers no variable to eliminate")
            return
        elim.solve("section-t2", elim.images["t2"] - elim.reduce(tpl_t2), pick)
    except DegenerateDraw as exc:
        run.note("elimination-chain", False, str(exc))
        return
    run.note("elimination-chain", True, ", ".join(elim.chain))

    leftovers = [f"F{k + 1}" for k in (2, 3, 4, 5, 8)
                 if not elim.reduce(eqs[k]).is_zero()]
    run.note("residual-equations-vanish", not leftovers,
             f"nonzero after elimination: {leftovers}" if leftovers else
             f"F3, F4, F5, F6 and F9 vanish up to total degree {cap}")

    spent = consumed | set(elim.images)
    left = [n for n in names if n not in spent]
    wts = catalog.ambient_weights(kind, d)
    ok = len(left) == 3
    if ok:
        t = CyclicQuotientType(
            d + 1, tuple(left), tuple(wts[n] % (d + 1) for n in left))
        ok = quotient_types_equivalent(t, d + 1, (1, 1, d))
        detail = f"chart coordinates {left} carry {t.render()}"
    else:
        detail = f"expected 3 residual coordinates, found {left}"
    run.note("quotient-type", ok, detail)


# ---------------------------------------------------------------------------
# C10: terminality of the quotient datasets


def _check_c10(run: _Run) -> None:
    rec = _family_required(run.cfg)
    W = catalog.weight_matrix("two", rec.id)
    cone = set(catalog.cone_names(rec.kind))
    for chart in catalog.CHART_NAMES:
        frees = _chart_frees(rec.kind, chart)
        lines, ok = [], True
        for v in frees:
            if v not in cone or W.column(v)[0] < 2:
                continue
            types = chart_quotients(W, 1, (chart, v))
            if len(types) != 1:
                ok = False
                lines.append(f"{v}: {len(types)} stabilizer factors")
                continue
            t = types[0]
            rest = [n for n in frees if n != v]
            norm = _well_formed_type(t.r, rest, [t.weight_of(n) for n in rest])
            if norm.r == 1:
                lines.append(f"{v}: 1/{t.r} acts trivially after normalization")
                continue
            rep = reid_tai(norm)
            if rep.verdict != "terminal":
                ok = False
                lines.append(f"{v}: {norm.render()} -> {rep.verdict} ({rep.reason})")
            else:
                lines.append(f"{v}: {norm.render()} terminal")
        run.note(f"{chart}-chart-terminal", ok, "; ".join(lines))
    t = CyclicQuotientType(rec.d + 1, ("x1", "x2", "x3"), (1, 1, rec.d))
    rep = reid_tai(t)
    run.note("blowup-quotient-terminal", rep.verdict == "terminal",
             f"{t.render()} -> {rep.verdict}")


# ---------------------------------------------------------------------------
# C11: the flipped germ on the s124 chart


_C11_AXIS_WEIGHTS = {501: (3, 2, 1, 1), 512: (3, 1, 1, 1), 550: (2, 1, 1, 1)}


def _c11_data(p: int):
    """Chart functions of the s124 chart on the slice s124 = s125 = 1."""
    slice_names = tuple(n for n in _chart_frees("Dp", "s124") if n != "s125")
    ring = make_ring(slice_names, field=p)
    unit = {"s124": ring.one(), "s125": ring.one()}
    fns = {}
    for rel in catalog.chart_equations("s124", field=p):
        if rel.var == "w":
            continue
        fns[rel.var] = substitute(rel.numerator, unit, target=ring)
    iring = make_ring(slice_names + ("t124",), field=p)
    sub = {"s124": iring.one(), "s125": iring.one()}
    for v in ("s135", "s136", "t1", "t2"):
        sub[v] = substitute(fns[v], {}, target=iring)
    full = substitute(catalog.unprojection_I(field=p), sub, target=iring)
    if full.degree_in("t124") != 1 or \
            _var_coefficient(full, "t124", 1) != iring.one():
        raise ValueError("unprojection equation is not unit-linear on the slice")
    fns["t124"] = substitute(iring.var("t124") - full, {}, target=ring)
    return ring, fns


def _c11_once(rec, ring, fns, seed: int, p: int) -> dict:
    d = rec.d
    cap = 8
    capw = tuple(0 if n == "s123" else 1 for n in ring.names)
    inst = catalog.sections(rec.id, seed=seed, field=p)
    tpl = {t: substitute(a, {"u1": fns["u1"], "u2": fns["u2"]}, target=ring)
           for t, a in inst.assignments.items()}

    elim = _Eliminator(ring, cap, capw)
    for t in (x.target for x in rec.templates):
        if ring.has(t):
            elim.solve(f"section-{t}", ring.var(t) - tpl[t], t)
    # the three chart relations each define one more chart coordinate, and
    # the last section relation is then the hypersurface germ itself
    for label, var in (("t1", "s245"), ("t2", "s246"), ("t124", "t126")):
        elim.solve(f"section-{label}", fns[label] - tpl[label], var)
    germ = [n for n in ring.names if n not in elim.images]
    f = elim.reduce(fns["p1"] - tpl["p1"])

    out = {"chain": ", ".join(elim.chain), "germ": germ}
    if len(germ) != 4 or "s123" not in germ or "p3" not in germ:
        raise DegenerateDraw(f"expected a four-coordinate germ, got {germ}")
    others = [v for v in germ if v != "s123"]
    zero_others = {v: ring.zero() for v in others}
    out["axis"] = substitute(f, zero_others, target=ring).is_zero()

    lins = []
    for v in others:
        cv = substitute(_var_coefficient(f, v, 1), zero_others, target=ring)
        lins.append(_uni_coeffs(cv, "s123"))
    g = _uni_gcd(_uni_gcd(lins[0], lins[1], p), lins[2], p)
    if len(g) != 2:
        raise DegenerateDraw(
            f"singular locus on the axis has gcd degree {len(g) - 1}")
    if p:
        c0 = (-g[0] * pow(g[1], -1, p)) % p
    else:
        c0 = -g[0] / g[1]
    out["point"] = f"s123 = {c0}"

    shift = {"s123": ring.const(c0) + ring.var("s123")}
    germ_poly = truncate(substitute(f, shift, target=ring), 8)
    out["centered"] = not germ_poly.constant_term() and all(
        not germ_poly.coefficient_of({v: 1}) for v in germ)

    if rec.id == 872:
        rank = quadratic_rank(germ_poly, tuple(germ))
        if rank != 4:
            raise DegenerateDraw(f"quadratic part has rank {rank}")
        out["split"] = "quadratic part nondegenerate on all four coordinates"
        out["verdict"] = "ordinary double point: quadratic part of rank 4"
        out["kind"] = "node"
    else:
        # split off the nondegenerate quadratic in the axis pair: both
        # partials vanish along a series section over the transverse pair,
        # and the germ restricted to that section is the transverse residue
        trans = tuple(v for v in others if v != "p3")
        split = _Eliminator(ring, 8)
        split.solve("d/ds123", diff(germ_poly, "s123"), "p3")
        split.solve("d/dp3", diff(germ_poly, "p3"), "s123")
        G = split.reduce(germ_poly)
        out["split"] = (f"critical section p3, s123 = series in {trans}; "
                        f"transverse residue has {len(G.terms)} terms")
        prepared = ring.var("p3") * ring.var("s123") + G
        weights = _C11_AXIS_WEIGHTS[rec.id]
        try:
            cls = classify_cA(prepared, ("p3", "s123"), trans, weights)
        except ValueError as exc:
            raise DegenerateDraw(str(exc)) from None
        if cls.verdict != "ordinary_cA":
            raise DegenerateDraw(f"{cls.verdict}: {cls.reason}")
        if cls.index != d - 3:
            raise DegenerateDraw(
                f"compound-A index {cls.index}, expected {d - 3}")
        out["verdict"] = (f"ordinary compound-A of index {cls.index} "
                          f"under axis weights {weights[:2]}")
        out["kind"] = f"cA{cls.index}"
    return out


def _check_c11(run: _Run) -> None:
    rec = _family_required(run.cfg)
    if rec.kind != "Dp":
        raise _Inapplicable(
            f"family {rec.id} has no flip wall in its second stage; "
            "this check covers the four Dp families")
    p = run.prime
    ring, fns = _c11_data(p)
    last = None
    for attempt in range(5):
        seed = run.cfg.seed + attempt
        try:
            out = _c11_once(rec, ring, fns, seed, p)
            break
        except DegenerateDraw as exc:
            last = str(exc)
            run.note(f"reseed-{attempt}", True,
                     f"seed {seed} degenerate ({exc}); drawing again")
    else:
        run.note("germ-classification", False,
                 f"five degenerate draws in a row; last: {last}")
        return
    run.note("slice-elimination", True,
             f"seed {seed}: {out['chain']}; germ coordinates {out['germ']}")
    run.note("axis-in-germ", out["axis"],
             "the germ vanishes identically along the s123 axis")
    run.note("unique-singular-point", True,
             f"the three linear coefficient polynomials share one root, "
             f"{out['point']}")
    run.note("germ-at-origin", out["centered"],
             "constant and linear parts vanish after recentering")
    run.note("axis-pair-splitting", True, out["split"])
    run.note("germ-classification", True, out["verdict"])


# ---------------------------------------------------------------------------
# C13: the generic del Pezzo fiber


def _check_c13(run: _Run) -> None:
    rec = _family_required(run.cfg)
    if rec.kind != "Dp":
        raise _Inapplicable(
            f"family {rec.id} has no del Pezzo fibration in its second "
            "stage; this check covers the four Dp families")
    p, d = run.prime, rec.d
    cap = 2 * (d + 1)
    W = catalog.weight_matrix("two", rec.id)
    c0, c1 = W.column("s123")
    phi = {n: W.column(n)[0] - c0 * W.column(n)[1] for n in W.names}
    slice_names = tuple(n for n in _chart_frees("Dp", "s135") if n != "s123")
    run.note("fiber-grading-positive",
             c1 == 1 and phi["s135"] == 0
             and all(phi[n] >= 1 for n in slice_names),
             "the residual grading vanishes on the base pair and is positive "
             "on every fiber coordinate")
    ring = make_ring(slice_names, field=p)
    I = catalog.unprojection_I(field=p)

    last = None
    for attempt in range(5):
        seed = run.cfg.seed + attempt
        lam = _draw_fraction(f"fiber:{rec.id}", seed)
        try:
            out = _c13_once(rec, ring, I, lam, seed, p, cap)
            break
        except DegenerateDraw as exc:
            last = str(exc)
            run.note(f"reseed-{attempt}", True,
                     f"seed {seed} degenerate ({exc}); drawing again")
    else:
        run.note("single-residual-relation", False,
                 f"five degenerate draws in a row; last: {last}")
        return

    run.note("slice-elimination", True,
             f"seed {seed}, fiber at s123 = {lam}: {out['chain']}")
    left = out["germ"]
    wts = sorted(phi[n] for n in left)
    f = out["residual"]
    run.note("single-residual-relation",
             len(left) == 4 and wts == [1, 1, 2, 3] and not f.is_zero(),
             f"coordinates {left} with weights {wts}")
    bad = {sum(e[ring.index(n)] * phi[n] for n in left) for e in f.terms}
    run.note("residual-weighted-degree-six", bad == {6},
             f"weighted degrees {sorted(bad)}; {len(f.terms)} terms")


def _c13_once(rec, ring, I: Poly, lam: Fraction, seed: int, p: int,
              cap: int) -> dict:
    base = {"s135": ring.one(), "s123": ring.const(lam)}
    fns = {}
    for rel in catalog.chart_equations("s135", field=p):
        if rel.var == "w":
            continue
        fns[rel.var] = substitute(rel.numerator, base, target=ring)
    iring = make_ring(ring.names + ("t135",), field=p)
    sub = {"s135": iring.one(), "s123": iring.const(lam)}
    for v in ("s124", "s126", "s245", "s246"):
        sub[v] = substitute(fns[v], {}, target=iring)
    full = substitute(I, sub, target=iring)
    if full.degree_in("t135") != 1 or \
            _var_coefficient(full, "t135", 1) != iring.one():
        raise DegenerateDraw("unprojection equation is not unit-linear here")
    fns["t135"] = substitute(iring.var("t135") - full, {}, target=ring)

    inst = catalog.sections(rec.id, seed=seed, field=p)
    tpl = {t: substitute(a, {"p3": fns["p3"], "u2": fns["u2"]}, target=ring)
           for t, a in inst.assignments.items()}
    elim = _Eliminator(ring, cap)
    for t in (x.target for x in rec.templates):
        if ring.has(t):
            elim.solve(f"section-{t}", ring.var(t) - tpl[t], t)
    elim.solve("section-p4", fns["p4"] - tpl["p4"], "u1")
    germ = [n for n in ring.names if n not in elim.images]
    residual = elim.reduce(fns["t135"] - tpl["t135"])
    if residual.is_zero():
        raise DegenerateDraw("the residual relation collapsed to zero")
    return {"chain": ", ".join(elim.chain), "germ": germ,
            "residual": residual}


# ---------------------------------------------------------------------------
# C14 (stretch): rank-one locus versus the quintic, modulo a prime


def _check_c14(run: _Run) -> None:
    p, budget = run.prime, run.cfg.budget
    flag = ("s1", "s2", "s3", "w")
    eqs = catalog.equations_F(field=p)
    fring = eqs[0].ring
    idx = [fring.index(v) for v in flag]
    linear = all(sum(e[i] for i in idx) == 1
                 for k in range(6) for e in eqs[k].terms)
    run.note("linear-in-flag-variables", linear,
             "the first six equations are linear in s1, s2, s3, w")
    if not linear:
        return
    mring = catalog.model_ring(field=p)
    rows = []
    rebuilt = True
    for k in range(6):
        row = [substitute(_var_coefficient(eqs[k], v, 1), {}, target=mring)
               for v in flag]
        back = fring.zero()
        for v, cp in zip(flag, row):
            back = back + substitute(cp, {}, target=fring) * fring.var(v)
        rebuilt = rebuilt and back == eqs[k]
        rows.append(tuple(row))
    run.note("coefficient-matrix-rebuild", rebuilt,
             "each equation equals the pairing of its coefficient row with "
             "(s1, s2, s3, w)")
    L = PolyMatrix(tuple(rows))
    minors4 = [matrix_minor(L, quad, (0, 1, 2, 3))
               for quad in combinations(range(6), 4)]
    gb = groebner(minors4, budget=budget)
    run.note("maximal-minor-basis", True,
             f"15 generators, {len(gb)} basis elements")
    M = catalog.matrix_M(field=p)
    Fbar = catalog.F_bar_Pi(field=p)
    bad = []
    for rpair in combinations(range(3), 2):
        for cpair in combinations(range(6), 2):
            m2 = substitute(matrix_minor(M, rpair, cpair), {}, target=mring)
            rem = normal_form(m2 * Fbar, gb, budget=budget)
            if not rem.is_zero():
                bad.append(f"rows {rpair} cols {cpair}")
    run.note("products-reduce-to-zero", not bad,
             f"nonzero remainders at {bad}" if bad else
             "all 45 products reduce to zero against the 4x4 minor ideal")
    run.note("radical-membership",
             radical_member(minors4, Fbar, budget=budget),
             "adjoining 1 - y * F to the minors generates the unit ideal")
    dim = singular_dim(Fbar, restrict={"p4": 1}, budget=budget)
    run.note("singular-locus-dimension", dim == 10,
             f"dimension {dim} inside the 14-dimensional chart, so "
             "codimension 3 in the 13-dimensional hypersurface")


_IMPLEMENTATIONS = {
    "C1": _check_c1, "C2": _check_c2, "C3": _check_c3, "C4": _check_c4,
    "C5": _check_c5, "C6": _check_c6, "C7": _check_c7, "C8": _check_c8,
    "C9": _check_c9, "C10": _check_c10, "C11": _check_c11, "C12": _check_c12,
    "C13": _check_c13, "C14": _check_c14,
}
