"""Smoke-check the bundled data before freezing checksums."""
from fractions import Fraction

from qfv import catalog as C
from qfv.rings import Poly, make_ring, parse_poly, substitute, weighted_parts


def raw_mono(ring, expo, coeff):
    return Poly(ring, {expo: coeff})

fails = []


def check(label, ok):
    print(("ok  " if ok else "FAIL"), label)
    if not ok:
        fails.append(label)


# 1. everything loads
M = C.matrix_M()
Ds = C.minors_D()
Fb = C.F_bar_Pi()
I = C.unprojection_I()
Fs = C.equations_F()
check("load: matrix/minors/quintic/I/F", True)
check("term counts F1..F9", [len(f.terms) for f in Fs] == [15, 15, 13, 13, 26, 26, 40, 43, 43])
check("M[3,1] == -p2", M.at(2, 0).render() == "-p2")

# 2. I with s_ijk -> D_ijk equals F_bar_Pi
ring = C.model_ring()
img = {("s" + t): substitute(C.minor_D(t), {}, target=ring) for t in C.MINOR_TRIPLES}
check("I(s->D) == F_bar_Pi", substitute(I, img, target=ring) == Fb)

# 3. I is linear in the s block
ok = all(sum(e[C.chart_ring().index(s)] for s in C.S_VARIABLES) == 1 for e in I.terms)
check("I linear in s block", ok)
check("coefficient of s246 in I is 1", I.coefficient_of({"s246": 1}) == 1)

# 4. F bi-homogeneity under both stage-one gradings
for kind, d in (("Dp", 7), ("Div", 4)):
    W = C.weight_matrix_by_kind("one", kind, d)
    names = C.F_VARIABLES
    g1 = tuple(W.column(n)[0] if n != "z" else 0 for n in names)  # z absent from F ring
    g2 = tuple(W.column(n)[1] for n in names)
    fr = make_ring(names, gradings=(g1, g2))
    for k, f in enumerate(Fs, 1):
        ff = substitute(f, {}, target=fr)
        h1 = len(weighted_parts(ff, 0)) == 1
        h2 = len(weighted_parts(ff, 1)) == 1
        if not (h1 and h2):
            check(f"F{k} bihomogeneous ({kind})", False)
            break
    else:
        check(f"F1..F9 bihomogeneous ({kind})", True)

# 5. chart relations: cleared forms bi-homogeneous under stage two
for kind, d in (("Dp", 7), ("Div", 4)):
    W2 = C.weight_matrix_by_kind("two", kind, d)
    names = C.chart_ring().names
    g1 = tuple(W2.column(n)[0] if n != "z" else 0 for n in names)
    g2 = tuple(W2.column(n)[1] for n in names)
    cr = make_ring(names, gradings=(g1, g2))
    bad = []
    for chart in C.CHART_NAMES:
        for rel in C.chart_equations(chart):
            g = substitute(rel.cleared(), {}, target=cr)
            if len(weighted_parts(g, 0)) != 1 or len(weighted_parts(g, 1)) != 1:
                bad.append((chart, rel.var))
    check(f"chart cleared relations bihomogeneous ({kind})", not bad or print(bad))

# 6. unprojection consistency on each chart carrying a t_ijk:
#    substitute the chart parametrization into I (cleared of denominators),
#    solve for the chart's t variable, residual must vanish.
for chart in ("s135", "s124", "s123"):
    tvar = C.chart_unprojection_variable(chart)
    rels = C.chart_equations(chart)
    ring = C.chart_ring()
    sc = ring.var(chart)
    # clear I by sc^2 (largest denominator power present)
    maxk = max(rel.power for rel in rels)
    img = {}
    for rel in rels:
        img[rel.var] = rel.numerator * sc ** (maxk - rel.power)
    # every other variable v maps to v * sc^maxk so the substitution of the
    # degree-1-in-s form I is homogeneous of denominator sc^maxk... I is linear
    # in s and has t-coefficients; safer: substitute into I * sc^maxk directly
    # by scaling only the assigned variables and multiplying unassigned s or t
    # coefficient terms accordingly.  Do it monomial by monomial.
    total = ring.zero()
    for expo, coeff in I.terms.items():
        mono = raw_mono(ring, expo, coeff)
        # degree of assigned vars in this monomial
        k = sum(expo[ring.index(v)] for v in img if ring.has(v))
        part = substitute(mono, img, target=ring)
        # each assigned var contributed numerator*sc^(maxk - power) = sc^maxk * value
        # so scale the others to keep the monomial at sc-power maxk exactly:
        # I is s-linear; each term has exactly one s var.  If the s var was
        # assigned, part already has sc^maxk; otherwise multiply by sc^maxk.
        # t-variable factors: tvar stays unassigned (we solve for it), other
        # t's and m-vars are chart coordinates (unassigned).
        if k == 0:
            part = part * sc ** maxk
        elif k > 1:
            raise SystemExit(f"unexpected multi-assigned monomial on {chart}")
        total = total + part
    # total = (coefficient of tvar) * tvar + rest ; coefficient should be sc^(maxk+1)
    co = total.coefficient_of({tvar: 1, chart: maxk + 1})
    check(f"{chart}: I clears with unit t-coefficient", co != 0)
    # residual after solving tvar: total with tvar -> -(rest)/(co * sc^(maxk+1)):
    # equivalently assert total restricted to tvar-degree<=1 and exactness:
    # substitute tvar = solved value symbolically: solved*co*sc^(maxk+1) = -rest
    # Check: total has tvar-degree 1 and the tvar coefficient poly is exactly
    # co * sc^(maxk+1).
    ok = True
    tv = ring.index(tvar)
    tcoef = ring.zero()
    rest = ring.zero()
    for expo, coeff in total.terms.items():
        if expo[tv] == 0:
            rest = rest + raw_mono(ring, expo, coeff)
        elif expo[tv] == 1:
            e = list(expo)
            e[tv] = 0
            tcoef = tcoef + raw_mono(ring, tuple(e), coeff)
        else:
            ok = False
    expect = ring.const(co) * sc ** (maxk + 1)
    check(f"{chart}: I linear in {tvar} with coefficient sc^{maxk + 1}", ok and tcoef == expect)

# s246 chart: no t variable should be available
check("s246 chart has no unprojection variable", C.chart_unprojection_variable("s246") is None)

# 7. transitions roundtrip (clear denominators by hand)
tr = C.transition_ring()
fwd = C.transition_functions("to_s123")
bwd = C.transition_functions("to_s135")
ell = tr.var("ell")
# compose: start from s135-side functions, push through to_s123 then to_s135
# identity on (t1, t2, u1, q125, q136):
# build images of r-variables and p4 from fwd as (num, k); bwd entries are
# polynomials in those. Clear ell powers: substitute r = num/ell^k means
# replacing r by num and tracking ell powers; do it with a helper on each bwd
# numerator  (all fwd powers are 0 or 1).
def compose(bnum, bk):
    # returns (poly, k) such that value = poly / ell^k
    # substitute each r-var/p4 occurrence; since powers differ per variable,
    # clear to common denominator ell^(total degree in fwd vars with k=1)
    # simple approach: homogenize manually monomial by monomial
    out_num = tr.zero()
    max_extra = 0
    monos = []
    for expo, coeff in bnum.terms.items():
        extra = 0
        for name, (num, k) in fwd.items():
            extra += k * expo[tr.index(name)]
        monos.append((expo, coeff, extra))
        max_extra = max(max_extra, extra)
    for expo, coeff, extra in monos:
        img = {name: num for name, (num, k) in fwd.items()}
        part = substitute(raw_mono(tr, expo, coeff), img, target=tr)
        part = part * ell ** (max_extra - extra)
        out_num = out_num + part
    return out_num, bk + max_extra


ok = True
for lhs, (bnum, bk) in bwd.items():
    num, k = compose(bnum, bk)
    target = tr.var(lhs) * ell ** k
    if num != target:
        ok = False
        print("  roundtrip mismatch:", lhs)
check("transitions roundtrip to_s123 then to_s135", ok)

# reverse direction
def compose2(bnum, bk):
    out_num = tr.zero()
    max_extra = 0
    monos = []
    for expo, coeff in bnum.terms.items():
        extra = 0
        for name, (num, k) in bwd.items():
            extra += k * expo[tr.index(name)]
        monos.append((expo, coeff, extra))
        max_extra = max(max_extra, extra)
    for expo, coeff, extra in monos:
        img = {name: num for name, (num, k) in bwd.items()}
        part = substitute(raw_mono(tr, expo, coeff), img, target=tr)
        part = part * ell ** (max_extra - extra)
        out_num = out_num + part
    return out_num, bk + max_extra


ok = True
for lhs, (bnum, bk) in fwd.items():
    num, k = compose2(bnum, bk)
    target = tr.var(lhs) * ell ** k
    if num != target:
        ok = False
        print("  roundtrip mismatch:", lhs)
check("transitions roundtrip to_s135 then to_s123", ok)

# 8. families and sections
for fid in C.FAMILY_IDS:
    rec = C.family(fid)
    n_expected = 11 if rec.kind == "Dp" else 10
    ok = len(rec.templates) == n_expected
    # homogeneity of each template in the symbolic ring
    sring = C.symbolic_ring(fid)
    wts = C.ambient_weights(rec.kind, rec.d)
    for tpl in rec.templates:
        p = tpl.poly(sring)
        parts = weighted_parts(p, 0)
        if list(parts) != [tpl.weight] or wts[tpl.target] != tpl.weight:
            ok = False
            print("  inhomogeneous:", fid, tpl.target)
    # embedding weights match ambient weights
    for name, w in rec.embedding:
        if wts[name] != w:
            ok = False
            print("  embedding weight mismatch:", fid, name)
    # survivors = ambient minus targets
    if set(rec.embedding_names) | set(rec.section_targets) != set(C.ambient_names(rec.kind)):
        ok = False
        print("  embedding+targets != ambient:", fid)
    check(f"family {fid}: table shape, homogeneity, embedding", ok)

inst = C.sections(501, seed=0)
inst2 = C.sections(501, seed=0)
inst3 = C.sections(501, seed=1)
check("sections deterministic in seed", inst.values == inst2.values and inst.values != inst3.values)
vals = {c: Fraction(1) for c in C.family(501).coefficient_names}
expl = C.sections(501, explicit=vals)
check("explicit sections", expl.values["a1"] == 1 and expl.seed is None)
modp = C.sections(501, seed=0, field=32003)
check("modular sections", modp.ring.p == 32003)

# 9. weight matrix spot values
check("stage2 Dp d=7 s246 column", C.weight_matrix("two", 501).column("s246") == (24, 1))
check("stage2 Div d=4 s123 column", C.weight_matrix("two", 577).column("s123") == (14, 1))
W1 = C.weight_matrix("one", 501)
check("w(s2) = w(s1)+1", W1.column("s2")[0] == W1.column("s1")[0] + 1
      and W1.column("s3")[0] == W1.column("s1")[0] + 2)

print()
print("FAILURES:", fails if fails else "none")
