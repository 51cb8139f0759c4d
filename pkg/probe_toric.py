"""Scratch probe for the toric check procedures (deleted before commit)."""
from fractions import Fraction
from math import gcd

from qfv import catalog
from qfv.toric import chamber_scan, crossing_type, wall_map, chart_quotients, CyclicQuotientType
from qfv.singular import reid_tai

DP_DS = (7, 6, 5, 4)
DIV_DS = (4, 3, 2)


def chart_frees(kind, chart):
    names = list(catalog.stage1_names(kind))
    # stage-2 coordinate list: w + cone + s-block
    cone = [n for n in catalog.cone_names(kind)]
    coords = ["w"] + cone + list(catalog.S_VARIABLES)
    gone = set(catalog.chart_eliminated(chart)) | {chart}
    uv = catalog.chart_unprojection_variable(chart)
    if uv:
        gone.add(uv)
    return [n for n in coords if n not in gone]


def normalize(r, weights):
    ws = [w % r for w in weights]
    ws = [w for w in ws if w]
    g = r
    for w in ws:
        g = gcd(g, w)
    if g > 1:
        r //= g
        ws = [w // g for w in ws]
    return r, ws


def probe_c10():
    print("=== C10 datasets ===")
    bad = 0
    for fid in catalog.FAMILY_IDS:
        fam = catalog.family(fid)
        W = catalog.weight_matrix("two", fid)
        cone = set(catalog.cone_names(fam.kind))
        for chart in catalog.CHART_NAMES:
            frees = chart_frees(fam.kind, chart)
            for v in frees:
                if v not in cone:
                    continue
                r0 = W.column(v)[0]
                if r0 < 2:
                    continue
                types = chart_quotients(W, 1, (chart, v))
                assert len(types) == 1, (fid, chart, v, types)
                t = types[0]
                rest = [n for n in frees if n != v]
                ws = [t.weight_of(n) for n in rest]
                r, wn = normalize(t.r, ws)
                if r == 1:
                    verdict = "trivial"
                else:
                    rep = reid_tai(CyclicQuotientType(r, tuple(f"x{i}" for i in range(len(wn))), tuple(wn)))
                    verdict = rep.verdict
                tag = ""
                if verdict not in ("terminal", "trivial"):
                    bad += 1
                    tag = "  <-- PROBLEM"
                stripped = len(ws) - len([w for w in ws if w % t.r])
                print(f"{fid} {chart:5s} v={v:5s} r={t.r:2d} zeros={stripped} norm=1/{r}{tuple(wn)} -> {verdict}{tag}")
    print("problem count:", bad)


def probe_c7():
    print("=== C7 stage-1 ===")
    for fid in (501, 577):
        fam = catalog.family(fid)
        W = catalog.weight_matrix("one", fid)
        scan = chamber_scan(W)
        print(fid, "rays:", [(r.direction, r.columns[:3], len(r.columns)) for r in scan.rays])
        print("chambers:", scan.chambers)
        rep = crossing_type(W, 1)
        print("wall1 kind:", rep.kind, "earlier:", rep.earlier_columns, "divisor:", rep.divisor_column)
        wm = wall_map(W, 1, 1)
        print("eliminated:", wm.eliminated, "exp s2,s3,z?/p1:",
              {k: wm.exponents[k] for k in list(wm.exponents)[:6]})
        aw = catalog.ambient_weights(fam.kind, fam.d)
        assert aw["s1"] == fam.d + 1
        exp_expect = {}
        for n in W.names:
            if n == "w":
                continue
            if n == "s1":
                exp_expect[n] = Fraction(0)
            elif n == "s2":
                exp_expect[n] = Fraction(1, fam.d + 1)
            elif n == "s3":
                exp_expect[n] = Fraction(2, fam.d + 1)
            else:
                exp_expect[n] = Fraction(aw[n], fam.d + 1)
        assert wm.exponents == exp_expect, (wm.exponents, exp_expect)
        print("exponents all match eq-shape ok")


def probe_c8():
    print("=== C8 stage-2 Dp ===")
    for d in DP_DS:
        W = catalog.weight_matrix_by_kind("two", "Dp", d)
        scan = chamber_scan(W)
        assert len(scan.rays) == 8, scan.rays
        last = scan.rays[7]
        assert set(last.columns) == {"s123", "s135"}, last
        assert W.column("s123") == W.column("s135")
        repf = crossing_type(W, 7)
        assert repf.kind == "fibration", repf
        frees135 = chart_frees("Dp", "s135")
        phi = repf.phi
        assert phi["s123"] == 0
        fiber = sorted(phi[n] for n in frees135 if n != "s123")
        expect_fiber = sorted([1, 1, 2, 2, 2, 3, 3, 4, 4, 5, 6, d - 3, d - 2, d - 1])
        print(f"d={d} fiber {fiber} match={fiber == expect_fiber}")
        repx = crossing_type(W, 5)
        assert repx.kind == "flip", repx
        assert set(repx.wall_columns) == {"s124", "s136"}
        frees124 = chart_frees("Dp", "s124")
        pos = sorted(repx.phi[n] for n in frees124 if n not in ("s123", "s125"))
        neg = sorted(repx.phi[n] for n in ("s123", "s125"))
        expect_pos = sorted([1, 1, 2, 2, 3, 4, 4, 5, 6, 6, d - 3, d - 1, d])
        print(f"d={d} flip pos {pos} neg {neg} match={pos == expect_pos and neg == [-2, -1]}")
        posnames = sorted(n for n in frees124 if n not in ("s123", "s125"))
        expect_names = sorted(["z", "p2", "p3", "p4", "t123", "t125", "t126",
                               "t135", "t136", "t245", "s126", "s245", "s246"])
        assert posnames == expect_names, posnames


def probe_c12():
    print("=== C12 stage-2 Div ===")
    for d in DIV_DS:
        W = catalog.weight_matrix_by_kind("two", "Div", d)
        scan = chamber_scan(W)
        assert len(scan.rays) == 7, scan.rays
        assert set(scan.rays[5].columns) == {"s124", "s125", "s135"}
        rep = crossing_type(W, 5)
        assert rep.kind == "divisorial", rep
        assert rep.divisor_column == "s123", rep.divisor_column
        wm = wall_map(W, 4, 5)
        assert wm.eliminated == "s123"
        exps = {"w": Fraction(3 * d + 3), "s246": Fraction(3), "s245": Fraction(2),
                "s126": Fraction(1), "s136": Fraction(1), "s124": Fraction(0),
                "s125": Fraction(0), "s135": Fraction(0)}
        got = {k: wm.exponents[k] for k in exps}
        assert got == exps, got
        conevars = catalog.cone_names("Div")
        aw = catalog.ambient_weights("Div", d)
        assert all(wm.exponents[v] == aw[v] for v in conevars)
        frees123 = chart_frees("Div", "s123")
        psi = {n: W.column(n)[0] - (3 * d + 2) * W.column(n)[1] for n in W.names}
        quot = sorted(psi[n] for n in frees123)
        expect_quot = sorted([1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, d - 1, d, d])
        print(f"d={d} wP {quot} match={quot == expect_quot}")
        frees124 = chart_frees("Div", "s124")
        chi = rep.phi
        fib = sorted(chi[n] for n in frees124)
        zero = [n for n in frees124 if chi[n] == 0]
        negs = [n for n in frees124 if chi[n] < 0]
        pos = sorted(chi[n] for n in frees124 if chi[n] > 0)
        expect_pos = sorted([1, 1, 2, 2, 2, 3, 3, 3, 4, d - 1, d, d + 1])
        print(f"d={d} exc fiber pos {pos} zero={zero} neg={negs} "
              f"match={pos == expect_pos and zero == ['s125'] and negs == ['s123']}")


probe_c7()
probe_c8()
probe_c12()
probe_c10()
