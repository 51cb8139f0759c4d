"""Structural tests for the bundled data and its loaders.

The checksum table pins every data file byte-for-byte; the rest of the
module spot-checks entries against hand-transcribed values and asserts the
structural invariants the verification checks rely on (homogeneity, term
counts, linearity of the unprojection form, determinism of seeded section
coefficients).
"""

from fractions import Fraction

import pytest

from qfv import catalog as cat
from qfv.rings import Poly, make_ring, parse_poly, substitute, weighted_parts

CHECKSUMS = {
    "chart_s123.txt": "2855dd18cc8dfb59824b2825268229c92346973a6797bc0335b06d9e15753ffa",
    "chart_s124.txt": "79fd3a85483ce69c821fbed66d97d31f0f4e0de6d83e65d80c4c4db32acf965e",
    "chart_s135.txt": "eb40f14a302bc290ebaad9dbeab171f5a922a06dc3f549f239aecd2c110b82d8",
    "chart_s246.txt": "475d6174c9fcd80cce106cec20f9b3eeff13ccf6b79a5d65edf9888d9ac300c8",
    "combination.txt": "fb14c09e4b01271cac0e09f1f3cc530d45789dfd5016689d11c6573fa6be9fff",
    "equations_f.txt": "ef15ba6e124b7f186f19e2a046c0db8104ff90627f0aae973f5faa3f5e5a236e",
    "families.txt": "8a45970bf32ea2b121b658aa34f726a1af12f66eaa7255b2beab9f36c39fa932",
    "matrix_m.txt": "e21558043d3666a0b3de6b7dea7a376d15e5f375b6377028945dabff36d91660",
    "sections_1766.txt": "48ffd9e9d7d74b952cef0d633cc2d819b81e1bcfb3252662bb2f654d16c5d686",
    "sections_501.txt": "75f8029179b1b10c3cf3410abdee0774f9a2d15bc4bbd6cf4277e53945cb45e5",
    "sections_512.txt": "2cc3052ce643314b0505555914f0e8b1ed4685eb46d5caf7f13ee07f07273cee",
    "sections_550.txt": "43f71988d40ea5c86aed8e359ea5b7bb80a0ebd66891d60dbdb0244d0fbf9a12",
    "sections_577.txt": "41f529c02de883a6118dbcf7718bf741c6514fdbd68c80fe86c45c7f99d9adee",
    "sections_872.txt": "34dce89e885d7a5c5c5ceb2848d6ce78b66a3667e503424e227628a736aa40e0",
    "sections_878.txt": "14c14e4afcbdf363004d333222831467bbfbb027c894beb2a2b594b7a237ad39",
    "transitions_dp.txt": "7e6bf57ce043cafabaa05dee547aee1d93ecbd83b50c0a011e2b62dab9d6170e",
    "weights_stage1_div.txt": "df6b886c2ebd08b4f9fcebb1344aa8284dd3ef1b69248fb1d9ce660b51a2c0f6",
    "weights_stage1_dp.txt": "f2e8ee5968b57d5afb471ebba4d70855dd5f557e096dcabfc29bd801bb11291d",
    "weights_stage2_div.txt": "5bd0eb1d89526be69d368b5262d4c23eebb33727ac260d8595a1635a2c1b7ea7",
    "weights_stage2_dp.txt": "fd4afe9bafbb621f3fb2ec8a2aba06afd31b9ed0b1de863a064fa7243cdf6b69",
}


def test_every_data_file_is_pinned():
    listed = {p.name for p in cat._DATA.iterdir() if p.suffix == ".txt"}
    assert listed == set(CHECKSUMS)


@pytest.mark.parametrize("name", sorted(CHECKSUMS))
def test_checksum(name):
    assert cat.data_sha256(name) == CHECKSUMS[name], (
        f"{name} changed; if intentional, re-pin its checksum"
    )


# -- matrix and minors -------------------------------------------------------


def test_matrix_shape_and_entries():
    M = cat.matrix_M()
    assert (M.nrows, M.ncols) == (3, 6)
    ring = cat.m_ring()
    assert M.at(2, 0) == -ring.var("p2")
    assert M.at(0, 4) == parse_poly(ring, "-t2*p1 + t1*u1")
    assert M.at(1, 2) == parse_poly(ring, "u1 + t1*p2")


def test_two_by_two_minor_value():
    from qfv.rings import matrix_minor

    got = matrix_minor(cat.matrix_M(), (1, 2), (0, 1))
    assert got == parse_poly(cat.m_ring(), "p1*p4 - p2*p3")


def test_minor_order_and_count():
    Ds = cat.minors_D()
    assert len(Ds) == 8
    assert cat.MINOR_TRIPLES[0] == "123" and cat.MINOR_TRIPLES[-1] == "246"
    assert Ds[4] == cat.minor_D("135")
    assert Ds[4] == cat.minor_D((1, 3, 5))


def test_repeated_column_minor_rejected():
    with pytest.raises(ValueError):
        cat.minor_D("112")
    with pytest.raises(ValueError):
        cat.minor_D((2, 2, 4))
    with pytest.raises(ValueError):
        cat.minor_D((0, 1, 2))


# -- the quintic and the unprojection form -----------------------------------


def test_combination_applied_to_minors_gives_quintic():
    ring = cat.model_ring()
    img = {
        "s" + t: substitute(cat.minor_D(t), {}, target=ring)
        for t in cat.MINOR_TRIPLES
    }
    assert substitute(cat.unprojection_I(), img, target=ring) == cat.F_bar_Pi()


def test_unprojection_form_is_linear_in_s_block():
    I = cat.unprojection_I()
    ring = I.ring
    s_idx = [ring.index(s) for s in cat.S_VARIABLES]
    for expo in I.terms:
        assert sum(expo[i] for i in s_idx) == 1


def test_unprojection_form_s246_coefficient_is_one():
    assert cat.unprojection_I().coefficient_of({"s246": 1}) == 1


def test_unprojection_form_t135_coefficient():
    I = cat.unprojection_I()
    assert I.coefficient_of({"t135": 1, "s135": 1}) == 1


# -- the nine equations -------------------------------------------------------


def test_equation_term_counts():
    counts = [len(f.terms) for f in cat.equations_F()]
    assert counts == [15, 15, 13, 13, 26, 26, 40, 43, 43]


@pytest.mark.parametrize("kind,d", [("Dp", 7), ("Dp", 4), ("Div", 4), ("Div", 2)])
def test_equations_bihomogeneous(kind, d):
    W = cat.weight_matrix_by_kind("one", kind, d)
    names = cat.F_VARIABLES
    g1 = tuple(W.column(n)[0] for n in names)
    g2 = tuple(W.column(n)[1] for n in names)
    ring = make_ring(names, gradings=(g1, g2))
    for f in cat.equations_F():
        ff = substitute(f, {}, target=ring)
        assert len(weighted_parts(ff, 0)) == 1
        assert len(weighted_parts(ff, 1)) == 1


def test_equations_w_degrees():
    for k, f in enumerate(cat.equations_F(), 1):
        assert f.degree_in("w") == (2 if k >= 7 else 1)


# -- charts -------------------------------------------------------------------


def test_chart_names_and_eliminated_sets():
    assert set(cat.CHART_NAMES) == {"s135", "s124", "s123", "s246"}
    assert set(cat.chart_eliminated("s124")) == {
        "w", "p1", "t1", "t2", "u1", "u2", "s135", "s136"
    }
    assert set(cat.chart_eliminated("s135")) == {
        "w", "p3", "p4", "u2", "s124", "s126", "s245", "s246"
    }
    assert set(cat.chart_eliminated("s123")) == {
        "w", "p3", "t1", "t2", "u1", "u2", "s245", "s246"
    }
    assert set(cat.chart_eliminated("s246")) == {
        "w", "p1", "p2", "u1", "s123", "s125", "s135", "s136"
    }


def test_chart_unprojection_variables():
    assert cat.chart_unprojection_variable("s135") == "t135"
    assert cat.chart_unprojection_variable("s124") == "t124"
    assert cat.chart_unprojection_variable("s123") == "t123"
    assert cat.chart_unprojection_variable("s246") is None


def test_chart_w_numerator_is_the_minor():
    for chart in cat.CHART_NAMES:
        rel = cat.chart_equations(chart)[0]
        assert rel.var == "w" and rel.power == 1
        lifted = substitute(cat.minor_D(chart[1:]), {}, target=rel.numerator.ring)
        assert rel.numerator == lifted


def test_chart_denominator_powers():
    rels = {r.var: r for r in cat.chart_equations("s124")}
    assert rels["t1"].power == 2
    assert rels["p1"].power == 1
    rels = {r.var: r for r in cat.chart_equations("s246")}
    assert rels["s135"].power == 2
    assert rels["s136"].power == 1


@pytest.mark.parametrize("kind,d", [("Dp", 7), ("Div", 4)])
def test_chart_relations_bihomogeneous(kind, d):
    W2 = cat.weight_matrix_by_kind("two", kind, d)
    names = cat.chart_ring().names
    g1 = tuple(W2.column(n)[0] for n in names)
    g2 = tuple(W2.column(n)[1] for n in names)
    ring = make_ring(names, gradings=(g1, g2))
    for chart in cat.CHART_NAMES:
        for rel in cat.chart_equations(chart):
            g = substitute(rel.cleared(), {}, target=ring)
            assert len(weighted_parts(g, 0)) == 1, (chart, rel.var)
            assert len(weighted_parts(g, 1)) == 1, (chart, rel.var)


def test_chart_spot_values():
    ring = cat.chart_ring()
    rels = {r.var: r for r in cat.chart_equations("s135")}
    assert rels["s126"].numerator == parse_poly(ring, "s125*s136 - s123^2*t2")
    rels = {r.var: r for r in cat.chart_equations("s123")}
    assert rels["t2"].numerator == parse_poly(ring, "-s126*s135 + s125*s136")


def test_unknown_chart_rejected():
    with pytest.raises(ValueError):
        cat.chart_equations("s125")


# -- transitions ----------------------------------------------------------------


def test_transition_directions():
    fwd = cat.transition_functions("to_s123")
    bwd = cat.transition_functions("to_s135")
    assert set(fwd) == {"r124", "r125", "r126", "r136", "p4"}
    assert set(bwd) == {"t1", "t2", "u1", "q125", "q136"}
    with pytest.raises(ValueError):
        cat.transition_functions("sideways")


def test_transition_spot_value():
    ring = cat.transition_ring()
    num, k = cat.transition_functions("to_s135")["t1"]
    assert k == 0
    assert num == parse_poly(ring, "-r125^2 + ell*r124 - r136")


# -- weight matrices -------------------------------------------------------------


def test_stage_one_shapes():
    for kind, n in (("Dp", 20), ("Div", 19)):
        W = cat.weight_matrix_by_kind("one", kind, 5)
        assert W.ncols == n
        assert W.column("w") == (0, -1)


def test_stage_two_shapes_and_spots():
    assert cat.weight_matrix("two", 501).ncols == 25
    assert cat.weight_matrix("two", 577).ncols == 24
    assert cat.weight_matrix("two", 501).column("s246") == (24, 1)
    assert cat.weight_matrix("two", 501).column("s123") == (18, 1)
    assert cat.weight_matrix("two", 577).column("s123") == (14, 1)
    assert cat.weight_matrix("two", 878).column("s124") == (12, 1)


def test_s_weights_step_by_one():
    for fid in (501, 577):
        W = cat.weight_matrix("one", fid)
        w1 = W.column("s1")[0]
        assert W.column("s2")[0] == w1 + 1
        assert W.column("s3")[0] == w1 + 2


def test_ambient_names_and_weights():
    assert "z" in cat.ambient_names("Dp")
    assert "z" not in cat.ambient_names("Div")
    wts = cat.ambient_weights("Dp", 7)
    assert wts["z"] == 1 and wts["p3"] == 7 and wts["s1"] == 8
    wts = cat.ambient_weights("Div", 2)
    assert wts["t245"] == 1 and wts["p1"] == 2 and wts["u2"] == 4


# -- families ---------------------------------------------------------------------


def test_family_ids_and_kinds():
    assert cat.families() == (501, 512, 550, 872, 577, 878, 1766)
    assert [cat.family(f).kind for f in cat.families()] == [
        "Dp", "Dp", "Dp", "Dp", "Div", "Div", "Div"
    ]
    assert [cat.family(f).d for f in cat.families()] == [7, 6, 5, 4, 4, 3, 2]
    with pytest.raises(ValueError):
        cat.family(500)


def test_family_section_counts():
    for fid in cat.families():
        rec = cat.family(fid)
        assert len(rec.templates) == (11 if rec.kind == "Dp" else 10)


def test_family_embedding_consistency():
    for fid in cat.families():
        rec = cat.family(fid)
        wts = cat.ambient_weights(rec.kind, rec.d)
        for name, w in rec.embedding:
            assert wts[name] == w, (fid, name)
        split = set(rec.embedding_names) | set(rec.section_targets)
        assert split == set(cat.ambient_names(rec.kind))
        assert not set(rec.embedding_names) & set(rec.section_targets)


def test_family_872_alias_remark():
    rec = cat.family(872)
    assert "p2" in rec.remark
    assert "z" in rec.section_targets
    assert cat.family(501).remark == ""


def test_templates_homogeneous_with_weightless_coefficients():
    for fid in cat.families():
        rec = cat.family(fid)
        ring = cat.symbolic_ring(fid)
        wts = cat.ambient_weights(rec.kind, rec.d)
        for tpl in rec.templates:
            assert wts[tpl.target] == tpl.weight
            parts = weighted_parts(tpl.poly(ring), 0)
            assert list(parts) == [tpl.weight], (fid, tpl.target)


def test_templates_avoid_s_coordinates():
    for fid in cat.families():
        for tpl in cat.family(fid).templates:
            assert not ({"s1", "s2", "s3"} & set(tpl.coefficients))
            assert "s1" not in tpl.text and "s2" not in tpl.text


def test_section_coefficient_counts():
    assert len(cat.family(501).coefficient_names) == 26
    assert len(cat.family(872).coefficient_names) == 39
    names = cat.family(501).coefficient_names
    assert len(set(names)) == len(names)


# -- seeded instances ----------------------------------------------------------


def test_sections_deterministic():
    a = cat.sections(501, seed=0)
    b = cat.sections(501, seed=0)
    c = cat.sections(501, seed=1)
    assert a.values == b.values
    assert a.values != c.values
    assert a.assignments == b.assignments


def test_sections_values_in_range():
    inst = cat.sections(878, seed=3)
    for v in inst.values.values():
        assert v != 0
        assert -50 <= v.numerator <= 50
        assert 1 <= v.denominator <= 50


def test_sections_explicit():
    names = cat.family(1766).coefficient_names
    inst = cat.sections(1766, explicit={c: Fraction(2, 3) for c in names})
    assert inst.seed is None
    assert inst.value(names[0]) == Fraction(2, 3)
    with pytest.raises(ValueError):
        cat.sections(1766, explicit={"a2": 1})


def test_sections_symbolic():
    inst = cat.sections(550, symbolic=True)
    assert inst.values is None
    assert "a125" in inst.ring.names
    with pytest.raises(ValueError):
        inst.value("a125")
    with pytest.raises(ValueError):
        cat.sections(550, symbolic=True, explicit={})


def test_sections_modular():
    inst = cat.sections(501, seed=0, field=32003)
    assert inst.ring.p == 32003
    img = inst.assignments["t1"]
    assert all(isinstance(c, int) for c in img.terms.values())


def test_sections_assignment_matches_template():
    inst = cat.sections(501, seed=0)
    a1 = inst.values["a1"]
    ring = inst.ring
    assert inst.assignments["t1"] == parse_poly(ring, "z^2").scale(a1)


def test_sections_homogeneous_after_seeding():
    inst = cat.sections(872, seed=5)
    wts = cat.ambient_weights("Dp", 4)
    for target, img in inst.assignments.items():
        parts = weighted_parts(img, 0)
        assert list(parts) == [wts[target]]
