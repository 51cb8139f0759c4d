import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qfv.rings import (
    ParseError,
    Poly,
    PolyMatrix,
    diff,
    divide_out_var,
    eval as poly_eval,
    make_ring,
    matrix_minor,
    min_weight,
    parse_poly,
    poly_arith,
    substitute,
    truncate,
    truncated_mul,
    weighted_parts,
)

R3 = make_ring(["x", "y", "z"], gradings=[[1, 1, 1], [2, 3, 5]])


def P(text, ring=R3):
    return parse_poly(ring, text)


# ---------------------------------------------------------------- construction


def test_make_ring_rejects_duplicates():
    with pytest.raises(ValueError):
        make_ring(["x", "x"])


def test_make_ring_rejects_bad_names():
    with pytest.raises(ValueError):
        make_ring(["2x"])
    with pytest.raises(ValueError):
        make_ring(["x-y"])


def test_make_ring_rejects_ragged_grading():
    with pytest.raises(ValueError):
        make_ring(["x", "y"], gradings=[[1]])


def test_make_ring_rejects_composite_field():
    with pytest.raises(ValueError):
        make_ring(["x"], field=10)


# ---------------------------------------------------------------- parsing


def test_parse_simple():
    p = P("x^2 - 2*x*y + y^2")
    assert p == (P("x") - P("y")) ** 2


def test_parse_precedence_pow_binds_tighter():
    assert P("2*x^3") == 2 * P("x") ** 3
    assert P("(2*x)^3") == 8 * P("x") ** 3


def test_parse_left_recursion_on_pow():
    # factor '^' UINT is left recursive: x^2^3 reads as (x^2)^3
    assert P("x^2^3") == P("x") ** 6


def test_parse_rejects_implicit_multiplication():
    with pytest.raises(ParseError):
        P("2x")
    with pytest.raises(ParseError):
        P("x y")


def test_parse_rejects_unknown_identifier():
    with pytest.raises(ParseError):
        P("x + q")


def test_parse_rejects_trailing_garbage():
    with pytest.raises(ParseError):
        P("x + ")
    with pytest.raises(ParseError):
        P("x)")


def test_parse_unary_minus_and_fraction_literals():
    assert P("-x + 1/2") == R3.const(Fraction(1, 2)) - P("x")


def test_render_round_trip():
    p = P("3*x^2*y - z + 7") * P("x - 1/3")
    assert parse_poly(R3, p.render()) == p


def test_render_zero():
    assert R3.zero().render() == "0"
    assert parse_poly(R3, "x - x") == R3.zero()


# ---------------------------------------------------------------- arithmetic


def test_poly_arith_dispatch():
    a, b = P("x + y"), P("x - y")
    assert poly_arith("add", a, b) == 2 * P("x")
    assert poly_arith("sub", a, b) == 2 * P("y")
    assert poly_arith("mul", a, b) == P("x^2 - y^2")
    assert poly_arith("pow", a, 2) == P("x^2 + 2*x*y + y^2")
    with pytest.raises(ValueError):
        poly_arith("div", a, b)


def test_gf_arithmetic_wraps():
    F = make_ring(["x"], field=7)
    x = F.var("x")
    assert (3 * x + 5 * x) == x
    assert (x - x).is_zero()
    assert F.const(Fraction(1, 2)) == F.const(4)  # 2*4 = 8 = 1 mod 7


def test_gf_denominator_vanishing_rejected():
    F = make_ring(["x"], field=7)
    with pytest.raises(ZeroDivisionError):
        F.const(Fraction(1, 14))


def test_pow_edge_cases():
    assert P("x") ** 0 == R3.one()
    with pytest.raises(ValueError):
        P("x") ** -1


# ---------------------------------------------------------------- substitute


def test_substitute_into_other_ring():
    S = make_ring(["x", "y", "z", "t"])
    img = substitute(P("x^2 + y*z"), {"y": S.var("t") ** 2}, target=S)
    assert img == parse_poly(S, "x^2 + t^2*z")


def test_substitute_missing_variable_errors():
    S = make_ring(["a", "b"])
    with pytest.raises(KeyError):
        substitute(P("x + y"), {"x": S.var("a")}, target=S)


def test_substitute_field_mismatch_rejected():
    F = make_ring(["x", "y", "z"], field=7)
    with pytest.raises(ValueError):
        substitute(F.var("x"), {"x": R3.var("x")}, target=R3)


def test_substitute_q_to_gf():
    F = make_ring(["x", "y", "z"], field=5)
    img = substitute(P("5*x + y + 1/2"), {}, target=F)
    assert img == F.var("y") + F.const(3)


def test_substitute_truncated_matches_exact_truncation():
    p = P("(x + y + 1)^4")
    q = P("(x - z)^3")
    full = substitute(p, {"x": q})
    capped = substitute(p, {"x": q}, cap=5)
    assert capped == truncate(full, 5)


def test_truncated_mul():
    a, b = P("x^2 + x + 1"), P("x^3 + 1")
    assert truncated_mul(a, b, 3) == truncate(a * b, 3)


# ---------------------------------------------------------------- calculus etc.


def test_diff_basic():
    assert diff(P("x^3*y + z"), "x") == P("3*x^2*y")
    assert diff(P("7"), "x").is_zero()


def test_diff_gf_drops_p_multiples():
    F = make_ring(["x"], field=3)
    assert diff(F.var("x") ** 3, "x").is_zero()


def test_eval_exact():
    v = poly_eval(P("x^2 + y + 1/2"), {"x": Fraction(1, 2), "y": 1, "z": 0})
    assert v == Fraction(7, 4)


def test_eval_requires_all_vars():
    with pytest.raises(KeyError):
        poly_eval(P("x"), {"x": 1, "y": 2})


def test_weighted_parts_split_and_min():
    p = P("x^2 + y^2 + z")  # weights row 1: (2,3,5)
    parts = weighted_parts(p, 1)
    assert set(parts) == {4, 6, 5}
    assert parts.min_weight == 4
    assert parts.min_part == P("x^2")
    assert sum(parts.values(), R3.zero()) == p


def test_weighted_parts_zero_poly():
    parts = weighted_parts(R3.zero(), 0)
    assert parts.min_weight == math.inf
    assert parts.min_part.is_zero()
    assert min_weight(R3.zero()) == math.inf


def test_divide_out_var():
    q, k = divide_out_var(P("x^2*y + x^3"), "x")
    assert (q, k) == (P("y + x"), 2)
    q, k = divide_out_var(P("y + 1"), "x")
    assert (q, k) == (P("y + 1"), 0)
    with pytest.raises(ValueError):
        divide_out_var(R3.zero(), "x")


# ---------------------------------------------------------------- matrices


def mat(rows, ring=R3):
    return PolyMatrix(tuple(tuple(P(c, ring) for c in row) for row in rows))


def test_matrix_minor_2x2():
    A = mat([["x", "y"], ["z", "x"]])
    assert matrix_minor(A, [0, 1], [0, 1]) == P("x^2 - y*z")


def test_matrix_minor_repeated_index_is_zero():
    A = mat([["x", "y"], ["z", "x"]])
    assert matrix_minor(A, [0, 0], [0, 1]).is_zero()


def test_matrix_minor_out_of_range():
    A = mat([["x", "y"], ["z", "x"]])
    with pytest.raises(IndexError):
        matrix_minor(A, [0, 2], [0, 1])


def test_matrix_minor_row_swap_antisymmetry():
    A = mat([["x", "y", "1"], ["z", "x", "y"], ["1", "2", "z"]])
    m = matrix_minor(A, [0, 1, 2], [0, 1, 2])
    assert matrix_minor(A, [1, 0, 2], [0, 1, 2]) == -m


def test_matrix_minor_laplace_vs_direct_4x4():
    names = [f"a{i}{j}" for i in range(4) for j in range(4)]
    R = make_ring(names)
    A = PolyMatrix(tuple(tuple(R.var(f"a{i}{j}") for j in range(4)) for i in range(4)))
    det = matrix_minor(A, range(4), range(4))
    # Laplace expansion along the last row must agree
    alt = R.zero()
    for j in range(4):
        cof = matrix_minor(A, [0, 1, 2], [c for c in range(4) if c != j])
        piece = A.at(3, j) * cof
        alt = alt + piece if (3 + j) % 2 == 0 else alt - piece
    assert alt == det
    assert len(det.terms) == 24


# ---------------------------------------------------------------- properties

coeffs = st.fractions(
    min_value=Fraction(-9), max_value=Fraction(9), max_denominator=7
)


@st.composite
def polys(draw, ring=R3, max_terms=5, max_exp=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_exp)) for _ in range(ring.nvars))
        c = draw(coeffs)
        if c:
            terms[e] = Fraction(c)
    return Poly(ring, {e: c for e, c in terms.items() if c})


@given(polys(), polys(), polys())
@settings(max_examples=200)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + R3.zero() == a
    assert a * R3.one() == a


@given(polys(), polys())
@settings(max_examples=300)
def test_substitution_is_a_ring_homomorphism(a, b):
    S = make_ring(["x", "y", "z"])
    img = {"x": parse_poly(S, "y^2 - 1"), "z": parse_poly(S, "x*y + 3")}

    def phi(p):
        return substitute(p, img, target=S)

    assert phi(a + b) == phi(a) + phi(b)
    assert phi(a * b) == phi(a) * phi(b)


@given(polys(), polys())
@settings(max_examples=200)
def test_leibniz_rule(a, b):
    assert diff(a * b, "y") == diff(a, "y") * b + a * diff(b, "y")


@given(polys())
@settings(max_examples=200)
def test_weighted_parts_reassemble(p):
    for row in (0, 1):
        parts = weighted_parts(p, row)
        assert sum(parts.values(), R3.zero()) == p
        for w, part in parts.items():
            assert {w} >= {
                sum(wi * k for wi, k in zip(R3.grading_row(row), e))
                for e in part.terms
            }


@given(polys(), st.fractions(max_denominator=5), st.fractions(max_denominator=5),
       st.fractions(max_denominator=5))
@settings(max_examples=200)
def test_eval_commutes_with_arithmetic(p, x, y, z):
    pt = {"x": x, "y": y, "z": z}
    assert poly_eval(p * p + p, pt) == poly_eval(p, pt) ** 2 + poly_eval(p, pt)


@given(polys(max_terms=4, max_exp=2))
@settings(max_examples=100)
def test_render_parse_round_trip_property(p):
    assert parse_poly(R3, p.render()) == p
