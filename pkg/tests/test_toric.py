import random
from fractions import Fraction

import pytest

from qfv.toric import (
    CyclicQuotientType,
    WeightMatrix,
    chamber_scan,
    chart_quotients,
    crossing_type,
    primitive,
    smith_normal_form,
    unstable_locus,
    wall_map,
)


def stage_like(d=7):
    """A small matrix shaped like the first-stage scans: ambient columns on
    (1,0) plus three marked columns and one auxiliary column below the axis."""
    return WeightMatrix.build(
        ["w", "s1", "s2", "s3", "a", "b"],
        [0, d + 1, d + 2, d + 3, 1, 2],
        [-1, -1, -1, -1, 0, 0],
    )


# ----------------------------------------------------------------- parsing


def test_from_text_with_symbolic_d():
    text = """
    # demo matrix
    w s1 s2 a
    0 d+1 d+2 3
    -1 -1 -1 0
    """
    W = WeightMatrix.from_text(text, d=7)
    assert W.column("s1") == (8, -1)
    assert W.column("a") == (3, 0)


def test_from_text_requires_d_when_symbolic():
    text = "x y\nd 1\n0 1\n"
    with pytest.raises(ValueError):
        WeightMatrix.from_text(text)
    W = WeightMatrix.from_text(text, d=4)
    assert W.column("x") == (4, 0)


def test_from_text_wrong_shape():
    with pytest.raises(ValueError):
        WeightMatrix.from_text("x y\n1 2\n")
    with pytest.raises(ValueError):
        WeightMatrix.build(["x"], [1, 2], [0, 0])


def test_render_round_trip():
    W = stage_like()
    assert WeightMatrix.from_text(W.render()) == W


# ----------------------------------------------------------------- scanning


def test_primitive():
    assert primitive((4, -2)) == (2, -1)
    assert primitive((-3, -6)) == (-1, -2)
    with pytest.raises(ValueError):
        primitive((0, 0))


def test_chamber_scan_orders_rays_counterclockwise():
    W = stage_like(d=7)
    scan = chamber_scan(W)
    assert [r.direction for r in scan.rays] == [
        (0, -1), (8, -1), (9, -1), (10, -1), (1, 0),
    ]
    assert scan.rays[4].columns == ("a", "b")
    assert scan.chambers == ((0, 1), (1, 2), (2, 3), (3, 4))


def test_chamber_scan_groups_collinear_columns():
    W = WeightMatrix.build(["a", "b", "c"], [1, 2, 0], [1, 2, 1])
    scan = chamber_scan(W)
    assert len(scan.rays) == 2
    assert scan.rays[0].direction == (1, 1)
    assert scan.rays[0].columns == ("a", "b")


def test_chamber_scan_rejects_zero_column():
    W = WeightMatrix.build(["a", "b"], [0, 1], [0, 1])
    with pytest.raises(ValueError):
        chamber_scan(W)


def test_chamber_count_stable_under_row_negation():
    W = stage_like()
    flipped = WeightMatrix.build(W.names, W.rows[0], [-x for x in W.rows[1]])
    assert len(chamber_scan(W).chambers) == len(chamber_scan(flipped).chambers)


def test_upper_half_plane_order_decreasing_slope():
    W = WeightMatrix.build(
        ["w2", "star", "s6", "s5", "s4"],
        [0, 1, 24, 22, 21],
        [-1, 0, 1, 1, 1],
    )
    scan = chamber_scan(W)
    assert [r.direction for r in scan.rays] == [
        (0, -1), (1, 0), (24, 1), (22, 1), (21, 1),
    ]
    assert len(scan.chambers) == 4


# ----------------------------------------------------------------- unstable


def test_unstable_locus_first_chamber():
    W = stage_like()
    u = unstable_locus(W, 0)
    assert u.lower == ("w",)
    assert set(u.upper) == {"s1", "s2", "s3", "a", "b"}


def test_unstable_locus_interior_chamber():
    W = stage_like()
    u = unstable_locus(W, 1)  # between the s1 and s2 rays
    assert set(u.lower) == {"w", "s1"}
    assert set(u.upper) == {"s2", "s3", "a", "b"}


def test_unstable_locus_range_check():
    with pytest.raises(IndexError):
        unstable_locus(stage_like(), 9)


# ----------------------------------------------------------------- crossings


def test_crossing_type_divisorial():
    W = stage_like()
    rep = crossing_type(W, 1)  # the s1 ray: only w sits strictly below
    assert rep.kind == "divisorial"
    assert rep.divisor_column == "w"
    assert rep.wall_columns == ("s1",)
    # phi is positive on the earlier side (w) and negative above
    assert rep.phi["w"] > 0 > rep.phi["s2"]


def test_crossing_type_fibration():
    W = WeightMatrix.build(["a", "b", "c", "d"], [1, 1, 0, 1], [0, 0, 1, 1])
    scan = chamber_scan(W)
    assert [r.direction for r in scan.rays] == [(1, 0), (1, 1), (0, 1)]
    rep = crossing_type(W, 0)
    assert rep.kind == "fibration"
    assert rep.base_columns == ("a", "b")
    assert rep.earlier_columns == ()


def test_crossing_type_flip():
    W = WeightMatrix.build(
        ["a", "b", "c", "d", "e"],
        [1, 2, 1, 2, 1],
        [-1, -1, 0, 1, 1],
    )
    scan = chamber_scan(W)
    wall = scan.ray_of("c")
    rep = crossing_type(W, wall)
    assert rep.kind == "flip"
    assert set(rep.earlier_columns) == {"a", "b"}
    assert set(rep.later_columns) == {"d", "e"}
    # signed weights along the wall functional
    assert rep.phi["a"] == 1 and rep.phi["b"] == 1
    assert rep.phi["d"] == -1 and rep.phi["e"] == -1


# ----------------------------------------------------------------- wall maps


def test_wall_map_matches_hand_computation():
    W = stage_like(d=7)
    wm = wall_map(W, 0, 1)  # chamber below the s1 ray, crossing it
    assert wm.kind == "monomial"
    assert wm.eliminated == "w"
    assert wm.exponents["s1"] == 0
    assert wm.exponents["s2"] == Fraction(1, 8)
    assert wm.exponents["s3"] == Fraction(2, 8)
    assert wm.exponents["a"] == Fraction(1, 8)
    assert wm.exponents["b"] == Fraction(2, 8)


def test_wall_map_sends_columns_onto_the_wall():
    W = stage_like(d=5)
    wm = wall_map(W, 0, 1)
    mx, my = W.column(wm.eliminated)
    dx, dy = wm.direction
    for name, e in wm.exponents.items():
        vx, vy = W.column(name)
        nx, ny = vx + e * mx, vy + e * my
        assert nx * dy - ny * dx == 0  # parallel to the wall ray


def test_wall_map_fibration_kind():
    W = WeightMatrix.build(["a", "b", "c", "d"], [1, 1, 0, 1], [0, 0, 1, 1])
    wm = wall_map(W, 0, 0)
    assert wm.kind == "fibration"
    assert wm.base_columns == ("a", "b")
    assert wm.eliminated is None


def test_wall_map_rejects_flip():
    W = WeightMatrix.build(
        ["a", "b", "c", "d", "e"],
        [1, 2, 1, 2, 1],
        [-1, -1, 0, 1, 1],
    )
    scan = chamber_scan(W)
    wall = scan.ray_of("c")
    chamber = next(i for i, (lo, hi) in enumerate(scan.chambers) if hi == wall)
    with pytest.raises(ValueError):
        wall_map(W, chamber, wall)


def test_wall_map_requires_bounding_wall():
    W = stage_like()
    with pytest.raises(ValueError):
        wall_map(W, 0, 3)


# ----------------------------------------------------------------- Smith form


def _is_diagonal(S):
    return all(S[i][j] == 0 for i in range(len(S)) for j in range(len(S[0])) if i != j)


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        sub = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(sub)
        total += term if j % 2 == 0 else -term
    return total


def _mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B)))
             for j in range(len(B[0]))] for i in range(len(A))]


def test_smith_normal_form_known():
    # invariant factors: gcd of entries 2, gcd of 2x2 minors 4, |det| 624
    A = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    U, S, V = smith_normal_form(A)
    assert _mul(_mul(U, A), V) == S
    assert _is_diagonal(S)
    assert [S[i][i] for i in range(3)] == [2, 2, 156]


def test_smith_normal_form_rectangular():
    A = [[6, 10]]
    U, S, V = smith_normal_form(A)
    assert _mul(_mul(U, A), V) == S
    assert S[0][0] == 2 and S[0][1] == 0


def test_smith_normal_form_random_certified():
    rng = random.Random(20260816)
    for _ in range(500):
        m = rng.randint(1, 5)
        n = rng.randint(1, 5)
        A = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)]
        U, S, V = smith_normal_form(A)
        assert _mul(_mul(U, A), V) == S
        assert _is_diagonal(S)
        assert abs(_det(U)) == 1
        assert abs(_det(V)) == 1
        diag = [S[i][i] for i in range(min(m, n))]
        for a, b in zip(diag, diag[1:]):
            if a == 0:
                assert b == 0
            else:
                assert b % a == 0
        assert all(x >= 0 for x in diag)


# ----------------------------------------------------------------- quotients


def test_chart_quotients_simple_cyclic():
    W = WeightMatrix.build(["x", "y", "z", "t"], [1, 1, 1, 1], [0, 5, 2, 3])
    out = chart_quotients(W, 0, ["x", "y"])
    assert len(out) == 1
    q = out[0]
    assert q.r == 5
    assert q.names == ("z", "t")
    assert sorted(q.weights) in ([2, 3], [2, 3])
    assert q.render() in ("1/5(2,3)", "1/5(3,2)")


def test_chart_quotients_trivial_when_unimodular():
    W = WeightMatrix.build(["x", "y", "z"], [1, 0, 3], [0, 1, 7])
    assert chart_quotients(W, 0, ["x", "y"]) == []


def test_chart_quotients_rejects_collinear():
    W = WeightMatrix.build(["x", "y", "z"], [1, 2, 0], [1, 2, 1])
    with pytest.raises(ValueError):
        chart_quotients(W, 0, ["x", "y"])


def test_chart_quotients_weight_is_group_character():
    # the residual group of the chart acts on each leftover coordinate by the
    # character its weight column induces; verify against a direct stabilizer
    W = WeightMatrix.build(["x", "y", "z"], [2, 1, 1], [0, 3, 1])
    (q,) = chart_quotients(W, 0, ["x", "y"])
    assert q.r == 6
    # an order-6 stabilizer element (zeta^a, zeta^b) with 2a = 0 and a+3b = 0
    # mod 6 acts on z with weight a + b; the type must realize it faithfully
    assert q.weight_of("z") in range(6)
    reconstructed = CyclicQuotientType(q.r, q.names, q.weights)
    assert reconstructed == q
