"""Rank-two toric weight matrices: chambers, walls, crossings, quotient types.

A WeightMatrix is a 2 x N integer matrix whose columns are named torus
weights.  Chamber combinatorics happen inside the plane of characters: rays
are the primitive column directions sorted counterclockwise starting just
below the negative x-axis, and a GIT chamber is the open cone between two
angularly consecutive rays.

Wall crossings are classified by how the strictly-separated columns split:
an empty side is a fibration onto the wall columns, a singleton side is a
divisorial contraction of that column, and two sides of size two or more
form a flip whose signed weights are read off a functional vanishing on the
wall.  Finite cyclic quotient types of torus charts come from Smith normal
form certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Iterable, Sequence

from qfv.rings import eval as poly_eval, make_ring, parse_poly

__all__ = [
    "WeightMatrix",
    "Ray",
    "ChamberScan",
    "UnstableLocus",
    "WallMap",
    "CrossingReport",
    "CyclicQuotientType",
    "chamber_scan",
    "unstable_locus",
    "wall_map",
    "crossing_type",
    "smith_normal_form",
    "chart_quotients",
    "primitive",
]

_D_RING = make_ring(["d"])


def _parse_entry(token: str, d) -> int:
    """An entry is an integer or an expression in the symbol d (e.g. 3*d+3)."""
    p = parse_poly(_D_RING, token)
    if p.degree_in("d") > 0 and d is None:
        raise ValueError(f"entry {token!r} needs a value for d")
    v = poly_eval(p, {"d": 0 if d is None else int(d)})
    if v.denominator != 1:
        raise ValueError(f"entry {token!r} is not an integer")
    return int(v)


@dataclass(frozen=True)
class WeightMatrix:
    """Named columns with two integer weight rows."""

    names: tuple
    rows: tuple  # (row1, row2), each a tuple of ints

    def __post_init__(self):
        if len(self.rows) != 2:
            raise ValueError("a weight matrix has exactly two rows")
        for row in self.rows:
            if len(row) != len(self.names):
                raise ValueError("row length does not match column count")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate column names")

    @classmethod
    def build(cls, names: Iterable[str], row1: Iterable[int], row2: Iterable[int]) -> "WeightMatrix":
        return cls(tuple(names), (tuple(int(x) for x in row1), tuple(int(x) for x in row2)))

    @classmethod
    def from_text(cls, text: str, d=None) -> "WeightMatrix":
        """Parse the three-line format: column names, then two entry rows.

        Lines starting with '#' and blank lines are skipped.  Entries may be
        integers or expressions in the symbol d, bound by the `d` argument.
        """
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if len(lines) != 3:
            raise ValueError(f"expected 3 content lines, found {len(lines)}")
        names = tuple(lines[0].split())
        row1 = tuple(_parse_entry(tok, d) for tok in lines[1].split())
        row2 = tuple(_parse_entry(tok, d) for tok in lines[2].split())
        return cls(names, (row1, row2))

    @property
    def ncols(self) -> int:
        return len(self.names)

    def column(self, name: str) -> tuple:
        i = self.names.index(name)
        return (self.rows[0][i], self.rows[1][i])

    def columns(self) -> dict:
        return {n: self.column(n) for n in self.names}

    def render(self) -> str:
        head = " ".join(self.names)
        r1 = " ".join(str(x) for x in self.rows[0])
        r2 = " ".join(str(x) for x in self.rows[1])
        return f"{head}\n{r1}\n{r2}\n"


def primitive(v: tuple) -> tuple:
    g = gcd(v[0], v[1])
    if g == 0:
        raise ValueError("zero vector has no direction")
    return (v[0] // g, v[1] // g)


def _cross(u: tuple, v: tuple) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _angle_class(v: tuple) -> int:
    x, y = v
    if y < 0:
        return 0
    if y == 0 and x > 0:
        return 1
    if y > 0:
        return 2
    return 3  # y == 0, x < 0


def _angle_cmp(u: tuple, v: tuple) -> int:
    """Total order on directions: counterclockwise sweep beginning just below
    the negative x-axis.  Within one half-plane class, u precedes v exactly
    when u x v > 0."""
    cu, cv = _angle_class(u), _angle_class(v)
    if cu != cv:
        return -1 if cu < cv else 1
    c = _cross(u, v)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


@dataclass(frozen=True)
class Ray:
    direction: tuple     # primitive (x, y)
    columns: tuple       # names of the columns pointing along it


@dataclass(frozen=True)
class ChamberScan:
    matrix: WeightMatrix
    rays: tuple          # Ray, in angular order
    chambers: tuple      # (lower_ray_index, upper_ray_index) pairs

    def ray_of(self, column: str) -> int:
        for i, r in enumerate(self.rays):
            if column in r.columns:
                return i
        raise KeyError(f"column {column!r} lies on no ray")

    def chamber_cone(self, chamber: int) -> tuple:
        lo, hi = self.chambers[chamber]
        return (self.rays[lo].direction, self.rays[hi].direction)


def chamber_scan(W: WeightMatrix) -> ChamberScan:
    """Group columns into primitive rays, order them angularly, and list the
    chambers cut out by angularly consecutive ray pairs."""
    groups: dict = {}
    for name in W.names:
        v = W.column(name)
        if v == (0, 0):
            raise ValueError(f"column {name!r} has zero weight")
        groups.setdefault(primitive(v), []).append(name)
    dirs = sorted(groups, key=cmp_to_key(_angle_cmp))
    rays = tuple(Ray(d, tuple(groups[d])) for d in dirs)
    chambers = []
    for i in range(len(rays) - 1):
        if _cross(rays[i].direction, rays[i + 1].direction) > 0:
            chambers.append((i, i + 1))
    return ChamberScan(W, rays, tuple(chambers))


@dataclass(frozen=True)
class UnstableLocus:
    """The two coordinate subspaces destabilized by a chamber: columns at or
    below the lower bounding ray, and columns at or above the upper one."""

    lower: tuple
    upper: tuple


def unstable_locus(W: WeightMatrix, chamber: int) -> UnstableLocus:
    scan = chamber_scan(W)
    if not 0 <= chamber < len(scan.chambers):
        raise IndexError(f"chamber {chamber} out of range ({len(scan.chambers)} found)")
    lo, hi = scan.chambers[chamber]
    lower, upper = [], []
    for name in W.names:
        d = primitive(W.column(name))
        if _angle_cmp(d, scan.rays[lo].direction) <= 0:
            lower.append(name)
        if _angle_cmp(d, scan.rays[hi].direction) >= 0:
            upper.append(name)
    return UnstableLocus(tuple(lower), tuple(upper))


def _wall_functional(direction: tuple) -> tuple:
    """Coefficients (a, b) of the functional phi(v) = a*v_x + b*v_y vanishing
    on the ray and positive on directions angularly earlier than it."""
    x, y = direction
    # phi(v) = y*v_x - x*v_y is positive when v x direction > 0, i.e. earlier
    return (y, -x)


@dataclass(frozen=True)
class CrossingReport:
    """How a wall separates the columns; phi vanishes on the wall and is
    positive on the angularly earlier (clockwise) side."""

    kind: str               # "fibration" | "divisorial" | "flip"
    wall: int               # ray index in the scan
    direction: tuple
    phi: dict               # column name -> integer value
    wall_columns: tuple
    earlier_columns: tuple  # phi > 0
    later_columns: tuple    # phi < 0

    @property
    def divisor_column(self) -> str:
        if self.kind != "divisorial":
            raise AttributeError("not a divisorial crossing")
        side = self.earlier_columns if len(self.earlier_columns) == 1 else self.later_columns
        return side[0]

    @property
    def base_columns(self) -> tuple:
        if self.kind != "fibration":
            raise AttributeError("not a fibration wall")
        return self.wall_columns


def crossing_type(W: WeightMatrix, wall: int) -> CrossingReport:
    """Classify the wall by the sizes of the two strictly separated sides."""
    scan = chamber_scan(W)
    if not 0 <= wall < len(scan.rays):
        raise IndexError(f"ray {wall} out of range ({len(scan.rays)} found)")
    direction = scan.rays[wall].direction
    a, b = _wall_functional(direction)
    phi = {}
    on_wall, earlier, later = [], [], []
    for name in W.names:
        vx, vy = W.column(name)
        val = a * vx + b * vy
        phi[name] = val
        if val == 0:
            on_wall.append(name)
        elif val > 0:
            earlier.append(name)
        else:
            later.append(name)
    if not earlier or not later:
        kind = "fibration"
    elif len(earlier) == 1 or len(later) == 1:
        kind = "divisorial"
    else:
        kind = "flip"
    return CrossingReport(kind, wall, direction, phi,
                          tuple(on_wall), tuple(earlier), tuple(later))


@dataclass(frozen=True)
class WallMap:
    """Monomial coordinate change across an elementary wall.

    The eliminated column m is the unique one strictly on its side of the
    wall; every other column v maps to v * m**exponents[v], where the
    exponent is phi(v) / |phi(m)| with phi vanishing on the wall and
    normalized positive on the side away from m.  For a fibration wall there
    is no such m; the map instead records the wall columns as homogeneous
    coordinates of the base.
    """

    kind: str            # "monomial" | "fibration"
    wall: int
    direction: tuple
    eliminated: str | None
    exponents: dict | None      # name -> Fraction, for every column except m
    base_columns: tuple | None

    def apply_name(self, name: str) -> tuple:
        """(name, exponent of m) for a monomial wall map."""
        if self.kind != "monomial":
            raise AttributeError("fibration walls carry no monomial map")
        return (name, self.exponents[name])


def wall_map(W: WeightMatrix, chamber: int, wall: int) -> WallMap:
    """The elementary crossing map attached to a bounding wall of a chamber.

    Raises ValueError when both strict sides have two or more columns (a
    flip: no single-column monomial chart change exists; use crossing_type).
    """
    scan = chamber_scan(W)
    if not 0 <= chamber < len(scan.chambers):
        raise IndexError(f"chamber {chamber} out of range")
    lo, hi = scan.chambers[chamber]
    if wall not in (lo, hi):
        raise ValueError(f"ray {wall} does not bound chamber {chamber}")
    report = crossing_type(W, wall)
    if report.kind == "fibration":
        return WallMap("fibration", wall, report.direction, None, None,
                       report.wall_columns)
    if report.kind == "flip":
        raise ValueError("flip wall: both strict sides have several columns")
    m = report.divisor_column
    # orient phi negative on m
    sign = -1 if report.phi[m] > 0 else 1
    denom = abs(report.phi[m])
    exps = {}
    for name in W.names:
        if name == m:
            continue
        exps[name] = Fraction(sign * report.phi[name], denom)
    return WallMap("monomial", wall, report.direction, m, exps, None)


# ---------------------------------------------------------------------------
# Smith normal form and cyclic quotient types


def _identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _mat_mul(A: list, B: list) -> list:
    return [[sum(A[i][k] * B[k][j] for k in range(len(B)))
             for j in range(len(B[0]))] for i in range(len(A))]


def smith_normal_form(A: Sequence[Sequence[int]]):
    """Return (U, S, V) with U*A*V = S, U and V unimodular, S diagonal with
    each diagonal entry dividing the next.  Pure integer arithmetic."""
    m = len(A)
    n = len(A[0]) if m else 0
    S = [[int(x) for x in row] for row in A]
    for row in S:
        if len(row) != n:
            raise ValueError("ragged matrix")
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for r in S:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    def negate_row(i):
        S[i] = [-a for a in S[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(m, n):
        # locate a nonzero pivot of least magnitude in the trailing block
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] and (pivot is None or abs(S[i][j]) < abs(S[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear the pivot column
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    add_row(i, t, -q)
                    if S[i][t]:
                        swap_rows(i, t)
                        dirty = True
            # clear the pivot row
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    add_col(j, t, -q)
                    if S[t][j]:
                        swap_cols(j, t)
                        dirty = True
            if not dirty and all(S[i][t] == 0 for i in range(t + 1, m)) \
                    and all(S[t][j] == 0 for j in range(t + 1, n)):
                break
        # enforce divisibility of the remaining block by the pivot
        fixed = False
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if S[i][j] % S[t][t] != 0:
                    add_row(t, i, 1)
                    fixed = True
                    break
            if fixed:
                break
        if fixed:
            continue
        if S[t][t] < 0:
            negate_row(t)
        t += 1
    return U, S, V


def _det_int(M: list) -> int:
    """Integer determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(M)
    A = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


@dataclass(frozen=True)
class CyclicQuotientType:
    """A finite cyclic factor 1/r(a_1, ..., a_k) acting on named coordinates."""

    r: int
    names: tuple
    weights: tuple

    def weight_of(self, name: str) -> int:
        return self.weights[self.names.index(name)]

    def render(self) -> str:
        inside = ",".join(str(w) for w in self.weights)
        return f"1/{self.r}({inside})"


def chart_quotients(W: WeightMatrix, chamber: int, unit_vars: Sequence[str]) -> list:
    """Finite quotient data of the torus chart where the two named columns
    are scaled to one.

    The residual stabilizer of the chart is Z^2 / A Z^2 for A the 2x2 block
    of the unit columns; each invariant factor d_i > 1 of A contributes a
    cyclic type of order d_i acting on all remaining columns v with weight
    (U v)_i mod d_i, where U A V = S is a Smith certificate.  The full
    residue list is returned; callers restrict to the coordinates of their
    chart.  `chamber` is validated against the scan but does not affect the
    group computation.
    """
    unit_vars = list(unit_vars)
    if len(unit_vars) != 2:
        raise ValueError("a torus chart needs exactly two unit columns")
    scan = chamber_scan(W)
    if not 0 <= chamber < len(scan.chambers):
        raise IndexError(f"chamber {chamber} out of range")
    c1, c2 = (W.column(v) for v in unit_vars)
    A = [[c1[0], c2[0]], [c1[1], c2[1]]]
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    if det == 0:
        raise ValueError("unit columns are collinear; they cut out no chart")
    U, S, V = smith_normal_form(A)
    rest = [n for n in W.names if n not in unit_vars]
    out = []
    for i in range(2):
        d = S[i][i]
        if d <= 1:
            continue
        weights = []
        for name in rest:
            v = W.column(name)
            w = U[i][0] * v[0] + U[i][1] * v[1]
            weights.append(w % d)
        out.append(CyclicQuotientType(d, tuple(rest), tuple(weights)))
    return out
