"""Bundled model data and typed loaders for it.

The ``data`` directory carries the determinantal matrix, the coefficient
combination defining the quintic and the unprojection form, the nine
equations of the blown-up model, the four chart parametrizations, the
fibration-chart transitions, the two-stage weight matrices, and the seven
family section tables.  Everything here parses those files once per
coefficient field and hands out immutable objects built on the rings and
toric modules; nothing in this module computes new mathematics.
"""

from __future__ import annotations

import hashlib
import random
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cache
from pathlib import Path
from typing import Mapping

from qfv.rings import (
    Poly,
    PolyMatrix,
    Ring,
    make_ring,
    matrix_minor,
    parse_poly,
    substitute,
)
from qfv.toric import WeightMatrix

_DATA = Path(__file__).parent / "data"

M_VARIABLES = ("p1", "p2", "p3", "p4", "u1", "u2", "t1", "t2")
T_VARIABLES = ("t123", "t124", "t125", "t126", "t135", "t136", "t245")
S_VARIABLES = ("s123", "s124", "s125", "s126", "s135", "s136", "s245", "s246")
F_VARIABLES = ("s1", "s2", "s3", "w") + M_VARIABLES + T_VARIABLES
CHART_NAMES = ("s135", "s124", "s123", "s246")
MINOR_TRIPLES = ("123", "124", "125", "126", "135", "136", "245", "246")
FAMILY_IDS = (501, 512, 550, 872, 577, 878, 1766)

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def data_path(name: str) -> Path:
    p = _DATA / name
    if not p.is_file():
        raise FileNotFoundError(f"no bundled data file named {name!r}")
    return p


def data_text(name: str) -> str:
    return data_path(name).read_text()


def data_sha256(name: str) -> str:
    return hashlib.sha256(data_text(name).encode()).hexdigest()


def _content_lines(name: str) -> list[str]:
    out = []
    for ln in data_text(name).splitlines():
        ln = ln.strip()
        if ln and not ln.startswith("#"):
            out.append(ln)
    return out


# -- rings ----------------------------------------------------------------


@cache
def m_ring(field: int = 0) -> Ring:
    """The eight matrix variables."""
    return make_ring(M_VARIABLES, field=field)


@cache
def model_ring(field: int = 0) -> Ring:
    """Matrix variables plus the seven t_ijk coefficients."""
    return make_ring(M_VARIABLES + T_VARIABLES, field=field)


@cache
def chart_ring(field: int = 0) -> Ring:
    """Blow-up coordinate, matrix variables, t_ijk and s_ijk coordinates."""
    return make_ring(("w",) + M_VARIABLES + T_VARIABLES + S_VARIABLES, field=field)


@cache
def f_ring(field: int = 0) -> Ring:
    """Home of the nine equations F1..F9."""
    return make_ring(F_VARIABLES, field=field)


def _lift(p: Poly, target: Ring) -> Poly:
    return substitute(p, {}, target=target)


# -- the matrix and its minors ---------------------------------------------


@cache
def matrix_M(field: int = 0) -> PolyMatrix:
    lines = _content_lines("matrix_m.txt")
    ring = m_ring(field)
    rows = []
    for ln in lines:
        rows.append(tuple(parse_poly(ring, tok) for tok in ln.split(";")))
    if len(rows) != 3 or any(len(r) != 6 for r in rows):
        raise ValueError("matrix data must be 3 rows of 6 entries")
    return PolyMatrix(tuple(rows))


def minor_D(triple, field: int = 0) -> Poly:
    """Maximal minor on the named columns, e.g. minor_D("135").

    Columns are 1-based and must be distinct; a repeated column is a usage
    error here even though the underlying determinant would just vanish.
    """
    if isinstance(triple, str):
        cols = tuple(int(ch) for ch in triple)
    else:
        cols = tuple(int(c) for c in triple)
    if len(cols) != 3:
        raise ValueError(f"a maximal minor takes 3 columns, got {cols}")
    if len(set(cols)) != 3:
        raise ValueError(f"repeated column in minor request {cols}")
    if any(not 1 <= c <= 6 for c in cols):
        raise ValueError(f"column out of range in {cols}")
    return matrix_minor(matrix_M(field), (0, 1, 2), tuple(c - 1 for c in cols))


@cache
def minors_D(field: int = 0) -> tuple:
    """The eight distinguished minors, in the order of MINOR_TRIPLES."""
    return tuple(minor_D(t, field) for t in MINOR_TRIPLES)


@cache
def combination(field: int = 0) -> tuple:
    """Pairs (coefficient, triple) defining the quintic and the unprojection form."""
    ring = model_ring(field)
    out = []
    for ln in _content_lines("combination.txt"):
        coeff, triple = (part.strip() for part in ln.split(";"))
        if triple not in MINOR_TRIPLES:
            raise ValueError(f"unknown column triple {triple!r}")
        out.append((parse_poly(ring, coeff), triple))
    if len(out) != 8:
        raise ValueError("the combination has exactly 8 summands")
    return tuple(out)


@cache
def F_bar_Pi(field: int = 0) -> Poly:
    """The quintic: the coefficient combination applied to the minors."""
    ring = model_ring(field)
    total = ring.zero()
    for coeff, triple in combination(field):
        total = total + coeff * _lift(minor_D(triple, field), ring)
    return total


@cache
def unprojection_I(field: int = 0) -> Poly:
    """The same combination applied to the coordinates s_ijk."""
    ring = chart_ring(field)
    total = ring.zero()
    for coeff, triple in combination(field):
        total = total + _lift(coeff, ring) * ring.var("s" + triple)
    return total


@cache
def equations_F(field: int = 0) -> tuple:
    """The nine equations of the blown-up model, F1 through F9."""
    ring = f_ring(field)
    eqs: dict[int, Poly] = {}
    for ln in _content_lines("equations_f.txt"):
        head, rhs = ln.split("=", 1)
        k = int(head.strip().lstrip("F"))
        eqs[k] = parse_poly(ring, rhs.strip())
    if sorted(eqs) != list(range(1, 10)):
        raise ValueError("expected equations F1..F9")
    return tuple(eqs[k] for k in range(1, 10))


# -- charts ----------------------------------------------------------------


@dataclass(frozen=True)
class ChartRelation:
    """One chart identity: variable = numerator / chart_variable^power."""

    chart: str
    var: str
    power: int
    numerator: Poly

    def denominator(self) -> Poly:
        return self.numerator.ring.var(self.chart) ** self.power

    def cleared(self) -> Poly:
        """variable * chart_variable^power - numerator."""
        ring = self.numerator.ring
        return ring.var(self.var) * self.denominator() - self.numerator


@cache
def chart_equations(chart: str, field: int = 0) -> tuple:
    if chart not in CHART_NAMES:
        raise ValueError(f"unknown chart {chart!r}; pick one of {CHART_NAMES}")
    ring = chart_ring(field)
    out = []
    for ln in _content_lines(f"chart_{chart}.txt"):
        var, power, num = (part.strip() for part in ln.split(";"))
        if num.startswith("@D"):
            numerator = _lift(minor_D(num[2:], field), ring)
        else:
            numerator = parse_poly(ring, num)
        out.append(ChartRelation(chart, var, int(power), numerator))
    return tuple(out)


def chart_eliminated(chart: str) -> tuple:
    """Variables the chart parametrization solves for."""
    return tuple(rel.var for rel in chart_equations(chart))


def chart_unprojection_variable(chart: str) -> str | None:
    """The t_ijk eliminated through the unprojection form on this chart, if any."""
    if chart not in CHART_NAMES:
        raise ValueError(f"unknown chart {chart!r}; pick one of {CHART_NAMES}")
    name = "t" + chart[1:]
    return name if name in T_VARIABLES else None


# -- transitions ------------------------------------------------------------

TRANSITION_VARIABLES = (
    "ell", "p1", "p2", "p4", "u1", "t1", "t2",
    "q125", "q136", "r124", "r125", "r126", "r136",
)


@cache
def transition_ring(field: int = 0) -> Ring:
    return make_ring(TRANSITION_VARIABLES, field=field)


@cache
def transition_functions(direction: str, field: int = 0) -> dict:
    """Chart transition maps; direction is "to_s123" or "to_s135".

    Returns an ordered mapping  lhs -> (numerator, k)  with the value being
    numerator / ell^k in the transition ring.
    """
    if direction not in ("to_s123", "to_s135"):
        raise ValueError(f"direction must be to_s123 or to_s135, got {direction!r}")
    ring = transition_ring(field)
    section = None
    out: dict[str, tuple] = {}
    for ln in _content_lines("transitions_dp.txt"):
        if ln.startswith("["):
            section = ln.strip("[]")
            continue
        if section != direction:
            continue
        lhs, power, num = (part.strip() for part in ln.split(";"))
        out[lhs] = (parse_poly(ring, num), int(power))
    if not out:
        raise ValueError(f"no transition data for {direction!r}")
    return out


# -- weight matrices ---------------------------------------------------------

_KINDS = ("Dp", "Div")
_STAGES = ("one", "two")


@cache
def weight_matrix_by_kind(stage: str, kind: str, d: int) -> WeightMatrix:
    if stage not in _STAGES:
        raise ValueError(f"stage must be one of {_STAGES}, got {stage!r}")
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")
    name = f"weights_stage{'1' if stage == 'one' else '2'}_{kind.lower()}.txt"
    return WeightMatrix.from_text(data_text(name), d=d)


def weight_matrix(stage: str, family_id: int) -> WeightMatrix:
    rec = family(family_id)
    return weight_matrix_by_kind(stage, rec.kind, rec.d)


@cache
def stage1_names(kind: str) -> tuple:
    return weight_matrix_by_kind("one", kind, 2).names


def cone_names(kind: str) -> tuple:
    """Coordinates of the underlying cone: everything except w, s1, s2, s3."""
    return tuple(n for n in stage1_names(kind) if n not in ("w", "s1", "s2", "s3"))


def ambient_names(kind: str) -> tuple:
    """Coordinates of the projected model: cone coordinates plus s1, s2, s3."""
    return cone_names(kind) + ("s1", "s2", "s3")


def ambient_weights(kind: str, d: int) -> dict:
    W = weight_matrix_by_kind("one", kind, d)
    return {n: W.column(n)[0] for n in ambient_names(kind)}


@cache
def ambient_ring(kind: str, d: int, field: int = 0) -> Ring:
    """Graded polynomial ring of the projected model for one (kind, d)."""
    names = ambient_names(kind)
    wts = ambient_weights(kind, d)
    return make_ring(names, gradings=((tuple(wts[n] for n in names)),), field=field)


# -- families ----------------------------------------------------------------


@dataclass(frozen=True)
class SectionTemplate:
    """One line of a family table: target = general section of given weight."""

    weight: int
    target: str
    text: str
    coefficients: tuple

    def poly(self, ring: Ring) -> Poly:
        """Parse the template in a ring containing target and coefficients."""
        return parse_poly(ring, self.text)


@dataclass(frozen=True)
class FamilyRecord:
    id: int
    kind: str
    d: int
    embedding: tuple  # ((name, weight), ...)
    remark: str
    templates: tuple = dc_field(repr=False, default=())

    @property
    def embedding_names(self) -> tuple:
        return tuple(n for n, _ in self.embedding)

    @property
    def embedding_weights(self) -> tuple:
        return tuple(w for _, w in self.embedding)

    @property
    def coefficient_names(self) -> tuple:
        out = []
        for tpl in self.templates:
            out.extend(tpl.coefficients)
        return tuple(out)

    @property
    def section_targets(self) -> tuple:
        return tuple(tpl.target for tpl in self.templates)


def _parse_templates(fid: int, kind: str) -> tuple:
    known = set(ambient_names(kind))
    out = []
    for ln in _content_lines(f"sections_{fid}.txt"):
        weight, target, text = (part.strip() for part in ln.split(";"))
        if target not in known:
            raise ValueError(f"section target {target!r} is not a coordinate")
        idents = []
        for tok in _IDENT.findall(text):
            if tok not in known and tok not in idents:
                idents.append(tok)
        used = set(_IDENT.findall(text)) & {"s1", "s2", "s3"}
        if used:
            raise ValueError(
                f"family {fid}: section for {target} touches {sorted(used)}"
            )
        out.append(SectionTemplate(int(weight), target, text, tuple(idents)))
    targets = [tpl.target for tpl in out]
    if len(set(targets)) != len(targets):
        raise ValueError(f"family {fid}: duplicate section target")
    return tuple(out)


@cache
def _families() -> dict:
    out = {}
    for ln in _content_lines("families.txt"):
        parts = [part.strip() for part in ln.split(";")]
        fid, kind, d = int(parts[0]), parts[1], int(parts[2])
        embedding = []
        for tok in parts[3].split():
            name, wt = tok.split(":")
            embedding.append((name, int(wt)))
        remark = parts[4] if len(parts) > 4 else ""
        templates = _parse_templates(fid, kind)
        out[fid] = FamilyRecord(fid, kind, d, tuple(embedding), remark, templates)
    if tuple(out) != FAMILY_IDS:
        raise ValueError("family table ids changed")
    return out


def families() -> tuple:
    return FAMILY_IDS


def family(fid: int) -> FamilyRecord:
    recs = _families()
    if fid not in recs:
        raise ValueError(f"unknown family {fid}; known ids: {FAMILY_IDS}")
    return recs[fid]


@dataclass(frozen=True)
class SectionInstance:
    """A family table with its free coefficients pinned to field values."""

    family: FamilyRecord
    ring: Ring
    assignments: Mapping[str, Poly]  # target -> section polynomial
    values: Mapping[str, object] | None  # coefficient name -> value (None if symbolic)
    seed: int | None

    def value(self, name: str):
        if self.values is None:
            raise ValueError("symbolic instance has no numeric coefficients")
        return self.values[name]


def _seeded_values(fid: int, seed: int, names: tuple) -> dict:
    digest = hashlib.sha256(f"sections:{fid}:{seed}".encode()).digest()
    rng = random.Random(int.from_bytes(digest[:8], "big"))
    values = {}
    for name in names:
        num = 0
        while num == 0:
            num = rng.randint(-50, 50)
        den = rng.randint(1, 50)
        values[name] = Fraction(num, den)
    return values


@cache
def symbolic_ring(fid: int, field: int = 0) -> Ring:
    """Ambient ring extended by the family's free coefficients."""
    rec = family(fid)
    names = ambient_names(rec.kind) + rec.coefficient_names
    wts = ambient_weights(rec.kind, rec.d)
    row = tuple(wts.get(n, 0) for n in names)
    return make_ring(names, gradings=(row,), field=field)


def sections(
    fid: int,
    seed: int = 0,
    explicit: Mapping[str, object] | None = None,
    field: int = 0,
    symbolic: bool = False,
) -> SectionInstance:
    """Instantiate a family's section table.

    By default the free coefficients are drawn deterministically from the
    (fid, seed) pair as nonzero rationals num/den with num in [-50, 50] and
    den in [1, 50].  Passing `explicit` pins every coefficient instead;
    `symbolic=True` keeps them as extra ring variables.
    """
    rec = family(fid)
    coeffs = rec.coefficient_names
    sring = symbolic_ring(fid, field)
    raw = {tpl.target: tpl.poly(sring) for tpl in rec.templates}

    if symbolic:
        if explicit is not None:
            raise ValueError("symbolic instances take no explicit values")
        return SectionInstance(rec, sring, raw, None, None)

    if explicit is not None:
        missing = [c for c in coeffs if c not in explicit]
        extra = [c for c in explicit if c not in coeffs]
        if missing or extra:
            raise ValueError(
                f"explicit coefficients mismatch: missing {missing}, extra {extra}"
            )
        values = {c: explicit[c] for c in coeffs}
        seed_used = None
    else:
        values = _seeded_values(fid, seed, coeffs)
        seed_used = seed

    ring = ambient_ring(rec.kind, rec.d, field)
    images = {c: ring.const(v) for c, v in values.items()}
    assignments = {
        t: substitute(p, images, target=ring) for t, p in raw.items()
    }
    return SectionInstance(rec, ring, assignments, values, seed_used)
