"""Exact computer algebra for rank-two toric VGIT and Q-Fano birational links.

Modules:
    rings      polynomial core (exact Q and GF(p) arithmetic, parser, minors)
    groebner   Buchberger engine, ideal membership, elimination, dimension
    toric      weight matrices, chamber scans, wall crossings, quotient types
    singular   Reid-Tai criterion, Jacobian ranks, compound-A classification
    catalog    the bundled variety and family data with exact constructors
    checks     the verification suite C1..C14 and its report format
    cli        the `qfv` command line
"""

from qfv.rings import (  # noqa: F401
    Poly,
    PolyMatrix,
    Ring,
    diff,
    divide_out_var,
    make_ring,
    matrix_minor,
    parse_poly,
    poly_arith,
    substitute,
    weighted_parts,
)

__version__ = "0.1.0"
