"""Homotopy-defined areas of closed polygonal curves with lattice vertices.

Curves are approximated by staircase paths in an M-refined grid; the
approximation error is at most 2|c|/M in grid length units, so a target
denominator L pins the exact area once M is large enough.  All outputs
are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import lattice
from .lattice import LatticePath

Point = tuple[int, int]


class NotOnTessellation(ValueError):
    pass


@dataclass(frozen=True)
class PolyCurve:
    """Closed polygonal curve; the last vertex connects back to the first."""

    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 2:
            raise ValueError("a closed curve needs at least two vertices")
        for p, q in self.segments():
            if p == q:
                raise ValueError("consecutive vertices must be distinct")

    def segments(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def seg_t_length(p: Point, q: Point, refinement: int = 1) -> int:
    """Grid length of one segment in the M-refined tessellation."""
    dx, dy = abs(q[0] - p[0]), abs(q[1] - p[1])
    if dx == 0 or dy == 0:
        return refinement * (dx + dy)
    return refinement * (dx + dy - gcd(dx, dy))


def t_length(c: PolyCurve, refinement: int = 1) -> int:
    if refinement < 1:
        raise ValueError("refinement must be >= 1")
    return sum(seg_t_length(p, q, refinement) for p, q in c.segments())


def staircase(p: Point, q: Point, refinement: int = 1) -> LatticePath:
    """Upper boundary path of the refined cells met by the segment.

    The path runs from p to q along the clockwise-first side of the cell
    region's boundary; axis-aligned segments return themselves.  The
    returned coordinates are scaled by the refinement factor.
    """
    m = refinement
    x0, y0 = p[0] * m, p[1] * m
    dx, dy = (q[0] - p[0]) * m, (q[1] - p[1]) * m
    if dx == 0 or dy == 0:
        ch = ("E" if dx > 0 else "W") if dy == 0 else ("N" if dy > 0 else "S")
        return LatticePath((x0, y0), ch * (abs(dx) + abs(dy)))
    steps: list[str] = []
    if dx > 0:
        # clockwise-first side: up/along the tops of the cell columns
        tops = [_col_top(x, dx, dy) for x in range(dx)]
        ycur = 0
        if dy > 0:
            for x in range(dx):
                steps.append("N" * (tops[x] - ycur))
                steps.append("E")
                ycur = tops[x]
        else:
            for x in range(dx):
                steps.append("S" * (ycur - tops[x]))
                steps.append("E")
                ycur = tops[x]
            steps.append("S" * (ycur - dy))
    else:
        # clockwise-first side: down/along the bottoms, moving left
        bots = [_col_bot(x, dx, dy) for x in range(-1, dx - 1, -1)]
        ncols = -dx
        ycur = 0
        if dy < 0:
            for i in range(ncols):
                steps.append("S" * (ycur - bots[i]))
                steps.append("W")
                ycur = bots[i]
        else:
            for i in range(ncols):
                steps.append("W")
                nxt = bots[i + 1] if i + 1 < ncols else dy
                steps.append("N" * (nxt - ycur))
                ycur = nxt
    return LatticePath((x0, y0), "".join(steps))


def _col_top(x: int, dx: int, dy: int) -> int:
    """One above the highest cell row of column [x, x+1] (dx > 0)."""
    hi = max(dy * x, dy * (x + 1))
    return -((-hi) // dx)  # ceil(hi / dx)


def _col_bot(x: int, dx: int, dy: int) -> int:
    """Lowest cell row of column [x, x+1] (dx < 0)."""
    return max(dy * x, dy * (x + 1)) // dx  # floor of the smaller y/dx value


def approx_path(c: PolyCurve, refinement: int) -> LatticePath:
    """Concatenated staircases of all segments, in the refined grid."""
    if refinement < 1:
        raise ValueError("refinement must be >= 1")
    parts = [staircase(p, q, refinement) for p, q in c.segments()]
    start = parts[0].start
    return LatticePath(start, "".join(part.steps for part in parts))


def approx_area(c: PolyCurve, refinement: int, engine: str = "auto") -> Fraction:
    """Area of the staircase approximant, exact over the refined grid."""
    zeta = approx_path(c, refinement)
    return Fraction(lattice.m2(zeta, engine=engine), refinement * refinement)


def area_with_denominator(
    c: PolyCurve, denom: int, n: int, refinement: int | None = None
) -> Fraction:
    """Exact area, given that it is an integer multiple of 1/denom.

    Needs denom < t^n/2 where t is the grid length of the curve; the
    refinement defaults to t^(n+2).  A caller-supplied smaller refinement
    must still certify approximation error below 1/(2*denom).
    """
    if denom < 1 or n < 1:
        raise ValueError("denominator and exponent must be positive")
    t = t_length(c)
    if t <= 2:
        return Fraction(0)
    if 2 * denom >= t**n:
        raise ValueError(f"denominator {denom} too large for exponent {n}")
    m = t ** (n + 2) if refinement is None else refinement
    if refinement is not None and Fraction(2 * t, m) >= Fraction(1, 2 * denom):
        raise ValueError("supplied refinement does not certify the rounding")
    approx = approx_area(c, m)
    scaled = approx * denom
    nearest = (scaled + Fraction(1, 2)).__floor__()
    return Fraction(nearest, denom)


def area_k(c: PolyCurve, k: int) -> Fraction:
    """Exact area for curves whose pairwise intersections live on (1/k)-points."""
    if k < 1:
        raise ValueError("k must be >= 1")
    t = t_length(c)
    if t <= 2:
        return Fraction(0)
    denom = 2 * k * k
    n = 1
    while t**n <= 4 * k * k:
        n += 1
    return area_with_denominator(c, denom, n)


# -- triangular and hexagonal tessellations -----------------------------------

_TRI_STEPS = {(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)}


def tri_hex_area(path: Sequence[Point], tessellation: str = "triangular") -> Fraction:
    """Area enclosed by a closed path on the unit-area triangle or hexagon grid.

    Vertices use the affine coordinates in which triangle edges map to the
    unit square grid plus its southwest-northeast diagonals.
    """
    pts = [tuple(p) for p in path]
    if len(pts) < 2 or pts[0] != pts[-1]:
        raise NotOnTessellation("path must be closed (first vertex repeated last)")
    pts = pts[:-1]
    for a, b in zip(pts, pts[1:] + pts[:1]):
        if (b[0] - a[0], b[1] - a[1]) not in _TRI_STEPS:
            raise NotOnTessellation(f"{a} -> {b} is not a tessellation edge")
    if tessellation not in ("triangular", "hexagonal"):
        raise ValueError(f"unknown tessellation {tessellation!r}")
    if tessellation == "hexagonal":
        cosets = {(a + b) % 3 for a, b in pts}
        if len(cosets) > 2:
            raise NotOnTessellation("path visits all three sublattices")
    curve = PolyCurve(tuple(pts))
    square_area = area_k(curve, 1)
    if tessellation == "triangular":
        return 2 * square_area
    return square_area / 3


# -- the prime-gap example curve ----------------------------------------------


@dataclass(frozen=True)
class PrimeCurve:
    curve: PolyCurve
    expected_t_length: int
    expected_area: Fraction


def gen_prime_curve(n: int) -> PrimeCurve:
    """Closed curve from the primes up to n whose area has a huge denominator."""
    if n < 2:
        raise ValueError("n must be >= 2")
    primes = [p for p in range(2, n + 1) if all(p % d for d in range(2, p))]
    verts: list[Point] = [(0, 0)]
    x = 0
    for p in primes:
        verts.append((x, 1))
        verts.append((x - 1, 1))
        x = x - 1 + p
        verts.append((x, 0))
    # the wrap from (x, 0) back to (0, 0) is the closing horizontal segment
    curve = PolyCurve(tuple(verts))
    t_expected = len(primes) + 2 * sum(primes)
    area = sum((Fraction(1, p) for p in primes), Fraction(0)) + Fraction(
        sum(p - 2 for p in primes), 2
    )
    return PrimeCurve(curve, t_expected, area)
