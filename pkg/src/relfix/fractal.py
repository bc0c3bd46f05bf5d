"""The carpet fractal as a greatest solution: subdivision, membership, metrics.

The carpet keeps eight of the nine thirds of the unit square at every scale,
dropping the open middle.  A depth-d approximant is a set of cells in the
3^d grid; the carpet itself is the intersection of all approximants.
Membership at depth d asks whether a point lies in the closure of some
retained cell, so points on shared gridlines count as inside whenever any
adjacent retained cell contains them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DepthLimit

# kept thirds: all of {0,1,2}^2 except the middle (1,1)
KEEP = ((0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (2, 2))

DEFAULT_DEPTH_LIMIT = 10

Coord = Union[Fraction, int, float, str]


@dataclass(frozen=True)
class CellSet:
    """Cells of the 3^depth grid, addressed (column, row) from the lower left."""

    depth: int
    cells: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "cells", frozenset(self.cells))
        side = 3**self.depth
        for i, j in self.cells:
            if not (0 <= i < side and 0 <= j < side):
                raise ValueError(f"cell {(i, j)} outside the depth-{self.depth} grid")

    @staticmethod
    def full() -> "CellSet":
        return CellSet(0, frozenset({(0, 0)}))

    def __len__(self) -> int:
        return len(self.cells)


def subdivide(c: CellSet, depth_limit: int = DEFAULT_DEPTH_LIMIT) -> CellSet:
    """Replace each cell by its eight kept thirds."""
    if c.depth >= depth_limit:
        raise DepthLimit(f"subdividing past depth {depth_limit}")
    cells = frozenset(
        (3 * i + di, 3 * j + dj) for i, j in c.cells for di, dj in KEEP
    )
    return CellSet(c.depth + 1, cells)


def approximant(depth: int, depth_limit: int = DEFAULT_DEPTH_LIMIT) -> CellSet:
    c = CellSet.full()
    for _ in range(depth):
        c = subdivide(c, depth_limit)
    return c


def _to_fraction(v: Coord) -> Fraction:
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


def _thirds_containing(v: Fraction) -> tuple[int, ...]:
    """Indices m with m/3 <= v <= (m+1)/3; two of them when v sits on a cut."""
    tv = 3 * v
    floor = int(tv)
    out = []
    for m in (floor - 1, floor):
        if 0 <= m <= 2 and m <= tv <= m + 1:
            out.append(m)
    return tuple(out)


def carpet_member(x: Coord, y: Coord, depth: int) -> bool:
    """Is (x, y) in the closed depth-`depth` approximant?

    Exact rational arithmetic throughout; strings like "1/3" are accepted.
    Points on a gridline are tested against both adjacent cells, which
    realizes the closed-cell convention.
    """
    fx, fy = _to_fraction(x), _to_fraction(y)
    if not (0 <= fx <= 1 and 0 <= fy <= 1):
        raise ValueError("the carpet lives in the unit square")

    def member(px: Fraction, py: Fraction, d: int) -> bool:
        if d == 0:
            return True
        for mx in _thirds_containing(px):
            for my in _thirds_containing(py):
                if (mx, my) == (1, 1):
                    continue
                if member(3 * px - mx, 3 * py - my, d - 1):
                    return True
        return False

    return member(fx, fy, depth)


def render(depth: int, res: int) -> bytes:
    """Raster of res x res pixel-center membership tests, top row first;
    inside pixels are byte 0, outside 255."""
    if res <= 0:
        raise ValueError("resolution must be positive")
    rows = bytearray()
    for row in range(res):
        y = Fraction(2 * (res - row) - 1, 2 * res)
        for col in range(res):
            x = Fraction(2 * col + 1, 2 * res)
            rows.append(0 if carpet_member(x, y, depth) else 255)
    return bytes(rows)


def pgm_bytes(depth: int, res: int) -> bytes:
    header = f"P5\n{res} {res}\n255\n".encode("ascii")
    return header + render(depth, res)


def write_pgm(path, depth: int, res: int) -> None:
    with open(path, "wb") as fh:
        fh.write(pgm_bytes(depth, res))


EDGES = ("bottom", "right", "top", "left")


@dataclass(frozen=True)
class BoundaryPoint:
    """A point on the boundary of the unit square.

    The parameter is the x coordinate on the bottom and top edges and the
    y coordinate on the left and right edges, so corners have two equivalent
    descriptions, e.g. (bottom, 1) and (right, 0).
    """

    edge: str
    t: Fraction

    def __post_init__(self):
        if self.edge not in EDGES:
            raise ValueError(f"unknown edge {self.edge!r}")
        t = _to_fraction(self.t)
        if not 0 <= t <= 1:
            raise ValueError("edge parameter must lie in [0, 1]")
        object.__setattr__(self, "t", t)

    @property
    def xy(self) -> tuple[Fraction, Fraction]:
        t = self.t
        return {
            "bottom": (t, Fraction(0)),
            "right": (Fraction(1), t),
            "top": (t, Fraction(1)),
            "left": (Fraction(0), t),
        }[self.edge]

    @property
    def arc(self) -> Fraction:
        """Position along the counterclockwise walk from (0,0), in [0, 4)."""
        t = self.t
        pos = {
            "bottom": t,
            "right": 1 + t,
            "top": 3 - t,
            "left": 4 - t,
        }[self.edge]
        return pos % 4


def boundary_from_xy(x: Coord, y: Coord) -> BoundaryPoint:
    fx, fy = _to_fraction(x), _to_fraction(y)
    if fy == 0 and 0 <= fx <= 1:
        return BoundaryPoint("bottom", fx)
    if fx == 1 and 0 <= fy <= 1:
        return BoundaryPoint("right", fy)
    if fy == 1 and 0 <= fx <= 1:
        return BoundaryPoint("top", fx)
    if fx == 0 and 0 <= fy <= 1:
        return BoundaryPoint("left", fy)
    raise ValueError(f"({x}, {y}) is not on the boundary of the unit square")


def d_taxicab(p: BoundaryPoint, q: BoundaryPoint) -> Fraction:
    """Coordinate distance |dx| + |dy| between the two points."""
    (px, py), (qx, qy) = p.xy, q.xy
    return abs(qx - px) + abs(qy - py)


def d_path(p: BoundaryPoint, q: BoundaryPoint) -> Fraction:
    """Shorter way around the boundary between the two points."""
    straight = abs(p.arc - q.arc)
    return min(straight, 4 - straight)
