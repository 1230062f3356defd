"""Torus lattice model of a constellation.

Nodes are arranged as ``n_s`` rows (satellites per orbital plane) by ``n_o``
columns (orbital planes), embedded in the unit-area square torus at
``(row / n_s, col / n_o)``. The canonical node index is ``row * n_o + col``
and every other module uses it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple


class LatticePoint(NamedTuple):
    row: int
    col: int


class Jump(NamedTuple):
    d_row: int
    d_col: int

    def __neg__(self) -> "Jump":
        return Jump(-self.d_row, -self.d_col)


@dataclass(frozen=True)
class Constellation:
    n_s: int
    n_o: int

    def __post_init__(self):
        if self.n_s < 1 or self.n_o < 1:
            raise ValueError(f"lattice dimensions must be positive, got {self.n_s}x{self.n_o}")

    @property
    def n(self) -> int:
        return self.n_s * self.n_o

    def index(self, p: LatticePoint | tuple[int, int]) -> int:
        row, col = p
        return row * self.n_o + col

    def point(self, idx: int) -> LatticePoint:
        return LatticePoint(*divmod(idx, self.n_o))

    def points(self) -> Iterator[LatticePoint]:
        for r in range(self.n_s):
            for c in range(self.n_o):
                yield LatticePoint(r, c)

    def position(self, p: LatticePoint) -> tuple[float, float]:
        """Coordinates of ``p`` on the unit torus."""
        return p.row / self.n_s, p.col / self.n_o

    def reduce(self, e: Jump) -> Jump:
        """Jump with components normalized into ``[0, n_s) x [0, n_o)``."""
        return Jump(e.d_row % self.n_s, e.d_col % self.n_o)

    def is_zero(self, e: Jump) -> bool:
        return self.reduce(e) == (0, 0)


def wrap_add(c: Constellation, v: LatticePoint, e: Jump) -> LatticePoint:
    return LatticePoint((v.row + e.d_row) % c.n_s, (v.col + e.d_col) % c.n_o)


def wrap_sub(c: Constellation, v: LatticePoint, e: Jump) -> LatticePoint:
    return wrap_add(c, v, -Jump(*e))


def _axis_gap(a: int, b: int, n: int) -> float:
    # integer gap first so that e.g. 9 steps on a 10-ring gives exactly 0.1
    d = abs(a - b) % n
    return min(d, n - d) / n


def toroidal_distance(c: Constellation, u: LatticePoint, v: LatticePoint) -> float:
    return math.hypot(_axis_gap(u.row, v.row, c.n_s), _axis_gap(u.col, v.col, c.n_o))


def index_distance(c: Constellation, a: int, b: int) -> float:
    """``toroidal_distance`` for two node indices."""
    return toroidal_distance(c, c.point(a), c.point(b))


def offsets_within(c: Constellation, r: float, eps: float = 1e-12) -> list[Jump]:
    """Nonzero reduced jumps whose toroidal length is at most ``r``.

    Distance is translation invariant on the lattice, so the in-range
    neighbourhood of every node is ``v (+) e`` over this one list.
    """
    origin = LatticePoint(0, 0)
    out = []
    for p in c.points():
        if p == origin:
            continue
        if toroidal_distance(c, origin, p) <= r + eps:
            out.append(Jump(p.row, p.col))
    return out
