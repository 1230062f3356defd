"""Partitioned random-graph construction of range-feasible 4-regular topologies.

The unit torus is cut into ``b x b`` square cells small enough that any two
nodes in one cell are within link range. Adjacent cells are stitched by a
single closest-pair link; the four connector nodes of a cell are closed
into a 4-cycle and act as one degree-4 super-node while the rest of the
cell is wired by random stub pairing. Expanding the super-node's four links
onto its four connectors gives every node degree 4.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass

import numpy as np

from .bounds import moore_lb
from .errors import ConnectorExhaustion, InfeasibleSample, IncompatibleDensity, RangeViolation
from .graph import Topology, aspl, validate
from .lattice import Constellation, index_distance
from .search import _pair_stubs

DIRECTIONS = ("down", "right", "up", "left")
_OPPOSITE = {"down": "up", "right": "left"}
_RANGE_EPS = 1e-12


@dataclass(frozen=True)
class PrgsConfig:
    r: float
    seed: int = 0
    restart_cap: int = 100
    min_per_cell: int = 9

    def __post_init__(self):
        if not 0 < self.r < 1:
            raise ValueError(f"link range must lie in (0, 1), got {self.r}")

    @property
    def b(self) -> int:
        """Cells per torus side: the least integer >= sqrt(2) / r."""
        return math.ceil(math.sqrt(2) / self.r - 1e-12)

    @property
    def cell_side(self) -> float:
        return 1.0 / self.b


def _cell_seed(seed: int, cell: int) -> int:
    return int(np.random.SeedSequence([seed, cell]).generate_state(1)[0])


def _axis_cells(i: int, n: int, b: int, rng: random.Random) -> int:
    num = i * b
    if num % n == 0:
        # position sits on a cell edge: pick one of the two touching cells
        right = num // n
        return (right - rng.randrange(2)) % b
    return num // n % b


def grid_partition(c: Constellation, cfg: PrgsConfig) -> list[int]:
    """Cell id (``cell_row * b + cell_col``) of every node."""
    if c.n_s != c.n_o:
        raise ValueError(f"partitioning needs a square constellation, got {c.n_s}x{c.n_o}")
    b = cfg.b
    if c.n % (b * b):
        raise IncompatibleDensity(f"N={c.n} is not a multiple of b^2={b * b}")
    if c.n // (b * b) < cfg.min_per_cell:
        raise IncompatibleDensity(f"{c.n // (b * b)} nodes per cell, need at least {cfg.min_per_cell}")
    rng = random.Random(cfg.seed)
    for _ in range(cfg.restart_cap + 1):
        cells = []
        for p in c.points():
            cells.append(_axis_cells(p.row, c.n_s, b, rng) * b + _axis_cells(p.col, c.n_o, b, rng))
        counts = np.bincount(cells, minlength=b * b)
        if counts.min() >= cfg.min_per_cell:
            return cells
    raise IncompatibleDensity(f"boundary assignment left a cell below {cfg.min_per_cell} nodes")


def _neighbor_cell(cell: int, direction: str, b: int) -> int:
    r, q = divmod(cell, b)
    dr, dq = {"down": (1, 0), "right": (0, 1), "up": (-1, 0), "left": (0, -1)}[direction]
    return ((r + dr) % b) * b + (q + dq) % b


def _pairwise(c: Constellation, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ra, ca = np.divmod(a, c.n_o)
    rb, cb = np.divmod(b, c.n_o)
    dr = np.abs(ra[:, None] - rb[None, :]) % c.n_s
    dc = np.abs(ca[:, None] - cb[None, :]) % c.n_o
    dr = np.minimum(dr, c.n_s - dr) / c.n_s
    dc = np.minimum(dc, c.n_o - dc) / c.n_o
    return np.hypot(dr, dc)


def boundary_connectors(assignment: list[int], c: Constellation, b: int | None = None) -> dict[tuple[int, str], int]:
    """Closest-pair links between 4-adjacent cells.

    Returns ``{(cell, direction): node}``: the connector of ``cell`` whose
    external link leaves through ``direction``. Links are fixed in cell order
    (down, then right); a pair whose endpoint already serves another
    direction of its cell is passed over for the next-closest pair.
    """
    if b is None:
        b = math.isqrt(max(assignment) + 1)
    members = [[] for _ in range(b * b)]
    for node, cell in enumerate(assignment):
        members[cell].append(node)
    for cell, nodes in enumerate(members):
        if len(nodes) < 4:
            raise ConnectorExhaustion(f"cell {cell} has {len(nodes)} nodes, needs 4 connectors")
    used: list[set[int]] = [set() for _ in range(b * b)]
    chosen: dict[tuple[int, str], int] = {}
    links: set[tuple[int, int]] = set()
    for cell in range(b * b):
        for direction in ("down", "right"):
            other = _neighbor_cell(cell, direction, b)
            a = np.array(members[cell])
            o = np.array(members[other])
            d = _pairwise(c, a, o)
            ia, io = np.meshgrid(np.arange(len(a)), np.arange(len(o)), indexing="ij")
            order = np.lexsort((o[io].ravel(), a[ia].ravel(), d.ravel()))
            pick = None
            for flat in order:
                u, v = int(a[ia.flat[flat]]), int(o[io.flat[flat]])
                if u in used[cell] or v in used[other] or (min(u, v), max(u, v)) in links:
                    continue
                pick = (u, v)
                break
            if pick is None:
                raise ConnectorExhaustion(f"no free connector pair between cells {cell} and {other}")
            u, v = pick
            used[cell].add(u)
            used[other].add(v)
            links.add((min(u, v), max(u, v)))
            chosen[(cell, direction)] = u
            chosen[(other, _OPPOSITE[direction])] = v
    return chosen


def _connected(nodes: list[int], edges: list[tuple[int, int]]) -> bool:
    adj = {v: [] for v in nodes}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(nodes)


def _wire_cell(inner: list[int], connectors: list[int], super_id: int, rng: random.Random,
               existing: set[tuple[int, int]], restart_cap: int) -> list[tuple[int, int]]:
    nodes = inner + [super_id]
    for _ in range(restart_cap + 1):
        sampled = _pair_stubs(nodes, 4, rng, None, restart_cap)
        if not _connected(nodes, sampled):
            continue
        plain = [e for e in sampled if super_id not in e]
        spokes = [u if v == super_id else v for u, v in sampled if super_id in (u, v)]
        taken = existing | {tuple(sorted(e)) for e in plain}
        for _ in range(restart_cap + 1):
            perm = connectors[:]
            rng.shuffle(perm)
            expanded = [tuple(sorted((k, x))) for k, x in zip(perm, spokes)]
            if not any(e in taken for e in expanded):
                return plain + expanded
    raise InfeasibleSample(f"could not wire a cell of {len(inner) + 4} nodes in {restart_cap} restarts")


def prgs_build(c: Constellation, cfg: PrgsConfig) -> Topology:
    b = cfg.b
    assignment = grid_partition(c, cfg)
    connectors = boundary_connectors(assignment, c, b)
    edges: set[tuple[int, int]] = set()
    for cell in range(b * b):
        for direction in ("down", "right"):
            u = connectors[(cell, direction)]
            v = connectors[(_neighbor_cell(cell, direction, b), _OPPOSITE[direction])]
            edges.add((min(u, v), max(u, v)))
    members = [[] for _ in range(b * b)]
    for node, cell in enumerate(assignment):
        members[cell].append(node)
    for cell in range(b * b):
        ring = [connectors[(cell, d)] for d in DIRECTIONS]
        for k in range(4):
            u, v = ring[k], ring[(k + 1) % 4]
            edges.add((min(u, v), max(u, v)))
        inner = [v for v in members[cell] if v not in set(ring)]
        rng = random.Random(_cell_seed(cfg.seed, cell))
        edges.update(_wire_cell(inner, ring, c.n + cell, rng, edges, cfg.restart_cap))
    for u, v in edges:
        if index_distance(c, u, v) > cfg.r + _RANGE_EPS:
            raise RangeViolation(f"edge ({u}, {v}) has length {index_distance(c, u, v):.4f} > r={cfg.r}")
    provenance = {"kind": "prgs", "r": cfg.r, "seed": cfg.seed, "b": b}
    return Topology.from_edges(c.n, sorted(edges), delta=4, constellation=c, provenance=provenance)


@dataclass(frozen=True)
class ScalingRow:
    n: int
    median_aspl: float
    moore_lb: float
    ratio: float
    per_log3: float


def scaling_report(r: float, sizes: list[int], seeds: int | list[int] = 5) -> list[ScalingRow]:
    """Median PRGS ASPL per network size against the Moore bound."""
    seed_list = list(range(seeds)) if isinstance(seeds, int) else list(seeds)
    rows = []
    for n in sizes:
        side = math.isqrt(n)
        if side * side != n:
            raise IncompatibleDensity(f"N={n} is not a square number")
        c = Constellation(side, side)
        values = []
        for s in seed_list:
            g = prgs_build(c, PrgsConfig(r=r, seed=s))
            assert validate(g)
            values.append(aspl(g))
        med = statistics.median(values)
        lb = float(moore_lb(n, 4))
        rows.append(ScalingRow(n, med, lb, med / lb, med / math.log(n, 3)))
    return rows


def log_fit_r2(rows: list[ScalingRow]) -> float:
    """Coefficient of determination of median ASPL ~ alpha + beta * ln N."""
    x = np.log([row.n for row in rows])
    y = np.array([row.median_aspl for row in rows])
    coef = np.polyfit(x, y, 1)
    resid = y - np.polyval(coef, x)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    return 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
