"""Vertex-symmetric topologies built from jump sets on the torus lattice.

Even degree: every node ``v`` links to ``v (+) e`` and ``v (-) e`` for each
jump ``e``. Odd degree: nodes are split by a parity rule into a "B" half
(rule value 0) and an "R" half; each B node links to ``v (+) e`` for every
jump and the result must come out simple and regular, which is checked
after the edges are laid down.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import AsymmetricJumpSet, DegenerateJumpSet, InvalidPartition, NotCoprime, WindowViolation
from .graph import Topology
from .lattice import Constellation, Jump, LatticePoint, wrap_add

PARTITION_RULES = ("row_parity", "col_parity", "checker_parity")

MESH_JUMPS = (Jump(1, 0), Jump(0, 1))
HONEYCOMB_JUMPS = (Jump(1, 0), Jump(-1, 0), Jump(0, 1))
D3_RATIO6_JUMPS = (Jump(1, 0), Jump(3, 0), Jump(5, 1))


def _as_jumps(jumps: Iterable[Sequence[int]]) -> tuple[Jump, ...]:
    return tuple(Jump(int(a), int(b)) for a, b in jumps)


def _jump_params(jumps: Iterable[Jump]) -> list[list[int]]:
    return [[e.d_row, e.d_col] for e in jumps]


def build_even(c: Constellation, jumps: Iterable[Sequence[int]], provenance: dict | None = None) -> Topology:
    js = _as_jumps(jumps)
    if not js:
        raise DegenerateJumpSet("empty jump set")
    offsets = [c.reduce(e) for e in js] + [c.reduce(-e) for e in js]
    if any(o == (0, 0) for o in offsets):
        raise DegenerateJumpSet(f"jump set {list(js)} has a zero offset on {c.n_s}x{c.n_o}")
    if len(set(offsets)) != len(offsets):
        raise DegenerateJumpSet(f"jump set {list(js)} has coinciding offsets on {c.n_s}x{c.n_o}")
    edges = [(c.index(v), c.index(wrap_add(c, v, e))) for v in c.points() for e in js]
    if provenance is None:
        provenance = {"kind": "even", "params": {"jumps": _jump_params(js)}}
    return Topology.from_edges(c.n, edges, delta=2 * len(js), constellation=c, provenance=provenance)


def partition_value(rule: str, p: LatticePoint) -> int:
    if rule == "row_parity":
        return p.row % 2
    if rule == "col_parity":
        return p.col % 2
    if rule == "checker_parity":
        return (p.row + p.col) % 2
    raise ValueError(f"unknown partition rule {rule!r}; expected one of {PARTITION_RULES}")


def _check_partition(c: Constellation, rule: str) -> None:
    if rule not in PARTITION_RULES:
        raise ValueError(f"unknown partition rule {rule!r}; expected one of {PARTITION_RULES}")
    # parity only wraps consistently around an even-length axis
    need_rows = rule in ("row_parity", "checker_parity")
    need_cols = rule in ("col_parity", "checker_parity")
    if (need_rows and c.n_s % 2) or (need_cols and c.n_o % 2):
        raise InvalidPartition(f"{rule} does not split a {c.n_s}x{c.n_o} torus into equal halves")


def build_odd(
    c: Constellation,
    jumps: Iterable[Sequence[int]],
    partition_rule: str = "row_parity",
    provenance: dict | None = None,
) -> Topology:
    js = _as_jumps(jumps)
    _check_partition(c, partition_rule)
    delta = len(js)
    edges = []
    for v in c.points():
        if partition_value(partition_rule, v) == 0:
            edges.extend((c.index(v), c.index(wrap_add(c, v, e))) for e in js)
    if provenance is None:
        provenance = {"kind": "odd", "params": {"jumps": _jump_params(js), "partition": partition_rule}}
    g = Topology.from_edges(c.n, edges, delta=delta, constellation=c, provenance=provenance)
    for u, nbrs in enumerate(g.adjacency):
        if len(nbrs) != delta or u in nbrs or len(set(nbrs)) != len(nbrs):
            raise AsymmetricJumpSet(
                f"jump set {list(js)} with {partition_rule} gives node {u} neighbours {list(nbrs)}"
            )
    return g


def mesh_grid(c: Constellation) -> Topology:
    return build_even(c, MESH_JUMPS, provenance={"kind": "mesh", "params": {}})


def honeycomb(c: Constellation) -> Topology:
    """Brick-wall honeycomb. Each of its jumps flips (row + col) parity, so
    the halves are the two colours of the checkerboard."""
    return build_odd(c, HONEYCOMB_JUMPS, "checker_parity", provenance={"kind": "honeycomb", "params": {}})


def offset_torus(c: Constellation, omega: int) -> Topology:
    if not 0 <= omega < c.n_s:
        raise ValueError(f"omega must lie in [0, {c.n_s}), got {omega}")
    return build_even(c, (Jump(1, 0), Jump(omega, 1)), provenance={"kind": "offset", "params": {"omega": omega}})


def sqrt_offset(c: Constellation) -> int:
    """Inter-plane offset sqrt(2 n_s / n_o) - 1 rounded half-up.

    Exact: the result is the largest m with (2m + 1)^2 * n_o <= 8 * n_s.
    """
    if c.n_s < c.n_o:
        raise ValueError(f"sqrt offset needs n_s >= n_o, got {c.n_s}x{c.n_o}")
    m = 0
    while (2 * (m + 1) + 1) ** 2 * c.n_o <= 8 * c.n_s:
        m += 1
    return min(m, c.n_s - 1)


def circulant(n: int, jumps: Iterable[int]) -> Topology:
    js = [int(j) for j in jumps]
    if not js:
        raise DegenerateJumpSet("empty jump set")
    if len(set(js)) != len(js):
        raise DegenerateJumpSet(f"repeated jump in {js}")
    for j in js:
        if not 0 < j < n:
            raise DegenerateJumpSet(f"jump {j} outside (0, {n})")
        if (2 * j) % n == 0:
            raise DegenerateJumpSet(f"jump {j} is its own inverse mod {n}")
        if n - j in js:
            raise DegenerateJumpSet(f"jumps {j} and {n - j} give the same edges mod {n}")
    edges = [(i, (i + j) % n) for i in range(n) for j in js]
    return Topology.from_edges(n, edges, delta=2 * len(js), provenance={"kind": "circulant", "params": {"n": n, "jumps": js}})


def crt_point(c: Constellation, x: int) -> LatticePoint:
    """Lattice node carrying circulant label ``x`` (needs coprime axes)."""
    return LatticePoint(x % c.n_s, x % c.n_o)


def crt_label(c: Constellation, p: LatticePoint) -> int:
    """Inverse of ``crt_point``: the x in [0, N) with x = row mod n_s, x = col mod n_o."""
    # pow(n_s, -1, n_o) exists exactly when the axes are coprime
    step = ((p.col - p.row) * pow(c.n_s, -1, c.n_o)) % c.n_o
    return p.row + c.n_s * step


def circulant_window(n: int) -> int:
    """Smallest w with n <= 2 (w + 1)^2, checked against (4 w^2 + 1) / 2 <= n."""
    w = 1
    while n > 2 * (w + 1) ** 2:
        w += 1
    if 4 * w * w + 1 > 2 * n:
        raise WindowViolation(f"no w satisfies (4w^2+1)/2 <= {n} <= 2(w+1)^2 (smallest upper fit w={w})")
    return w


def coprime_circulant_construction(c: Constellation) -> Topology:
    if math.gcd(c.n_s, c.n_o) != 1:
        raise NotCoprime(f"{c.n_s} and {c.n_o} share factor {math.gcd(c.n_s, c.n_o)}")
    n = c.n
    if n <= 6:
        raise ValueError(f"construction needs N > 6, got {n}")
    w = circulant_window(n)
    base = circulant(n, (w, w + 1))
    relabel = [c.index(crt_point(c, x)) for x in range(n)]
    edges = [(relabel[u], relabel[v]) for u, v in base.edges()]
    jumps = [crt_point(c, w), crt_point(c, w + 1)]
    provenance = {
        "kind": "coprime",
        "params": {"w": w, "circulant_jumps": [w, w + 1], "jumps": [[p.row, p.col] for p in jumps]},
    }
    return Topology.from_edges(n, edges, delta=4, constellation=c, provenance=provenance)


def claim_d3_construction(n_o: int) -> Topology:
    """Degree-3 topology on a 6 n_o x n_o torus with jumps (1,0), (3,0), (5,1)."""
    if n_o < 1:
        raise ValueError(f"n_o must be >= 1, got {n_o}")
    c = Constellation(6 * n_o, n_o)
    return build_odd(c, D3_RATIO6_JUMPS, "row_parity", provenance={"kind": "d3claim", "params": {"n_o": n_o}})
