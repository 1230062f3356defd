"""Regular-graph representation and exact hop metrics.

All-pairs quantities (ASPL, diameter, per-root hop profiles) come from a
bit-parallel breadth-first sweep: every node carries a bitset of the BFS
sources that have reached it, and one level of BFS for all sources at once
is an OR over neighbour rows. With degree 3-4 this runs all N searches in
roughly ``diameter * degree`` vectorised gathers of an ``N x N/64`` word
array, which is what makes exhaustive sweeps and annealing affordable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DisconnectedGraph
from .lattice import Constellation

# source words processed per sweep block; bounds memory at ~N * 64 * 8 bytes per array
_BLOCK_WORDS = 64
ORACLE_CAP = 500


@dataclass(frozen=True)
class Topology:
    """Undirected graph with sorted neighbour lists.

    Multiplicity is kept (a doubled edge appears twice, a self-loop once in
    its own list) so that ``validate`` can report non-simple inputs; every
    constructor in this package produces simple graphs.
    """

    n: int
    delta: int
    adjacency: tuple[tuple[int, ...], ...]
    constellation: Constellation | None = None
    provenance: dict | None = field(default=None, compare=False, hash=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        delta: int | None = None,
        constellation: Constellation | None = None,
        provenance: dict | None = None,
    ) -> "Topology":
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u].append(v)
            if u != v:
                adj[v].append(u)
        if delta is None:
            delta = max((len(a) for a in adj), default=0)
        return cls(
            n=n,
            delta=delta,
            adjacency=tuple(tuple(sorted(a)) for a in adj),
            constellation=constellation,
            provenance=provenance,
        )

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, nbrs in enumerate(self.adjacency):
            out.extend((u, v) for v in nbrs if u <= v)
        return out

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def neighbor_array(self) -> np.ndarray:
        """``(n, max_degree)`` index array padded with the sentinel ``n``."""
        return neighbor_array(self.adjacency, self.n)


def neighbor_array(adjacency: Sequence[Sequence[int]], n: int) -> np.ndarray:
    width = max((len(a) for a in adjacency), default=0)
    arr = np.full((n, max(width, 1)), n, dtype=np.intp)
    for u, nbrs in enumerate(adjacency):
        arr[u, : len(nbrs)] = nbrs
    return arr


@dataclass(frozen=True)
class HopProfile:
    counts: tuple[int, ...]
    unreachable: int = 0

    @property
    def eccentricity(self) -> int:
        return len(self.counts) - 1

    def mean(self) -> float:
        reached = sum(self.counts) - 1
        return sum(i * c for i, c in enumerate(self.counts)) / reached


@dataclass(frozen=True)
class ValidationReport:
    is_simple: bool
    is_regular: bool
    is_connected: bool

    def __bool__(self) -> bool:
        return self.is_simple and self.is_regular and self.is_connected


@dataclass(frozen=True)
class SweepResult:
    """Outcome of an all-sources BFS sweep.

    ``pair_counts[l]`` is the number of ordered pairs at distance exactly
    ``l`` (index 0 holds the n self-pairs).
    """

    n: int
    pair_counts: tuple[int, ...]
    unreachable_pairs: int
    per_root: np.ndarray | None = None

    @property
    def connected(self) -> bool:
        return self.unreachable_pairs == 0

    @property
    def distance_sum(self) -> int:
        return sum(i * c for i, c in enumerate(self.pair_counts))

    @property
    def diameter(self) -> int:
        return len(self.pair_counts) - 1


def bfs_profile(g: Topology, root: int) -> HopProfile:
    if not 0 <= root < g.n:
        raise IndexError(f"root {root} outside [0, {g.n})")
    dist = [-1] * g.n
    dist[root] = 0
    counts = [1]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in g.adjacency[u]:
            if dist[v] < 0:
                dist[v] = du
                if du == len(counts):
                    counts.append(0)
                counts[du] += 1
                queue.append(v)
    return HopProfile(tuple(counts), g.n - sum(counts))


def sweep(nbr: np.ndarray, n: int, per_root: bool = False, stop_on_disconnect: bool = False) -> SweepResult:
    """Bit-parallel BFS from every node of the graph given by ``nbr``.

    ``nbr`` is a padded neighbour array as returned by ``neighbor_array``.
    With ``per_root`` the result also holds an ``(n, diameter + 1)`` matrix
    of per-root level counts; this relies on the graph being undirected
    (row v of a level's frontier lists the sources at that distance from v).
    With ``stop_on_disconnect`` a sweep that leaves pairs unreached returns
    early with partial counts and a positive ``unreachable_pairs``.
    """
    words = (n + 63) // 64
    totals: list[int] = [n]
    rows: list[np.ndarray] = []
    reached = 0
    one = np.uint64(1)
    for w0 in range(0, words, _BLOCK_WORDS):
        w1 = min(words, w0 + _BLOCK_WORDS)
        src = np.arange(w0 * 64, min(n, w1 * 64))
        visited = np.zeros((n + 1, w1 - w0), dtype=np.uint64)
        visited[src, src // 64 - w0] = one << (src % 64).astype(np.uint64)
        frontier = visited.copy()
        level = 0
        while True:
            nxt = frontier[nbr[:, 0]]
            for j in range(1, nbr.shape[1]):
                nxt |= frontier[nbr[:, j]]
            nxt &= ~visited[:n]
            row_counts = np.bitwise_count(nxt).sum(axis=1, dtype=np.int64)
            found = int(row_counts.sum())
            if found == 0:
                break
            level += 1
            if level == len(totals):
                totals.append(0)
                if per_root:
                    rows.append(np.zeros(n, dtype=np.int64))
            totals[level] += found
            if per_root:
                rows[level - 1] += row_counts
            visited[:n] |= nxt
            frontier[:n] = nxt
        block_reached = int(np.bitwise_count(visited[:n]).sum(dtype=np.int64))
        reached += block_reached
        if stop_on_disconnect and block_reached < n * len(src):
            break
    matrix = None
    if per_root:
        matrix = np.column_stack([np.ones(n, dtype=np.int64), *rows]) if rows else np.ones((n, 1), dtype=np.int64)
    return SweepResult(n, tuple(totals), n * n - reached, matrix)


def sweep_topology(g: Topology, per_root: bool = False) -> SweepResult:
    return sweep(g.neighbor_array(), g.n, per_root=per_root)


def _connected_sweep(g: Topology) -> SweepResult:
    res = sweep(g.neighbor_array(), g.n, stop_on_disconnect=True)
    if not res.connected:
        raise DisconnectedGraph(f"graph on {g.n} nodes is not connected")
    return res


def aspl_exact(g: Topology) -> Fraction:
    """ASPL over ordered pairs of distinct nodes, as an exact fraction."""
    if g.n < 2:
        raise ValueError("ASPL needs at least two nodes")
    return Fraction(_connected_sweep(g).distance_sum, g.n * (g.n - 1))


def aspl(g: Topology) -> float:
    return float(aspl_exact(g))


def diameter(g: Topology) -> int:
    return _connected_sweep(g).diameter


def validate(g: Topology, delta: int | None = None) -> ValidationReport:
    delta = g.delta if delta is None else delta
    simple = all(
        u not in nbrs and all(a != b for a, b in zip(nbrs, nbrs[1:]))
        for u, nbrs in enumerate(g.adjacency)
    )
    regular = all(len(nbrs) == delta for nbrs in g.adjacency)
    connected = g.n == 0 or bfs_profile(g, 0).unreachable == 0
    return ValidationReport(simple, regular, connected)


def distance_multiset_uniform(g: Topology) -> bool:
    """True iff every root sees the same hop profile."""
    res = sweep_topology(g, per_root=True)
    if not res.connected:
        raise DisconnectedGraph(f"graph on {g.n} nodes is not connected")
    return bool((res.per_root == res.per_root[0]).all())


def aspl_oracle(g: Topology) -> float:
    """ASPL by Floyd-Warshall on a dense matrix; for cross-checking small graphs."""
    n = g.n
    if n > ORACLE_CAP:
        raise ValueError(f"oracle limited to n <= {ORACLE_CAP}, got {n}")
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v in g.edges():
        if u != v:
            d[u, v] = d[v, u] = 1.0
    for k in range(n):
        np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :], out=d)
    if np.isinf(d).any():
        raise DisconnectedGraph(f"graph on {n} nodes is not connected")
    return float(d.sum() / (n * (n - 1)))
