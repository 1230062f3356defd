"""Searches over topology spaces.

* exhaustive inter-plane offset sweeps for degree-4 and degree-3 symmetric
  constructions;
* random regular graph sampling by incremental stub pairing, optionally
  restricted to links within a toroidal range;
* simulated annealing over regular graphs with degree-preserving double
  edge swaps.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

from .errors import (
    InfeasibleSample,
    NoFeasibleJumpSet,
    NoFeasibleOffset,
    TopologyError,
)
from .graph import Topology, aspl_exact, sweep, validate
from .lattice import Constellation, Jump, offsets_within
from .symmetric import build_odd, offset_torus

log = logging.getLogger(__name__)


class AnnealStep(NamedTuple):
    step: int
    temperature: float
    current_aspl: float
    best_aspl: float


@dataclass
class SearchResult:
    best: Topology
    best_aspl: float
    trace: list = field(default_factory=list)
    seed: int | None = None


# -- exhaustive symmetric sweeps ---------------------------------------------


def offset_search_deg4(c: Constellation) -> tuple[int, SearchResult]:
    """Best inter-plane offset omega for jumps {(1,0), (omega,1)}; ties go to the smallest omega."""
    if c.n_s < 3:
        raise ValueError(f"offset search needs n_s >= 3, got {c.n_s}")
    best = None
    trace = []
    for omega in range(c.n_s):
        try:
            g = offset_torus(c, omega)
            value = aspl_exact(g)
        except TopologyError as exc:
            log.debug("omega=%d skipped: %s", omega, exc)
            continue
        trace.append((omega, float(value)))
        if best is None or value < best[0]:
            best = (value, omega, g)
    if best is None:
        raise NoFeasibleOffset(f"no usable offset on {c.n_s}x{c.n_o}")
    value, omega, g = best
    return omega, SearchResult(g, float(value), trace)


def deg3_candidates(c: Constellation, space: str = "wide") -> list[tuple[tuple[Jump, ...], str]]:
    """Candidate (jump set, partition rule) pairs in lexicographic jump order.

    ``wide``: {(1,0), (a,0), (b,1)} with odd a in [3, n_s), b in [0, n_s),
    halves split by row parity. ``honeycomb``: {(1,0), (-1,0), (b,1)}, which
    needs the checkerboard split for even b and the row split for odd b.
    """
    out = []
    if space == "wide":
        for a in range(3, c.n_s, 2):
            for b in range(c.n_s):
                out.append(((Jump(1, 0), Jump(a, 0), Jump(b, 1)), "row_parity"))
    elif space == "honeycomb":
        for b in range(c.n_s):
            rule = "checker_parity" if b % 2 == 0 else "row_parity"
            out.append(((Jump(1, 0), Jump(-1, 0), Jump(b, 1)), rule))
    else:
        raise ValueError(f"unknown degree-3 search space {space!r}")
    return out


def offset_search_deg3(c: Constellation, space: str = "wide") -> tuple[tuple[Jump, ...], SearchResult]:
    if c.n_s % 2 or c.n_s < 4:
        raise ValueError(f"degree-3 search needs even n_s >= 4, got {c.n_s}")
    best = None
    trace = []
    for i, (jumps, rule) in enumerate(deg3_candidates(c, space)):
        try:
            g = build_odd(c, jumps, rule)
            value = aspl_exact(g)
        except TopologyError:
            continue
        trace.append((i, float(value)))
        if best is None or value < best[0]:
            best = (value, jumps, g)
    if best is None:
        raise NoFeasibleJumpSet(f"no valid degree-3 jump set on {c.n_s}x{c.n_o} ({space})")
    value, jumps, g = best
    return jumps, SearchResult(g, float(value), trace)


# -- random regular sampling ---------------------------------------------------


def _range_predicate(c: Constellation, max_range: float) -> Callable[[int, int], bool]:
    allowed = {(e.d_row, e.d_col) for e in offsets_within(c, max_range)}
    n_o, n_s = c.n_o, c.n_s

    def ok(u: int, v: int) -> bool:
        ur, uc = divmod(u, n_o)
        vr, vc = divmod(v, n_o)
        return ((vr - ur) % n_s, (vc - uc) % n_o) in allowed

    return ok


def _pair_stubs(
    nodes: Sequence[int],
    degree: Sequence[int] | int,
    rng: random.Random,
    acceptable: Callable[[int, int], bool] | None,
    restart_cap: int,
) -> list[tuple[int, int]]:
    """Incremental random stub pairing with restarts.

    Two unpaired stubs are drawn uniformly; they become an edge if the
    endpoints differ, are not yet adjacent and pass ``acceptable``. When a
    long run of draws fails, the residual nodes are checked exhaustively; if
    no acceptable pair remains the whole construction restarts.
    """
    if isinstance(degree, int):
        degree = [degree] * len(nodes)
    for attempt in range(restart_cap + 1):
        stubs = [v for v, d in zip(nodes, degree) for _ in range(d)]
        adj: dict[int, set[int]] = {v: set() for v in nodes}
        edges = []
        failures = 0
        stuck = False
        while stubs:
            m = len(stubs)
            i = rng.randrange(m)
            j = rng.randrange(m - 1)
            if j >= i:
                j += 1
            u, v = stubs[i], stubs[j]
            if u != v and v not in adj[u] and (acceptable is None or acceptable(u, v)):
                adj[u].add(v)
                adj[v].add(u)
                edges.append((u, v) if u < v else (v, u))
                for k in sorted((i, j), reverse=True):
                    stubs[k] = stubs[-1]
                    stubs.pop()
                failures = 0
                continue
            failures += 1
            if failures > 50 + 2 * m:
                residual = sorted(set(stubs))
                if not any(
                    b not in adj[a] and (acceptable is None or acceptable(a, b))
                    for x, a in enumerate(residual)
                    for b in residual[x + 1 :]
                ):
                    stuck = True
                    break
                failures = 0
        if not stuck:
            return edges
        log.debug("stub pairing stuck on attempt %d with %d stubs left", attempt, len(stubs))
    raise InfeasibleSample(f"stub pairing failed after {restart_cap} restarts")


def sample_regular(
    n: int,
    delta: int,
    seed: int,
    max_range: float | None = None,
    c: Constellation | None = None,
    restart_cap: int = 1000,
) -> Topology:
    """Random simple ``delta``-regular graph on ``n`` nodes, deterministic in ``seed``."""
    if n * delta % 2:
        raise ValueError(f"n * delta must be even (2|E| = delta |V|), got {n} * {delta}")
    if not 0 <= delta < n:
        raise ValueError(f"need 0 <= delta < n, got delta={delta}, n={n}")
    if c is not None and c.n != n:
        raise ValueError(f"constellation has {c.n} nodes, expected {n}")
    if max_range is not None and c is None:
        raise ValueError("a range-constrained sample needs the constellation geometry")
    acceptable = _range_predicate(c, max_range) if max_range is not None else None
    rng = random.Random(seed)
    edges = _pair_stubs(range(n), delta, rng, acceptable, restart_cap)
    provenance = {"kind": "sample", "params": {"seed": seed, "max_range": max_range}}
    return Topology.from_edges(n, edges, delta=delta, constellation=c, provenance=provenance)


# -- double edge swaps and annealing -----------------------------------------


class SwapProposal(NamedTuple):
    removed: tuple[tuple[int, int], tuple[int, int]]
    added: tuple[tuple[int, int], tuple[int, int]]


def _propose(
    edges: Sequence[tuple[int, int]],
    adj: Sequence[set[int]],
    rng: random.Random,
    acceptable: Callable[[int, int], bool] | None,
    attempts: int,
) -> tuple[int, int, SwapProposal] | None:
    m = len(edges)
    if m < 2:
        return None
    for _ in range(attempts):
        i = rng.randrange(m)
        j = rng.randrange(m - 1)
        if j >= i:
            j += 1
        a, b = edges[i]
        c, d = edges[j]
        if rng.random() < 0.5:
            c, d = d, c
        # new edges (a, c) and (b, d)
        if a == c or b == d or c in adj[a] or d in adj[b]:
            continue
        if acceptable is not None and not (acceptable(a, c) and acceptable(b, d)):
            continue
        return i, j, SwapProposal(((a, b), edges[j]), ((a, c), (b, d)))
    return None


def double_edge_swap(
    g: Topology,
    rng: random.Random,
    max_range: float | None = None,
    c: Constellation | None = None,
    attempts: int = 100,
) -> SwapProposal | None:
    """Propose a degree-preserving swap on ``g``, or None after ``attempts`` rejections."""
    acceptable = None
    if max_range is not None:
        c = c or g.constellation
        if c is None:
            raise ValueError("range-constrained swaps need the constellation geometry")
        acceptable = _range_predicate(c, max_range)
    found = _propose(g.edges(), [set(a) for a in g.adjacency], rng, acceptable, attempts)
    return None if found is None else found[2]


def apply_swap(g: Topology, proposal: SwapProposal) -> Topology:
    removed = {tuple(sorted(e)) for e in proposal.removed}
    edges = [e for e in g.edges() if e not in removed]
    edges.extend(tuple(sorted(e)) for e in proposal.added)
    return Topology.from_edges(g.n, edges, delta=g.delta, constellation=g.constellation, provenance=g.provenance)


@dataclass
class AnnealConfig:
    """Annealing schedule.

    ``initial_temperature=None`` calibrates it from a prefix of proposals so
    that about half of uphill moves would be accepted. ``steps_per_temperature``
    of None means one proposal per node per epoch.
    """

    initial_temperature: float | None = None
    cooling_factor: float = 0.95
    steps_per_temperature: int | None = None
    min_temperature: float = 1e-4
    seed: int = 0
    max_range: float | None = None
    calibration_steps: int = 100
    max_evaluations: int | None = None
    swap_attempts: int = 200

    def __post_init__(self):
        if not 0 < self.cooling_factor < 1:
            raise ValueError("cooling_factor must lie in (0, 1)")
        if self.min_temperature <= 0:
            raise ValueError("min_temperature must be positive")
        if self.initial_temperature is not None and self.initial_temperature <= 0:
            raise ValueError("initial_temperature must be positive")


class _SwapState:
    """Mutable edge list + neighbour array for an annealing chain."""

    def __init__(self, g: Topology):
        self.n = g.n
        self.edges = [tuple(e) for e in g.edges()]
        self.adj = [set(a) for a in g.adjacency]
        self.rows = [list(a) for a in g.adjacency]
        self.nbr = g.neighbor_array()
        self.pairs = g.n * (g.n - 1)

    def _relink(self, u: int, old: int, new: int) -> None:
        k = self.rows[u].index(old)
        self.rows[u][k] = new
        self.nbr[u, k] = new
        self.adj[u].discard(old)
        self.adj[u].add(new)

    def apply(self, i: int, j: int, p: SwapProposal) -> None:
        (a, b), (c0, d0) = p.removed
        (_, c), (_, d) = p.added
        self._relink(a, b, c)
        self._relink(c, d, a)
        self._relink(b, a, d)
        self._relink(d, c, b)
        self.edges[i] = (a, c)
        self.edges[j] = (b, d)

    def undo(self, i: int, j: int, p: SwapProposal) -> None:
        (a, b), old_j = p.removed
        (_, c), (_, d) = p.added
        self._relink(a, c, b)
        self._relink(c, a, d)
        self._relink(b, d, a)
        self._relink(d, b, c)
        self.edges[i] = (a, b)
        self.edges[j] = old_j

    def distance_sum(self) -> int | None:
        res = sweep(self.nbr, self.n, stop_on_disconnect=True)
        return res.distance_sum if res.connected else None

    def topology(self, template: Topology) -> Topology:
        return Topology.from_edges(
            self.n, self.edges, delta=template.delta, constellation=template.constellation, provenance=template.provenance
        )


def _check_feasible(g: Topology, acceptable) -> None:
    report = validate(g)
    if not (report.is_simple and report.is_regular):
        raise ValueError(f"annealing needs a simple regular start graph: {report}")
    if acceptable is not None and not all(acceptable(u, v) for u, v in g.edges()):
        raise ValueError("start graph has links beyond the range constraint")


def anneal(
    initial: Topology,
    cfg: AnnealConfig,
    c: Constellation | None = None,
    audit_every: int = 0,
) -> SearchResult:
    """Metropolis annealing of ASPL over double-edge swaps.

    Disconnected proposals are always rejected. ``audit_every > 0`` re-validates
    the current graph (simple, regular, range-feasible) after every that many
    accepted moves and raises AssertionError on a violation.
    """
    c = c or initial.constellation
    acceptable = None
    if cfg.max_range is not None:
        if c is None:
            raise ValueError("range-constrained annealing needs the constellation geometry")
        acceptable = _range_predicate(c, cfg.max_range)
    _check_feasible(initial, acceptable)

    rng = random.Random(cfg.seed)
    state = _SwapState(initial)
    current = state.distance_sum()
    if current is None:
        raise ValueError("annealing needs a connected start graph")
    pairs = state.pairs
    best_total, best_edges = current, list(state.edges)
    trace = [AnnealStep(0, math.nan, current / pairs, current / pairs)]

    steps = initial.n if cfg.steps_per_temperature is None else cfg.steps_per_temperature
    provenance = dict(initial.provenance or {})

    def finish() -> SearchResult:
        best = Topology.from_edges(initial.n, best_edges, delta=initial.delta, constellation=initial.constellation,
                                   provenance={"kind": "anneal", "params": {"seed": cfg.seed, "max_range": cfg.max_range, "start": provenance}})
        return SearchResult(best, best_total / pairs, trace, cfg.seed)

    if steps <= 0:
        return SearchResult(initial, current / pairs, trace, cfg.seed)

    evaluations = 0
    budget = cfg.max_evaluations

    temperature = cfg.initial_temperature
    if temperature is None:
        uphill, changes = [], []
        for _ in range(cfg.calibration_steps):
            found = _propose(state.edges, state.adj, rng, acceptable, cfg.swap_attempts)
            if found is None:
                break
            i, j, p = found
            state.apply(i, j, p)
            total = state.distance_sum()
            evaluations += 1
            state.undo(i, j, p)
            if total is not None and total != current:
                changes.append(abs(total - current) / pairs)
                if total > current:
                    uphill.append((total - current) / pairs)
        # exp(-mean_uphill / T0) = 1/2; a start where every move is downhill
        # (e.g. a grid) falls back to the mean move size
        scale = uphill or changes
        temperature = (sum(scale) / len(scale)) / math.log(2) if scale else cfg.min_temperature
        temperature = max(temperature, cfg.min_temperature)

    accepted = 0
    while temperature >= cfg.min_temperature:
        for _ in range(steps):
            if budget is not None and evaluations >= budget:
                return finish()
            found = _propose(state.edges, state.adj, rng, acceptable, cfg.swap_attempts)
            if found is None:
                continue
            i, j, p = found
            state.apply(i, j, p)
            total = state.distance_sum()
            evaluations += 1
            if total is None:
                state.undo(i, j, p)
                continue
            delta = (total - current) / pairs
            if delta <= 0 or rng.random() < math.exp(-delta / temperature):
                current = total
                accepted += 1
                if current < best_total:
                    best_total, best_edges = current, list(state.edges)
                trace.append(AnnealStep(evaluations, temperature, current / pairs, best_total / pairs))
                if audit_every and accepted % audit_every == 0:
                    snap = state.topology(initial)
                    report = validate(snap)
                    assert report.is_simple and report.is_regular and report.is_connected, report
                    if acceptable is not None:
                        assert all(acceptable(u, v) for u, v in snap.edges()), "range violated"
            else:
                state.undo(i, j, p)
        temperature *= cfg.cooling_factor
    return finish()

