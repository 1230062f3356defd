"""One test per acceptance criterion; each records a PASS/FAIL summary line."""

import math
import random
import statistics
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_RESULTS
from isltopo.bounds import capacity_even, capacity_odd, greedy_packing_lb, moore_lb, vs_lb_deg3, vs_lb_deg4
from isltopo.errors import TopologyError
from isltopo.graph import Topology, aspl, aspl_exact, aspl_oracle, diameter, validate
from isltopo.lattice import Constellation, index_distance
from isltopo.prgs import PrgsConfig, log_fit_r2, prgs_build, ScalingRow
from isltopo.search import AnnealConfig, anneal, offset_search_deg3, offset_search_deg4, sample_regular
from isltopo.symmetric import (
    build_odd,
    circulant,
    coprime_circulant_construction,
    crt_point,
    honeycomb,
    mesh_grid,
    offset_torus,
    sqrt_offset,
)


@contextmanager
def criterion(name: str, limit_s: float):
    """Time the body, enforce the runtime limit and record one summary line."""
    info: dict = {}
    t0 = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        in_time = elapsed < limit_s
        detail = f"{elapsed:.2f}s (limit {limit_s:g}s)"
        if info.get("detail"):
            detail += f"; {info['detail']}"
        ACCEPTANCE_RESULTS.append((name, ok and in_time, detail))
        print(f"{'PASS' if ok and in_time else 'FAIL'} {name}: {detail}")
    assert in_time, f"{name} took {elapsed:.2f}s, limit {limit_s}s"


def test_ac01_bound_equivalence():
    with criterion("AC1 bound equivalence", 10) as info:
        for n in range(5, 5001):
            assert vs_lb_deg4(n) == greedy_packing_lb(n, lambda l: 4 * l).value, n
            assert vs_lb_deg3(n) == greedy_packing_lb(n, lambda l: 3 * l).value, n
        info["detail"] = "N in [5, 5000], exact"


def test_ac02_capacity_formulas():
    with criterion("AC2 capacity formulas", 1) as info:
        for ell in range(1, 10**4 + 1):
            assert capacity_even(4, ell) == 4 * ell
            assert capacity_odd(3, ell) == 3 * ell
        info["detail"] = "l in [1, 10^4]"


def test_ac03_coprime_construction():
    with criterion("AC3 coprime circulant achieves bound", 5) as info:
        got = []
        for n_s, n_o in [(5, 4), (9, 7), (7, 5), (11, 9)]:
            c = Constellation(n_s, n_o)
            g = coprime_circulant_construction(c)
            circ = circulant(c.n, g.provenance["params"]["circulant_jumps"])
            relabeled = {tuple(sorted((c.index(crt_point(c, u)), c.index(crt_point(c, v))))) for u, v in circ.edges()}
            assert relabeled == set(g.edges())
            value = aspl_exact(g)
            assert value == vs_lb_deg4(c.n), (c, value)
            got.append(f"{n_s}x{n_o}={value}")
        info["detail"] = ", ".join(got)


def test_ac04_offset_construction():
    with criterion("AC4 offset torus achieves bound", 10) as info:
        for (n_s, n_o), omega in [((8, 4), 1), ((4, 2), 1), ((12, 6), 1), ((32, 4), 3), ((72, 4), 5)]:
            c = Constellation(n_s, n_o)
            assert aspl_exact(offset_torus(c, omega)) == vs_lb_deg4(c.n), c
        info["detail"] = "5 constellations equal"


def test_ac05_degree3_construction():
    with criterion("AC5 degree-3 construction achieves bound", 5) as info:
        for n_o in (1, 2, 4, 8):
            c = Constellation(6 * n_o, n_o)
            g = build_odd(c, [(1, 0), (3, 0), (5, 1)], "row_parity")
            assert bool(validate(g, 3))
            assert aspl_exact(g) == vs_lb_deg3(c.n), n_o
        info["detail"] = "n_o in {1, 2, 4, 8}"


def test_ac06_suboptimality_sweeps():
    with criterion("AC6 mesh and honeycomb above bound", 60) as info:
        meshes = honeycombs = 0
        margin = math.inf
        for n_s in range(3, 31):
            for n_o in range(3, 31):
                c = Constellation(n_s, n_o)
                if n_s + n_o >= 10:
                    gap = aspl_exact(mesh_grid(c)) - vs_lb_deg4(c.n)
                    assert gap > 0, c
                    margin = min(margin, gap)
                    meshes += 1
        for n_s in range(1, 31):
            for n_o in range(1, 31):
                if n_s + n_o < 16:
                    continue
                c = Constellation(n_s, n_o)
                try:
                    g = honeycomb(c)
                except TopologyError:
                    continue
                if not validate(g, 3):
                    continue
                gap = aspl_exact(g) - vs_lb_deg3(c.n)
                assert gap > 0, c
                margin = min(margin, gap)
                honeycombs += 1
        assert honeycombs > 0
        info["detail"] = f"{meshes} meshes, {honeycombs} honeycombs, min margin {float(margin):.4f}"


def test_ac07_fig6_offsets():
    with criterion("AC7 degree-4 offset sweep near bound", 300) as info:
        worst_best = worst_sqrt = 0.0
        for n_s in range(10, 81):
            c = Constellation(n_s, 4)
            lb = vs_lb_deg4(c.n)
            _, res = offset_search_deg4(c)
            r_best = float(aspl_exact(res.best) / lb)
            r_sqrt = float(aspl_exact(offset_torus(c, sqrt_offset(c))) / lb)
            assert 1.0 <= r_best <= 1.1, (n_s, r_best)
            assert 1.0 <= r_sqrt <= 1.25, (n_s, r_sqrt)
            worst_best, worst_sqrt = max(worst_best, r_best), max(worst_sqrt, r_sqrt)
        info["detail"] = f"worst best-offset {worst_best:.4f}, worst sqrt-offset {worst_sqrt:.4f}"


def test_ac08_fig7_degree3():
    with criterion("AC8 degree-3 jump search near bound", 300) as info:
        worst = 0.0
        for n_s in range(8, 49, 2):
            c = Constellation(n_s, 5)
            _, res = offset_search_deg3(c)
            ratio = float(aspl_exact(res.best) / vs_lb_deg3(c.n))
            assert 1.0 <= ratio <= 1.15, (n_s, ratio)
            worst = max(worst, ratio)
        info["detail"] = f"worst ratio {worst:.4f}"


def test_ac09_random_regular():
    with criterion("AC9 random regular sampling", 120) as info:
        medians = []
        for n in (64, 256, 1024):
            diams = []
            for seed in range(20):
                g = sample_regular(n, 4, seed)
                report = validate(g, 4)
                assert report.is_simple and report.is_regular, (n, seed)
                diams.append(diameter(g) if report.is_connected else math.inf)
            med = statistics.median(diams)
            assert med <= 2 * math.log(n, 3) + 4, (n, med)
            medians.append(f"N={n}: {med:g}")
        info["detail"] = "median diameter " + ", ".join(medians)


def test_ac10_constrained_annealing():
    with criterion("AC10 range-constrained annealing", 900) as info:
        parts = []
        for side in (12, 16, 20, 24):
            c = Constellation(side, side)
            start = sample_regular(c.n, 4, seed=0, max_range=0.25, c=c)
            res = anneal(start, AnnealConfig(seed=0, max_range=0.25), c)
            best = aspl_exact(res.best)
            assert all(index_distance(c, u, v) <= 0.25 + 1e-12 for u, v in res.best.edges())
            assert bool(validate(res.best, 4))
            ratio = best / moore_lb(c.n, 4)
            assert ratio <= Fraction(13, 10), (side, float(ratio))
            assert best < aspl_exact(mesh_grid(c)), side
            parts.append(f"{side}x{side}: {float(ratio):.3f}")
        info["detail"] = "ASPL/Moore " + ", ".join(parts)


def test_ac11_prgs_scaling():
    with criterion("AC11 PRGS range-feasible log scaling", 600) as info:
        rows = []
        for n in (576, 1296, 2304):
            side = math.isqrt(n)
            c = Constellation(side, side)
            values = []
            for seed in range(5):
                g = prgs_build(c, PrgsConfig(r=0.25, seed=seed))
                report = validate(g, 4)
                assert report.is_simple and report.is_regular and report.is_connected
                assert max(index_distance(c, u, v) for u, v in g.edges()) <= 0.25 + 1e-12
                values.append(aspl(g))
            med = statistics.median(values)
            rows.append(ScalingRow(n, med, float(moore_lb(n, 4)), 0.0, 0.0))
        r2 = log_fit_r2(rows)
        per_sqrt = [row.median_aspl / math.sqrt(row.n) for row in rows]
        assert r2 >= 0.9, r2
        assert all(b < a for a, b in zip(per_sqrt, per_sqrt[1:])), per_sqrt
        info["detail"] = f"R^2 {r2:.4f}, medians " + ", ".join(f"{row.median_aspl:.3f}" for row in rows)


def random_test_graph(rng: random.Random) -> Topology:
    n = rng.randint(2, 200)
    kind = rng.random()
    if kind < 0.4 and n >= 5:
        delta = rng.choice([3, 4]) if n % 2 == 0 else 4
        return sample_regular(n, delta, rng.randrange(2**32))
    if kind < 0.6:
        # sparse trees plus a few chords: long paths
        edges = [(rng.randrange(v), v) for v in range(1, n)]
        edges += [tuple(sorted(rng.sample(range(n), 2))) for _ in range(rng.randint(0, 3))] if n > 1 else []
        return Topology.from_edges(n, sorted(set(edges)))
    p = rng.uniform(1.5, 6) / n
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    edges += [(v, v + 1) for v in range(n - 1)]
    return Topology.from_edges(n, sorted(set(edges)))


def test_ac12_oracle_agreement():
    with criterion("AC12 BFS vs Floyd-Warshall agreement", 30) as info:
        rng = random.Random(2024)
        worst = 0.0
        for _ in range(200):
            g = random_test_graph(rng)
            diff = abs(aspl(g) - aspl_oracle(g))
            assert diff <= 1e-12, diff
            worst = max(worst, diff)
        info["detail"] = f"200 graphs, max |diff| {worst:.1e}"
