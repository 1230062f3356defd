import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from isltopo.bounds import (
    asymptotic_vs_lb,
    capacity_even,
    capacity_odd,
    diameter_lb_vs4,
    greedy_packing_lb,
    moore_lb,
    moore_packing,
    vs_lb,
    vs_lb_deg3,
    vs_lb_deg4,
)
from isltopo.graph import Topology, aspl_exact


def lattice_shell_even(delta: int, ell: int) -> int:
    """Points of Z^(delta/2) at L1 norm exactly ell, by enumeration."""
    d = delta // 2
    rng = range(-ell, ell + 1)
    return sum(1 for p in itertools.product(rng, repeat=d) if sum(map(abs, p)) == ell)


def lattice_shell_odd(delta: int, ell: int) -> int:
    """BFS in the infinite odd-degree lattice: free jumps e_1..e_delta in Z^delta,
    even-parity nodes step +e_i, odd-parity nodes step -e_i."""
    start = (0,) * delta
    seen = {start}
    frontier = [start]
    for level in range(ell):
        sign = 1 if level % 2 == 0 else -1
        nxt = []
        for p in frontier:
            for i in range(delta):
                q = p[:i] + (p[i] + sign,) + p[i + 1:]
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(frontier)


@pytest.mark.parametrize("delta, ell, expected", [(4, 1, 4), (4, 7, 28), (2, 5, 2)])
def test_capacity_even_examples(delta, ell, expected):
    assert capacity_even(delta, ell) == expected


@pytest.mark.parametrize("delta, ell, expected", [(3, 1, 3), (3, 6, 18), (3, 2, 6)])
def test_capacity_odd_examples(delta, ell, expected):
    assert capacity_odd(delta, ell) == expected


@pytest.mark.parametrize("delta", [2, 4, 6])
@pytest.mark.parametrize("ell", range(1, 7))
def test_capacity_even_matches_lattice_enumeration(delta, ell):
    assert capacity_even(delta, ell) == lattice_shell_even(delta, ell)


@pytest.mark.parametrize("delta", [3, 5])
@pytest.mark.parametrize("ell", range(1, 8))
def test_capacity_odd_matches_lattice_bfs(delta, ell):
    assert capacity_odd(delta, ell) == lattice_shell_odd(delta, ell)


@pytest.mark.parametrize("fn, bad", [(capacity_even, (3, 1)), (capacity_even, (4, 0)),
                                     (capacity_odd, (4, 1)), (capacity_odd, (3, 0))])
def test_capacity_preconditions(fn, bad):
    with pytest.raises(ValueError):
        fn(*bad)


def test_greedy_examples():
    r = greedy_packing_lb(5, lambda l: 4 * l)
    assert r.profile == (4,) and r.value == 1
    r = greedy_packing_lb(32, lambda l: 4 * l)
    assert r.profile == (4, 8, 12, 7) and r.value == Fraction(84, 31) and r.k == 3
    r = greedy_packing_lb(10, lambda l: 4 * 3 ** (l - 1))
    assert r.profile == (4, 5) and r.value == Fraction(14, 9)


def test_greedy_rejects_zero_capacity():
    with pytest.raises(ValueError):
        greedy_packing_lb(10, lambda l: 0)


@pytest.mark.parametrize("n, expected", [(5, Fraction(1)), (32, Fraction(84, 31)), (200, Fraction(1330, 199))])
def test_vs_lb_deg4_examples(n, expected):
    assert vs_lb_deg4(n) == expected


@pytest.mark.parametrize("n, expected", [(4, Fraction(1)), (24, Fraction(62, 23)), (96, Fraction(508, 95))])
def test_vs_lb_deg3_examples(n, expected):
    # 96: levels 3..21 hold 84 nodes (k=7), the other 11 sit at level 8
    assert vs_lb_deg3(n) == expected


@pytest.mark.parametrize(
    "n, delta, expected",
    [(5, 4, Fraction(1)), (4, 3, Fraction(1)), (10, 4, Fraction(14, 9)), (10, 3, Fraction(15, 9)),
     (16, 4, Fraction(26, 15))],
)
def test_moore_examples(n, delta, expected):
    assert moore_lb(n, delta) == expected


def test_petersen_meets_moore():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    g = Topology.from_edges(10, outer + spokes + inner, delta=3)
    assert aspl_exact(g) == moore_lb(10, 3)


@pytest.mark.parametrize("n, expected", [(32, 4), (5, 1), (200, 10)])
def test_diameter_lb_examples(n, expected):
    assert diameter_lb_vs4(n) == expected


def test_diameter_lb_matches_float_formula():
    for n in range(2, 3000):
        assert diameter_lb_vs4(n) == math.ceil((-1 + math.sqrt(2 * n - 1)) / 2 - 1e-12)


@pytest.mark.parametrize("n, delta, expected", [(1800, 4, 20.0), (9, 4, math.sqrt(18) / 3), (96, 3, 16 / 3)])
def test_asymptotic_examples(n, delta, expected):
    assert asymptotic_vs_lb(n, delta) == pytest.approx(expected, rel=1e-12)


def test_asymptotic_convergence():
    n = 10**6
    assert vs_lb_deg4(n) / asymptotic_vs_lb(n, 4) == pytest.approx(1, rel=0.05)
    assert vs_lb_deg3(n) / asymptotic_vs_lb(n, 3) == pytest.approx(1, rel=0.05)


def test_vs_lb_dispatch():
    assert vs_lb(32, 4) == vs_lb_deg4(32)
    assert vs_lb(24, 3) == vs_lb_deg3(24)
    with pytest.raises(ValueError):
        vs_lb(32, 5)


@given(st.integers(5, 20000))
def test_packing_invariants(n):
    for delta, cap in [(4, lambda l: 4 * l), (3, lambda l: 3 * l)]:
        r = greedy_packing_lb(n, cap)
        assert sum(r.profile) == n - 1
        assert all(x <= cap(i) for i, x in enumerate(r.profile, 1))
        assert all(r.profile[i - 1] == cap(i) for i in range(1, r.k + 1))
        assert r.value == Fraction(sum(i * x for i, x in enumerate(r.profile, 1)), n - 1)


@given(st.integers(5, 20000))
def test_depth_windows(n):
    k = greedy_packing_lb(n, lambda l: 4 * l).k
    assert 2 * k * k + 2 * k + 1 <= n < 2 * (k + 1) ** 2 + 2 * (k + 1) + 1
    k = greedy_packing_lb(n, lambda l: 3 * l).k
    w = lambda k: Fraction(3, 2) * k * k + Fraction(3, 2) * k + 1
    assert w(k) <= n < w(k + 1)


@given(st.integers(5, 20000))
def test_monotone_and_dominance(n):
    for delta in (3, 4):
        assert vs_lb(n, delta) <= vs_lb(n + 1, delta)
        assert moore_lb(n, delta) <= moore_lb(n + 1, delta)
        assert moore_lb(n, delta) <= vs_lb(n, delta)
    assert vs_lb_deg4(n) <= vs_lb_deg3(n)


def test_moore_packing_profile():
    r = moore_packing(100, 4)
    assert r.profile == (4, 12, 36, 47)
    with pytest.raises(ValueError):
        moore_packing(10, 2)
