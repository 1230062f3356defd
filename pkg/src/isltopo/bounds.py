"""ASPL and diameter lower bounds.

Every ASPL bound here is a level-packing bound: the hop levels around a root
are filled in ascending order up to a per-level capacity until all ``n - 1``
other nodes are placed. ``greedy_packing_lb`` is the single engine; the
closed forms for degree 3 and 4 vertex-symmetric graphs are kept as
independent expressions and tested against it.

Values are exact ``Fraction`` objects so that "meets the bound" is an
equality test, not a tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable


@dataclass(frozen=True)
class BoundResult:
    """Optimal packing for a bound.

    ``profile[i - 1]`` holds the node count placed at hop level ``i``;
    levels ``1..k`` are filled to capacity and level ``k + 1`` (if present)
    takes the remainder.
    """

    value: Fraction
    k: int
    profile: tuple[int, ...]

    def __float__(self) -> float:
        return float(self.value)


def _compositions(total: int, parts: int) -> int:
    """Ways to write ``total`` as an ordered sum of ``parts`` positive integers."""
    if parts == 0:
        return 1 if total == 0 else 0
    if total < parts:
        return 0
    return math.comb(total - 1, parts - 1)


def capacity_even(delta: int, ell: int) -> int:
    """Most nodes at exactly ``ell`` hops in an even-degree vertex-symmetric graph."""
    if delta < 2 or delta % 2:
        raise ValueError(f"delta must be even and >= 2, got {delta}")
    if ell < 1:
        raise ValueError(f"level must be >= 1, got {ell}")
    half = delta // 2
    return sum(math.comb(half, j) * math.comb(ell - 1, j - 1) * 2**j for j in range(1, min(half, ell) + 1))


def capacity_odd(delta: int, ell: int) -> int:
    """Most nodes at exactly ``ell`` hops in an odd-degree vertex-symmetric graph.

    A length-``ell`` path alternates forward and backward jumps, so it uses
    ``ceil(ell/2)`` forward and ``floor(ell/2)`` backward hops. The count
    chooses ``i`` jumps carrying the forward hops and ``j`` other jumps
    carrying the backward ones. ``j`` starts at 0 so that ``ell = 1`` (no
    backward hops) counts its ``delta`` neighbours.
    """
    if delta < 3 or delta % 2 == 0:
        raise ValueError(f"delta must be odd and >= 3, got {delta}")
    if ell < 1:
        raise ValueError(f"level must be >= 1, got {ell}")
    fwd, back = (ell + 1) // 2, ell // 2
    total = 0
    for i in range(1, min(fwd, delta) + 1):
        inner = sum(
            math.comb(delta - i, j) * _compositions(back, j) for j in range(0, min(back, delta - i) + 1)
        )
        total += math.comb(delta, i) * _compositions(fwd, i) * inner
    return total


def greedy_packing_lb(n: int, capacity: Callable[[int], int]) -> BoundResult:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    remaining = n - 1
    profile = []
    k = 0
    level = 0
    while remaining > 0:
        level += 1
        cap = capacity(level)
        if cap < 1:
            raise ValueError(f"capacity({level}) = {cap}; packing cannot terminate")
        x = min(cap, remaining)
        profile.append(x)
        remaining -= x
        if x == cap:
            k = level
    value = Fraction(sum(i * x for i, x in enumerate(profile, start=1)), n - 1)
    return BoundResult(value, k, tuple(profile))


def _depth_vs4(n: int) -> int:
    # floor((-1 + sqrt(2n - 1)) / 2) in integer arithmetic
    return (math.isqrt(2 * n - 1) - 1) // 2


def _depth_vs3(n: int) -> int:
    # floor((-1 + sqrt((8n - 5) / 3)) / 2); floor(sqrt(x)) == isqrt(floor(x))
    return (math.isqrt((8 * n - 5) // 3) - 1) // 2


def vs_lb_deg4(n: int) -> Fraction:
    """Closed-form ASPL bound for degree-4 vertex-symmetric graphs on ``n`` nodes."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    k = _depth_vs4(n)
    head = (k + 1) * (n - 2 * k * k - 2 * k - 1)
    return Fraction(head + sum(4 * i * i for i in range(1, k + 1)), n - 1)


def vs_lb_deg3(n: int) -> Fraction:
    """Closed-form ASPL bound for degree-3 vertex-symmetric graphs on ``n`` nodes."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    k = _depth_vs3(n)
    head = (k + 1) * (n - Fraction(3, 2) * k * k - Fraction(3, 2) * k - 1)
    return (head + sum(3 * i * i for i in range(1, k + 1))) / (n - 1)


def vs_lb(n: int, delta: int) -> Fraction:
    if delta == 4:
        return vs_lb_deg4(n)
    if delta == 3:
        return vs_lb_deg3(n)
    raise ValueError(f"closed-form vertex-symmetric bound only for degree 3 or 4, got {delta}")


def moore_packing(n: int, delta: int) -> BoundResult:
    if delta < 3:
        raise ValueError(f"delta must be >= 3, got {delta}")
    return greedy_packing_lb(n, lambda i: delta * (delta - 1) ** (i - 1))


def moore_lb(n: int, delta: int) -> Fraction:
    """Generalized Moore bound: ASPL floor for any ``delta``-regular graph.

    The leftover nodes that do not fill a whole level sit one level past the
    last full one.
    """
    return moore_packing(n, delta).value


def diameter_lb_vs4(n: int) -> int:
    """ceil((-1 + sqrt(2n - 1)) / 2), i.e. the least D with (2D + 1)^2 >= 2n - 1."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    target = 2 * n - 1
    d = max(0, (math.isqrt(target) - 1) // 2)
    while (2 * d + 1) ** 2 < target:
        d += 1
    return d


def asymptotic_vs_lb(n: int, delta: int) -> float:
    if delta == 4:
        return math.sqrt(2 * n) / 3
    if delta == 3:
        return math.sqrt(8 * n / 3) / 3
    raise ValueError(f"delta must be 3 or 4, got {delta}")
