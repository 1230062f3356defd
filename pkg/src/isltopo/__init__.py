"""Inter-satellite-link topology design on torus-lattice constellations."""

from .bounds import (
    BoundResult,
    asymptotic_vs_lb,
    capacity_even,
    capacity_odd,
    diameter_lb_vs4,
    greedy_packing_lb,
    moore_lb,
    vs_lb,
    vs_lb_deg3,
    vs_lb_deg4,
)
from .graph import (
    HopProfile,
    Topology,
    aspl,
    aspl_exact,
    aspl_oracle,
    bfs_profile,
    diameter,
    distance_multiset_uniform,
    validate,
)
from .lattice import Constellation, Jump, LatticePoint, toroidal_distance, wrap_add, wrap_sub

__version__ = "0.1.0"
