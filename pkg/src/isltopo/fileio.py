"""Graph JSON files.

Schema::

    {"n_s": int, "n_o": int, "delta": int,
     "edges": [[u, v], ...],          # u < v, node id = row * n_o + col
     "provenance": {"kind": ..., ...}}  # optional

Graphs with no lattice (bare circulants, unconstrained samples) are written
as an ``n x 1`` lattice.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InvalidGraph
from .graph import Topology, validate
from .lattice import Constellation


def topology_to_dict(g: Topology) -> dict:
    c = g.constellation or Constellation(g.n, 1)
    out = {
        "n_s": c.n_s,
        "n_o": c.n_o,
        "delta": g.delta,
        "edges": [[u, v] for u, v in sorted(g.edges())],
    }
    if g.provenance is not None:
        out["provenance"] = g.provenance
    return out


def _int_field(data: dict, key: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidGraph(f"field {key!r} must be an integer, got {value!r}")
    return value


def topology_from_dict(data: dict) -> Topology:
    if not isinstance(data, dict):
        raise InvalidGraph("graph file must hold a JSON object")
    n_s, n_o, delta = (_int_field(data, k) for k in ("n_s", "n_o", "delta"))
    try:
        c = Constellation(n_s, n_o)
    except ValueError as exc:
        raise InvalidGraph(str(exc)) from exc
    raw = data.get("edges")
    if not isinstance(raw, list):
        raise InvalidGraph("field 'edges' must be a list of [u, v] pairs")
    edges = []
    for item in raw:
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in item)):
            raise InvalidGraph(f"malformed edge {item!r}")
        u, v = item
        if not u < v:
            raise InvalidGraph(f"edge {item!r} must be listed as [u, v] with u < v")
        if not (0 <= u and v < c.n):
            raise InvalidGraph(f"edge {item!r} outside node range [0, {c.n})")
        edges.append((u, v))
    provenance = data.get("provenance")
    g = Topology.from_edges(c.n, edges, delta=delta, constellation=c, provenance=provenance)
    report = validate(g)
    if not report.is_simple:
        raise InvalidGraph("graph has repeated edges")
    if not report.is_regular:
        degrees = sorted(set(g.degrees()))
        raise InvalidGraph(f"graph is not {delta}-regular (degrees seen: {degrees})")
    return g


def save_topology(g: Topology, path: str | Path) -> None:
    Path(path).write_text(json.dumps(topology_to_dict(g)) + "\n")


def load_topology(path: str | Path) -> Topology:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidGraph(f"{path}: not valid JSON ({exc})") from exc
    return topology_from_dict(data)
