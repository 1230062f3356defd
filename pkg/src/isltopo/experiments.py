"""Experiment drivers producing one CSV row per (size, method, seed)."""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import bounds
from .errors import TopologyError
from .graph import Topology, aspl_exact, diameter
from .lattice import Constellation
from .prgs import PrgsConfig, prgs_build
from .search import AnnealConfig, anneal, offset_search_deg3, offset_search_deg4, sample_regular
from .symmetric import honeycomb, mesh_grid, offset_torus, sqrt_offset

log = logging.getLogger(__name__)

COLUMNS = [
    "n_s", "n_o", "N", "method", "param", "aspl", "diameter",
    "lb_vs", "lb_moore", "ratio_vs", "ratio_moore", "seed", "runtime_ms",
]

EXPERIMENTS = {
    "fig6": dict(methods=["mesh", "sqrt_offset", "best_offset", "lb"], delta=4, n_o=4, ns=(10, 160, 1)),
    "fig7": dict(methods=["honeycomb", "best_offset_d3", "lb"], delta=3, n_o=5, ns=(8, 88, 2)),
    "fig8": dict(methods=["anneal_unconstrained", "lb_moore"], delta=4, n_o=4, ns=(4, 40, 4)),
    "fig9": dict(methods=["anneal_unconstrained", "anneal_constrained", "lb_moore"], delta=4, n_o=None, ns=(4, 25, 1)),
}

SEEDED = {"anneal_unconstrained", "anneal_constrained", "prgs", "sample"}


@dataclass
class ExperimentSpec:
    """What to run. ``n_o=None`` means square constellations (n_o = n_s)."""

    experiment: str
    ns_values: list[int]
    n_o: int | None
    delta: int
    methods: list[str]
    seeds: list[int] = field(default_factory=lambda: [0])
    r: float = 0.25
    out: str | None = None
    jobs: int = 1
    d3_space: str = "wide"
    anneal: AnnealConfig = field(default_factory=AnnealConfig)

    def __post_init__(self):
        if not self.ns_values:
            raise ValueError("empty n_s range")
        if not self.methods:
            raise ValueError("no methods selected")
        if not self.seeds:
            raise ValueError("empty seed list")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; known: {sorted(METHODS)}")

    @classmethod
    def preset(cls, name: str, **overrides) -> "ExperimentSpec":
        if name not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {name!r}; known: {sorted(EXPERIMENTS)} or 'custom'")
        p = EXPERIMENTS[name]
        lo, hi, step = p["ns"]
        fields = dict(experiment=name, ns_values=list(range(lo, hi + 1, step)), n_o=p["n_o"], delta=p["delta"],
                      methods=list(p["methods"]))
        fields.update(overrides)
        return cls(**fields)

    def constellations(self) -> list[Constellation]:
        return [Constellation(ns, ns if self.n_o is None else self.n_o) for ns in self.ns_values]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _row(c: Constellation, method: str, spec: ExperimentSpec, seed, param=None, value=None, diam=None,
         symmetric: bool = False) -> dict:
    lb_moore = bounds.moore_lb(c.n, spec.delta) if c.n > spec.delta else None
    lb_vs = bounds.vs_lb(c.n, spec.delta) if symmetric else None
    row = dict(n_s=c.n_s, n_o=c.n_o, N=c.n, method=method, param=param, seed=seed if method in SEEDED else None)
    row["aspl"] = None if value is None else float(value)
    row["diameter"] = diam
    row["lb_vs"] = None if lb_vs is None else float(lb_vs)
    row["lb_moore"] = None if lb_moore is None else float(lb_moore)
    row["ratio_vs"] = None if (lb_vs is None or value is None) else float(value / lb_vs)
    row["ratio_moore"] = None if (lb_moore is None or value is None) else float(value / lb_moore)
    return row


def _measured(c, method, spec, seed, g: Topology, param=None, symmetric=False) -> dict:
    return _row(c, method, spec, seed, param, aspl_exact(g), diameter(g), symmetric)


def _m_mesh(c, spec, seed):
    return _measured(c, "mesh", spec, seed, mesh_grid(c), symmetric=True)


def _m_sqrt_offset(c, spec, seed):
    omega = sqrt_offset(c)
    return _measured(c, "sqrt_offset", spec, seed, offset_torus(c, omega), param=omega, symmetric=True)


def _m_best_offset(c, spec, seed):
    omega, res = offset_search_deg4(c)
    return _measured(c, "best_offset", spec, seed, res.best, param=omega, symmetric=True)


def _m_honeycomb(c, spec, seed):
    return _measured(c, "honeycomb", spec, seed, honeycomb(c), symmetric=True)


def _m_best_offset_d3(c, spec, seed):
    spaces = ["wide", "honeycomb"] if spec.d3_space == "both" else [spec.d3_space]
    rows = []
    for space in spaces:
        jumps, res = offset_search_deg3(c, space)
        name = "best_offset_d3" if space == "wide" else "best_offset_d3_honeycomb"
        param = ";".join(f"{e.d_row}:{e.d_col}" for e in jumps)
        rows.append(_measured(c, name, spec, seed, res.best, param=param, symmetric=True))
    return rows


def _m_lb(c, spec, seed):
    packing = bounds.greedy_packing_lb(
        c.n, (lambda l: bounds.capacity_even(4, l)) if spec.delta == 4 else (lambda l: bounds.capacity_odd(3, l))
    )
    return _row(c, "lb", spec, seed, value=bounds.vs_lb(c.n, spec.delta), diam=len(packing.profile), symmetric=True)


def _m_lb_moore(c, spec, seed):
    packing = bounds.moore_packing(c.n, spec.delta)
    return _row(c, "lb_moore", spec, seed, value=packing.value, diam=len(packing.profile))


def _m_anneal(c, spec, seed, constrained: bool):
    max_range = spec.r if constrained else None
    start = sample_regular(c.n, spec.delta, seed, max_range=max_range, c=c)
    cfg = replace(spec.anneal, seed=seed, max_range=max_range)
    res = anneal(start, cfg, c)
    name = "anneal_constrained" if constrained else "anneal_unconstrained"
    return _measured(c, name, spec, seed, res.best, param=max_range)


def _m_prgs(c, spec, seed):
    g = prgs_build(c, PrgsConfig(r=spec.r, seed=seed))
    return _measured(c, "prgs", spec, seed, g, param=spec.r)


def _m_sample(c, spec, seed):
    g = sample_regular(c.n, spec.delta, seed, c=c)
    return _measured(c, "sample", spec, seed, g)


METHODS = {
    "mesh": _m_mesh,
    "sqrt_offset": _m_sqrt_offset,
    "best_offset": _m_best_offset,
    "honeycomb": _m_honeycomb,
    "best_offset_d3": _m_best_offset_d3,
    "lb": _m_lb,
    "lb_moore": _m_lb_moore,
    "anneal_unconstrained": lambda c, spec, seed: _m_anneal(c, spec, seed, False),
    "anneal_constrained": lambda c, spec, seed: _m_anneal(c, spec, seed, True),
    "prgs": _m_prgs,
    "sample": _m_sample,
}


def tasks(spec: ExperimentSpec) -> list[tuple]:
    out = []
    for c in spec.constellations():
        for method in spec.methods:
            seeds = spec.seeds if method in SEEDED else [spec.seeds[0]]
            out.extend((c.n_s, c.n_o, method, s) for s in seeds)
    return out


def run_task(spec: ExperimentSpec, task: tuple) -> list[dict]:
    n_s, n_o, method, seed = task
    c = Constellation(n_s, n_o)
    t0 = time.perf_counter()
    try:
        result = METHODS[method](c, spec, seed)
    except (TopologyError, ValueError) as exc:
        log.info("skipping %s at %dx%d seed %s: %s", method, n_s, n_o, seed, exc)
        return []
    rows = result if isinstance(result, list) else [result]
    elapsed = (time.perf_counter() - t0) * 1e3
    for row in rows:
        row["runtime_ms"] = round(elapsed, 3)
    return rows


def _run_packed(args):
    spec, task = args
    return run_task(spec, task)


def run_experiment(spec: ExperimentSpec) -> list[dict]:
    """All rows in parameter order, whatever order workers finish in."""
    todo = tasks(spec)
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            chunks = list(pool.map(_run_packed, [(spec, t) for t in todo]))
    else:
        chunks = [run_task(spec, t) for t in todo]
    return [row for chunk in chunks for row in chunk]


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in COLUMNS])
    return buf.getvalue()


def write_csv(rows: list[dict], path: str | Path) -> None:
    Path(path).write_text(rows_to_csv(rows))


def gnuplot_script(csv_path: str | Path, methods: list[str], title: str) -> str:
    """Generic gnuplot script plotting ASPL against N, one curve per method."""
    name = Path(csv_path).name
    lines = [
        "set datafile separator ','",
        f"set title '{title}'",
        "set xlabel 'N'",
        "set ylabel 'ASPL'",
        "set key left top",
        "set terminal pngcairo size 900,600",
        f"set output '{Path(name).stem}.png'",
    ]
    plots = [
        f"'< grep \",{m},\" {name}' using 3:6 with linespoints title '{m}'" for m in methods
    ]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"
