"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 validation/construction error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from dataclasses import fields, replace
from pathlib import Path

from . import bounds
from .errors import TopologyError
from .experiments import EXPERIMENTS, ExperimentSpec, gnuplot_script, run_experiment, write_csv
from .fileio import load_topology, save_topology
from .graph import Topology, aspl_exact, diameter, sweep_topology
from .lattice import Constellation
from .prgs import PrgsConfig, log_fit_r2, prgs_build, scaling_report
from .search import AnnealConfig, anneal, offset_search_deg3, offset_search_deg4, sample_regular
from .symmetric import (
    build_even,
    build_odd,
    circulant,
    claim_d3_construction,
    coprime_circulant_construction,
    honeycomb,
    mesh_grid,
    offset_torus,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("isltopo")

BUILD_KINDS = ("mesh", "honeycomb", "offset", "circulant", "coprime", "d3claim", "sample", "prgs", "even", "odd")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _jump_list(text: str) -> list[tuple[int, int]]:
    """``"1,0;0,1"`` -> [(1, 0), (0, 1)]."""
    out = []
    for part in text.split(";"):
        bits = [b for b in part.split(",") if b.strip()]
        if len(bits) != 2:
            raise argparse.ArgumentTypeError(f"jump {part!r} must be 'row,col'")
        try:
            out.append((int(bits[0]), int(bits[1])))
        except ValueError:
            raise argparse.ArgumentTypeError(f"jump {part!r} must hold integers")
    return out


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.kind} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _constellation(args) -> Constellation:
    _need(args, "ns", "no")
    return Constellation(args.ns, args.no)


def build_topology(args) -> Topology:
    kind = args.kind
    if kind == "mesh":
        return mesh_grid(_constellation(args))
    if kind == "honeycomb":
        return honeycomb(_constellation(args))
    if kind == "offset":
        _need(args, "omega")
        return offset_torus(_constellation(args), args.omega)
    if kind == "circulant":
        _need(args, "n", "jumps")
        return circulant(args.n, _int_list(args.jumps))
    if kind == "coprime":
        return coprime_circulant_construction(_constellation(args))
    if kind == "d3claim":
        _need(args, "no")
        return claim_d3_construction(args.no)
    if kind == "even":
        _need(args, "jumps")
        return build_even(_constellation(args), _jump_list(args.jumps))
    if kind == "odd":
        _need(args, "jumps")
        return build_odd(_constellation(args), _jump_list(args.jumps), args.partition)
    if kind == "sample":
        if args.ns is not None and args.no is not None:
            c = Constellation(args.ns, args.no)
            n = c.n
        else:
            _need(args, "n")
            c, n = None, args.n
        return sample_regular(n, args.delta, args.seed, max_range=args.range, c=c)
    if kind == "prgs":
        _need(args, "ns", "range")
        return prgs_build(Constellation(args.ns, args.ns), PrgsConfig(r=args.range, seed=args.seed))
    raise UsageError(f"unknown kind {kind!r}")


def evaluate(g: Topology) -> dict:
    res = sweep_topology(g)
    degrees = Counter(g.degrees())
    out = {
        "N": g.n,
        "delta": g.delta,
        "degree_histogram": {str(k): v for k, v in sorted(degrees.items())},
        "connected": res.connected,
    }
    regular = len(degrees) == 1
    if g.n > g.delta and g.delta >= 3 and regular:
        out["moore_lb"] = float(bounds.moore_lb(g.n, g.delta))
    if g.delta in (3, 4) and regular and g.n >= 2:
        out["vs_lb"] = float(bounds.vs_lb(g.n, g.delta))
    if res.connected and g.n >= 2:
        value = aspl_exact(g)
        out["aspl"] = float(value)
        out["aspl_fraction"] = f"{value.numerator}/{value.denominator}"
        out["diameter"] = res.diameter
        if "moore_lb" in out:
            out["ratio_moore"] = float(value / bounds.moore_lb(g.n, g.delta))
        if "vs_lb" in out:
            out["ratio_vs"] = float(value / bounds.vs_lb(g.n, g.delta))
        if g.delta == 4:
            out["diameter_lb_vs"] = bounds.diameter_lb_vs4(g.n)
    return out


def _print_metrics(metrics: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(metrics, sort_keys=True))
        return
    for key, value in metrics.items():
        if isinstance(value, float):
            value = f"{value:.6f}"
        print(f"{key:>16}: {value}")


def cmd_build(args) -> int:
    g = build_topology(args)
    if args.out:
        save_topology(g, args.out)
    _print_metrics(evaluate(g), args.json)
    return EXIT_OK


def cmd_eval(args) -> int:
    g = load_topology(args.path)
    _print_metrics(evaluate(g), args.json)
    return EXIT_OK


def cmd_bound(args) -> int:
    n, d = args.n, args.delta
    out = {"N": n, "delta": d}
    if d >= 3 and n > d:
        p = bounds.moore_packing(n, d)
        out.update(moore_lb=float(p.value), moore_profile=list(p.profile))
    if d in (3, 4):
        out["vs_lb"] = float(bounds.vs_lb(n, d))
        out["vs_asymptotic"] = bounds.asymptotic_vs_lb(n, d)
    if d == 4:
        out["diameter_lb_vs"] = bounds.diameter_lb_vs4(n)
    _print_metrics(out, args.json)
    return EXIT_OK


def _anneal_config(args, base: AnnealConfig | None = None) -> AnnealConfig:
    cfg = base or AnnealConfig()
    updates = {}
    for f in ("initial_temperature", "cooling_factor", "steps_per_temperature", "min_temperature", "max_evaluations"):
        value = getattr(args, f, None)
        if value is not None:
            updates[f] = value
    return replace(cfg, **updates)


def cmd_search(args) -> int:
    c = Constellation(args.ns, args.no) if args.ns is not None and args.no is not None else None
    if args.method == "offset4":
        if c is None:
            raise UsageError("offset4 needs --ns and --no")
        omega, res = offset_search_deg4(c)
        print(f"omega*: {omega}")
    elif args.method == "offset3":
        if c is None:
            raise UsageError("offset3 needs --ns and --no")
        jumps, res = offset_search_deg3(c, args.space)
        print("jumps*: " + ";".join(f"{e.d_row},{e.d_col}" for e in jumps))
    else:
        if args.input:
            start = load_topology(args.input)
            c = c or start.constellation
        elif c is not None:
            start = sample_regular(c.n, args.delta, args.seed, max_range=args.range, c=c)
        else:
            raise UsageError("anneal needs --in or --ns/--no")
        cfg = replace(_anneal_config(args), seed=args.seed, max_range=args.range)
        res = anneal(start, cfg, c)
        if args.trace:
            rows = ["step,temperature,current_aspl,best_aspl"]
            rows += [f"{s.step},{s.temperature:.6g},{s.current_aspl:.12g},{s.best_aspl:.12g}" for s in res.trace]
            Path(args.trace).write_text("\n".join(rows) + "\n")
    if args.out:
        save_topology(res.best, args.out)
    _print_metrics(evaluate(res.best), args.json)
    return EXIT_OK


def cmd_scaling(args) -> int:
    rows = scaling_report(args.range, _int_list(args.sizes), args.seeds)
    print("N,median_aspl,moore_lb,ratio,aspl_per_log3N")
    for r in rows:
        print(f"{r.n},{r.median_aspl:.6f},{r.moore_lb:.6f},{r.ratio:.4f},{r.per_log3:.4f}")
    if len(rows) > 1:
        print(f"# R^2 of median ASPL vs ln N: {log_fit_r2(rows):.4f}")
    return EXIT_OK


def _coerce(text: str):
    low = text.strip().lower()
    if low in ("true", "false"):
        return low == "true"
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text.strip().strip("'\"")


def read_config(path: str | Path) -> dict:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = _coerce(value)
    return out


_ANNEAL_KEYS = {f.name for f in fields(AnnealConfig)} - {"seed", "max_range"}


def experiment_spec(args) -> ExperimentSpec:
    conf = read_config(args.config) if args.config else {}
    for key in ("ns_min", "ns_max", "ns_step", "no", "r", "seeds", "jobs", "methods", "out", "d3_space", "delta"):
        value = getattr(args, key, None)
        if value is not None:
            conf[key] = value
    for key in _ANNEAL_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            conf[key] = value
    anneal_cfg = AnnealConfig(**{k: conf.pop(k) for k in list(conf) if k in _ANNEAL_KEYS})
    overrides: dict = {"anneal": anneal_cfg}
    name = args.experiment
    preset = EXPERIMENTS.get(name, dict(methods=[], delta=4, n_o=None, ns=(4, 8, 1)))
    lo, hi, step = preset["ns"]
    lo, hi, step = int(conf.pop("ns_min", lo)), int(conf.pop("ns_max", hi)), int(conf.pop("ns_step", step))
    if step < 1:
        raise UsageError("ns_step must be >= 1")
    overrides["ns_values"] = list(range(lo, hi + 1, step))
    if "no" in conf:
        no = conf.pop("no")
        overrides["n_o"] = None if str(no).lower() in ("square", "none") else int(no)
    if "seeds" in conf:
        seeds = conf.pop("seeds")
        overrides["seeds"] = seeds if isinstance(seeds, list) else _int_list(str(seeds))
    if "methods" in conf:
        methods = conf.pop("methods")
        overrides["methods"] = [m.strip() for m in str(methods).split(",") if m.strip()]
    for key in ("r", "jobs", "out", "d3_space", "delta"):
        if key in conf:
            overrides[key] = conf.pop(key)
    if conf:
        raise UsageError(f"unknown config keys: {sorted(conf)}")
    try:
        if name == "custom":
            fields_ = dict(experiment="custom", n_o=preset["n_o"], delta=4, methods=[])
            fields_.update(overrides)
            return ExperimentSpec(**fields_)
        return ExperimentSpec.preset(name, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_experiment(args) -> int:
    spec = experiment_spec(args)
    out = spec.out or f"{spec.experiment}.csv"
    rows = run_experiment(spec)
    write_csv(rows, out)
    if args.plot_script:
        Path(args.plot_script).write_text(gnuplot_script(out, spec.methods, spec.experiment))
    print(f"wrote {len(rows)} rows to {out}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="isltopo", description="ISL topology design on torus-lattice constellations")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="construct a topology, print its metrics, optionally save it")
    b.add_argument("kind", choices=BUILD_KINDS)
    b.add_argument("--ns", type=int)
    b.add_argument("--no", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("--omega", type=int)
    b.add_argument("--jumps", help="circulant: '3,4'; even/odd: '1,0;0,1'")
    b.add_argument("--partition", default="row_parity", choices=("row_parity", "col_parity", "checker_parity"))
    b.add_argument("--delta", type=int, default=4)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--range", type=float, help="link range on the unit torus")
    b.add_argument("--out")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("eval", help="metrics for a graph JSON file")
    e.add_argument("path")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_eval)

    bd = sub.add_parser("bound", help="lower bounds for N nodes of degree delta")
    bd.add_argument("--n", type=int, required=True)
    bd.add_argument("--delta", type=int, default=4)
    bd.add_argument("--json", action="store_true")
    bd.set_defaults(func=cmd_bound)

    s = sub.add_parser("search", help="offset sweeps or simulated annealing")
    s.add_argument("method", choices=("offset4", "offset3", "anneal"))
    s.add_argument("--ns", type=int)
    s.add_argument("--no", type=int)
    s.add_argument("--space", default="wide", choices=("wide", "honeycomb"))
    s.add_argument("--in", dest="input")
    s.add_argument("--delta", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--range", type=float)
    s.add_argument("--initial-temperature", type=float)
    s.add_argument("--cooling-factor", type=float)
    s.add_argument("--steps-per-temperature", type=int)
    s.add_argument("--min-temperature", type=float)
    s.add_argument("--max-evaluations", type=int)
    s.add_argument("--trace", help="write the annealing trace CSV here")
    s.add_argument("--out")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_search)

    sc = sub.add_parser("scaling", help="PRGS median ASPL across network sizes")
    sc.add_argument("--range", type=float, default=0.25)
    sc.add_argument("--sizes", default="576,1296,2304")
    sc.add_argument("--seeds", type=int, default=5)
    sc.set_defaults(func=cmd_scaling)

    x = sub.add_parser("experiment", help="run a figure sweep and write CSV")
    x.add_argument("experiment", choices=sorted(EXPERIMENTS) + ["custom"])
    x.add_argument("--config", help="key = value file; flags override it")
    x.add_argument("--out")
    x.add_argument("--ns-min", type=int)
    x.add_argument("--ns-max", type=int)
    x.add_argument("--ns-step", type=int)
    x.add_argument("--no", help="orbital planes, or 'square' for n_o = n_s")
    x.add_argument("--delta", type=int)
    x.add_argument("--r", type=float)
    x.add_argument("--seed", dest="seeds", type=_int_list, help="seed list, e.g. '0,1,2'")
    x.add_argument("--methods")
    x.add_argument("--d3-space", choices=("wide", "honeycomb", "both"))
    x.add_argument("--jobs", type=int)
    x.add_argument("--max-evaluations", type=int)
    x.add_argument("--steps-per-temperature", type=int)
    x.add_argument("--cooling-factor", type=float)
    x.add_argument("--min-temperature", type=float)
    x.add_argument("--initial-temperature", type=float)
    x.add_argument("--plot-script", help="also write a gnuplot script here")
    x.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"isltopo: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TopologyError, ValueError) as exc:
        print(f"isltopo: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"isltopo: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
