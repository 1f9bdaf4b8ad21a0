"""``cvp-toolkit`` command line.

Node ids on the command line and in the output follow the input file:
1-based for DIMACS ``.gr`` files, 0-based for ``.json`` graph dumps.
Endpoints may also be given as ``lon,lat`` (use ``--source=-82.4,27.9``
so the leading minus is not taken for a flag) when ``--coords`` is loaded.

Exit codes: 0 success, 1 usage, 2 endpoint/input resolution failure,
3 no path between the endpoints.

``CVP_SEED`` is reserved and ignored: every command is deterministic.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np

from .diversity import diversity, diversity_lower_bound, jaccard_distance
from .graph import ROAD_SPEED_TABLE, Graph, GraphError, NodeGeometry, apply_speed_model, load_graph
from .ksp import accelerated_ksp_run, yen_ksp
from .oracle import BudgetExceeded, EnumerationBudget, brute_force_via_costs
from .partition import partition_disjoint_plateau, partition_rpc, partition_via_components
from .pipeline import compute_cvps
from .ranking import MEASURES, format_hours, rank
from .spt import DEFAULT_TIES, cvp_trees, via_costs
from .trellis import TrellisParams, detect_layers, read_costmap, to_svg

EXIT_OK, EXIT_USAGE, EXIT_RESOLVE, EXIT_NO_PATH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class ResolveError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _round(x):
    if isinstance(x, float):
        if not math.isfinite(x):
            return None
        return float(f"{x:.9g}")
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, np.generic):
        return _round(x.item())
    return x


def dumps(obj) -> str:
    """Stable JSON: 9 significant digits, non-finite floats as null."""
    return json.dumps(_round(obj), allow_nan=False)


def resolve_endpoint(geometry: Optional[NodeGeometry], lon: float, lat: float) -> int:
    """Nearest node in the planar (lon, lat) sense; the lowest id wins ties."""
    if geometry is None:
        raise ResolveError("coordinates given but no --coords file loaded")
    d = (geometry.xy[:, 0] - lon) ** 2 + (geometry.xy[:, 1] - lat) ** 2
    return int(np.argmin(d))


class Session:
    """A loaded graph plus the id convention of its file."""

    def __init__(self, graph: Graph, geometry: Optional[NodeGeometry], offset: int, hours: bool):
        self.graph = graph
        self.geometry = geometry
        self.offset = offset
        self.hours = hours

    def node(self, text: str) -> int:
        if "," in text:
            try:
                lon, lat = (float(p) for p in text.split(","))
            except ValueError:
                raise ResolveError(f"cannot parse coordinate {text!r}") from None
            return resolve_endpoint(self.geometry, lon, lat)
        try:
            v = int(text) - self.offset
        except ValueError:
            raise ResolveError(f"cannot parse node {text!r}") from None
        if not 0 <= v < self.graph.node_count:
            raise ResolveError(f"node {text} is not in the graph")
        return v

    def ext(self, nodes) -> list[int]:
        return [v + self.offset for v in nodes]

    def cost_fields(self, cost: float) -> dict:
        out = {"cost": cost}
        if self.hours:
            out["time"] = format_hours(cost)
            out["seconds"] = cost * 3600.0
        return out


def _load(args) -> Session:
    try:
        graph, geometry = load_graph(args.graph, args.coords)
    except (OSError, GraphError) as exc:
        raise ResolveError(str(exc)) from None
    hours = False
    if getattr(args, "speed_model", "none") == "road":
        try:
            graph = apply_speed_model(graph, ROAD_SPEED_TABLE, args.miles_per_unit)
        except GraphError as exc:
            raise ResolveError(str(exc)) from None
        hours = True
    offset = 0 if Path(args.graph).suffix == ".json" else 1
    return Session(graph, geometry, offset, hours)


def _endpoints(session: Session, source: str, target: str, allow_same: bool = False) -> tuple[int, int]:
    s, t = session.node(source), session.node(target)
    if s == t and not allow_same:
        raise UsageError("source and target resolve to the same node")
    return s, t


def _check_thresholds(args):
    for name in ("max_cost_ratio", "min_rho"):
        v = getattr(args, name, None)
        if v is not None and not v > 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    if getattr(args, "k", None) is not None and args.k < 1:
        raise UsageError("--k must be positive")


def cvp_query(session: Session, s: int, t: int, args) -> dict:
    result = compute_cvps(session.graph, s, t, DEFAULT_TIES)
    records = result.choose(args.measure, args.k, args.max_cost_ratio, args.min_rho)
    paths = []
    for i, rec in enumerate(records, 1):
        p = result.extract(rec)
        entry = {"rank": i, "nodes": session.ext(p.nodes), "chain": session.ext(result.chain(rec))}
        entry.update(session.cost_fields(p.cost))
        entry.update({"omega": rec.omega, "rho": rec.rho})
        paths.append(entry)
    return {"source": s + session.offset, "target": t + session.offset,
            "shortest_cost": result.shortest_cost, "paths": paths}


# ProcessPool workers keep their own copy of the session
_WORKER: dict = {}


def _init_worker(session, args):
    _WORKER["session"], _WORKER["args"] = session, args


def _run_pair(pair):
    session, args = _WORKER["session"], _WORKER["args"]
    s, t = _endpoints(session, *pair)
    return cvp_query(session, s, t, args)


def _read_pairs(path) -> list[tuple[str, str]]:
    pairs = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            parts = line.split()
            if len(parts) != 2:
                raise UsageError(f"bad pair line {line!r}")
            pairs.append((parts[0], parts[1]))
    return pairs


def _geojson(session: Session, payload: dict) -> dict:
    if session.geometry is None:
        raise UsageError("--format geojson needs --coords")
    features = []
    for p in payload["paths"]:
        nodes = [v - session.offset for v in p["nodes"]]
        props = {k: v for k, v in p.items() if k != "nodes"}
        features.append({"type": "Feature", "properties": props,
                         "geometry": {"type": "LineString", "coordinates": session.geometry.coords(nodes)}})
    return {"type": "FeatureCollection", "features": features}


def _route_svg(session: Session, payload: dict, size: int = 600) -> str:
    if session.geometry is None:
        raise UsageError("--format svg needs --coords")
    xy = session.geometry.xy
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    colors = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    for i, p in enumerate(payload["paths"]):
        pts = []
        for v in p["nodes"]:
            x, y = (xy[v - session.offset] - lo) / span * (size - 20) + 10
            pts.append(f"{x:.2f},{size - y:.2f}")
        out.append(f'<polyline points="{" ".join(pts)}" fill="none" stroke="{colors[i % len(colors)]}" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out)


def cmd_cvp(args) -> int:
    _check_thresholds(args)
    session = _load(args)
    if args.pairs:
        pairs = _read_pairs(args.pairs)
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs, initializer=_init_worker, initargs=(session, args)) as pool:
                results = list(pool.map(_run_pair, pairs))
        else:
            _init_worker(session, args)
            results = [_run_pair(p) for p in pairs]
        for r in results:
            print(dumps(r))
        return EXIT_OK
    if args.source is None or args.target is None:
        raise UsageError("--source and --target are required without --pairs")
    s, t = _endpoints(session, args.source, args.target)
    payload = cvp_query(session, s, t, args)
    if args.format == "geojson":
        print(dumps(_geojson(session, payload)))
    elif args.format == "svg":
        print(_route_svg(session, payload))
    else:
        print(dumps(payload))
    return EXIT_OK if payload["paths"] else EXIT_NO_PATH


def cmd_ksp(args) -> int:
    _check_thresholds(args)
    session = _load(args)
    s, t = _endpoints(session, args.source, args.target)
    g = session.graph
    k = args.k or 1
    if args.reduce:
        run = accelerated_ksp_run(g, s, t, k)
        paths, timing = run.paths, {"reduce_ms": run.reduce_ms, "yen_ms": run.yen_ms, "rounds": run.rounds}
        if run.reduced is not None:
            timing.update({
                "reduced_nodes": run.reduced.graph.node_count, "reduced_edges": run.reduced.graph.edge_count,
                "node_ratio": run.reduced.graph.node_count / g.node_count,
                "edge_ratio": run.reduced.graph.edge_count / max(g.edge_count, 1),
            })
    else:
        t0 = time.perf_counter()
        paths = yen_ksp(g, s, t, k)
        timing = {"reduce_ms": 0.0, "yen_ms": (time.perf_counter() - t0) * 1e3}
    out = [dict(nodes=session.ext(p.nodes), **session.cost_fields(p.cost)) for p in paths]
    print(dumps({"source": s + session.offset, "target": t + session.offset, "k": k, "paths": out}))
    # timings vary run to run, so they stay off stdout
    print(dumps(timing), file=sys.stderr)
    return EXIT_OK if paths else EXIT_NO_PATH


def cmd_partition(args) -> int:
    session = _load(args)
    s, t = _endpoints(session, args.source, args.target)
    trees = cvp_trees(session.graph, s, t, DEFAULT_TIES)
    vc = via_costs(trees)
    if args.method == "rpc":
        part = partition_rpc(trees[0], trees[1], s, t)
    elif args.method == "components":
        part = partition_via_components(trees[0], trees[1])
    else:
        order = [session.node(x) for x in args.visit_order.split()] if args.visit_order else []
        seen = set(order)
        rest = [v for v in range(session.graph.node_count) if v not in seen]
        graph = session.graph if args.plateau_edges == "graph" else None
        part = partition_disjoint_plateau(trees[0], trees[1], s, t, vc, order + rest, graph)
    chains = [{"nodes": session.ext(c), "via_cost": vc[c[0]]} for c in part.chains]
    print(dumps({"method": args.method, "count": len(chains), "chains": chains}))
    return EXIT_OK


def cmd_diversity(args) -> int:
    _check_thresholds(args)
    session = _load(args)
    s, t = _endpoints(session, args.source, args.target)
    result = compute_cvps(session.graph, s, t, DEFAULT_TIES)
    records = result.choose("cost", args.k, args.max_cost_ratio, args.min_rho)
    if not records:
        print(dumps({"paths": 0}))
        return EXIT_NO_PATH
    paths = [result.extract(r) for r in records]
    out = {"paths": len(paths), "omega": [r.omega for r in records]}
    if len(paths) >= 2:
        out["diversity"] = diversity(paths)
        out["lower_bound"] = diversity_lower_bound(rank(records, "omega"))
        out["jaccard"] = [[jaccard_distance(p, q) for q in paths] for p in paths]
    print(dumps(out))
    return EXIT_OK


def cmd_layers(args) -> int:
    try:
        costmap = read_costmap(args.costmap)
    except (OSError, ValueError) as exc:
        raise ResolveError(str(exc)) from None
    try:
        params = TrellisParams(args.window, args.sigma, args.evidence_weight, args.threshold,
                               args.min_chain_len, args.threshold_mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    found = detect_layers(costmap, params)
    if args.format == "svg":
        print(to_svg(costmap, found), end="")
    else:
        print(dumps({"rows": costmap.rows, "cols": costmap.cols, "boundaries": [b.to_json() for b in found]}))
    return EXIT_OK


def cmd_oracle(args) -> int:
    session = _load(args)
    s, t = _endpoints(session, args.source, args.target)
    trees = cvp_trees(session.graph, s, t, DEFAULT_TIES)
    fast = via_costs(trees)
    try:
        slow = brute_force_via_costs(session.graph, s, t, EnumerationBudget(max_nodes=args.max_nodes))
    except BudgetExceeded as exc:
        raise UsageError(str(exc)) from None
    bad = [v + session.offset for v in range(len(fast)) if fast[v] != slow[v]]
    print(dumps({"nodes": len(fast), "violations": bad, "via_costs": fast}))
    return EXIT_OK


def _graph_args(p, endpoints=True):
    p.add_argument("--graph", required=True, help=".gr/.gr.gz (1-based ids) or .json (0-based ids)")
    p.add_argument("--coords", help="DIMACS .co file with node coordinates")
    p.add_argument("--speed-model", choices=("none", "road"), default="none",
                   help="'road' converts lengths to hours by road category")
    p.add_argument("--miles-per-unit", type=float, default=1.0)
    if endpoints:
        p.add_argument("--source", help="node id or lon,lat")
        p.add_argument("--target", help="node id or lon,lat")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvp-toolkit", description="Alternative routes from reciprocal pointer chains.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cvp", help="ranked via-paths between two nodes")
    _graph_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--measure", choices=MEASURES, default="cost")
    p.add_argument("--max-cost-ratio", type=float)
    p.add_argument("--min-rho", type=float)
    p.add_argument("--format", choices=("json", "geojson", "svg"), default="json")
    p.add_argument("--pairs", help="file of 'source target' lines; one JSON line per pair")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_cvp)

    p = sub.add_parser("ksp", help="k shortest simple paths")
    _graph_args(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--reduce", action="store_true", help="run Yen on the chain-reduced subgraph")
    p.set_defaults(func=cmd_ksp)

    p = sub.add_parser("partition", help="list the chains of a query")
    _graph_args(p)
    p.add_argument("--method", choices=("rpc", "components", "plateau"), default="rpc")
    p.add_argument("--visit-order", help="space-separated nodes visited first (plateau method)")
    p.add_argument("--plateau-edges", choices=("tree", "graph"), default="tree")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("diversity", help="Jaccard diversity of the selected via-paths")
    _graph_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--max-cost-ratio", type=float)
    p.add_argument("--min-rho", type=float)
    p.set_defaults(func=cmd_diversity)

    p = sub.add_parser("layers", help="boundary detection on a CSV or PGM cost map")
    p.add_argument("costmap")
    d = TrellisParams()
    p.add_argument("--window", type=int, default=d.window)
    p.add_argument("--sigma", type=float, default=d.sigma)
    p.add_argument("--evidence-weight", type=float, default=d.evidence_weight)
    p.add_argument("--threshold", type=float, default=d.threshold)
    p.add_argument("--min-chain-len", type=int, default=d.min_chain_len)
    p.add_argument("--threshold-mode", choices=("mean", "total"), default=d.threshold_mode)
    p.add_argument("--format", choices=("json", "svg"), default="json")
    p.set_defaults(func=cmd_layers)

    p = sub.add_parser("oracle", help="compare tree via-costs against exhaustive enumeration")
    _graph_args(p)
    p.add_argument("--max-nodes", type=int, default=16)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    needs_pair = hasattr(args, "source") and args.func is not cmd_cvp
    if needs_pair and (args.source is None or args.target is None):
        parser.error("--source and --target are required")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cvp-toolkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResolveError as exc:
        print(f"cvp-toolkit: error: {exc}", file=sys.stderr)
        return EXIT_RESOLVE


if __name__ == "__main__":
    sys.exit(main())
