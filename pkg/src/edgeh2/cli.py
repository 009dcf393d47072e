"""Command-line entry point: ``edgeh2 {h2,mst,plan,verify,simulate} FILE ...``.

Exit codes: 0 ok, 1 bad input (parse/usage), 2 disconnected graph,
3 numerical failure, 4 verification failure.
"""
import argparse
import csv
import json
import sys

import numpy as np

from .checks import random_battery, run_checks
from .errors import Disconnected, EdgeH2Error, NumericalError, ParseError
from .graph import find_spanning_tree, spanning_tree, tree_from_pairs
from .graphfile import read_graph_file
from .h2 import MODELS, NoiseModel, h2_closed_form, h2_lyapunov
from .planner import CandidateEdge, rank_candidates
from .sim import SimConfig, empirical_h2
from .tree_opt import brute_force_min_tree, min_h2_spanning_tree

EXIT_OK, EXIT_INPUT, EXIT_DISCONNECTED, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _num(x):
    """Shortest round-trip text for a float, shared by csv and json output."""
    if x is None:
        return ""
    return repr(float(x))


def parse_pairs(text):
    """``"1,2;1,3"`` -> [(1, 2), (1, 3)]."""
    pairs = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ParseError(f"edge {chunk!r} must be 'u,v'")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(f"edge {chunk!r} must hold integer labels") from None
    return pairs


def parse_candidates(text):
    """``"2,3,10;3,6,5"`` -> CandidateEdge list."""
    out = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        parts = chunk.split(",")
        if len(parts) != 3:
            raise ParseError(f"candidate {chunk!r} must be 'u,v,weight'")
        try:
            out.append(CandidateEdge(int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise ParseError(f"candidate {chunk!r}: {exc}") from None
    return out


def _tree_arg(g, spec):
    if spec is None or spec == "auto":
        return find_spanning_tree(g)
    return tree_from_pairs(g, parse_pairs(spec))


def _noise(args):
    return NoiseModel(args.sigma_omega, args.sigma_v)


def _edge_text(g, positions):
    return ";".join(f"{g.edge_label(p)[0]},{g.edge_label(p)[1]}" for p in positions)


def _emit(args, record, rows=None, columns=None):
    """Write ``record`` (a flat dict) plus optional per-row payload in the chosen format."""
    out = args.out
    if args.format == "json":
        payload = dict(record)
        if rows is not None:
            payload[args.rows_key] = rows
        json.dump(payload, out, indent=2)
        out.write("\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        if rows is None:
            w.writerow(record.keys())
            w.writerow([_num(v) if isinstance(v, float) or v is None else v
                        for v in record.values()])
        else:
            w.writerow(columns)
            for row in rows:
                w.writerow([_num(row[c]) if isinstance(row[c], float) else row[c]
                            for c in columns])
    else:
        width = max(len(k) for k in record)
        for key, value in record.items():
            text = f"{value:.6f}" if isinstance(value, float) else ("-" if value is None else value)
            out.write(f"{key:<{width}}  {text}\n")
        if rows:
            widths = [max(12, len(c)) for c in columns]
            out.write("\n" + "  ".join(f"{c:>{n}}" for c, n in zip(columns, widths)) + "\n")
            for row in rows:
                cells = [f"{row[c]:{n}.6f}" if isinstance(row[c], float) else f"{row[c]!s:>{n}}"
                         for c, n in zip(columns, widths)]
                out.write("  ".join(cells) + "\n")


def cmd_h2(args):
    g = read_graph_file(args.file).graph
    t = _tree_arg(g, args.tree)
    noise = _noise(args)
    rep = h2_closed_form(g, t, noise, args.model)
    record = rep.as_dict()
    record["tree"] = _edge_text(g, t.tree_edges)
    if args.oracle:
        ora = h2_lyapunov(g, t, noise, args.model)
        record["oracle_total_sq"] = ora.total_sq
        record["oracle_rel_dev"] = abs(ora.total_sq - rep.total_sq) / max(abs(rep.total_sq), 1e-300)
    _emit(args, record)
    return EXIT_OK


def cmd_mst(args):
    g = read_graph_file(args.file).graph
    noise = _noise(args)
    t, rep = min_h2_spanning_tree(g, noise, args.seed_vertex)
    record = rep.as_dict()
    record["tree"] = _edge_text(g, t.tree_edges)
    status = EXIT_OK
    if args.brute_force:
        bt, value = brute_force_min_tree(g, noise)
        record["brute_force_total_sq"] = value
        record["brute_force_tree"] = _edge_text(g, bt.tree_edges)
        record["greedy_matches_brute_force"] = "yes" if abs(value - rep.total_sq) <= 1e-12 else "no"
        if record["greedy_matches_brute_force"] == "no":
            status = EXIT_VERIFY
    _emit(args, record)
    return status


def cmd_plan(args):
    g = read_graph_file(args.file).graph
    noise = _noise(args)
    if args.tree is None or args.tree == "auto":
        t = g if g.is_tree() else g.subgraph(min_h2_spanning_tree(g, noise)[0].tree_edges)
        tree = spanning_tree(g, [g.edge_position(u, v) for u, v, _ in t.edges])
    else:
        tree = tree_from_pairs(g, parse_pairs(args.tree))
        t = g.subgraph(tree.tree_edges)
    if args.candidates:
        cands = parse_candidates(args.candidates)
    else:
        cands = [CandidateEdge(*g.edges[p]) for p in tree.cotree_edges]
    if not cands:
        raise ParseError("no candidate edges: pass --candidates or a graph with cotree edges")
    k = len(cands) if args.k is None else args.k
    steps = rank_candidates(t, cands, noise, args.model, k)
    base = h2_closed_form(t, None, noise, args.model)
    record = base.as_dict()
    record["tree"] = _edge_text(t, range(t.m))
    record["final_total_sq"] = steps[-1].total_after if steps else base.total_sq
    rows = [{"step": i + 1, "u": s.candidate.u, "v": s.candidate.v, "weight": s.candidate.weight,
             "delta": s.delta, "cumulative_delta": s.cumulative_delta,
             "total_after": s.total_after, "scoring": "recomputed" if s.exact else "closed_form"}
            for i, s in enumerate(steps)]
    args.rows_key = "steps"
    _emit(args, record, rows, list(rows[0]) if rows else [])
    return EXIT_OK


def cmd_verify(args):
    g = read_graph_file(args.file).graph
    noise = _noise(args)
    out = args.out
    failures = 0
    try:
        t = _tree_arg(g, args.tree)
    except EdgeH2Error as exc:
        out.write(f"FAIL tree_argument: {exc}\n")
        out.write("verification FAILED\n")
        return EXIT_VERIFY
    for c in run_checks(g, t, noise):
        failures += not c.passed
        out.write(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}\n")
    rng = np.random.default_rng(args.seed)
    for i, (rg, checks) in enumerate(random_battery(rng, args.trials, noise)):
        bad = [c for c in checks if not c.passed]
        failures += len(bad)
        status = "PASS" if not bad else "FAIL"
        out.write(f"{status} random[{i}] n={rg.n} m={rg.m}: {len(checks) - len(bad)}/{len(checks)}\n")
        for c in bad:
            out.write(f"  FAIL {c.name}: {c.detail}\n")
    out.write("verification passed\n" if not failures else f"verification FAILED ({failures})\n")
    return EXIT_OK if not failures else EXIT_VERIFY


def cmd_simulate(args):
    g = read_graph_file(args.file).graph
    t = _tree_arg(g, args.tree)
    noise = _noise(args)
    cfg = SimConfig(args.dt, args.burn_in, args.steps, args.trials, args.seed)
    rep = empirical_h2(g, t, noise, args.model, cfg)
    ref = h2_closed_form(g, t, noise, args.model).total_sq
    record = rep.as_dict()
    record["stderr"] = rep.stderr
    record["closed_form_total_sq"] = ref
    record["z_score"] = (rep.total_sq - ref) / rep.stderr if rep.stderr else 0.0
    _emit(args, record)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="edgeh2", description="H2 analysis of time-scaled edge-consensus networks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, tree=True, model=True):
        sp.add_argument("file", help="graph file")
        sp.add_argument("--sigma-omega", type=float, default=1.0, help="process-noise intensity")
        sp.add_argument("--sigma-v", type=float, default=1.0, help="edge-noise intensity")
        sp.add_argument("--format", choices=("table", "csv", "json"), default="table")
        if tree:
            sp.add_argument("--tree", default="auto",
                            help="spanning tree as 'u,v;u,v;...' or 'auto'")
        if model:
            sp.add_argument("--model", choices=MODELS, default="full")

    sp = sub.add_parser("h2", help="closed-form squared H2 norm")
    common(sp)
    sp.add_argument("--oracle", action="store_true", help="also solve the Lyapunov equation")
    sp.set_defaults(func=cmd_h2)

    sp = sub.add_parser("mst", help="minimum-H2 spanning tree")
    common(sp, tree=False, model=False)
    sp.add_argument("--seed-vertex", type=int, default=None, help="vertex label to grow from")
    sp.add_argument("--brute-force", action="store_true", help="compare with exhaustive search")
    sp.set_defaults(func=cmd_mst)

    sp = sub.add_parser("plan", help="rank edges to add back to a spanning tree")
    common(sp)
    sp.set_defaults(model="tree")
    sp.add_argument("--candidates", default=None,
                    help="'u,v,w;...' (default: the graph's edges outside the tree)")
    sp.add_argument("-k", type=int, default=None, help="number of edges to add")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("verify", help="run the cross-validation battery")
    common(sp, model=False)
    sp.add_argument("--trials", type=int, default=10, help="random graphs to test as well")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("simulate", help="Monte Carlo estimate of the squared H2 norm")
    common(sp)
    d = SimConfig()
    sp.add_argument("--dt", type=float, default=d.dt)
    sp.add_argument("--steps", type=int, default=d.sample_steps, help="sampled steps per trial")
    sp.add_argument("--burn-in", type=int, default=d.burn_in_steps)
    sp.add_argument("--trials", type=int, default=d.trials)
    sp.add_argument("--seed", type=int, default=d.seed)
    sp.set_defaults(func=cmd_simulate)
    return p


def main(argv=None, out=None):
    args = build_parser().parse_args(argv)
    args.out = out if out is not None else sys.stdout
    args.rows_key = "rows"
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Disconnected as exc:
        print(f"error: disconnected graph: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except NumericalError as exc:
        print(f"error: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (EdgeH2Error, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
