"""Command-line entry point: ``racglab <command> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import exploration, extremal, hypergraph, random_lab, thickness
from .graph import Graph, GraphFormatError, emit_graph6, parse_edge_list, parse_graph6

EXIT_INDETERMINATE = 3


class CliError(Exception):
    def __init__(self, kind: str, message: str, code: int = 1):
        super().__init__(message)
        self.kind = kind
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message, 2)


# -- generator specs --------------------------------------------------------------


def _ints(s: str, k: int, spec: str) -> list[int]:
    parts = s.split(",")
    if len(parts) != k:
        raise CliError("spec", f"{spec!r} expects {k} integer argument(s)")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise CliError("spec", f"{spec!r} has a non-integer argument") from None


def _pair_arg(s: str, spec: str) -> tuple[int, int]:
    a, _, b = s.partition("-")
    try:
        return int(a), int(b)
    except ValueError:
        raise CliError("spec", f"bad non-edge {s!r} in {spec!r}; expected u-v") from None


def generate(spec: str) -> Graph:
    """Build a graph from a spec such as ``path-of-squares:8`` or ``gnp:100,0.1,7``.

    ``glue:<spec>/<u>-<v>/<spec>/<u>-<v>[/crossed]`` identifies the two
    non-edges.
    """
    name, _, arg = spec.partition(":")
    try:
        if name == "path-of-squares":
            return extremal.path_of_squares(*_ints(arg, 1, spec))
        if name == "k2m":
            return extremal.k2m(*_ints(arg, 1, spec))
        if name == "complete-bipartite":
            return extremal.complete_bipartite(*_ints(arg, 2, spec))
        if name == "complete":
            return Graph.complete(*_ints(arg, 1, spec))
        if name == "empty":
            return Graph.empty(*_ints(arg, 1, spec))
        if name == "order2-gluing":
            if arg not in ("", "crossed"):
                raise CliError("spec", f"order2-gluing takes no argument or 'crossed', got {arg!r}")
            return extremal.order2_gluing(crossed=arg == "crossed")
        if name == "gnp":
            parts = arg.split(",")
            if len(parts) != 3:
                raise CliError("spec", f"{spec!r} expects n,p,seed")
            try:
                n, p, seed = int(parts[0]), float(parts[1]), int(parts[2])
            except ValueError:
                raise CliError("spec", f"{spec!r} has a malformed argument") from None
            return random_lab.sample_gnp(n, p, seed)
        if name == "glue":
            parts = arg.split("/")
            crossed = parts[-1] == "crossed"
            if crossed:
                parts = parts[:-1]
            if len(parts) != 4:
                raise CliError("spec", f"{spec!r} expects glue:<spec>/<u>-<v>/<spec>/<u>-<v>[/crossed]")
            return extremal.glue_along_nonedges(generate(parts[0]), _pair_arg(parts[1], spec),
                                                generate(parts[2]), _pair_arg(parts[3], spec), crossed)
    except ValueError as exc:
        raise CliError("spec", str(exc)) from None
    raise CliError("spec", f"unknown generator {name!r}")


# -- input ------------------------------------------------------------------------


def _add_graph_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--g6", help="graph6 string")
    src.add_argument("--edge-list", type=Path, help="file with 'n m' then m lines 'u v'")
    src.add_argument("--gen", help="generator spec, e.g. path-of-squares:12")
    src.add_argument("--g6-file", type=Path, help="file with one graph6 per line ('-' for stdin)")


def _read_graphs(args) -> list[tuple[str, Graph]]:
    """Graphs named by the input flags; with none given, graph6 lines from stdin."""
    try:
        if args.g6 is not None:
            g = parse_graph6(args.g6)
            return [(args.g6, g)]
        if args.edge_list is not None:
            g = parse_edge_list(args.edge_list.read_text())
            return [(emit_graph6(g).decode(), g)]
        if args.gen is not None:
            g = generate(args.gen)
            return [(emit_graph6(g).decode(), g)]
        if args.g6_file is not None and str(args.g6_file) != "-":
            data = args.g6_file.read_bytes()
        else:
            data = sys.stdin.buffer.read()
        out = []
        for lineno, line in enumerate(data.splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append((line.decode("ascii", "replace"), parse_graph6(line)))
            except GraphFormatError as exc:
                raise GraphFormatError(f"line {lineno}: {exc}", exc.offset) from None
        return out
    except GraphFormatError as exc:
        raise CliError("parse", str(exc)) from None
    except OSError as exc:
        raise CliError("io", str(exc)) from None
    except ValueError as exc:
        raise CliError("parse", str(exc)) from None


# -- output -----------------------------------------------------------------------


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- commands ---------------------------------------------------------------------


def cmd_analyze(args) -> tuple[str, int]:
    graphs = _read_graphs(args)
    reports = [(name, g, thickness.thickness_order(g, args.max_level)) for name, g in graphs]
    code = EXIT_INDETERMINATE if any(r.indeterminate for _, _, r in reports) else 0
    if args.format == "csv":
        rows = [(name, g.n, g.num_edges, r.order_str(), "" if r.rel_hyperbolic is None
                 else str(r.rel_hyperbolic).lower(), r.divergence_label) for name, g, r in reports]
        return _csv(("graph6", "n", "m", "order", "rel_hyp", "divergence"), rows), code
    if args.format == "text":
        lines = [f"{name}\tn={g.n}\tm={g.num_edges}\torder={r.order_str()}\t{r.divergence_label}"
                 for name, g, r in reports]
        return "".join(ln + "\n" for ln in lines), code
    docs = []
    for name, g, r in reports:
        d = {"graph6": name, "n": g.n, "m": g.num_edges}
        d.update(r.to_dict())
        docs.append(d)
    return _json(docs[0] if len(docs) == 1 else docs), code


def cmd_squares(args) -> tuple[str, int]:
    graphs = _read_graphs(args)
    docs = []
    for name, g in graphs:
        sq = thickness.enumerate_induced_squares(g)
        comps = thickness.build_square_graph(g).components()
        docs.append({"graph6": name, "num_squares": len(sq),
                     "squares": [[list(a), list(b)] for a, b in sq],
                     "components": [[list(g.unpack_key(k)) for k in c] for c in comps]})
    if args.format == "csv":
        rows = [(d["graph6"], i, *a, *b) for d in docs for i, (a, b) in enumerate(d["squares"])]
        return _csv(("graph6", "square", "u1", "v1", "u2", "v2"), rows), 0
    if args.format == "text":
        out = []
        for d in docs:
            out.append(f"{d['graph6']}: {d['num_squares']} induced squares, "
                       f"{len(d['components'])} non-trivial square components\n")
            out.extend(f"  {a[0]}{a[1]} | {b[0]}{b[1]}\n" for a, b in d["squares"])
        return "".join(out), 0
    return _json(docs[0] if len(docs) == 1 else docs), 0


def _floats(s: str, flag: str) -> list[float]:
    try:
        return [float(x) for x in s.split(",") if x]
    except ValueError:
        raise CliError("config", f"{flag} expects comma-separated numbers, got {s!r}") from None


def _build_grid(args) -> list[random_lab.GridPoint]:
    if args.p is not None and args.c is not None:
        raise CliError("config", "--p and --c are mutually exclusive")
    if args.grid is not None:
        if args.n is not None or args.p is not None or args.c is not None:
            raise CliError("config", "--grid cannot be combined with --n, --p or --c")
        grid = []
        for item in args.grid.split(","):
            n, _, c = item.partition(":")
            try:
                grid.append(random_lab.GridPoint.from_c(int(n), float(c)))
            except ValueError:
                raise CliError("config", f"bad grid point {item!r}; expected n:c") from None
        return grid
    if args.n is None:
        raise CliError("config", "sweep needs --n (or --grid)")
    try:
        ns = [int(x) for x in args.n.split(",") if x]
    except ValueError:
        raise CliError("config", f"--n expects comma-separated integers, got {args.n!r}") from None
    if args.p is not None:
        if args.p == "relhyp":
            return [random_lab.GridPoint.from_p(n, random_lab.rel_hyp_p(n)) for n in ns]
        return [random_lab.GridPoint.from_p(n, p) for n in ns for p in _floats(args.p, "--p")]
    cs = _floats(args.c, "--c") if args.c is not None else [1.0]
    return [random_lab.GridPoint.from_c(n, c) for n in ns for c in cs]


def cmd_sweep(args) -> tuple[str, int]:
    try:
        cfg = random_lab.ExperimentConfig(_build_grid(args), args.trials, args.seed, args.max_level)
    except ValueError as exc:
        raise CliError("config", str(exc)) from None
    res = random_lab.threshold_sweep(cfg, jobs=args.jobs)
    code = EXIT_INDETERMINATE if any(r.order == "cap" for r in res.rows) else 0
    if args.format == "json":
        return res.to_json() + "\n", code
    if args.format == "text":
        lines = [f"n={a['n']} c={a['c']:.4g} p={a['p']:.4g} trials={a['trials']} "
                 f"rel_hyp={a['frac_rel_hyp']:.3f} order<=1={a['frac_order_le_1']:.3f} "
                 f"order<=2={a['frac_order_le_2']:.3f} cap={a['cap_count']}" for a in res.aggregates()]
        return "".join(ln + "\n" for ln in lines), code
    return res.to_csv(), code


def _need(args, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            flag = "--lambda" if name == "lam" else "--" + name.replace("_", "-")
            raise CliError("usage", f"{flag} is required", 2)


def cmd_explore(args) -> tuple[str, int]:
    _need(args, "n", "lam")
    if args.trials < 1:
        raise CliError("config", "trials must be >= 1")
    if args.n < 4:
        raise CliError("config", "n must be at least 4")
    if args.lam < 0:
        raise CliError("config", "lambda must be non-negative")
    rows = exploration.explore_trials(args.n, args.lam, args.variant, args.trials, args.seed,
                                      args.cap, jobs=args.jobs)
    large = sum(r.verdict == exploration.LARGE_STOP for r in rows)
    agg = {"n": args.n, "lambda": args.lam, "variant": args.variant, "trials": args.trials,
           "cap": args.cap if args.cap is not None else exploration.default_cap(args.n),
           "large_stop": large,
           "extinction_stop": sum(r.verdict == exploration.EXTINCTION_STOP for r in rows),
           "no_seed": sum(r.verdict == exploration.NO_SEED for r in rows),
           "frac_large_stop": large / len(rows)}
    if args.format == "csv":
        return _csv(exploration.EXPLORE_FIELDS, [r.as_tuple() for r in rows]), 0
    if args.format == "text":
        return "".join(f"trial {r.trial}: {r.verdict} steps={r.steps} size={r.size}\n" for r in rows) + \
            f"LARGE_STOP fraction {agg['frac_large_stop']:.3f}\n", 0
    return _json({"aggregate": agg,
                  "trials": [dict(zip(exploration.EXPLORE_FIELDS, r.as_tuple())) for r in rows]}), 0


def cmd_extremal(args) -> tuple[str, int]:
    _need(args, "m")
    ms = range(args.m_min, args.m + 1) if args.m_min is not None else [args.m]
    reports = []
    for m in ms:
        try:
            reports.append(extremal.extremal_scan(m, args.mode, args.samples, args.seed, args.jobs))
        except ValueError as exc:
            raise CliError("config", str(exc)) from None
    code = 0 if all(r.holds for r in reports) else 1
    if args.format == "csv":
        rows = [(r.m, r.mode, r.graphs_scanned, r.thick_count, r.min_edges_among_thick, r.bound,
                 len(r.extremal_witnesses), len(r.violations), str(r.holds).lower()) for r in reports]
        return _csv(("m", "mode", "graphs", "thick", "min_edges", "bound", "witnesses",
                     "violations", "holds"), rows), code
    if args.format == "text":
        return "".join(f"m={r.m}: {r.graphs_scanned} graphs, {r.thick_count} thick, min edges "
                       f"{r.min_edges_among_thick} (bound {r.bound}), witnesses "
                       f"{' '.join(r.extremal_witnesses)}\n" for r in reports), code
    docs = [r.to_dict() for r in reports]
    return _json(docs[0] if len(docs) == 1 else docs), code


def cmd_oracle(args) -> tuple[str, int]:
    graphs = _read_graphs(args)
    out = []
    for name, g in graphs:
        try:
            idx = hypergraph.hypergraph_index(g, allow_empty=args.strips_allow_empty,
                                              maximal=not args.all_hyperedges, max_n=args.max_n)
        except hypergraph.OracleSizeError as exc:
            raise CliError("size", str(exc)) from None
        out.append((name, g, idx))
    if args.format == "csv":
        return _csv(("graph6", "n", "index"), [(nm, g.n, "inf" if i is None else i) for nm, g, i in out]), 0
    if args.format == "text":
        return "".join(f"{nm}\t{'inf' if i is None else i}\n" for nm, g, i in out), 0
    docs = [{"graph6": nm, "n": g.n, "index": "inf" if i is None else i} for nm, g, i in out]
    return _json(docs[0] if len(docs) == 1 else docs), 0


def cmd_gen(args) -> tuple[str, int]:
    g = generate(args.spec)
    if args.format == "json":
        return _json({"graph6": emit_graph6(g).decode(), "n": g.n, "m": g.num_edges,
                      "edges": [list(e) for e in g.edges()]}), 0
    if args.format == "csv":
        return _csv(("u", "v"), g.edges()), 0
    return emit_graph6(g).decode() + "\n", 0


def cmd_critical(args) -> tuple[str, int]:
    lam = exploration.critical_lambda(args.modified)
    if args.format == "json":
        return _json({"modified": args.modified, "critical_lambda": lam,
                      "offspring_mean": exploration.offspring_mean(lam, args.modified)}), 0
    if args.format == "csv":
        return _csv(("modified", "critical_lambda"), [(str(args.modified).lower(), repr(lam))]), 0
    return f"{lam!r}\n", 0


def cmd_bgw(args) -> tuple[str, int]:
    _need(args, "lam")
    if args.trials < 1:
        raise CliError("config", "trials must be >= 1")
    res = exploration.bgw_simulate(args.lam, args.n, args.trials, args.seed,
                                   args.generations, args.population)
    mean, se = exploration.offspring_mc_mean(args.lam, args.n, args.samples, args.seed)
    d = res.to_dict()
    d.update({"offspring_mean_formula": exploration.offspring_mean(args.lam),
              "offspring_mean_mc": mean, "offspring_mean_se": se})
    if args.format == "csv":
        return _csv(tuple(d), [tuple(d.values())]), 0
    if args.format == "text":
        return (f"survival {res.survival:.5f} +- {res.stderr:.5f}; offspring mean "
                f"{mean:.5f} +- {se:.5f} (formula {d['offspring_mean_formula']:.5f})\n"), 0
    return _json(d), 0


# -- parser -----------------------------------------------------------------------


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _fmt(p: argparse.ArgumentParser, default: str) -> None:
    p.add_argument("--format", choices=("json", "csv", "text"), default=default)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="flat key=value file; flags override it")

    def seeded(p, default=0):
        p.add_argument("--seed", type=int, default=default)

    def parallel(p):
        p.add_argument("--jobs", type=int, default=1)

    parser = _Parser(prog="racglab", description="Thickness, hypergraph index and random-graph "
                                                  "experiments for right-angled Coxeter group presentation graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subs = {}

    p = sub.add_parser("analyze", parents=[common], help="thickness order and divergence")
    _add_graph_input(p)
    p.add_argument("--max-level", type=int, help="level cap (default: non-edges + n + 2)")
    _fmt(p, "json")
    p.set_defaults(func=cmd_analyze)
    subs["analyze"] = p

    p = sub.add_parser("squares", parents=[common], help="induced squares and square components")
    _add_graph_input(p)
    _fmt(p, "json")
    p.set_defaults(func=cmd_squares)
    subs["squares"] = p

    p = sub.add_parser("sweep", parents=[common], help="seeded G(n, p) threshold sweep")
    p.add_argument("--n", help="comma-separated vertex counts")
    p.add_argument("--c", help="comma-separated c values, p = c / sqrt(n)")
    p.add_argument("--p", help="comma-separated p values, or 'relhyp' for 1/(4 sqrt(n ln n))")
    p.add_argument("--grid", help="explicit points n:c,n:c,...")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--max-level", type=int)
    seeded(p)
    parallel(p)
    _fmt(p, "csv")
    p.set_defaults(func=cmd_sweep)
    subs["sweep"] = p

    p = sub.add_parser("explore", parents=[common], help="square-component exploration on lazy G(n, lambda/sqrt(n))")
    p.add_argument("--n", type=int)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--variant", choices=("order1", "order2"), default="order1")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--cap", type=int, help="stop size (default ceil(ln(n)^4))")
    seeded(p)
    parallel(p)
    _fmt(p, "json")
    p.set_defaults(func=cmd_explore)
    subs["explore"] = p

    p = sub.add_parser("bgw", parents=[common], help="idealised branching process")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--samples", type=int, default=100_000, help="offspring draws for the mean")
    p.add_argument("--generations", type=int, default=50)
    p.add_argument("--population", type=int, default=10_000)
    seeded(p)
    _fmt(p, "json")
    p.set_defaults(func=cmd_bgw)
    subs["bgw"] = p

    p = sub.add_parser("extremal-scan", parents=[common], help="check the 2m - 4 edge bound")
    p.add_argument("--m", type=int)
    p.add_argument("--m-min", type=int, help="scan every m from this value up to --m")
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=10_000)
    seeded(p)
    parallel(p)
    _fmt(p, "json")
    p.set_defaults(func=cmd_extremal)
    subs["extremal-scan"] = p

    p = sub.add_parser("oracle", parents=[common], help="hypergraph index by direct construction")
    osub = p.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    q = osub.add_parser("index", parents=[common])
    _add_graph_input(q)
    q.add_argument("--strips-allow-empty", action="store_true")
    q.add_argument("--all-hyperedges", action="store_true",
                   help="use every order-0 set and strip instead of the maximal ones")
    q.add_argument("--max-n", type=int, default=hypergraph.MAX_ORACLE_N)
    _fmt(q, "json")
    q.set_defaults(func=cmd_oracle)
    subs["oracle"] = q

    p = sub.add_parser("gen", parents=[common], help="print a generated graph")
    p.add_argument("spec")
    _fmt(p, "text")
    p.set_defaults(func=cmd_gen)
    subs["gen"] = p

    p = sub.add_parser("critical-lambda", parents=[common], help="root of offspring mean = 1")
    p.add_argument("--modified", action="store_true")
    _fmt(p, "text")
    p.set_defaults(func=cmd_critical)
    subs["critical-lambda"] = p
    return parser, subs


def _load_config(path: Path, p: argparse.ArgumentParser) -> dict:
    try:
        text = path.read_text()
    except OSError as exc:
        raise CliError("io", str(exc)) from None
    actions = {a.dest: a for a in p._actions if a.dest not in ("help", "config", "func")}
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if not sep:
            raise CliError("config", f"{path}:{lineno}: expected key=value")
        if key == "lambda":
            key = "lam"
        act = actions.get(key)
        if act is None:
            raise CliError("config", f"{path}:{lineno}: unknown key {key!r}")
        try:
            if isinstance(act, argparse._StoreTrueAction):
                out[key] = _bool(value)
            else:
                out[key] = act.type(value) if act.type else value
        except (ValueError, TypeError) as exc:
            raise CliError("config", f"{path}:{lineno}: bad value for {key}: {exc}") from None
        if act.choices is not None and out[key] not in act.choices:
            raise CliError("config", f"{path}:{lineno}: {key} must be one of {sorted(act.choices)}")
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser, subs = build_parser()
        args = parser.parse_args(argv)
        if args.config is not None:
            target = subs["oracle" if args.command == "oracle" else args.command]
            values = _load_config(args.config, target)
            target.set_defaults(**values)
            args = parser.parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise CliError("config", "jobs must be >= 1")
        text, code = args.func(args)
    except CliError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return exc.code
    except BrokenPipeError:
        return 1
    sys.stdout.write(text)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
