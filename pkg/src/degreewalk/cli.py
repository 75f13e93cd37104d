"""Command-line interface.

Subcommands: generate (pa|cm), ingest, detect, analyze
(stationary|return-time|hitting), estimate evt, experiment
(hitting|accuracy|stopping). Exit codes: 0 success, 1 usage error,
2 runtime error (timeouts, unreachable targets, bad inputs at run time).
"""

from __future__ import annotations

import argparse
import sys
from importlib.metadata import PackageNotFoundError, version as _pkg_version

from . import analytics, detector, experiments, generators
from .graph import Graph, exact_top_k, load_edge_list
from .walk import EveryStep, Thinned, WalkConfig

try:
    __version__ = _pkg_version("degreewalk")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"


class UsageError(Exception):
    """Flag combination errors detected after parsing; exits with 1."""


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; we reserve 2 for runtime."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--threads", type=int, default=1,
                   help="experiment trial concurrency")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def _walk_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=None,
                   help="jump rate (default: average degree of the graph)")
    p.add_argument("--mode", choices=["everystep", "thinned"], default="thinned",
                   help="sampling mode for detection")
    p.add_argument("--q", type=float, default=0.5, help="thinning probability")
    p.add_argument("--transient", type=int, default=100,
                   help="raw steps discarded before thinning starts")
    p.add_argument("--max-steps", type=int, default=1_000_000,
                   help="cap on raw walk steps")


def _load_graph(path: str, symmetrize: bool = False) -> Graph:
    if str(path).endswith(".npz"):
        return Graph.load_npz(path)
    return load_edge_list(path, symmetrize=symmetrize)


def _resolve_alpha(args, g: Graph) -> float:
    return g.average_degree() if args.alpha is None else args.alpha


def _walk_config(args, g: Graph) -> WalkConfig:
    mode = (EveryStep() if args.mode == "everystep"
            else Thinned(transient=args.transient, q=args.q))
    return WalkConfig(alpha=_resolve_alpha(args, g), seed=args.seed,
                      max_steps=args.max_steps, mode=mode)


def _emit(args, lines) -> None:
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- generate ----------------------------------------------------------------

def _cmd_generate_pa(args) -> int:
    cfg = generators.PAConfig(n=args.n, edges_per_node=args.edges_per_node,
                              attractiveness=args.attract, seed=args.seed)
    g = generators.generate_pa(cfg)
    _emit(args, g.to_edge_lines())
    print(f"n={g.n} m_edges={g.m_edges} d_max={int(g.degrees.max())}",
          file=sys.stderr)
    return 0


def _cmd_generate_cm(args) -> int:
    tail = generators.ParetoTail(gamma=args.gamma, c=args.c, x_prime=args.xprime)
    cfg = generators.ConfigModelConfig(n=args.n, tail=tail, seed=args.seed)
    g = generators.generate_config_model(cfg)
    _emit(args, g.to_edge_lines())
    print(f"n={g.n} m_edges={g.m_edges} d_max={int(g.degrees.max())}",
          file=sys.stderr)
    return 0


# -- ingest -------------------------------------------------------------------

def _cmd_ingest(args) -> int:
    g = _load_graph(args.graph, symmetrize=args.symmetrize)
    if args.cache:
        g.save_npz(args.cache)
    if args.out:
        _emit(args, g.to_edge_lines())
    print(f"n={g.n} m_edges={g.m_edges} d_max={int(g.degrees.max())} "
          f"avg_degree={g.average_degree():.6g}")
    return 0


# -- detect -------------------------------------------------------------------

def _cmd_detect(args) -> int:
    rule = args.rule
    given = {"--m": args.m is not None, "--a-bar": args.a_bar is not None,
             "--b-bar": args.b_bar is not None}
    needed = {"fixed": "--m", "r0": "--a-bar", "r1": "--a-bar", "r2": "--b-bar"}[rule]
    for flag, present in given.items():
        if flag == needed and not present:
            raise UsageError(f"rule {rule} requires {flag}")
        if flag != needed and present:
            raise UsageError(f"rule {rule} does not take {flag}")

    g = _load_graph(args.graph)
    cfg = _walk_config(args, g)
    if rule == "fixed":
        dec = detector.detect_fixed_m_decision(g, cfg, args.k, args.m)
    else:
        threshold = args.b_bar if rule == "r2" else args.a_bar
        dec = detector.detect_with_rule(g, cfg, args.k, rule, threshold)

    lines = ["original_id,degree,hits"]
    for node, deg, hits in dec.final_list.entries():
        lines.append(f"{g.original_ids[node]},{deg},{hits}")
    _emit(args, lines)
    print(f"samples={dec.fired_at_samples} raw_steps={dec.raw_steps} "
          f"rule={dec.rule} threshold={dec.threshold:.6g} fired={dec.fired}")
    if not dec.fired:
        print("timeout: stopping rule did not fire within --max-steps",
              file=sys.stderr)
        return 2
    return 0


# -- analyze -------------------------------------------------------------------

def _parse_nu(text: str, g: Graph):
    if text == "uniform":
        return None
    if text.startswith("node:"):
        return int(text.split(":", 1)[1])
    raise UsageError(f"--nu must be 'uniform' or 'node:<id>', got {text!r}")


def _cmd_analyze(args) -> int:
    g = _load_graph(args.graph)
    alpha = _resolve_alpha(args, g)
    if args.what == "stationary":
        dist = analytics.stationary(g, alpha)
        lines = ["node,original_id,degree,pi"]
        for i in range(g.n):
            lines.append(f"{i},{g.original_ids[i]},{g.degrees[i]},{float(dist.probs[i])!r}")
        _emit(args, lines)
        return 0
    if args.what == "return-time":
        print(f"return_time={analytics.expected_return_time_max(g, alpha)!r}")
        return 0
    target = args.target if args.target is not None else exact_top_k(g, 1)[0].node
    nu = _parse_nu(args.nu, g)
    value = analytics.hitting_time_exact(g, alpha, target, nu=nu)
    print(f"hitting_time={value!r} target={target}")
    return 0


# -- estimate -------------------------------------------------------------------

def _cmd_estimate(args) -> int:
    x_prime = args.xprime if args.xprime is not None else args.c ** (1.0 / args.gamma)
    tail = generators.ParetoTail(gamma=args.gamma, c=args.c, x_prime=x_prime)
    pred = analytics.evt_predict(tail, args.n, args.k, max_variant=args.variant)
    lines = ["rank,predicted_degree"]
    for j in range(1, args.k + 1):
        lines.append(f"{j},{pred.degree_at_rank(j)!r}")
    _emit(args, lines)
    print(f"delta={pred.delta!r} a_n={pred.a_n!r} b_n={pred.b_n!r}")
    return 0


# -- experiment -------------------------------------------------------------------

def _cmd_experiment(args) -> int:
    g = _load_graph(args.graph)
    cfg = _walk_config(args, g)
    if args.what == "hitting":
        plan = experiments.HittingTimePlan(walk=cfg, runs=args.runs,
                                           master_seed=args.seed)
        rows, summary = experiments.run_hitting_time(g, plan, threads=args.threads)
        header = ["trial", "steps"]
    elif args.what == "accuracy":
        if args.m_grid is None:
            raise UsageError("experiment accuracy requires --m-grid")
        grid = tuple(int(x) for x in args.m_grid.split(","))
        plan = experiments.AccuracyCurvePlan(walk=cfg, k=args.k, m_grid=grid,
                                             runs=args.runs, master_seed=args.seed)
        rows, summary = experiments.run_accuracy_curve(g, plan, threads=args.threads)
        header = ["m", "mean_correct", "ci95", "exact", "poisson"]
    else:
        if args.rule is None:
            raise UsageError("experiment stopping requires --rule")
        threshold = args.b_bar if args.rule == "r2" else args.a_bar
        if threshold is None:
            raise UsageError("experiment stopping requires --a-bar or --b-bar "
                             "matching the rule")
        plan = experiments.StoppingEvalPlan(walk=cfg, k=args.k, rule=args.rule,
                                            threshold=threshold, runs=args.runs,
                                            master_seed=args.seed)
        rows, summary = experiments.run_stopping_eval(g, plan, threads=args.threads)
        header = ["trial", "raw_steps", "samples", "correct_count",
                  "full_list_correct", "fired"]
    if args.out:
        experiments.write_csv(args.out, header, rows, summary=summary)
    else:
        _emit(args, [",".join(header)] + [",".join(str(c) for c in r) for r in rows])
    for key, val in summary.items():
        print(f"{key}={val}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="degreewalk",
                     description="Quick detection of the largest-degree nodes "
                                 "with a jumping random walk.")
    parser.add_argument("--version", action="version",
                        version=f"degreewalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic graph edge list")
    gen_sub = gen.add_subparsers(dest="model", required=True)
    pa = gen_sub.add_parser("pa", help="preferential attachment")
    pa.add_argument("--n", type=int, required=True)
    pa.add_argument("--edges-per-node", type=int, default=1)
    pa.add_argument("--attract", type=float, default=0.5,
                    help="attachment offset added to each degree")
    _common_flags(pa)
    pa.set_defaults(func=_cmd_generate_pa)
    cm = gen_sub.add_parser("cm", help="erased configuration model")
    cm.add_argument("--n", type=int, required=True)
    cm.add_argument("--gamma", type=float, required=True)
    cm.add_argument("--c", type=float, required=True)
    cm.add_argument("--xprime", type=float, required=True)
    _common_flags(cm)
    cm.set_defaults(func=_cmd_generate_cm)

    ing = sub.add_parser("ingest", help="parse and summarize an edge list")
    ing.add_argument("graph")
    ing.add_argument("--symmetrize", action="store_true",
                     help="treat lines as directed arcs and add reverses")
    ing.add_argument("--cache", default=None, help="write a binary .npz cache")
    _common_flags(ing)
    ing.set_defaults(func=_cmd_ingest)

    det = sub.add_parser("detect", help="run the top-k candidate-list walk")
    det.add_argument("graph")
    det.add_argument("--k", type=int, required=True)
    det.add_argument("--rule", choices=["fixed", "r0", "r1", "r2"], required=True)
    det.add_argument("--m", type=int, default=None, help="sample budget (rule fixed)")
    det.add_argument("--a-bar", type=float, default=None,
                     help="error threshold (rules r0/r1)")
    det.add_argument("--b-bar", type=float, default=None,
                     help="coverage threshold (rule r2)")
    _walk_flags(det)
    _common_flags(det)
    det.set_defaults(func=_cmd_detect)

    ana = sub.add_parser("analyze", help="closed-form walk analytics")
    ana.add_argument("what", choices=["stationary", "return-time", "hitting"])
    ana.add_argument("graph")
    ana.add_argument("--alpha", type=float, default=None)
    ana.add_argument("--target", type=int, default=None,
                     help="hitting target (default: max-degree node)")
    ana.add_argument("--nu", default="uniform",
                     help="initial distribution: uniform or node:<id>")
    _common_flags(ana)
    ana.set_defaults(func=_cmd_analyze)

    est = sub.add_parser("estimate", help="extreme-value degree predictions")
    est_sub = est.add_subparsers(dest="what", required=True)
    evt = est_sub.add_parser("evt", help="predict the k largest degrees")
    evt.add_argument("--gamma", type=float, required=True)
    evt.add_argument("--c", type=float, required=True)
    evt.add_argument("--xprime", type=float, default=None)
    evt.add_argument("--n", type=int, required=True)
    evt.add_argument("--k", type=int, default=10)
    evt.add_argument("--variant", choices=["median", "mode", "mean"],
                     default="median")
    _common_flags(evt)
    evt.set_defaults(func=_cmd_estimate)

    exp = sub.add_parser("experiment", help="seeded experiment harness")
    exp.add_argument("what", choices=["hitting", "accuracy", "stopping"])
    exp.add_argument("graph")
    exp.add_argument("--runs", type=int, default=200)
    exp.add_argument("--k", type=int, default=10)
    exp.add_argument("--m-grid", default=None,
                     help="comma-separated sample budgets (accuracy)")
    exp.add_argument("--rule", choices=["r0", "r1", "r2"], default=None)
    exp.add_argument("--a-bar", type=float, default=None)
    exp.add_argument("--b-bar", type=float, default=None)
    _walk_flags(exp)
    _common_flags(exp)
    exp.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
