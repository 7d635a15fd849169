"""Command-line front end.

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 usage error, 2 validation error, 3 cost-cap refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import formulas
from .diagram import Chord, chord_length, parse_diagram, serialize_diagram
from .enumeration import exact_distribution, parse_statistic
from .errors import ChordLabError, CostCapExceededError
from .experiments import ExperimentConfig, run_experiment
from .extremal import extremal_stats
from .graph import (
    components,
    graph_edge_text,
    graph_json,
    intersection_graph,
    is_monolithic,
    k_core,
    length_profile,
)
from .oriented import orient, orientation_to_json, scc
from .sampling import (
    parse_seed,
    replica_rng,
    rng_from_seed,
    run_continuous,
    run_discrete,
    sample_uniform,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_COST_CAP = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit 1, not 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_diagram(args) -> "ChordDiagram":
    if args.diagram is not None:
        text = args.diagram
    elif args.file is not None:
        with open(args.file) as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    return parse_diagram(text)


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("diagram", nargs="?", help="diagram text 'a-b a-b ...' (default: stdin)")
    p.add_argument("--file", help="read the diagram from a file")


def build_parser() -> _Parser:
    p = _Parser(prog="chordlab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="sample uniform random diagrams")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", default="0")
    sp.add_argument("--format", choices=("text", "json"), default="text")

    ap = sub.add_parser("analyze", help="lengths, degrees, components, core, monolithic")
    _add_input_args(ap)
    ap.add_argument("--k", type=int, default=2, help="k for the k-core report")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--emit-graph", choices=("edges", "json"), help="print the intersection graph instead")

    ep = sub.add_parser("exact", help="exact law of a statistic by full enumeration")
    ep.add_argument("--n", type=int, required=True)
    ep.add_argument("--stat", required=True)
    ep.add_argument("--condition", help="pin the endpoint-1 chord, e.g. 1-6")

    fp = sub.add_parser("formulas", help="evaluate a closed form")
    fp.add_argument("--name", required=True)
    fp.add_argument("--args", default="", help="comma-separated arguments")

    vp = sub.add_parser("evolve", help="run one growth-process trace")
    vp.add_argument("--model", choices=("continuous", "discrete"), required=True)
    vp.add_argument("--n", type=int, required=True)
    vp.add_argument("--seed", default="0")
    vp.add_argument("--trace", help="write the JSONL trace to this path")

    op = sub.add_parser("orient", help="orient crossings and decompose into SCCs")
    _add_input_args(op)
    op.add_argument("--seed", default="0")

    xp = sub.add_parser("extremal", help="clique, independence and nesting numbers")
    _add_input_args(xp)
    xp.add_argument("--unsafe-no-cap", action="store_true")

    qp = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    qp.add_argument("--kind", required=True)
    qp.add_argument("--n", type=int, required=True)
    qp.add_argument("--replicas", type=int, required=True)
    qp.add_argument("--seed", default="0")
    qp.add_argument("--params", default="{}", help="JSON object of kind parameters")
    qp.add_argument("--workers", type=int, default=1)
    qp.add_argument("--format", choices=("json", "csv"), default="json")
    qp.add_argument("--out", help="write the report to this path")
    qp.add_argument("--no-timing", action="store_true", help="omit timing fields")
    qp.add_argument("--unsafe-no-cap", action="store_true")
    return p


def _cmd_sample(args) -> int:
    seed = parse_seed(args.seed)
    for rep in range(args.count):
        d = sample_uniform(args.n, replica_rng(seed, rep))
        print(serialize_diagram(d, args.format))
    return EXIT_OK


def _cmd_analyze(args) -> int:
    d = _read_diagram(args)
    g = intersection_graph(d)
    if args.emit_graph == "edges":
        sys.stdout.write(graph_edge_text(g))
        return EXIT_OK
    if args.emit_graph == "json":
        print(graph_json(g))
        return EXIT_OK
    comp = components(g)
    prof = length_profile(d)
    core = k_core(g, args.k)
    info = {
        "n": d.n,
        "chords": [str(c) for c in g.vertices],
        "lengths": [chord_length(d, c) for c in g.vertices],
        "degrees": [g.degree(v) for v in range(g.n)],
        "length_profile": list(prof.counts),
        "components": [[str(g.vertices[v]) for v in blk] for blk in comp.blocks],
        "root_component": comp.root_index,
        "k": args.k,
        "k_core": [str(g.vertices[v]) for v in core],
        "monolithic": is_monolithic(d),
        "crossings": g.edge_count,
    }
    if args.format == "json":
        print(json.dumps(info, sort_keys=True))
    else:
        for key in (
            "n", "chords", "lengths", "degrees", "length_profile",
            "components", "root_component", "k", "k_core", "monolithic", "crossings",
        ):
            print(f"{key}: {info[key]}")
    return EXIT_OK


def _cmd_exact(args) -> int:
    if args.stat == "count":
        print(formulas.num_diagrams(args.n))
        return EXIT_OK
    cond = None
    if args.condition:
        a, _, b = args.condition.partition("-")
        cond = Chord(int(a), int(b))
    dist = exact_distribution(args.n, parse_statistic(args.stat), cond)
    print(
        json.dumps(
            {
                "n": dist.n,
                "statistic": dist.statistic,
                "condition": dist.condition,
                "support": [[v, f"{pr.numerator}/{pr.denominator}"] for v, pr in dist.support.items()],
            }
        )
    )
    return EXIT_OK


def _cmd_formulas(args) -> int:
    fn = {
        "double_factorial": formulas.double_factorial,
        "num_diagrams": formulas.num_diagrams,
        "catalan": formulas.catalan,
        "mean_Xk": formulas.mean_Xk,
        "var_Xk": formulas.var_Xk,
        "var_Xk_bound": formulas.var_Xk_bound,
        "degree_cdf_limit": formulas.degree_cdf_limit,
        "length_dist_c1": formulas.length_dist_c1,
        "mean_Lj": formulas.mean_Lj,
        "mean_Zk": formulas.mean_Zk,
        "second_factorial_Zk": formulas.second_factorial_Zk,
        "mean_block_sets": formulas.mean_block_sets,
        "mean_independent_sets": formulas.mean_independent_sets,
        "poisson_pmf": formulas.poisson_pmf,
    }.get(args.name)
    if fn is None:
        print(f"unknown formula {args.name!r}", file=sys.stderr)
        return EXIT_VALIDATION
    raw = [a for a in args.args.split(",") if a.strip()]
    vals = [float(a) if "." in a else int(a) for a in raw]
    result = fn(*vals)
    if isinstance(result, Fraction):
        print(f"{result.numerator}/{result.denominator} = {float(result)!r}")
    else:
        print(repr(result))
    return EXIT_OK


def _cmd_evolve(args) -> int:
    rng = rng_from_seed(parse_seed(args.seed))
    trace = run_continuous(args.n, rng) if args.model == "continuous" else run_discrete(args.n, rng)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(trace.to_jsonl())
        print(f"trace written to {args.trace}", file=sys.stderr)
    print(serialize_diagram(trace.final()))
    return EXIT_OK


def _cmd_orient(args) -> int:
    d = _read_diagram(args)
    od = orient(d, rng_from_seed(parse_seed(args.seed)))
    dec = scc(od)
    print(
        json.dumps(
            {
                "orientation": json.loads(orientation_to_json(od)),
                "scc": {
                    "components": [
                        [str(od.base.chords()[v]) for v in blk] for blk in dec.components
                    ],
                    "giant_index": dec.giant_index,
                    "trivial_count": dec.trivial_count,
                },
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def _cmd_extremal(args) -> int:
    d = _read_diagram(args)
    st = extremal_stats(d) if not args.unsafe_no_cap else _uncapped_stats(d)
    print(
        json.dumps(
            {
                "omega": st.omega,
                "alpha": st.alpha,
                "alpha_nest": st.alpha_nest,
                "witnesses": {k: [str(c) for c in v] for k, v in st.witnesses.items()},
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def _uncapped_stats(d):
    from .extremal import clique_number, independence_number, nesting_number, ExtremalStats

    omega, cw = clique_number(d)
    alpha, iw = independence_number(d, max_n=d.n)
    nest, nw = nesting_number(d)
    return ExtremalStats(
        omega=omega, alpha=alpha, alpha_nest=nest,
        witnesses={"omega": cw, "alpha": iw, "alpha_nest": nw},
    )


def _cmd_experiment(args) -> int:
    try:
        params = json.loads(args.params)
    except json.JSONDecodeError as exc:
        print(f"bad --params JSON: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cfg = ExperimentConfig(
        kind=args.kind,
        n=args.n,
        replicas=args.replicas,
        seed=parse_seed(args.seed).master,
        params=params,
        workers=args.workers,
        enforce_cost_cap=not args.unsafe_no_cap,
    )
    report = run_experiment(cfg)
    out = (
        report.to_csv()
        if args.format == "csv"
        else report.to_json(include_timing=not args.no_timing) + "\n"
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
        print(f"report written to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(out)
    return EXIT_OK


_COMMANDS = {
    "sample": _cmd_sample,
    "analyze": _cmd_analyze,
    "exact": _cmd_exact,
    "formulas": _cmd_formulas,
    "evolve": _cmd_evolve,
    "orient": _cmd_orient,
    "extremal": _cmd_extremal,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except CostCapExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_COST_CAP
    except ChordLabError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
