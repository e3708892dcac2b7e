"""meanset-lab command line interface.

Subcommands: meanset (solve one instance), walk (multi-vertex random-walk
report), table-f4 (sphere-sampling convergence table), decay (miss-rate
curves), check (randomized invariant sweep).  Exit codes: 0 success, 1 suite
failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .errors import MeansetsError
from .experiments import (
    ExperimentConfig,
    decay_to_csv,
    derive_seed,
    run_decay_experiment,
    run_invariant_sweep,
    run_table_experiment,
    table_to_csv,
    table_to_json,
)
from .freegroup import CayleyGraph, word_from_str, word_to_str
from .graphs import load_graph
from .measures import load_measure
from .meanset import (
    mean_set_bounded,
    mean_set_exact,
    mean_set_tree,
    measure_mean_set,
)
from .multivertex import (
    genuine_dimension,
    increments,
    positivity_hypotheses,
    second_moment,
    simulate_walk,
    first_moment,
)

SUITE_NAMES = (
    "shift-property",
    "tree-configuration",
    "cut-point-inequality",
    "dimension-invariance",
    "classical-mean-gap",
)


def _fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _load_instance(args):
    """Graph plus measure from --graph FILE or --free-rank R."""
    if args.graph is not None:
        g = load_graph(args.graph)
        mu = load_measure(args.measure, vertex_parser=int)
        missing = [v for v in mu.support() if v not in set(g.vertices())]
        if missing:
            raise MeansetsError(f"measure atoms not in graph: {missing}")
    else:
        g = CayleyGraph(args.free_rank)
        rank = args.free_rank
        mu = load_measure(
            args.measure,
            vertex_parser=lambda tok: word_to_str(word_from_str(tok, rank)),
        )
    return g, mu


def _add_instance_args(parser: argparse.ArgumentParser) -> None:
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="explicit graph file (edge list)")
    src.add_argument("--free-rank", type=int, metavar="R",
                     help="use the free group of rank R instead of a graph file")
    parser.add_argument("--measure", required=True, help="measure file: 'vertex mass' lines")


def _write_output(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_meanset(args) -> int:
    g, mu = _load_instance(args)
    method = args.method
    if method == "auto":
        result = measure_mean_set(g, mu, args.weight_class)
    elif method == "exact":
        if not g.is_explicit:
            raise MeansetsError("--method exact needs a finite explicit graph")
        result = mean_set_exact(g, mu, args.weight_class)
    elif method == "descent":
        result = mean_set_tree(g, mu, args.weight_class)
    else:
        result = mean_set_bounded(g, mu, args.weight_class)
    payload = {
        "vertices": result.sorted_vertices(),
        "min_weight": _fraction_str(result.min_weight),
        "class": result.class_c,
        "method": result.method,
        "steps": result.steps,
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


def _cmd_walk(args) -> int:
    g, mu = _load_instance(args)
    meanset = measure_mean_set(g, mu, 2).vertices
    base = min(meanset)
    others = [v for v in sorted(meanset) if v != base]
    incs = increments(g, mu, base, others, validate=False)
    hypotheses = positivity_hypotheses(g, mu, meanset, base, coeff_bound=args.coeff_bound)
    rng = random.Random(derive_seed(args.seed, "walk"))
    walk = simulate_walk(incs, args.steps, rng)
    payload = {
        "mean_set": sorted(meanset),
        "base": base,
        "dimension": genuine_dimension(incs),
        "first_moment": [_fraction_str(x) for x in first_moment(incs)],
        "second_moment": _fraction_str(second_moment(incs)),
        "hypotheses": {
            "has_positive_vector": hypotheses.has_positive_vector,
            "mu_base_positive": hypotheses.mu_base_positive,
        },
        "steps": walk.steps,
        "orthant_visits": walk.orthant_visits,
        "last_visit": walk.last_visit,
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


def _cmd_table(args) -> int:
    cfg = ExperimentConfig(
        kind="table-f4",
        rank=args.rank,
        lengths=args.lengths,
        samples=args.samples,
        trials=args.trials,
        seed=args.seed,
        out=args.out,
        fmt=args.format,
    )
    cells = run_table_experiment(cfg, workers=args.workers)
    text = table_to_json(cfg, cells) if cfg.fmt == "json" else table_to_csv(cells)
    _write_output(text, cfg.out)
    return 0


def _cmd_decay(args) -> int:
    g, mu = _load_instance(args)
    points = run_decay_experiment(
        g, mu, args.samples, args.trials, args.seed, containment=args.containment
    )
    _write_output(decay_to_csv(points), args.out)
    return 0


def _cmd_check(args) -> int:
    report = run_invariant_sweep(seed=args.seed, cases=args.cases,
                                 inject_fault=args.inject_fault)
    if args.suite != "all":
        report.suites = [s for s in report.suites if s.name == args.suite]
    sys.stdout.write(report.render())
    return 0 if all(s.passed for s in report.suites) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meanset-lab",
        description="Mean-sets on graphs and free groups: solvers and experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("meanset", help="compute the mean-set of a measure")
    _add_instance_args(p)
    p.add_argument("--class", dest="weight_class", type=int, choices=(1, 2), default=2)
    p.add_argument("--method", choices=("auto", "exact", "descent", "bounded"),
                   default="auto")
    p.set_defaults(func=_cmd_meanset)

    p = sub.add_parser("walk", help="multi-vertex random-walk report")
    _add_instance_args(p)
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--coeff-bound", type=int, default=5)
    p.set_defaults(func=_cmd_walk)

    p = sub.add_parser("table-f4", help="sphere-sampling convergence table")
    p.add_argument("--rank", type=int, default=4)
    p.add_argument("--lengths", type=_int_list, default=(5, 10, 20, 50))
    p.add_argument("--samples", type=_int_list, default=(2, 4, 6, 8, 10, 12, 14, 16))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1,
                   help="cells run in a process pool when > 1; output is unchanged")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("decay", help="sample mean-set miss-rate curve")
    _add_instance_args(p)
    p.add_argument("--samples", type=_int_list, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--containment", action="store_true",
                   help="count S_n not-a-subset-of-E as the miss event")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_decay)

    p = sub.add_parser("check", help="randomized invariant sweep")
    p.add_argument("--suite", choices=("all",) + SUITE_NAMES, default="all")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--inject-fault", action="store_true",
                   help="negative control: skip free reduction when shifting")
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MeansetsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
