"""Reproducible Monte-Carlo experiment runners.

Every runner is a pure function of its configuration including the master
seed: per-trial streams are seeded by a SHA-256 hash of (master seed, cell
identity, trial index), so cells reproduce independently and can run in any
order (or concurrently) without changing the output, which is always sorted
by cell identity.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NonSingletonTruthError
from .freegroup import CayleyGraph, multiply, sample_sphere, word_from_str, word_to_str
from .graphs import Graph
from .measures import AtomicMeasure, draw, shift
from .meanset import (
    mean_set_exact,
    mean_set_tree,
    measure_mean_set,
    sample_mean_set,
    weight,
)
from .multivertex import dimension_invariance_check, first_moment, increments
from . import randomgen


def derive_seed(master: int, *parts) -> int:
    """Stable 64-bit stream seed from the master seed and a cell/trial path."""
    text = ":".join([str(master), *map(str, parts)])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


@dataclass
class ExperimentConfig:
    kind: str = "table-f4"
    rank: int = 4
    lengths: tuple = (5, 10, 20, 50)
    samples: tuple = (2, 4, 6, 8, 10, 12, 14, 16)
    trials: int = 1000
    seed: int = 42
    out: str | None = None     # None writes to stdout
    fmt: str = "csv"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(b <= a for a, b in zip(self.samples, self.samples[1:])):
            raise ValueError("sample sizes must be strictly increasing")
        if any(n < 1 for n in self.samples):
            raise ValueError("sample sizes must be positive")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.fmt!r}")


@dataclass
class CellResult:
    """Displacement histograms of one (rank, L, n) cell."""

    rank: int
    length: int
    n: int
    trials: int
    histogram: dict = field(default_factory=dict)      # max displacement -> count
    histogram_min: dict = field(default_factory=dict)  # min displacement -> count

    def count(self, displacement: int) -> int:
        return self.histogram.get(displacement, 0)


def _flatten_histogram(hist: dict) -> tuple[int, int, int, int]:
    d3plus = sum(c for d, c in hist.items() if d >= 3)
    return hist.get(0, 0), hist.get(1, 0), hist.get(2, 0), d3plus


def run_table_cell(rank: int, length: int, n: int, trials: int, seed: int) -> CellResult:
    """One cell of the sphere-sampling convergence table.

    Each trial draws n words from the uniform sphere measure, solves for the
    sample mean-set with the tree solver, and records the displacement of
    the result from the true center (the identity): both the max and the min
    over the returned vertices, which differ only when the solver returns an
    adjacent pair.
    """
    graph = CayleyGraph(rank)
    center = graph.empty_id
    dist = graph.distance
    hist: dict[int, int] = {}
    hist_min: dict[int, int] = {}
    for trial in range(trials):
        rng = random.Random(derive_seed(seed, "table", rank, length, n, trial))
        counts: dict[str, int] = {}
        for _ in range(n):
            wid = word_to_str(sample_sphere(rank, length, rng))
            counts[wid] = counts.get(wid, 0) + 1
        result = mean_set_tree(graph, AtomicMeasure.from_masses(counts), 2)
        ds = [dist(center, v) for v in result.vertices]
        d_max, d_min = max(ds), min(ds)
        hist[d_max] = hist.get(d_max, 0) + 1
        hist_min[d_min] = hist_min.get(d_min, 0) + 1
    return CellResult(
        rank=rank,
        length=length,
        n=n,
        trials=trials,
        histogram=dict(sorted(hist.items())),
        histogram_min=dict(sorted(hist_min.items())),
    )


def run_table_experiment(cfg: ExperimentConfig, workers: int = 1) -> list[CellResult]:
    """Run every (L, n) cell; the output is sorted by cell identity.

    Cells are pure functions of (rank, L, n, trials, master seed), so with
    workers > 1 they run in a process pool; results are identical to a
    sequential run regardless of completion order.
    """
    params = [
        (cfg.rank, length, n, cfg.trials, cfg.seed)
        for length in cfg.lengths
        for n in cfg.samples
    ]
    if workers > 1 and len(params) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_run_table_cell_args, params))
    else:
        cells = [run_table_cell(*args) for args in params]
    cells.sort(key=lambda c: (c.length, c.n))
    return cells


def _run_table_cell_args(args) -> CellResult:
    return run_table_cell(*args)


def table_to_csv(cells: list[CellResult]) -> str:
    """One row per cell; histograms flattened to d0,d1,d2,d3plus columns.

    The displacement of a multi-vertex result is the max distance to the
    center (conservative); the min-based histogram rides along as secondary
    columns.
    """
    buf = io.StringIO()
    buf.write("# displacement=max over returned vertices; min_* columns use min\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["rank", "L", "n", "trials", "d0", "d1", "d2", "d3plus",
         "min_d0", "min_d1", "min_d2", "min_d3plus"]
    )
    for c in cells:
        writer.writerow([c.rank, c.length, c.n, c.trials,
                         *_flatten_histogram(c.histogram),
                         *_flatten_histogram(c.histogram_min)])
    return buf.getvalue()


def table_to_json(cfg: ExperimentConfig, cells: list[CellResult]) -> str:
    payload = {
        "config": {
            "kind": cfg.kind,
            "rank": cfg.rank,
            "lengths": list(cfg.lengths),
            "samples": list(cfg.samples),
            "trials": cfg.trials,
            "seed": cfg.seed,
            "displacement": "max (histogram), min (histogram_min)",
        },
        "cells": [
            {
                "rank": c.rank,
                "L": c.length,
                "n": c.n,
                "trials": c.trials,
                "histogram": {str(d): k for d, k in c.histogram.items()},
                "histogram_min": {str(d): k for d, k in c.histogram_min.items()},
            }
            for c in cells
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# -- decay experiments -------------------------------------------------------

@dataclass
class DecayPoint:
    n: int
    trials: int
    misses: int

    @property
    def miss_rate(self) -> Fraction:
        return Fraction(self.misses, self.trials)


def run_decay_experiment(
    graph: Graph,
    mu: AtomicMeasure,
    samples,
    trials: int,
    seed: int,
    containment: bool = False,
) -> list[DecayPoint]:
    """Estimate how often the sample mean-set misses the true one.

    Without containment the ground truth must be a singleton and a miss is
    S_n != E; with containment a miss is S_n not a subset of E, which also
    covers multi-vertex truths.
    """
    truth = measure_mean_set(graph, mu, 2).vertices
    if len(truth) > 1 and not containment:
        raise NonSingletonTruthError(
            f"mean-set has {len(truth)} vertices; rerun with containment mode"
        )
    points = []
    for n in samples:
        misses = 0
        for trial in range(trials):
            rng = random.Random(derive_seed(seed, "decay", n, trial))
            sample = draw(mu, n, rng)
            found = sample_mean_set(graph, sample, 2).vertices
            if containment:
                miss = not (found <= truth)
            else:
                miss = found != truth
            if miss:
                misses += 1
        points.append(DecayPoint(n=n, trials=trials, misses=misses))
    return points


def decay_to_csv(points: list[DecayPoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "trials", "misses", "miss_rate", "n_times_miss_rate", "log_miss_rate"])
    for p in points:
        rate = p.miss_rate
        writer.writerow([
            p.n,
            p.trials,
            p.misses,
            f"{float(rate):.6g}",
            f"{float(p.n * rate):.6g}",
            f"{math.log(rate):.6g}" if rate > 0 else "",
        ])
    return buf.getvalue()


# -- invariant sweep ---------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: int
    first_failure_seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class SweepReport:
    seed: int
    suites: list

    @property
    def all_passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def render(self) -> str:
        lines = [f"invariant sweep, seed {self.seed}"]
        for s in self.suites:
            status = "pass" if s.passed else "FAIL"
            line = f"{status:4}  {s.name:24} cases={s.cases} failures={s.failures}"
            if s.first_failure_seed is not None:
                line += f" first_failure_seed={s.first_failure_seed}"
            lines.append(line)
        verdict = "ALL PASS" if self.all_passed else "FAILURES PRESENT"
        lines.append(verdict)
        return "\n".join(lines) + "\n"


def _run_suite(name: str, seed: int, cases: int, check) -> SuiteResult:
    failures = 0
    first_failure = None
    for i in range(cases):
        case_seed = derive_seed(seed, name, i)
        if not check(random.Random(case_seed)):
            failures += 1
            if first_failure is None:
                first_failure = case_seed
    return SuiteResult(name=name, cases=cases, failures=failures,
                       first_failure_seed=first_failure)


def _shift_faulty(mu: AtomicMeasure, g) -> AtomicMeasure:
    # negative control: translate by raw string concatenation, skipping free
    # reduction, so translated atoms land on the wrong vertices
    gid = word_to_str(g)
    gid = "" if not g.letters else gid
    moved = {}
    for v, w in mu.items():
        body = "" if v == "e" else v
        moved[(gid + body) or "e"] = w
    return AtomicMeasure(moved)


def _check_shift_property(rng: random.Random, inject_fault: bool = False) -> bool:
    graph = CayleyGraph(2)
    mu = randomgen.random_word_measure(rng, rank=2, max_atoms=4, max_len=4)
    g = randomgen.random_word(rng, rank=2, max_len=3)
    base = mean_set_tree(graph, mu, 2)
    shifted_mu = _shift_faulty(mu, g) if inject_fault else shift(mu, g)
    shifted = mean_set_tree(graph, shifted_mu, 2)
    expected = frozenset(
        word_to_str(multiply(g, word_from_str(v, 2))) for v in base.vertices
    )
    return shifted.vertices == expected


def _check_tree_configuration(rng: random.Random) -> bool:
    tree = randomgen.random_tree(rng, max_vertices=15)
    mu = randomgen.random_measure(tree.vertices(), rng)
    by_descent = mean_set_tree(tree, mu, 2)
    by_scan = mean_set_exact(tree, mu, 2)
    if by_descent.vertices != by_scan.vertices:
        return False
    vs = by_descent.sorted_vertices()
    if len(vs) > 2:
        return False
    if len(vs) == 2 and tree.distance(vs[0], vs[1]) != 1:
        return False
    return True


def _check_cut_point(rng: random.Random) -> bool:
    g = randomgen.random_cutpoint_graph(rng, max_vertices=9)
    mu = randomgen.random_measure(g.vertices(), rng)
    for v0 in g.cut_points():
        comps = g.components_without([v0])
        m0 = weight(g, mu, v0, 2)
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                for v1 in comps[i]:
                    for v2 in comps[j]:
                        d1 = g.distance(v0, v1)
                        d2 = g.distance(v0, v2)
                        bound = d2 * d1 * (d1 + d2)
                        for s in g.vertices():
                            lhs = d2 * (g.distance(v1, s) ** 2 - g.distance(v0, s) ** 2) + d1 * (
                                g.distance(v2, s) ** 2 - g.distance(v0, s) ** 2
                            )
                            if lhs < bound or bound <= 0:
                                return False
                        if m0 >= weight(g, mu, v1, 2) and m0 >= weight(g, mu, v2, 2):
                            return False
    return True


def _check_dimension_invariance(rng: random.Random) -> bool:
    g, mu, meanset = randomgen.random_multivertex_instance(rng)
    base = min(meanset)
    others = [v for v in sorted(meanset) if v != base]
    incs = increments(g, mu, base, others, validate=False)
    if any(x != 0 for x in first_moment(incs)):
        return False
    return dimension_invariance_check(g, mu, meanset)


def _check_classical_mean_gap(rng: random.Random) -> bool:
    from .meanset import classical_mean_gap, line_mean_set

    mu = randomgen.random_integer_measure(rng)
    result = line_mean_set(mu, 2)
    if not 1 <= len(result.vertices) <= 2:
        return False
    return classical_mean_gap(mu) <= Fraction(1, 2)


def run_invariant_sweep(
    seed: int = 42, cases: int = 50, inject_fault: bool = False
) -> SweepReport:
    """Run the randomized invariant suites; deterministic given the seed.

    inject_fault skips free reduction in the shift-property suite as a
    negative control, which must make that suite fail.
    """
    suites = [
        _run_suite(
            "shift-property",
            seed,
            cases,
            lambda rng: _check_shift_property(rng, inject_fault=inject_fault),
        ),
        _run_suite("tree-configuration", seed, cases, _check_tree_configuration),
        _run_suite("cut-point-inequality", seed, max(cases // 2, 1), _check_cut_point),
        _run_suite("dimension-invariance", seed, cases, _check_dimension_invariance),
        _run_suite("classical-mean-gap", seed, cases, _check_classical_mean_gap),
    ]
    return SweepReport(seed=seed, suites=suites)
