"""Weight functions and mean-set solvers.

The weight of class c at a vertex v is the exact rational

    W_c(v) = sum over atoms s of d(v, s)^c * mu(s),

and the mean-set is the exact argmin of W_c over the graph.  Three solvers
cover the three graph shapes:

  * mean_set_exact     -- full scan of a finite explicit graph;
  * mean_set_tree      -- direct descent plus an equal-weight flood fill,
                          exact on trees (the weight is convex along tree
                          paths, so local minima are global and the argmin
                          set is connected);
  * mean_set_bounded   -- scan of a ball that provably contains the argmin,
                          for implicit graphs that are not trees.

All comparisons are exact: internally the solvers work with integer weight
numerators over the measure's common denominator and convert to Fraction
only when building results.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DescentStepLimitError,
    UnreachableAtomError,
    UnreachableVertexError,
)
from .graphs import ExplicitGraph, Graph
from .measures import AtomicMeasure, Sample, empirical

DEFAULT_STEP_LIMIT = 10**6


@dataclass(frozen=True)
class MeanSetResult:
    """Argmin vertices plus the exact minimal weight."""

    vertices: frozenset
    min_weight: Fraction
    class_c: int
    method: str = "exact"
    steps: int = 0

    def sorted_vertices(self) -> list:
        return sorted(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self.vertices


def weight(g: Graph, mu: AtomicMeasure, v, c: int = 2) -> Fraction:
    """Exact class-c weight of v under mu."""
    _check_class(c)
    denom, nums = mu.numerators()
    try:
        return Fraction(_weight_num(g, nums, v, c), denom)
    except UnreachableVertexError as exc:
        raise UnreachableAtomError(str(exc)) from None


def _check_class(c: int) -> None:
    if c not in (1, 2):
        raise ValueError("weight class must be 1 or 2")


def _weight_num(g: Graph, nums: dict, v, c: int) -> int:
    dist = g.distance
    if c == 2:
        return sum(dist(v, s) ** 2 * m for s, m in nums.items())
    return sum(dist(v, s) * m for s, m in nums.items())


def _weight_fn(g: Graph, nums: dict, c: int):
    dist = g.distance
    items = list(nums.items())
    if c == 2:
        def f(v):
            acc = 0
            for s, m in items:
                d = dist(v, s)
                acc += d * d * m
            return acc
    else:
        def f(v):
            acc = 0
            for s, m in items:
                acc += dist(v, s) * m
            return acc
    return f


def mean_set_exact(g: ExplicitGraph, mu: AtomicMeasure, c: int = 2) -> MeanSetResult:
    """Exact argmin over every vertex of a finite explicit graph."""
    _check_class(c)
    denom, nums = mu.numerators()
    f = _weight_fn(g, nums, c)
    best = None
    best_vs: list = []
    for v in g.vertices():
        w = f(v)
        if best is None or w < best:
            best = w
            best_vs = [v]
        elif w == best:
            best_vs.append(v)
    return MeanSetResult(
        vertices=frozenset(best_vs),
        min_weight=Fraction(best, denom),
        class_c=c,
        method="exact",
        steps=len(g.vertices()),
    )


def certify_radius(g: Graph, mu: AtomicMeasure, v0, r: int) -> bool:
    """Exact test of the outer-tail certificate

        sum over atoms s with d(v0, s) > r/2 of d(v0, s) * mu(s)  <  (r/2) * mu(v0).

    When it holds, every vertex outside the ball of radius r around v0 has
    strictly larger class-2 weight than v0, so the mean-set lies inside that
    ball.  It can only hold when mu(v0) > 0.
    """
    if r < 1:
        raise ValueError("radius must be positive")
    denom, nums = mu.numerators()
    # multiply both sides by 2*denom to stay in integers
    tail = sum(
        2 * g.distance(v0, s) * m
        for s, m in nums.items()
        if 2 * g.distance(v0, s) > r
    )
    return tail < r * nums.get(v0, 0)


def _descend(g: Graph, f, start, max_steps: int):
    """Direct descent: returns (local minimizer, steps taken, value cache)."""
    cache = {start: f(start)}
    v = start
    fv = cache[start]
    steps = 0
    while True:
        best_u = None
        best_fu = fv
        for u in g.neighbors(v):
            fu = cache.get(u)
            if fu is None:
                fu = cache[u] = f(u)
            if fu < best_fu or (fu == best_fu and best_u is not None and u < best_u):
                best_u = u
                best_fu = fu
        if best_u is None:
            return v, steps, cache
        v, fv = best_u, best_fu
        steps += 1
        if steps > max_steps:
            raise DescentStepLimitError(
                f"descent exceeded {max_steps} steps; objective is not locally finite"
            )


def direct_descent(g: Graph, f, start, max_steps: int = DEFAULT_STEP_LIMIT):
    """Walk to strictly smaller neighbors until none exists.

    Among strictly smaller neighbors the one with the smallest value is
    taken, remaining ties broken by vertex order, so runs are reproducible.
    Returns a local minimizer of f; when f is locally decreasing and locally
    finite this is a global minimizer.
    """
    v, _steps, _cache = _descend(g, f, start, max_steps)
    return v


def _equal_weight_region(g: Graph, f, seed_vertex, value, cache: dict) -> set:
    """Flood fill over vertices whose f equals value, starting at seed_vertex."""
    region = {seed_vertex}
    frontier = [seed_vertex]
    while frontier:
        v = frontier.pop()
        for u in g.neighbors(v):
            if u in region:
                continue
            fu = cache.get(u)
            if fu is None:
                fu = cache[u] = f(u)
            if fu == value:
                region.add(u)
                frontier.append(u)
    return region


def mean_set_tree(
    g: Graph,
    mu: AtomicMeasure,
    c: int = 2,
    start=None,
    max_steps: int = DEFAULT_STEP_LIMIT,
) -> MeanSetResult:
    """Mean-set via direct descent, exact on trees.

    The descent starts at the heaviest atom (ties broken by vertex order) so
    the walk stays inside the convex hull of the support.  On a tree the
    weight is convex along paths, hence the local minimizer found is global
    and the full argmin set is the connected equal-weight region around it;
    for class 2 that region has at most two (adjacent) vertices.  On graphs
    with cycles this is a heuristic and may return a strict local minimum.
    """
    _check_class(c)
    support = mu.support()
    if len(support) == 1:
        return MeanSetResult(
            vertices=frozenset(support),
            min_weight=Fraction(0),
            class_c=c,
            method="descent",
            steps=0,
        )
    if start is None:
        start = min(support, key=lambda v: (-mu[v], v))
    denom, nums = mu.numerators()
    f = _weight_fn(g, nums, c)
    v, steps, cache = _descend(g, f, start, max_steps)
    best = cache[v]
    region = _equal_weight_region(g, f, v, best, cache)
    return MeanSetResult(
        vertices=frozenset(region),
        min_weight=Fraction(best, denom),
        class_c=c,
        method="descent",
        steps=steps,
    )


def mean_set_bounded(g: Graph, mu: AtomicMeasure, c: int = 2) -> MeanSetResult:
    """Mean-set of a finitely supported measure on an implicit graph.

    Let v be the heaviest atom.  Choose the smallest radius r whose ball
    around v carries at least half of W_c(v):

        2 * sum over atoms s with d(v, s) <= r of d(v, s)^c * mu(s)  >=  W_c(v).

    Every vertex u with d(u, v) >= 3r (class 2; 4r for class 1) then
    satisfies W_c(u) > W_c(v), so scanning the ball of that radius is an
    exhaustive search for the argmin set.
    """
    _check_class(c)
    support = mu.support()
    if len(support) == 1:
        return MeanSetResult(
            vertices=frozenset(support),
            min_weight=Fraction(0),
            class_c=c,
            method="bounded",
            steps=0,
        )
    v = min(support, key=lambda s: (-mu[s], s))
    denom, nums = mu.numerators()
    dist_to_atom = {s: g.distance(v, s) for s in support}
    total = sum(dist_to_atom[s] ** c * m for s, m in nums.items())
    acc = 0
    r = 0
    for s in sorted(support, key=lambda s: dist_to_atom[s]):
        if 2 * acc >= total:
            break
        r = dist_to_atom[s]
        acc += r ** c * nums[s]
    radius = 3 * r if c == 2 else 4 * r
    ball = g.ball(v, radius)
    f = _weight_fn(g, nums, c)
    best = None
    best_vs: list = []
    for u in sorted(ball):
        w = f(u)
        if best is None or w < best:
            best = w
            best_vs = [u]
        elif w == best:
            best_vs.append(u)
    return MeanSetResult(
        vertices=frozenset(best_vs),
        min_weight=Fraction(best, denom),
        class_c=c,
        method="bounded",
        steps=len(ball),
    )


def measure_mean_set(g: Graph, mu: AtomicMeasure, c: int = 2) -> MeanSetResult:
    """Dispatch to the solver matching the graph shape."""
    if isinstance(g, ExplicitGraph):
        return mean_set_exact(g, mu, c)
    if g.is_tree:
        return mean_set_tree(g, mu, c)
    return mean_set_bounded(g, mu, c)


def sample_mean_set(g: Graph, s: Sample, c: int = 2) -> MeanSetResult:
    """Mean-set of the empirical measure of a sample."""
    return measure_mean_set(g, empirical(s), c)


# -- the integer line -------------------------------------------------------

def line_mean_set(mu: AtomicMeasure, c: int = 2) -> MeanSetResult:
    """Mean-set on the integer line by scanning the convex hull of the support.

    The weight is convex in the vertex and strictly increasing outside the
    hull, so the scan is exhaustive.
    """
    _check_class(c)
    support = mu.support()
    lo, hi = min(support), max(support)
    denom, nums = mu.numerators()
    best = None
    best_vs: list = []
    for v in range(lo, hi + 1):
        if c == 2:
            w = sum((v - s) * (v - s) * m for s, m in nums.items())
        else:
            w = sum(abs(v - s) * m for s, m in nums.items())
        if best is None or w < best:
            best = w
            best_vs = [v]
        elif w == best:
            best_vs.append(v)
    return MeanSetResult(
        vertices=frozenset(best_vs),
        min_weight=Fraction(best, denom),
        class_c=c,
        method="line-scan",
        steps=hi - lo + 1,
    )


def classical_mean_gap(mu: AtomicMeasure) -> Fraction:
    """Largest distance between the classical mean and a class-2 mean-set
    vertex on the integer line; always at most 1/2."""
    mean = sum((Fraction(v) * w for v, w in mu.items()), Fraction(0))
    result = line_mean_set(mu, 2)
    return max(abs(mean - v) for v in result.vertices)
