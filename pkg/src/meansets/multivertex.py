"""Random-walk apparatus for multi-vertex mean-sets.

For a mean-set {v_1, ..., v_k} with base v_1, each atom s of the measure
contributes the integer increment vector

    ( d^2(v_2, s) - d^2(v_1, s), ..., d^2(v_k, s) - d^2(v_1, s) )

with probability mu(s).  The walk driven by these increments tracks the
scaled weight differences n * (M_n(v_i+1) - M_n(v_1)) of the sample weight
function, so its visits to the nonnegative orthant decide how often the base
vertex appears in the sample mean-set.  This module computes the increment
distribution, its exact moments, the rank of the lattice the increments
generate ("genuine dimension"), positivity conditions sufficient for
orthant recurrence, and a descriptive simulation of the walk.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm

from .errors import NotMeanSetError
from .graphs import Graph
from .measures import AtomicMeasure
from .meanset import measure_mean_set


@dataclass(frozen=True)
class IncrementVector:
    """One aggregated step of the associated walk."""

    coords: tuple
    probability: Fraction
    atoms: tuple  # support atoms that produce this step


@dataclass(frozen=True)
class WalkState:
    step: int
    position: tuple


@dataclass(frozen=True)
class WalkResult:
    steps: int
    orthant_visits: int
    last_visit: int | None
    final_position: tuple
    trace: tuple  # thinned WalkState history


@dataclass(frozen=True)
class PositivityReport:
    """Sufficient-condition check for orthant recurrence of the walk.

    has_positive_vector is True/False when the bounded lattice search is
    conclusive and None when it is not (the unrestricted membership problem
    is out of scope).
    """

    has_positive_vector: bool | None
    mu_base_positive: bool


def increments(
    g: Graph,
    mu: AtomicMeasure,
    base,
    others,
    validate: bool = True,
) -> list[IncrementVector]:
    """Increment distribution of the walk associated with the base vertex.

    base plus others must be exactly the mean-set of mu; equal vectors are
    aggregated, so the probabilities sum to one.
    """
    others = list(others)
    if validate:
        claimed = frozenset([base, *others])
        solved = measure_mean_set(g, mu, 2).vertices
        if claimed != solved:
            raise NotMeanSetError(
                f"claimed mean-set {sorted(claimed)!r} but solver found {sorted(solved)!r}"
            )
    dist = g.distance
    grouped: dict[tuple, list] = {}
    for s in mu.support():
        d_base = dist(base, s) ** 2
        coords = tuple(dist(v, s) ** 2 - d_base for v in others)
        grouped.setdefault(coords, []).append(s)
    out = []
    for coords, atoms in grouped.items():
        prob = sum((mu[s] for s in atoms), Fraction(0))
        out.append(IncrementVector(coords=coords, probability=prob, atoms=tuple(atoms)))
    out.sort(key=lambda iv: iv.coords)
    return out


def first_moment(incs: list[IncrementVector]) -> tuple:
    """Exact mean increment; the zero vector for any genuine mean-set walk."""
    if not incs:
        return ()
    dim = len(incs[0].coords)
    return tuple(
        sum((iv.probability * iv.coords[i] for iv in incs), Fraction(0))
        for i in range(dim)
    )


def second_moment(incs: list[IncrementVector]) -> Fraction:
    """Exact expected squared euclidean step length; finite by construction."""
    return sum(
        (iv.probability * sum(x * x for x in iv.coords) for iv in incs),
        Fraction(0),
    )


def genuine_dimension(incs: list[IncrementVector]) -> int:
    """Rank of the integer lattice generated by the increment vectors."""
    return _int_rank([list(iv.coords) for iv in incs])


def _int_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    rows = [r[:] for r in rows if any(r)]
    if not rows:
        return 0
    cols = len(rows[0])
    rank = 0
    col = 0
    while col < cols and rank < len(rows):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                pivot = i
                break
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            q = rows[i][col]
            if q:
                rows[i] = [p * a - q * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def _lattice_basis(rows: list[list[int]]) -> list[list[int]]:
    """Basis of the lattice generated by the rows, via unimodular row ops
    (Euclidean reduction column by column, so the lattice is preserved)."""
    rows = [r[:] for r in rows if any(r)]
    if not rows:
        return []
    cols = len(rows[0])
    basis: list[list[int]] = []
    work = rows
    for col in range(cols):
        live = [r for r in work if r[col]]
        rest = [r for r in work if not r[col]]
        if not live:
            work = rest
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            head = live[0]
            reduced = [head]
            for r in live[1:]:
                q = r[col] // head[col]
                newr = [a - q * b for a, b in zip(r, head)]
                (reduced if newr[col] else rest).append(newr)
            live = reduced
            if len(live) == 1:
                break
        pivot_row = live[0]
        if pivot_row[col] < 0:
            pivot_row = [-a for a in pivot_row]
        basis.append(pivot_row)
        work = rest
    return basis


def dimension_invariance_check(g: Graph, mu: AtomicMeasure, meanset) -> bool:
    """True iff every choice of base vertex yields the same genuine dimension."""
    vertices = sorted(meanset)
    if len(vertices) < 2:
        raise ValueError("need a mean-set with at least two vertices")
    dims = set()
    for base in vertices:
        others = [v for v in vertices if v != base]
        dims.add(genuine_dimension(increments(g, mu, base, others, validate=False)))
    return len(dims) == 1


def has_positive_lattice_vector(
    vectors: list[tuple], coeff_bound: int = 5, budget: int = 300_000
) -> bool | None:
    """Bounded search for a strictly positive vector in the generated lattice.

    Reduces the generators to a basis first, then enumerates integer
    combinations of basis rows with coefficients in [-coeff_bound,
    coeff_bound], stopping after `budget` candidates.  Returns True on a
    witness, False when no lattice vector can be positive (the lattice is
    trivial or some coordinate vanishes on all of it), None when the bounded
    search is inconclusive.
    """
    if not vectors:
        return None
    dim = len(vectors[0])
    if dim == 0:
        # zero-dimensional walk: the positivity condition is vacuous
        return True
    for vec in vectors:
        if all(x > 0 for x in vec):
            return True
    basis = _lattice_basis([list(v) for v in vectors])
    if not basis:
        return False  # lattice is trivial
    for j in range(dim):
        if all(row[j] == 0 for row in basis):
            return False
    coeff_range = range(-coeff_bound, coeff_bound + 1)
    tried = 0
    for coeffs in product(coeff_range, repeat=len(basis)):
        tried += 1
        if tried > budget:
            return None
        point = [0] * dim
        for k, row in zip(coeffs, basis):
            if k:
                for j in range(dim):
                    point[j] += k * row[j]
        if all(x > 0 for x in point):
            return True
    return None


def positivity_hypotheses(
    g: Graph,
    mu: AtomicMeasure,
    meanset,
    base,
    coeff_bound: int = 5,
) -> PositivityReport:
    """Check the sufficient conditions for orthant recurrence of the walk.

    When mu(base) > 0 the increment of the base atom itself is the witness
    vector (all squared distances to the other mean-set vertices), so the
    search is immediate.
    """
    others = [v for v in sorted(meanset) if v != base]
    incs = increments(g, mu, base, others, validate=False)
    vectors = [iv.coords for iv in incs]
    return PositivityReport(
        has_positive_vector=has_positive_lattice_vector(vectors, coeff_bound),
        mu_base_positive=mu[base] > 0,
    )


def simulate_walk(
    incs: list[IncrementVector],
    steps: int,
    rng: random.Random,
    trace_every: int = 100,
) -> WalkResult:
    """Simulate the walk and report nonnegative-orthant visit statistics.

    The trace is thinned to every trace_every-th state to bound memory; the
    visit count and last-visit step are exact over all steps.  Recurrence is
    an asymptotic property, so the result is descriptive only.
    """
    if steps < 1:
        raise ValueError("need steps >= 1")
    if not incs:
        raise ValueError("need at least one increment vector")
    dim = len(incs[0].coords)
    denom = lcm(*(iv.probability.denominator for iv in incs))
    cum = []
    acc = 0
    for iv in incs:
        acc += int(iv.probability * denom)
        cum.append(acc)
    if acc != denom:
        raise ValueError("increment probabilities must sum to 1")
    coords = [iv.coords for iv in incs]
    position = [0] * dim
    visits = 0
    last_visit = None
    trace = [WalkState(step=0, position=tuple(position))]
    randrange = rng.randrange
    for n in range(1, steps + 1):
        step_vec = coords[bisect_right(cum, randrange(denom))]
        for i in range(dim):
            position[i] += step_vec[i]
        if all(x >= 0 for x in position):
            visits += 1
            last_visit = n
        if n % trace_every == 0:
            trace.append(WalkState(step=n, position=tuple(position)))
    return WalkResult(
        steps=steps,
        orthant_visits=visits,
        last_visit=last_visit,
        final_position=tuple(position),
        trace=tuple(trace),
    )
