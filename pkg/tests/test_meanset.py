import random
from fractions import Fraction

import pytest

from meansets.errors import DescentStepLimitError, UnreachableAtomError
from meansets.freegroup import (
    CayleyGraph,
    enumerate_ball,
    fg_distance,
    multiply,
    word_from_str,
    word_to_str,
)
from meansets.graphs import (
    ExplicitGraph,
    ImplicitGraph,
    complete_graph,
    cycle_graph,
    integer_grid,
    integer_line,
    path_graph,
)
from meansets.measures import AtomicMeasure, Sample, empirical, shift
from meansets.meanset import (
    certify_radius,
    classical_mean_gap,
    direct_descent,
    line_mean_set,
    mean_set_bounded,
    mean_set_exact,
    mean_set_tree,
    measure_mean_set,
    sample_mean_set,
    weight,
)
from meansets.randomgen import (
    random_connected_graph,
    random_measure,
    random_tree,
    random_word,
    random_word_measure,
)


def brute_force_mean_set(g: ExplicitGraph, mu: AtomicMeasure, c: int):
    """Independent oracle: Floyd-Warshall distances, Fraction weights, argmin."""
    vs = g.vertices()
    inf = float("inf")
    d = {(u, v): 0 if u == v else inf for u in vs for v in vs}
    for u, v in g.edges():
        d[u, v] = d[v, u] = 1
    for k in vs:
        for i in vs:
            for j in vs:
                if d[i, k] + d[k, j] < d[i, j]:
                    d[i, j] = d[i, k] + d[k, j]
    weights = {
        v: sum((Fraction(d[v, s]) ** c * mu[s] for s in mu.support()), Fraction(0))
        for v in vs
    }
    best = min(weights.values())
    return frozenset(v for v, w in weights.items() if w == best), best


def as_implicit(g: ExplicitGraph) -> ImplicitGraph:
    return ImplicitGraph(lambda v: g.neighbors(v), is_tree=g.is_tree)


class TestWeight:
    def test_path_two_point(self):
        g = path_graph(3)
        mu = AtomicMeasure.uniform([0, 2])
        assert weight(g, mu, 1, 2) == 1
        assert weight(g, mu, 0, 2) == 2

    def test_point_mass_is_zero_at_atom(self):
        g = cycle_graph(5)
        mu = AtomicMeasure.point_mass(3)
        assert weight(g, mu, 3, 2) == 0

    def test_three_vertex_path_weights(self):
        # center vertex 1 flanked by 0 and 2, all mass on the flanks:
        # W(1) = mu0 + mu2, W(0) = 4*mu2, W(2) = 4*mu0 (plus cross terms via 1)
        g = path_graph(3)
        mu = AtomicMeasure({0: Fraction(1, 2), 2: Fraction(1, 2)})
        assert weight(g, mu, 1, 2) == Fraction(1)
        assert weight(g, mu, 0, 2) == Fraction(2)
        assert weight(g, mu, 2, 2) == Fraction(2)

    def test_class_one(self):
        g = path_graph(3)
        mu = AtomicMeasure.uniform([0, 2])
        assert weight(g, mu, 1, 1) == 1
        assert weight(g, mu, 0, 1) == 1

    def test_unreachable_atom(self):
        broken = ImplicitGraph(lambda v: ())
        mu = AtomicMeasure.point_mass(5)
        with pytest.raises(UnreachableAtomError):
            weight(broken, mu, 0, 2)

    def test_bad_class(self):
        with pytest.raises(ValueError):
            weight(path_graph(2), AtomicMeasure.point_mass(0), 0, 3)


class TestMeanSetExact:
    def test_cycle_uniform_is_everything(self):
        g = cycle_graph(5)
        res = mean_set_exact(g, AtomicMeasure.uniform(g.vertices()), 2)
        assert res.vertices == frozenset(g.vertices())

    def test_complete_uniform_is_everything(self):
        g = complete_graph(4)
        res = mean_set_exact(g, AtomicMeasure.uniform(g.vertices()), 2)
        assert res.vertices == frozenset(g.vertices())

    def test_path_center(self):
        g = path_graph(3)
        res = mean_set_exact(g, AtomicMeasure.uniform([0, 2]), 2)
        assert res.vertices == frozenset([1])
        assert res.min_weight == 1

    def test_matches_brute_force(self):
        rng = random.Random(2025)
        for _ in range(60):
            g = random_connected_graph(rng, 12)
            mu = random_measure(g.vertices(), rng)
            for c in (1, 2):
                res = mean_set_exact(g, mu, c)
                vs, best = brute_force_mean_set(g, mu, c)
                assert res.vertices == vs
                assert res.min_weight == best


class TestCertifyRadius:
    def test_point_mass_certifies(self):
        g = path_graph(5)
        assert certify_radius(g, AtomicMeasure.point_mass(2), 2, 2)

    def test_zero_mass_at_center_never_certifies(self):
        g = path_graph(5)
        mu = AtomicMeasure.uniform([0, 4])
        assert not certify_radius(g, mu, 2, 2)

    def test_certificate_implies_containment(self):
        rng = random.Random(404)
        hits = 0
        for _ in range(200):
            g = random_connected_graph(rng, 10)
            mu = random_measure(g.vertices(), rng)
            v0 = rng.choice(g.vertices())
            r = rng.randint(1, 6)
            if certify_radius(g, mu, v0, r):
                hits += 1
                res = mean_set_exact(g, mu, 2)
                assert res.vertices <= g.ball(v0, r)
        assert hits > 10  # the check must actually fire


class TestMeanSetBounded:
    def test_point_mass_on_free_group(self):
        g = CayleyGraph(2)
        res = mean_set_bounded(g, AtomicMeasure.point_mass("ab"), 2)
        assert res.vertices == frozenset(["ab"])
        assert res.min_weight == 0

    def test_uniform_three_words(self):
        g = CayleyGraph(2)
        mu = AtomicMeasure.uniform(["e", "a", "A"])
        res = mean_set_bounded(g, mu, 2)
        # independent scan over the materialized radius-6 ball
        e = word_from_str("e", 2)
        atoms = {word_from_str(v, 2): mu[v] for v in mu.support()}
        best = None
        best_words = []
        for w in enumerate_ball(2, 6):
            val = sum((Fraction(fg_distance(w, s)) ** 2 * p for s, p in atoms.items()),
                      Fraction(0))
            if best is None or val < best:
                best, best_words = val, [w]
            elif val == best:
                best_words.append(w)
        assert res.vertices == frozenset(word_to_str(w) for w in best_words)
        assert res.vertices == frozenset(["e"])
        assert res.min_weight == best == Fraction(2, 3)

    def test_agrees_with_exact_on_implicit_trees(self):
        rng = random.Random(88)
        for _ in range(40):
            tree = random_tree(rng, 14)
            mu = random_measure(tree.vertices(), rng)
            for c in (1, 2):
                res = mean_set_bounded(as_implicit(tree), mu, c)
                exact = mean_set_exact(tree, mu, c)
                assert res.vertices == exact.vertices
                assert res.min_weight == exact.min_weight

    def test_generous_ball_rescan(self):
        # recompute the half-mass radius independently, then scan a ball
        # larger by three extra steps: the argmin set must not change
        rng = random.Random(89)
        for _ in range(25):
            tree = random_tree(rng, 10)
            mu = random_measure(tree.vertices(), rng)
            g = as_implicit(tree)
            res = mean_set_bounded(g, mu, 2)
            support = mu.support()
            v = min(support, key=lambda s: (-mu[s], s))
            total = sum((Fraction(g.distance(v, s)) ** 2 * mu[s] for s in support),
                        Fraction(0))
            acc = Fraction(0)
            r = 0
            for s in sorted(support, key=lambda s: g.distance(v, s)):
                if 2 * acc >= total:
                    break
                r = g.distance(v, s)
                acc += Fraction(g.distance(v, s)) ** 2 * mu[s]
            best = None
            best_vs = []
            for u in sorted(g.ball(v, 3 * r + 3)):
                val = sum((Fraction(g.distance(u, s)) ** 2 * mu[s] for s in support),
                          Fraction(0))
                if best is None or val < best:
                    best, best_vs = val, [u]
                elif val == best:
                    best_vs.append(u)
            assert res.vertices == frozenset(best_vs)
            assert res.min_weight == best


class TestDirectDescent:
    def test_single_step_on_path(self):
        g = path_graph(3)
        mu = AtomicMeasure.uniform([0, 2])
        f = lambda v: weight(g, mu, v, 2)
        assert direct_descent(g, f, 0) == 1

    def test_start_at_minimum_stays(self):
        g = path_graph(3)
        mu = AtomicMeasure.uniform([0, 2])
        f = lambda v: weight(g, mu, v, 2)
        assert direct_descent(g, f, 1) == 1

    def test_lands_in_mean_set_on_random_trees(self):
        rng = random.Random(31337)
        for _ in range(200):
            tree = random_tree(rng, 20)
            mu = random_measure(tree.vertices(), rng)
            f = lambda v: weight(tree, mu, v, 2)
            start = rng.choice(tree.vertices())
            found = direct_descent(tree, f, start)
            assert found in mean_set_exact(tree, mu, 2).vertices

    def test_step_limit_guard(self):
        line = integer_line()
        with pytest.raises(DescentStepLimitError):
            direct_descent(line, lambda v: -v, 0, max_steps=50)


class TestMeanSetTree:
    def test_two_point_line(self):
        line = integer_line()
        mu = AtomicMeasure.uniform([0, 1])
        res = mean_set_tree(line, mu, 2)
        assert res.vertices == frozenset([0, 1])
        assert res.min_weight == Fraction(1, 2)

    def test_matches_exact_on_random_trees(self):
        rng = random.Random(61)
        for _ in range(120):
            tree = random_tree(rng, 25)
            mu = random_measure(tree.vertices(), rng)
            res = mean_set_tree(tree, mu, 2)
            exact = mean_set_exact(tree, mu, 2)
            assert res.vertices == exact.vertices
            assert res.min_weight == exact.min_weight
            assert 1 <= len(res.vertices) <= 2
            vs = res.sorted_vertices()
            if len(vs) == 2:
                assert tree.distance(vs[0], vs[1]) == 1

    def test_class_one_full_median_set(self):
        # the class-1 argmin region can be wider than two vertices; the
        # flood fill must still return all of it on a tree
        line = integer_line()
        mu = AtomicMeasure.uniform([0, 3])
        res = mean_set_tree(line, mu, 1)
        assert res.vertices == frozenset([0, 1, 2, 3])
        exact = line_mean_set(mu, 1)
        assert res.vertices == exact.vertices

    def test_free_group_sphere_sample(self):
        g = CayleyGraph(4)
        mu = AtomicMeasure.from_masses({"abcd": 1, "abDC": 1, "aBc": 2})
        res = mean_set_tree(g, mu, 2)
        # all mass shares the prefix a, so the center is near it; verify by
        # scanning a materialized ball
        atoms = {word_from_str(v, 4): mu[v] for v in mu.support()}
        best = None
        best_words = set()
        for w in enumerate_ball(4, 5):
            val = sum((Fraction(fg_distance(w, s)) ** 2 * p for s, p in atoms.items()),
                      Fraction(0))
            if best is None or val < best:
                best, best_words = val, {word_to_str(w)}
            elif val == best:
                best_words.add(word_to_str(w))
        assert res.vertices == frozenset(best_words)

    def test_single_atom_short_circuit(self):
        g = CayleyGraph(2)
        res = mean_set_tree(g, AtomicMeasure.point_mass("abab"), 2)
        assert res.vertices == frozenset(["abab"])
        assert res.min_weight == 0
        assert res.steps == 0

    def test_agrees_with_bounded_solver_on_free_group(self):
        # two independent solvers, one instance: descent+flood vs the
        # certified-ball scan must name the same argmin set and value
        # (supports kept tight: the ball scan grows exponentially in rank 2)
        rng = random.Random(2042)
        cases = [(CayleyGraph(2), 1, 40), (CayleyGraph(1), 4, 40)]
        for g, max_len, count in cases:
            for _ in range(count):
                mu = random_word_measure(rng, g.rank, max_atoms=5, max_len=max_len)
                for c in (1, 2):
                    by_tree = mean_set_tree(g, mu, c)
                    by_ball = mean_set_bounded(g, mu, c)
                    assert by_tree.vertices == by_ball.vertices
                    assert by_tree.min_weight == by_ball.min_weight


class TestSampleMeanSet:
    def test_constant_sample(self):
        g = path_graph(4)
        res = sample_mean_set(g, Sample({2: 9}), 2)
        assert res.vertices == frozenset([2])

    def test_two_point_line_sample(self):
        res = sample_mean_set(integer_line(), Sample({0: 1, 1: 1}), 2)
        assert res.vertices == frozenset([0, 1])

    def test_definitional_equivalence(self):
        rng = random.Random(71)
        for _ in range(40):
            g = random_connected_graph(rng, 10)
            counts = {v: rng.randint(1, 5) for v in rng.sample(g.vertices(), rng.randint(1, len(g)))}
            s = Sample(counts)
            assert sample_mean_set(g, s, 2).vertices == mean_set_exact(g, empirical(s), 2).vertices


class TestShiftProperty:
    def test_translation_moves_mean_set(self):
        graph = CayleyGraph(2)
        rng = random.Random(515)
        for _ in range(200):
            mu = random_word_measure(rng, 2, max_atoms=5, max_len=5)
            g = random_word(rng, 2, 4)
            base = mean_set_tree(graph, mu, 2)
            moved = mean_set_tree(graph, shift(mu, g), 2)
            expected = frozenset(
                word_to_str(multiply(g, word_from_str(v, 2))) for v in base.vertices
            )
            assert moved.vertices == expected
            assert moved.min_weight == base.min_weight


class TestConfigurationConstraints:
    def test_impossible_center_pair(self):
        # the two flank vertices of a length-2 path can never be the whole
        # mean-set: the middle vertex always does at least as well
        g = path_graph(3)
        rng = random.Random(313)
        for _ in range(1000):
            masses = {v: rng.randint(0, 9) for v in g.vertices()}
            if sum(masses.values()) == 0:
                continue
            mu = AtomicMeasure.from_masses({v: m for v, m in masses.items() if m})
            res = mean_set_exact(g, mu, 2)
            assert res.vertices != frozenset([0, 2])

    def test_cut_point_weight_exclusion(self):
        from meansets.randomgen import random_cutpoint_graph

        rng = random.Random(99)
        for _ in range(40):
            g = random_cutpoint_graph(rng, 10)
            mu = random_measure(g.vertices(), rng)
            for v0 in g.cut_points():
                comps = g.components_without([v0])
                m0 = weight(g, mu, v0, 2)
                for i in range(len(comps)):
                    for j in range(i + 1, len(comps)):
                        for v1 in comps[i]:
                            for v2 in comps[j]:
                                assert not (
                                    m0 >= weight(g, mu, v1, 2)
                                    and m0 >= weight(g, mu, v2, 2)
                                )

    def test_mean_set_confined_by_cut_point(self):
        from meansets.randomgen import random_cutpoint_graph

        rng = random.Random(98)
        for _ in range(40):
            g = random_cutpoint_graph(rng, 10)
            mu = random_measure(g.vertices(), rng)
            res = mean_set_exact(g, mu, 2)
            for v0 in g.cut_points():
                comps = g.components_without([v0])
                touched = [
                    i for i, comp in enumerate(comps) if res.vertices & comp
                ]
                assert len(touched) <= 1


class TestIntegerLine:
    def test_symmetric_two_point(self):
        mu = AtomicMeasure.uniform([0, 1])
        res = line_mean_set(mu, 2)
        assert res.vertices == frozenset([0, 1])
        assert res.min_weight == Fraction(1, 2)
        # the off-support vertex loses clearly
        line = integer_line()
        assert weight(line, mu, -1, 2) == Fraction(5, 2)
        assert classical_mean_gap(mu) == Fraction(1, 2)

    def test_point_mass_gap_zero(self):
        assert classical_mean_gap(AtomicMeasure.point_mass(7)) == 0

    def test_random_measures_contract(self):
        from meansets.randomgen import random_integer_measure

        rng = random.Random(44)
        for _ in range(200):
            mu = random_integer_measure(rng)
            res = line_mean_set(mu, 2)
            assert 1 <= len(res.vertices) <= 2
            assert classical_mean_gap(mu) <= Fraction(1, 2)
            if len(res.vertices) == 2:
                a, b = res.sorted_vertices()
                assert b - a == 1

    def test_agrees_with_tree_solver_on_line(self):
        from meansets.randomgen import random_integer_measure

        rng = random.Random(45)
        line = integer_line()
        for _ in range(50):
            mu = random_integer_measure(rng, span=8)
            assert line_mean_set(mu, 2).vertices == mean_set_tree(line, mu, 2).vertices

    def test_abelian_right_translation(self):
        # on the integer line (an abelian group) translating the measure by k
        # translates the mean-set by k; documented counterpart of the left
        # shift property for the grid-like groups
        from meansets.randomgen import random_integer_measure

        rng = random.Random(47)
        for _ in range(50):
            mu = random_integer_measure(rng, span=10)
            k = rng.randint(-8, 8)
            moved = AtomicMeasure({v + k: w for v, w in mu.items()})
            base = line_mean_set(mu, 2)
            translated = line_mean_set(moved, 2)
            assert translated.vertices == frozenset(v + k for v in base.vertices)
            assert translated.min_weight == base.min_weight

    def test_class1_contains_atom_medians(self):
        # exploratory: every atom at which the cumulative mass crosses 1/2
        # minimizes the class-1 weight
        from meansets.randomgen import random_integer_measure

        rng = random.Random(46)
        for _ in range(100):
            mu = random_integer_measure(rng)
            res = line_mean_set(mu, 1)
            acc = Fraction(0)
            for v in mu.support():
                prev = acc
                acc += mu[v]
                if prev <= Fraction(1, 2) <= acc:
                    assert v in res.vertices


class TestGridRemark:
    def test_grid_mean_set_differs_from_coordinate_mean(self):
        # three corner atoms: the coordinatewise mean lands at (1, 1) but the
        # grid mean-set is the corner (0, 0)
        grid = integer_grid()
        mu = AtomicMeasure.uniform([(0, 0), (0, 3), (3, 0)])
        res = mean_set_bounded(grid, mu, 2)
        assert res.vertices == frozenset([(0, 0)])
        coordinate_mean = (1, 1)
        assert weight(grid, mu, coordinate_mean, 2) > res.min_weight


class TestDispatch:
    def test_explicit_goes_exact(self):
        g = path_graph(4)
        res = measure_mean_set(g, AtomicMeasure.uniform([0, 3]), 2)
        assert res.method == "exact"

    def test_implicit_tree_goes_descent(self):
        res = measure_mean_set(integer_line(), AtomicMeasure.uniform([0, 1]), 2)
        assert res.method == "descent"

    def test_implicit_non_tree_goes_bounded(self):
        res = measure_mean_set(integer_grid(), AtomicMeasure.point_mass((0, 0)), 2)
        assert res.method == "bounded"
