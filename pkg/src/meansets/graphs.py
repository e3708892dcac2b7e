"""Locally finite graphs: explicit adjacency or implicit neighbor oracles.

Vertex ids are opaque hashable values with a total order (ints for explicit
graphs, strings for Cayley graphs, tuples for grids).  Distances are graph
geodesics computed by breadth-first search with a memoized per-source
frontier, so repeated queries from the same source pay for each BFS layer
once.  Implicit graphs may carry an exact distance oracle that bypasses BFS
entirely.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable

from .errors import GraphFormatError, InfiniteGraphError, UnreachableVertexError

VertexId = Hashable


class _BfsScan:
    """Incremental BFS state from a single source."""

    __slots__ = ("dist", "frontier", "depth")

    def __init__(self, source):
        self.dist = {source: 0}
        self.frontier = [source]
        self.depth = 0


class Graph:
    """Connected, undirected, locally finite graph.

    Immutable after construction; the distance cache is an internal
    memoization detail and does not affect the observable behaviour, so
    sharing a graph across workers is safe as long as each worker keeps its
    own instance (or access is serialized).
    """

    is_explicit = False
    is_tree = False

    def __init__(self):
        self._scans: dict = {}

    def neighbors(self, v) -> tuple:
        raise NotImplementedError

    def _scan_from(self, source) -> _BfsScan:
        scan = self._scans.get(source)
        if scan is None:
            scan = self._scans[source] = _BfsScan(source)
        return scan

    def _expand(self, scan: _BfsScan) -> bool:
        """Grow the scan by one BFS layer; False when the component is exhausted."""
        if not scan.frontier:
            return False
        dist = scan.dist
        nxt = []
        depth = scan.depth + 1
        for v in scan.frontier:
            for u in self.neighbors(v):
                if u not in dist:
                    dist[u] = depth
                    nxt.append(u)
        scan.frontier = nxt
        scan.depth = depth
        return True

    def distance(self, u, v) -> int:
        """Geodesic distance between u and v."""
        if u == v:
            return 0
        scan = self._scan_from(u)
        while v not in scan.dist:
            if not self._expand(scan):
                raise UnreachableVertexError(f"no path from {u!r} to {v!r}")
        return scan.dist[v]

    def ball(self, v, r: int) -> set:
        """All vertices at distance <= r from v."""
        if r < 0:
            raise ValueError("radius must be nonnegative")
        scan = self._scan_from(v)
        while scan.depth < r and self._expand(scan):
            pass
        return {u for u, d in scan.dist.items() if d <= r}


class ExplicitGraph(Graph):
    """Finite graph given by its full adjacency.

    The constructor rejects self-loops and parallel edges (they never change
    distances) and requires connectivity.
    """

    is_explicit = True

    def __init__(self, edges: Iterable[tuple]):
        super().__init__()
        adj: dict = {}
        seen = set()
        for u, v in edges:
            if u == v:
                raise GraphFormatError(f"self-loop at {u!r}")
            key = (u, v) if not v < u else (v, u)
            if key in seen:
                raise GraphFormatError(f"parallel edge {u!r} {v!r}")
            seen.add(key)
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        if not adj:
            raise GraphFormatError("graph has no edges and no vertices")
        self._adj = {v: tuple(sorted(ns)) for v, ns in sorted(adj.items())}
        self._vertices = tuple(sorted(self._adj))
        self._n_edges = len(seen)
        if len(self.ball(self._vertices[0], len(self._vertices))) != len(self._vertices):
            raise GraphFormatError("graph is not connected")

    @classmethod
    def single_vertex(cls, v) -> "ExplicitGraph":
        g = object.__new__(cls)
        Graph.__init__(g)
        g._adj = {v: ()}
        g._vertices = (v,)
        g._n_edges = 0
        return g

    def neighbors(self, v) -> tuple:
        return self._adj[v]

    def vertices(self) -> tuple:
        return self._vertices

    def edges(self) -> list[tuple]:
        return [(u, v) for u in self._vertices for v in self._adj[u] if u < v]

    def __len__(self) -> int:
        return len(self._vertices)

    @property
    def is_tree(self) -> bool:
        return self._n_edges == len(self._vertices) - 1

    def is_cut_point(self, v) -> bool:
        """True iff deleting v disconnects the graph."""
        rest = [u for u in self._vertices if u != v]
        if not rest:
            return False
        reached = _reach_avoiding(self._adj, rest[0], {v})
        return len(reached) != len(rest)

    def components_without(self, cut: Iterable) -> list[set]:
        """Connected components of the graph with `cut` deleted, sorted by min vertex."""
        cut = set(cut)
        todo = [v for v in self._vertices if v not in cut]
        seen: set = set()
        comps = []
        for v in todo:
            if v in seen:
                continue
            comp = _reach_avoiding(self._adj, v, cut)
            seen |= comp
            comps.append(comp)
        return sorted(comps, key=lambda c: min(c))

    def cut_points(self) -> list:
        return [v for v in self._vertices if self.is_cut_point(v)]


def _reach_avoiding(adj: dict, start, banned: set) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u not in banned and u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


class ImplicitGraph(Graph):
    """Infinite (or just unenumerated) graph given by a neighbor oracle.

    Connectivity and symmetric adjacency are a construction contract, not a
    checked property: they are not decidable from the oracle.  An exact
    `distance_fn` may be supplied to bypass BFS.
    """

    def __init__(
        self,
        neighbor_fn: Callable,
        distance_fn: Callable | None = None,
        is_tree: bool = False,
        name: str = "implicit",
    ):
        super().__init__()
        self._neighbor_fn = neighbor_fn
        self._distance_fn = distance_fn
        self.is_tree = is_tree
        self.name = name

    def neighbors(self, v) -> tuple:
        return tuple(self._neighbor_fn(v))

    def distance(self, u, v) -> int:
        if self._distance_fn is not None:
            return self._distance_fn(u, v)
        return super().distance(u, v)

    def is_cut_point(self, v):
        raise InfiniteGraphError("cut-point test needs a finite explicit graph")

    def components_without(self, cut):
        raise InfiniteGraphError("component split needs a finite explicit graph")


def integer_line() -> ImplicitGraph:
    """The graph on all integers with edges n -- n+1."""
    return ImplicitGraph(
        lambda n: (n - 1, n + 1),
        distance_fn=lambda a, b: abs(a - b),
        is_tree=True,
        name="integer-line",
    )


def integer_grid() -> ImplicitGraph:
    """The planar grid on integer pairs with unit steps (L1 geodesics)."""
    return ImplicitGraph(
        lambda p: ((p[0] - 1, p[1]), (p[0] + 1, p[1]), (p[0], p[1] - 1), (p[0], p[1] + 1)),
        distance_fn=lambda a, b: abs(a[0] - b[0]) + abs(a[1] - b[1]),
        name="integer-grid",
    )


def parse_graph(text: str) -> ExplicitGraph:
    """Parse the edge-list format: one `u v` pair of nonnegative integer ids
    per line, `#` comments and blank lines ignored."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: ids must be integers, got {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: ids must be nonnegative")
        edges.append((u, v))
    return ExplicitGraph(edges)


def load_graph(path) -> ExplicitGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def path_graph(n: int) -> ExplicitGraph:
    """Path 0 -- 1 -- ... -- n-1."""
    return ExplicitGraph((i, i + 1) for i in range(n - 1))


def cycle_graph(n: int) -> ExplicitGraph:
    return ExplicitGraph([(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> ExplicitGraph:
    return ExplicitGraph((i, j) for i in range(n) for j in range(i + 1, n))


def star_graph(n_leaves: int) -> ExplicitGraph:
    """Center 0 joined to leaves 1..n_leaves."""
    return ExplicitGraph((0, i) for i in range(1, n_leaves + 1))
