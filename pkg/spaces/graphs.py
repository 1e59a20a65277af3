import logging
from collections import deque

import numpy as np

from .errors import ConnectivityError, ParameterError, ShapeError
from .metric import FiniteMetricSpace

logger = logging.getLogger(__name__)


class SimpleGraph:
    """Undirected graph on vertices 0..n-1 without loops or multi-edges."""

    def __init__(self, n, edges):
        n = int(n)
        if n < 1:
            raise ShapeError("a graph needs at least one vertex")
        adjacency = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ShapeError("edge (%d, %d) outside vertex range 0..%d" % (u, v, n - 1))
            if u == v:
                raise ParameterError("self-loop at vertex %d" % u)
            if v in adjacency[u]:
                raise ParameterError("edge (%d, %d) listed twice" % (min(u, v), max(u, v)))
            adjacency[u].add(v)
            adjacency[v].add(u)
        self.n = n
        self.adjacency = tuple(tuple(sorted(neighbors)) for neighbors in adjacency)

    def __len__(self):
        return self.n

    def __repr__(self):
        return "<%s n=%d edges=%d>" % (self.__class__.__name__, self.n, self.edge_count)

    def __eq__(self, other):
        return isinstance(other, SimpleGraph) and \
            (self.n, self.adjacency) == (other.n, other.adjacency)

    def __hash__(self):
        return hash((self.n, self.adjacency))

    @property
    def edges(self):
        """Each edge once as (u, v) with u < v, lexicographic."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    @property
    def edge_count(self):
        return sum(len(a) for a in self.adjacency) // 2

    def degrees(self):
        return [len(a) for a in self.adjacency]

    def adjacency_matrix(self):
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def distances_from(self, source):
        """BFS levels from ``source``; -1 marks unreachable vertices."""
        level = [-1] * self.n
        level[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self.adjacency[u]:
                if level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level

    def is_connected(self):
        return min(self.distances_from(0)) >= 0


def graph_metric(graph):
    """Shortest-path metric, one BFS per source vertex."""
    rows = []
    for u in range(graph.n):
        level = graph.distances_from(u)
        if min(level) < 0:
            raise ConnectivityError(u, level.index(-1))
        rows.append(level)
    logger.debug("graph metric of %r computed", graph)
    return FiniteMetricSpace([str(v) for v in range(graph.n)],
                             np.array(rows, dtype=np.int64), validate=False)


def cycle_graph(n):
    if n < 3:
        raise ParameterError("a cycle needs at least 3 vertices")
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n):
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return SimpleGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def petersen_graph():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SimpleGraph(10, outer + spokes + inner)
