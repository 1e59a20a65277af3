import logging

from django.conf import settings

from spaces.errors import ParameterError, ResamplingExhausted
from spaces.graphs import SimpleGraph
from utils.rng import SplitMix64

logger = logging.getLogger(__name__)


class RegularGraph(SimpleGraph):
    """Simple graph in which every vertex has exactly k neighbors."""

    def __init__(self, n, edges, k=None):
        super().__init__(n, edges)
        degrees = set(self.degrees())
        if len(degrees) != 1:
            raise ParameterError("graph is not regular: degrees %s" % sorted(degrees))
        self.k = degrees.pop()
        if k is not None and k != self.k:
            raise ParameterError("graph is %d-regular, expected %d" % (self.k, k))

    def __repr__(self):
        return "<RegularGraph n=%d k=%d>" % (self.n, self.k)

    @classmethod
    def from_graph(cls, graph):
        return cls(graph.n, graph.edges)


def random_regular_graph(n, k, seed):
    """Pairing model with rejection.

    Each vertex gets k half-edges; a SplitMix64 shuffle pairs them off and
    the sample is discarded if it has a loop or a repeated edge.
    """
    if k < 3:
        raise ParameterError("degree must be at least 3, got %d" % k)
    if k >= n:
        raise ParameterError("degree %d must be below the order %d" % (k, n))
    if n * k % 2:
        raise ParameterError("n*k must be even: %d*%d = %d" % (n, k, n * k))
    rng = SplitMix64(seed)
    half_edges = [v for v in range(n) for _ in range(k)]
    for sample in range(1, settings.PAIRING_MAX_SAMPLES + 1):
        points = rng.shuffle(list(half_edges))
        edges = set()
        for u, v in zip(points[::2], points[1::2]):
            edge = (min(u, v), max(u, v))
            if u == v or edge in edges:
                break
            edges.add(edge)
        else:
            logger.debug("pairing model: n=%d k=%d accepted sample %d", n, k, sample)
            return RegularGraph(n, sorted(edges), k)
    raise ResamplingExhausted("no simple %d-regular graph on %d vertices in %d samples"
                              % (k, n, settings.PAIRING_MAX_SAMPLES))
