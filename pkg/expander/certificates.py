import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from django.conf import settings

from spaces.errors import ConnectivityError, InvariantViolation, ScaleError
from utils.linalg import jacobi_eigh
from .regular import RegularGraph

logger = logging.getLogger(__name__)

EXACT = 'exact'
SPECTRAL = 'spectral'

# masks handled per numpy batch in the exhaustive scan
CHUNK = 1 << 18


@dataclass(frozen=True)
class ExpansionCertificate:
    n: int
    k: int
    h: Fraction
    witness: tuple
    boundary: int
    lambda2: float
    gap: float
    method: str

    @property
    def lower_bound(self):
        return float(self.h)

    def cheeger_bounds(self):
        """(gap/2, sqrt(2k*gap)): the two-sided Cheeger inequality for h."""
        return self.gap / 2, math.sqrt(max(0.0, 2 * self.k * self.gap))

    def check(self, tolerance=None):
        if tolerance is None:
            tolerance = settings.CHEEGER_INEQUALITY_TOLERANCE
        if not 0 < len(self.witness) <= self.n / 2:
            raise InvariantViolation("witness size %d outside (0, n/2]" % len(self.witness))
        if self.method == EXACT:
            lower, upper = self.cheeger_bounds()
            if not lower - tolerance <= float(self.h) <= upper + tolerance:
                raise InvariantViolation("Cheeger inequality fails: %s <= %s <= %s"
                                         % (lower, float(self.h), upper))
            if Fraction(self.boundary, len(self.witness)) != self.h:
                raise InvariantViolation("witness does not attain h = %s" % self.h)
        return self

    def as_dict(self):
        return {
            'h_num': self.h.numerator,
            'h_den': self.h.denominator,
            'witness': list(self.witness),
            'lambda2': self.lambda2,
            'gap': self.gap,
            'method': self.method,
        }


def _regular(graph):
    return graph if isinstance(graph, RegularGraph) else RegularGraph.from_graph(graph)


def boundary_size(graph, subset):
    inside = set(subset)
    return sum((u in inside) != (v in inside) for u, v in graph.edges)


def _certificate(graph, h, witness, lambda2, method):
    return ExpansionCertificate(graph.n, graph.k, h, tuple(witness),
                                boundary_size(graph, witness), float(lambda2),
                                float(graph.k - lambda2), method).check()


def cut_sizes(graph, masks):
    """|boundary(S)| for each bitmask S over the vertices."""
    cut = np.zeros(len(masks), dtype=np.int64)
    for u, v in graph.edges:
        cut += ((masks >> u) ^ (masks >> v)) & 1
    return cut


def popcount(masks):
    count = np.zeros(len(masks), dtype=np.int64)
    m = masks.copy()
    while m.any():
        count += m & 1
        m >>= 1
    return count


def minimum_cut_ratio(graph):
    """Exhaustive h(G).

    Every set S avoiding the last vertex stands for the bipartition
    (S, complement), 2**(n-1) - 1 of them; the ratio of a bipartition is its
    cut over the smaller side. Ties go to the smallest mask.
    """
    n = graph.n
    best = None
    total = 1 << (n - 1)
    for start in range(1, total, CHUNK):
        masks = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        cut = cut_sizes(graph, masks)
        size = popcount(masks)
        small = np.minimum(size, n - size)
        i = int(np.argmin(cut / small))
        candidate = Fraction(int(cut[i]), int(small[i]))
        if best is None or candidate < best[0]:
            best = candidate, int(masks[i]), int(size[i])
    h, mask, size = best
    inside = 2 * size <= n
    return h, [v for v in range(n) if bool(mask >> v & 1) == inside]


def check_spectrum(graph, values, tolerance=None):
    """Eigenvalues of a k-regular adjacency matrix sum to 0 and their squares to nk.

    The tolerance is absolute up to nk = 100 and relative beyond.
    """
    if tolerance is None:
        tolerance = settings.SPECTRUM_STRUCTURE_TOLERANCE
    tolerance *= max(1.0, graph.n * graph.k / 100)
    trace = float(values.sum())
    squares = float((values * values).sum())
    if abs(trace) > tolerance or abs(squares - graph.n * graph.k) > tolerance:
        raise InvariantViolation("eigenvalue sum %.3e and square sum %.12g, expected 0 and %d"
                                 % (trace, squares, graph.n * graph.k))
    return values


def spectrum(graph):
    """Adjacency eigenvalues (decreasing) and eigenvectors of a connected regular graph."""
    level = graph.distances_from(0)
    if -1 in level:
        raise ConnectivityError(0, level.index(-1))
    values, vectors = jacobi_eigh(graph.adjacency_matrix())
    return check_spectrum(graph, values), vectors


def spectral_gap(graph):
    """(lambda2, k - lambda2) of a connected regular graph."""
    graph = _regular(graph)
    values, _ = spectrum(graph)
    lambda2 = float(values[1]) if graph.n > 1 else float(values[0])
    return lambda2, graph.k - lambda2


def cheeger_exact(graph):
    graph = _regular(graph)
    if graph.n > settings.EXACT_CHEEGER_MAX_VERTICES:
        raise ScaleError("exact Cheeger constant needs n <= %d, got %d; use the spectral "
                         "bound instead" % (settings.EXACT_CHEEGER_MAX_VERTICES, graph.n))
    if graph.n < 2:
        raise ScaleError("Cheeger constant needs at least two vertices")
    lambda2, _ = spectral_gap(graph)
    h, witness = minimum_cut_ratio(graph)
    logger.debug("exact h = %s for %r", h, graph)
    return _certificate(graph, h, witness, lambda2, EXACT)


def sweep_witness(graph, vector):
    """Best sweep cut of ``vector`` among its first n/2 prefixes."""
    order = [int(v) for v in np.argsort(vector, kind='stable')]
    best = None
    for size in range(1, graph.n // 2 + 1):
        prefix = order[:size]
        ratio = Fraction(boundary_size(graph, prefix), size)
        if best is None or ratio < best[0]:
            best = ratio, sorted(prefix)
    return best[1]


def cheeger_spectral(graph):
    """Certificate whose h is the lower bound (k - lambda2)/2 rounded down to 1e-9.

    The witness is the best sweep cut of the second eigenvector.
    """
    graph = _regular(graph)
    values, vectors = spectrum(graph)
    lambda2 = float(values[1])
    h = Fraction(math.floor(max(0.0, graph.k - lambda2) / 2 * 10 ** 9), 10 ** 9)
    return _certificate(graph, h, sweep_witness(graph, vectors[:, 1]), lambda2, SPECTRAL)


def expansion_certificate(graph):
    graph = _regular(graph)
    if graph.n <= settings.EXACT_CHEEGER_MAX_VERTICES:
        return cheeger_exact(graph)
    return cheeger_spectral(graph)
