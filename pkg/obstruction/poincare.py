"""Spectral obstructions to embedding expanders into Hilbert space.

For a connected k-regular graph with second adjacency eigenvalue lambda2 and
any map f of its vertices into Euclidean space,

    mean over ordered pairs (u, v), u = v included, of |f(u) - f(v)|^2
        <= k / (k - lambda2) * mean over edges of |f(u) - f(v)|^2.

Pairs far apart in the graph therefore cannot all be sent far apart by a
map that moves edges little.
"""
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from spaces.clouds import PointCloud
from spaces.errors import ParameterError, ShapeError
from spaces.graphs import graph_metric
from spaces.metric import distance_distribution
from expander.certificates import spectral_gap


@dataclass
class PoincareReport:
    n: int
    k: int
    lambda2: float
    mean_pair_sq: float
    mean_edge_sq: float
    ratio: float
    bound: float
    degenerate: bool = False
    violated: bool = False

    def as_dict(self):
        return {
            'n': self.n,
            'k': self.k,
            'lambda2': self.lambda2,
            'mean_pair_sq': self.mean_pair_sq,
            'mean_edge_sq': self.mean_edge_sq,
            'ratio': self.ratio,
            'bound': self.bound,
            'degenerate': self.degenerate,
            'violated': self.violated,
        }


def poincare_bound(k, lambda2):
    gap = k - lambda2
    if gap <= 0:
        raise ParameterError("spectral gap must be positive, got %s" % gap)
    return k / gap


def poincare_ratio(graph, images, lambda2=None):
    """Compares pair and edge displacement of ``images`` (p = 2, one point
    per vertex) against the spectral bound. All-equal images give a
    degenerate report with ratio None."""
    if len(images) != graph.n:
        raise ShapeError("%d images for %d vertices" % (len(images), graph.n))
    if images.p != 2 or images.blocks:
        raise ParameterError("Poincare ratios are taken in Euclidean space (p = 2)")
    if lambda2 is None:
        lambda2, _ = spectral_gap(graph)
    k = graph.degrees()[0]
    bound = poincare_bound(k, lambda2)
    x = images.points
    centered = x - x.mean(axis=0)
    # sum over ordered pairs of |f(u) - f(v)|^2 = 2n * sum |f(v) - mean|^2
    mean_pair_sq = 2 * graph.n * float((centered ** 2).sum()) / graph.n ** 2
    u, v = np.array(graph.edges).T
    mean_edge_sq = float(((x[u] - x[v]) ** 2).sum(axis=1).mean())
    if np.all(x == x[0]):
        return PoincareReport(graph.n, k, lambda2, 0.0, 0.0, None, bound, degenerate=True)
    ratio = mean_pair_sq / mean_edge_sq
    return PoincareReport(graph.n, k, lambda2, mean_pair_sq, mean_edge_sq, ratio, bound,
                          violated=ratio > bound + settings.POINCARE_TOLERANCE)


def random_euclidean_images(graph, dimension, seed):
    """Gaussian coordinates in R^dimension, one point per vertex."""
    if dimension < 1:
        raise ParameterError("dimension must be at least 1")
    rng = np.random.default_rng(seed)
    return PointCloud(rng.standard_normal((graph.n, dimension)), p=2)


@dataclass
class ModuliConstraint:
    n: int
    t: float
    diameter: float
    far_fraction: float
    bound: float
    rho1_cap: float = None

    @property
    def vacuous(self):
        return self.rho1_cap is None


def far_fraction(space, t):
    """Share of the n^2 ordered pairs (coincident ones included) at distance >= t."""
    n = len(space)
    return sum(count for d, count in distance_distribution(space) if d >= t) / n ** 2


def moduli_cap(family, lipschitz, t):
    """Upper bounds on rho1(t) for maps with Lipschitz constant ``lipschitz``.

    ``family`` holds (graph, certificate) pairs. Any such map sends some pair
    at distance >= t within rho1_cap of each other, since the far pairs
    alone carry far_fraction * rho1^2 of the pair mean.
    """
    if not lipschitz > 0:
        raise ParameterError("Lipschitz constant must be positive")
    constraints = []
    for graph, certificate in family:
        space = graph_metric(graph)
        bound = poincare_bound(graph.degrees()[0], certificate.lambda2)
        fraction = far_fraction(space, t)
        cap = math.sqrt(bound * lipschitz ** 2 / fraction) if fraction > 0 else None
        constraints.append(ModuliConstraint(graph.n, t, space.diameter, fraction, bound, cap))
    return constraints
