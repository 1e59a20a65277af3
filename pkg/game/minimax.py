"""The far-pair game on a finite metric space.

One player picks a probability measure mu on the pairs at distance at least
a threshold, the other a 1-Lipschitz map into L1, paid the mu-average
displacement. On n points the maps into L1 are exactly the nonnegative cut
combinations dominated by d, so both sides are linear programs over the cut
system and the value is their common optimum.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from spaces.clouds import PointCloud
from spaces.errors import InvariantViolation, ParameterError, ScaleError, ThresholdError
from .cuts import CutSystem
from .simplex import LE, OPTIMAL, LinearProgram, simplex_solve

logger = logging.getLogger(__name__)


@dataclass
class MeasureCertificate:
    threshold: float
    pairs: list
    mu: np.ndarray
    value: float
    weights: np.ndarray = None

    def check(self, space, tolerance=None):
        if tolerance is None:
            tolerance = settings.CERTIFICATE_TOLERANCE
        if len(self.mu) != len(self.pairs) or not len(self.pairs):
            raise InvariantViolation("measure and pair list disagree")
        if (self.mu < 0).any() or abs(self.mu.sum() - 1) > tolerance:
            raise InvariantViolation("mu is not a probability vector (sum %r)" % self.mu.sum())
        for u, v in self.pairs:
            if not is_far(space.dist[u, v], self.threshold):
                raise InvariantViolation("pair (%d, %d) is closer than %s" % (u, v, self.threshold))
        if not -tolerance <= self.value <= space.diameter * (1 + tolerance):
            raise InvariantViolation("value %r outside [0, diameter]" % self.value)
        return self

    def as_dict(self):
        return {
            'threshold': self.threshold,
            'pairs': [list(p) for p in self.pairs],
            'mu': [float(m) for m in self.mu],
            'value': float(self.value),
        }


def is_far(distance, threshold):
    return distance >= threshold - settings.METRIC_TOLERANCE * max(1.0, abs(threshold))


def far_pairs(space, threshold):
    """B(threshold): unordered pairs u < v with d(u, v) >= threshold."""
    n = len(space)
    return [(u, v) for u in range(n) for v in range(u + 1, n)
            if is_far(space.dist[u, v], threshold)]


def _measure(pairs, mu):
    if isinstance(mu, dict):
        return np.array([mu.get(p, 0.0) for p in pairs], dtype=float)
    return np.asarray(mu, dtype=float)


def max_l1_average(space, pairs, mu):
    """sup of sum mu(u, v) |f(u) - f(v)|_1 over 1-Lipschitz f into L1.

    ``mu`` is a weight per pair of ``pairs`` (or a dict keyed by pair).
    Returns the value and the optimal cut weights.
    """
    system = CutSystem(len(space))
    mu = _measure(pairs, mu)
    if (mu < 0).any():
        raise ParameterError("measure must be nonnegative")
    index = system.pair_index()
    rows = [index[(min(u, v), max(u, v))] for u, v in pairs]
    payoff = mu @ system.incidence[rows]
    lp = LinearProgram(payoff, system.incidence, [LE] * len(system.pairs),
                       [space.dist[u, v] for u, v in system.pairs])
    result = simplex_solve(lp)
    if result.status != OPTIMAL:
        raise InvariantViolation("cut LP ended %s" % result.status)
    return result.objective, result.x


def _check_size(space):
    if len(space) > settings.MINIMAX_MAX_POINTS:
        raise ScaleError("the measure game needs at most %d points, got %d"
                         % (settings.MINIMAX_MAX_POINTS, len(space)))


def _far_or_raise(space, threshold):
    if not threshold > 0:
        raise ParameterError("threshold must be positive")
    pairs = far_pairs(space, threshold)
    if not pairs:
        raise ThresholdError("no pair at distance >= %s; the largest distance is %s"
                             % (threshold, space.diameter))
    return pairs


def minimax_measure(space, threshold):
    """The optimal measure mu* on B(threshold) and the game value D.

    Solved as the max-min program: maximize z over cut weights lambda >= 0
    with z <= d_lambda(b) for every far pair b and d_lambda <= d on every
    pair. mu* is the dual of the far-pair rows. Returns a checked
    MeasureCertificate carrying the optimal lambda as ``weights``.
    """
    _check_size(space)
    pairs = _far_or_raise(space, threshold)
    system = CutSystem(len(space))
    index = system.pair_index()
    far = system.incidence[[index[p] for p in pairs]]
    k, cuts = len(pairs), len(system)
    matrix = np.zeros((k + len(system.pairs), 1 + cuts))
    matrix[:k, 0] = 1.0
    matrix[:k, 1:] = -far
    matrix[k:, 1:] = system.incidence
    rhs = np.concatenate([np.zeros(k), [space.dist[u, v] for u, v in system.pairs]])
    lp = LinearProgram(np.eye(1 + cuts)[0], matrix, [LE] * len(rhs), rhs,
                       names=['z'] + ['cut%d' % c for c in range(cuts)])
    result = simplex_solve(lp)
    if result.status != OPTIMAL:
        raise InvariantViolation("measure game LP ended %s" % result.status)
    mu = np.clip(result.duals[:k], 0.0, None)
    if mu.sum() <= 0:
        raise InvariantViolation("measure game returned a zero measure")
    mu = mu / mu.sum()
    value = result.objective
    certificate = MeasureCertificate(float(threshold), pairs, mu, value, result.x[1:])
    certificate.check(space)

    best, _ = max_l1_average(space, pairs, mu)
    tolerance = settings.CERTIFICATE_TOLERANCE
    if abs(best - value) > tolerance * (1 + abs(value)):
        raise InvariantViolation("min-max %.12g differs from max-min %.12g" % (best, value))
    logger.debug("measure game at threshold %s: D = %.12g on %d far pairs",
                 threshold, value, k)
    return certificate


def separating_map(space, threshold, certificate=None):
    """An optimal 1-Lipschitz map into l1 for the far-pair game.

    Every far pair is moved at least D apart, D the game value.
    """
    if certificate is None or certificate.weights is None:
        certificate = minimax_measure(space, threshold)
    system = CutSystem(len(space))
    return PointCloud(system.coordinates(certificate.weights), p=1)


def lipschitz_constant(space, points, p=1):
    """max over pairs of |f(u) - f(v)|_p / d(u, v)."""
    if len(space) < 2:
        return 0.0
    image = PointCloud(points, p=p).distance_matrix()
    iu = np.triu_indices(len(space), 1)
    return float((image[iu] / space.dist[iu]).max())


def cut_sample_maps(space, count, seed, cuts_per_map=None):
    """Random 1-Lipschitz maps into l1 built from random cuts.

    Each map uses ``cuts_per_map`` random nontrivial cuts (default 2n) with
    exponential weights, rescaled so that its Lipschitz constant is exactly 1.
    Maps are PointClouds with p = 1, one coordinate per cut.
    """
    if count < 1:
        raise ParameterError("count must be at least 1")
    n = len(space)
    if n < 2:
        raise ParameterError("cut maps need at least two points")
    if cuts_per_map is None:
        cuts_per_map = 2 * n
    rng = np.random.default_rng(seed)
    maps = []
    for _ in range(count):
        sides = rng.integers(0, 2, size=(n, cuts_per_map))
        # keep cuts with both sides nonempty
        sides = sides[:, (sides.min(axis=0) == 0) & (sides.max(axis=0) == 1)]
        if not sides.shape[1]:
            sides = np.zeros((n, 1))
            sides[0, 0] = 1
        points = sides * rng.exponential(size=sides.shape[1])[None, :]
        points = points / lipschitz_constant(space, points)
        maps.append(PointCloud(points, p=1))
    return maps


def harmonic_weights(orders):
    """1/(K n^2) for each order n, K = sum 1/n^2; they add up to 1."""
    orders = np.asarray(orders, dtype=float)
    inverse = 1 / orders ** 2
    return inverse / inverse.sum()


def l1_direct_sum(clouds, weights):
    """Concatenated coordinates, block i scaled by weights[i], under the l1 norm."""
    if not clouds or len(clouds) != len(weights):
        raise ParameterError("need one weight per map")
    sizes = {len(c) for c in clouds}
    if len(sizes) != 1:
        raise ParameterError("maps must have the same domain size")
    if any(c.p != 1 for c in clouds):
        raise ParameterError("direct sums are formed from maps into l1")
    return PointCloud(np.hstack([w * c.points for c, w in zip(clouds, weights)]), p=1)
