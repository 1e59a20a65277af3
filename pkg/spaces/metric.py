import logging
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from .errors import ShapeError, ParameterError

logger = logging.getLogger(__name__)


@dataclass
class ValidationReport:
    """Outcome of validate_metric. Violations are (kind, indices) tuples."""
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __str__(self):
        if self.ok:
            return "ok"
        return "; ".join("%s at %s" % (kind, idx) for kind, idx in self.violations)


def _is_integral(matrix):
    return np.issubdtype(matrix.dtype, np.integer) or \
        bool(np.all(np.isfinite(matrix)) and np.all(matrix == np.round(matrix)))


def validate_metric(matrix, tolerance=None):
    """Checks the four metric axioms and lists every violation.

    Integer matrices are checked exactly; real matrices within ``tolerance``
    (settings.METRIC_TOLERANCE by default). Triangle violations are reported
    as (i, j, k) meaning d(i, j) > d(i, k) + d(k, j).
    """
    d = np.asarray(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ShapeError("distance matrix must be square, got shape %s" % (d.shape,))
    if tolerance is None:
        tolerance = settings.METRIC_TOLERANCE
    if _is_integral(d):
        tolerance = 0
    report = ValidationReport()
    n = d.shape[0]
    if not np.all(np.isfinite(d)):
        for i, j in zip(*np.nonzero(~np.isfinite(d))):
            report.violations.append(('non-finite', (int(i), int(j))))
        return report
    for i in range(n):
        if abs(d[i, i]) > tolerance:
            report.violations.append(('nonzero diagonal', (i, i)))
    for i, j in zip(*np.nonzero(np.triu(np.abs(d - d.T) > tolerance, 1))):
        report.violations.append(('asymmetry', (int(i), int(j))))
    flat = ~np.eye(n, dtype=bool) & (d <= tolerance)
    for i, j in zip(*np.nonzero(flat)):
        if i < j or not flat[j, i]:
            report.violations.append(('non-positive distance', (int(i), int(j))))
    for k in range(n):
        # via[i, j] = d(i, k) + d(k, j)
        via = d[:, k][:, None] + d[k, :][None, :]
        for i, j in zip(*np.nonzero(d > via + tolerance)):
            if i != j and k not in (i, j):
                report.violations.append(('triangle', (int(i), int(j), k)))
    return report


class FiniteMetricSpace:
    """n labelled points with an exact symmetric distance matrix.

    The matrix is stored read-only; instances are shared freely.
    """
    def __init__(self, labels, dist, validate=True, tolerance=None):
        labels = tuple(str(label) for label in labels)
        dist = np.array(dist, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise ShapeError("distance matrix must be square, got shape %s" % (dist.shape,))
        if len(labels) != dist.shape[0]:
            raise ShapeError("%d labels for %d points" % (len(labels), dist.shape[0]))
        if len(set(labels)) != len(labels):
            raise ParameterError("point labels must be unique")
        if validate:
            report = validate_metric(dist, tolerance)
            if not report.ok:
                raise ParameterError("not a metric: %s" % report)
        dist.setflags(write=False)
        self.labels = labels
        self.dist = dist

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return "<FiniteMetricSpace n=%d diameter=%s>" % (len(self), self.diameter)

    @property
    def diameter(self):
        return float(self.dist.max()) if len(self) else 0.0

    def pairs(self):
        """Unordered pairs (i, j), i < j, in lexicographic order."""
        n = len(self)
        return [(i, j) for i in range(n) for j in range(i + 1, n)]

    def pair_distances(self):
        iu = np.triu_indices(len(self), 1)
        return self.dist[iu]

    def is_integral(self):
        return _is_integral(self.dist)

    def scaled(self, factor):
        if factor <= 0:
            raise ParameterError("scale factor must be positive")
        return FiniteMetricSpace(self.labels, self.dist * factor, validate=False)


def restrict(space, indices):
    indices = list(indices)
    if len(set(indices)) != len(indices):
        raise ParameterError("restriction indices must be distinct")
    sub = space.dist[np.ix_(indices, indices)]
    return FiniteMetricSpace([space.labels[i] for i in indices], sub, validate=False)


def ball_truncation(space, center, radius):
    """The closed ball B(center, radius) as a subspace, in index order."""
    inside = np.nonzero(space.dist[center] <= radius)[0]
    return restrict(space, inside)


def distance_distribution(space):
    """Ordered-pair counts per distance, coincident pairs included."""
    values, counts = np.unique(space.dist, return_counts=True)
    return [(float(v), int(c)) for v, c in zip(values, counts)]


@dataclass(frozen=True)
class GeometryProfile:
    radii: tuple
    counts: tuple


def bounded_geometry_profile(space, radii):
    """M(r): the largest number of points in a closed ball of radius r."""
    radii = [float(r) for r in radii]
    if any(r < 0 for r in radii):
        raise ParameterError("radii must be nonnegative")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ParameterError("radii must be strictly increasing")
    d = space.dist
    counts = tuple(int((d <= r).sum(axis=1).max()) for r in radii)
    return GeometryProfile(tuple(radii), counts)


def disjoint_union(spaces):
    """Glues the spaces into one, each an isometric block.

    Points of blocks i and j (1-based, i != j) are at distance R_i + R_j with
    R_i = diam(block i) + i. Internal distances never exceed diam(block i) <
    R_i, so cross distances dominate and the triangle inequality holds.
    """
    spaces = list(spaces)
    if not spaces:
        raise ParameterError("disjoint union of no spaces")
    if len(spaces) == 1:
        return spaces[0]
    sizes = [len(s) for s in spaces]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    reach = [s.diameter + i for i, s in enumerate(spaces, start=1)]
    block = np.repeat(np.arange(len(spaces)), sizes)
    r = np.asarray(reach)[block]
    dist = r[:, None] + r[None, :]
    labels = []
    for i, s in enumerate(spaces):
        lo, hi = offsets[i], offsets[i + 1]
        dist[lo:hi, lo:hi] = s.dist
        labels.extend("%d:%s" % (i + 1, label) for label in s.labels)
    logger.debug("disjoint union of %d blocks, reaches %s", len(spaces), reach)
    return FiniteMetricSpace(labels, dist, validate=False)
