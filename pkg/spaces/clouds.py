import math

import numpy as np

from .errors import ShapeError, ParameterError
from .metric import FiniteMetricSpace


def parse_exponent(p):
    """Accepts a real p >= 1 or the infinity markers 'inf' / math.inf."""
    if isinstance(p, str):
        if p.strip().lower() in ('inf', 'infinity'):
            return math.inf
        try:
            p = float(p)
        except ValueError:
            raise ParameterError("norm exponent must be a number or 'inf', got %r" % p)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ParameterError("norm exponent must satisfy p >= 1, got %s" % p)
    return p


def format_exponent(p):
    return 'inf' if math.isinf(p) else p


def norms(vectors, p):
    """p-norms of the rows of ``vectors``."""
    a = np.abs(np.asarray(vectors, dtype=float))
    if math.isinf(p):
        return a.max(axis=-1) if a.shape[-1] else np.zeros(a.shape[:-1])
    if p == 1:
        return a.sum(axis=-1)
    if p == 2:
        return np.sqrt((a * a).sum(axis=-1))
    return (a ** p).sum(axis=-1) ** (1.0 / p)


class PointCloud:
    """Finite set of coordinate vectors with a norm.

    ``blocks`` (optional) splits the coordinates into consecutive groups; the
    norm is then the p-sum of the Euclidean norms of the groups. Without
    blocks it is the plain p-norm. Points may coincide: images of
    non-injective maps are clouds too.
    """
    def __init__(self, points, p=2, blocks=None):
        points = np.array(points, dtype=float)
        if points.ndim != 2:
            raise ShapeError("points must form a 2-d array, got shape %s" % (points.shape,))
        if points.shape[1] < 1:
            raise ShapeError("points must have dimension at least 1")
        if not np.all(np.isfinite(points)):
            raise ParameterError("point coordinates must be finite")
        self.p = parse_exponent(p)
        if blocks is not None:
            blocks = tuple(int(b) for b in blocks)
            if any(b < 1 for b in blocks) or sum(blocks) != points.shape[1]:
                raise ShapeError("blocks %s do not partition %d coordinates"
                                 % (blocks, points.shape[1]))
        points.setflags(write=False)
        self.points = points
        self.blocks = blocks

    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return "<PointCloud n=%d dim=%d p=%s%s>" % (
            len(self), self.dimension, format_exponent(self.p),
            ' blocks=%s' % (self.blocks,) if self.blocks else '')

    @property
    def dimension(self):
        return self.points.shape[1]

    def norm(self, vectors):
        vectors = np.asarray(vectors, dtype=float)
        if self.blocks is None:
            return norms(vectors, self.p)
        bounds = np.cumsum((0,) + self.blocks)
        parts = np.stack([norms(vectors[..., lo:hi], 2)
                          for lo, hi in zip(bounds, bounds[1:])], axis=-1)
        return norms(parts, self.p)

    def distance_matrix(self):
        x = self.points
        return self.norm(x[:, None, :] - x[None, :, :])

    def point_norms(self):
        return self.norm(self.points)


def pnorm_metric(cloud, labels=None, tolerance=None):
    """The metric induced on the cloud by its norm.

    Raises ParameterError when two points coincide.
    """
    if labels is None:
        labels = [str(i) for i in range(len(cloud))]
    return FiniteMetricSpace(labels, cloud.distance_matrix(), tolerance=tolerance)
