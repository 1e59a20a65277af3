import logging
import math

import numpy as np

from spaces.clouds import PointCloud, norms, parse_exponent
from spaces.errors import ParameterError, ShapeError
from spaces.metric import FiniteMetricSpace
from utils.linalg import centered_gram, psd_factor
from .maps import EmbeddingMap

logger = logging.getLogger(__name__)

# allowed deviation of an input vector's Euclidean norm from 1
SPHERE_TOLERANCE = 1e-6


def schoenberg_l1_to_l2(cloud):
    """Isometry of (cloud, sqrt of the l1 distance) into l2 by classical scaling.

    Squared Euclidean image distances reproduce the l1 distances. The map's
    source is the snowflaked space, so its distortion is 1 up to rounding.
    """
    if cloud.p != 1 or cloud.blocks:
        raise ParameterError("Schoenberg's map takes an l1 point cloud (p = 1)")
    d = cloud.distance_matrix()
    points, smallest = psd_factor(centered_gram(d))
    labels = [str(i) for i in range(len(cloud))]
    source = FiniteMetricSpace(labels, np.sqrt(d))
    logger.debug("classical scaling of %d points: rank %d, smallest eigenvalue %.3e",
                 len(cloud), points.shape[1], smallest)
    return EmbeddingMap(source, PointCloud(points, p=2),
                        details={'min_eigenvalue': smallest})


def bandwidth(R, eps):
    """t with 2 - 2 exp(-R^2 / t) = eps^2."""
    if not R > 0:
        raise ParameterError("R must be positive, got %s" % R)
    if not 0 < eps < math.sqrt(2):
        raise ParameterError("eps must lie in (0, sqrt 2), got %s" % eps)
    return R * R / math.log(1 / (1 - eps * eps / 2))


def gaussian_factor(space, t):
    """Unit vectors with |z(x) - z(y)|^2 = 2 - 2 exp(-d(x, y)^2 / t)."""
    kernel = np.exp(-space.dist ** 2 / t)
    return psd_factor(kernel)


def gaussian_dg_map(space, R, eps):
    """Returns (cloud, t, smallest kernel eigenvalue).

    Pairs at distance at most R land within eps of each other; image
    distances grow toward sqrt 2 with the source distance.
    """
    t = bandwidth(R, eps)
    points, smallest = gaussian_factor(space, t)
    return PointCloud(points, p=2), t, smallest


def mazur_map(vectors, target_p):
    """sign(x) |x|^(2/p), coordinatewise, from the l2 unit sphere to the l_p one.

    Takes one vector or a 2-d array of row vectors.
    """
    p = parse_exponent(target_p)
    if math.isinf(p):
        raise ParameterError("the Mazur map needs a finite exponent")
    x = np.asarray(vectors, dtype=float)
    if x.ndim not in (1, 2) or x.shape[-1] < 1:
        raise ShapeError("expected a vector or rows of vectors, got shape %s" % (x.shape,))
    deviation = np.abs(norms(x, 2) - 1)
    if np.any(deviation > SPHERE_TOLERANCE):
        raise ParameterError("Mazur map input off the unit sphere by %.3e"
                             % float(np.max(deviation)))
    if p == 2:
        return x.copy()
    return np.sign(x) * np.abs(x) ** (2 / p)
