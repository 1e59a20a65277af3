"""Coarse embedding of a finite metric space into an l_p-sum of spheres.

Block i holds a Gaussian kernel map followed by the Mazur map, so every
block image lies on the unit sphere of l_p. With delta_i the smallest block
distance over pairs at distance >= t_i, the bandwidth of block i is chosen
so that pairs at distance <= i move by at most delta_i / (i 2^i) inside the
block, and the block is scaled by i / delta_i. Then pairs at distance >= t_i
are sent at least i apart, and pairs at distance <= r at most rho2_bound(r).
"""
import logging
import math

import numpy as np
from django.conf import settings

from spaces.clouds import PointCloud, norms, parse_exponent
from spaces.errors import InvariantViolation, ParameterError, ThresholdError
from .kernels import gaussian_factor, mazur_map
from .maps import EmbeddingMap, empirical_moduli, lower_modulus, pair_arrays

logger = logging.getLogger(__name__)


def check_thresholds(thresholds, block_count=None):
    thresholds = [float(t) for t in thresholds]
    if not thresholds:
        raise ParameterError("at least one threshold is required")
    if block_count is not None and block_count != len(thresholds):
        raise ParameterError("%d thresholds for %d blocks" % (len(thresholds), block_count))
    if any(not t > 0 for t in thresholds):
        raise ParameterError("thresholds must be positive")
    if any(a >= b for a, b in zip(thresholds, thresholds[1:])):
        raise ParameterError("thresholds must increase strictly")
    return thresholds


def block_distances(block, p):
    return norms(block[:, None, :] - block[None, :, :], p)


def sphere_block(space, tau, p):
    points, smallest = gaussian_factor(space, tau)
    # rows are unit vectors up to the clipped spectrum
    points = points / np.linalg.norm(points, axis=1)[:, None]
    return mazur_map(points, p), smallest


def fit_block(space, i, threshold, p, steps=None):
    """(block, delta, tau) for block i, scanning tau = d_min^2 2^k upward."""
    if steps is None:
        steps = settings.COARSE_BANDWIDTH_STEPS
    d = space.dist
    iu = np.triu_indices(len(space), 1)
    pair_d = d[iu]
    far = pair_d >= threshold
    if not far.any():
        raise ThresholdError("no pairs at distance >= %g for block %d; the largest "
                             "distance is %g" % (threshold, i, space.diameter))
    close = pair_d <= i
    d_min = float(pair_d.min())
    for k in range(steps):
        tau = d_min * d_min * 2.0 ** k
        if p == 2:
            # closed form of the Euclidean kernel distances
            e = np.sqrt(-2 * np.expm1(-pair_d ** 2 / tau))
            if close.any() and e[close].max() > e[far].min() / (i * 2 ** i):
                continue
        block, smallest = sphere_block(space, tau, p)
        e = block_distances(block, p)[iu]
        delta = float(e[far].min())
        reach = float(e[close].max()) if close.any() else 0.0
        logger.debug("block %d tau=%g: delta=%.6g close=%.6g", i, tau, delta, reach)
        if delta > 0 and reach <= delta / (i * 2 ** i):
            return block, delta, tau
    raise ThresholdError("block %d: no bandwidth among %d tried separates distance <= %d "
                         "from distance >= %g; raise the threshold" % (i, steps, i, threshold))


def rho2_bound(r, deltas):
    """Upper modulus guaranteed at distance r by blocks with the given deltas."""
    cut = max(0, math.ceil(r))
    return sum(2 * i / delta if i < cut else 2.0 ** -i
               for i, delta in enumerate(deltas, start=1))


def assemble_coarse_embedding(space, target_p, thresholds, block_count=None, bin_count=None):
    """Returns (EmbeddingMap, ModuliEstimate).

    The image is a plain l_p cloud: the l_p norm of concatenated blocks is
    the l_p-sum of the block norms. Point 0 is sent to the origin.
    """
    p = parse_exponent(target_p)
    if math.isinf(p):
        raise ParameterError("coarse assembly needs a finite target exponent")
    thresholds = check_thresholds(thresholds, block_count)
    if len(space) < 2:
        raise ParameterError("coarse assembly needs at least two points")
    blocks, deltas, bandwidths = [], [], []
    for i, threshold in enumerate(thresholds, start=1):
        block, delta, tau = fit_block(space, i, threshold, p)
        blocks.append(i / delta * (block - block[0]))
        deltas.append(delta)
        bandwidths.append(tau)
    image = PointCloud(np.hstack(blocks), p=p)
    embedding = EmbeddingMap(space, image, details={
        'thresholds': thresholds, 'deltas': deltas, 'bandwidths': bandwidths})
    return embedding, empirical_moduli(embedding, bin_count)


def check_coarse_moduli(embedding, tolerance=1e-9):
    """Verifies rho1(t_i) >= i and rho2(r) <= rho2_bound(r) on every pair distance."""
    thresholds, deltas = embedding.details['thresholds'], embedding.details['deltas']
    for i, threshold in enumerate(thresholds, start=1):
        low = lower_modulus(embedding, threshold)
        if low is not None and low < i * (1 - tolerance):
            raise InvariantViolation("rho1(%g) = %.12g is below %d" % (threshold, low, i))
    d, e = pair_arrays(embedding.source, embedding.image)
    order = np.argsort(d, kind='stable')
    reach = np.maximum.accumulate(e[order])
    for r, high in zip(d[order], reach):
        bound = rho2_bound(r, deltas)
        if high > bound * (1 + tolerance):
            raise InvariantViolation("rho2(%g) = %.12g exceeds %.12g" % (r, high, bound))
