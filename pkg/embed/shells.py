"""Lipschitz embedding of a Euclidean point set by dyadic shells.

After rescaling so that the smallest nonzero norm is 1, shell S_i holds the
points with 2^(i-1) <= |a| <= 2^i and Z_i is the span of the points of norm
at most 2^i. The target is the p-sum of blocks, block i carrying the
coordinates of Z_i in a fixed orthonormal basis (E_i). A point of S_i is
sent to

    phi(a) = (2^i - |a|) / 2^(i-1) * E_i(a) + (|a| - 2^(i-1)) / 2^(i-1) * E_(i+1)(a)

which interpolates between neighbouring blocks, and the origin to 0.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from spaces.clouds import PointCloud, parse_exponent, pnorm_metric
from spaces.errors import InvariantViolation, ParameterError
from .maps import EmbeddingMap

logger = logging.getLogger(__name__)

# relative residual under which a point adds no new basis direction
SPAN_TOLERANCE = 1e-10
BOUNDARY_TOLERANCE = 1e-12

ORIGIN, SAME, CONSECUTIVE, DISTANT = 0, 1, 2, 3

# (lower, upper) multiples of the distance allowed for image distances
CASE_BOUNDS = {
    ORIGIN: (1 / 2, 1),
    SAME: (1 / 10, 5),
    CONSECUTIVE: (1 / 5, 7),
    DISTANT: (1 / 4, 4),
}


def shell_index(norm):
    """The shell i >= 1 with 2^(i-1) < norm <= 2^i (norm 1 is in shell 1)."""
    return max(1, math.ceil(math.log2(norm) - 1e-15)) if norm > 0 else 0


@dataclass
class ShellDecomposition:
    scale: float
    points: np.ndarray
    norms: np.ndarray
    shells: list
    bases: list
    target_p: float

    @property
    def block_dims(self):
        return [b.shape[1] for b in self.bases]

    @property
    def top(self):
        return len(self.bases)

    def members(self, i):
        """S_i, boundary points included in both neighbouring shells."""
        lo, hi = 2.0 ** (i - 1), 2.0 ** i
        return [a for a, r in enumerate(self.norms)
                if r > 0 and lo * (1 - BOUNDARY_TOLERANCE) <= r <= hi * (1 + BOUNDARY_TOLERANCE)]

    def block_offsets(self):
        return np.concatenate([[0], np.cumsum(self.block_dims)])

    def embed_block(self, vector, i):
        """E_i: coordinates in the basis of Z_i, placed in block i."""
        offsets = self.block_offsets()
        y = np.zeros(offsets[-1])
        y[offsets[i - 1]:offsets[i]] = self.bases[i - 1].T @ vector
        return y

    def phi(self, vector, i=None):
        """The map on a (rescaled) vector, evaluated through shell i."""
        norm = float(np.linalg.norm(vector))
        if norm == 0:
            return np.zeros(self.block_offsets()[-1])
        if i is None:
            i = shell_index(norm)
        low = 2.0 ** (i - 1)
        first = (2 * low - norm) / low
        second = (norm - low) / low
        y = first * self.embed_block(vector, i)
        if i < self.top:
            y = y + second * self.embed_block(vector, i + 1)
        return y


def orthonormal_extension(basis, vectors):
    """Modified Gram-Schmidt extension of ``basis`` by ``vectors`` in order."""
    columns = [basis[:, j] for j in range(basis.shape[1])]
    for v in vectors:
        w = np.array(v, dtype=float)
        for q in columns:
            w -= (q @ w) * q
        if np.linalg.norm(w) > SPAN_TOLERANCE * max(1.0, np.linalg.norm(v)):
            columns.append(w / np.linalg.norm(w))
    return np.array(columns).T.reshape(basis.shape[0], len(columns))


def decompose(cloud, target_p=1):
    if cloud.p != 2 or cloud.blocks:
        raise ParameterError("shell embedding takes Euclidean points (p = 2)")
    target_p = parse_exponent(target_p)
    norms = cloud.point_norms()
    nonzero = norms[norms > 0]
    if not len(nonzero):
        raise ParameterError("shell embedding needs a nonzero point")
    scale = 1.0 / float(nonzero.min())
    points = cloud.points * scale
    norms = norms * scale
    shells = [shell_index(r) for r in norms]
    top = max(shells) + 1
    bases = []
    basis = np.zeros((cloud.dimension, 0))
    for i in range(1, top + 1):
        new = [points[a] for a in range(len(points)) if shells[a] and shells[a] <= i]
        basis = orthonormal_extension(basis, [v for v in new])
        bases.append(basis)
    logger.debug("shells 1..%d, block dimensions %s", top, [b.shape[1] for b in bases])
    return ShellDecomposition(scale, points, norms, shells, bases, target_p)


def shell_embedding(cloud, target_p=1):
    """Returns (EmbeddingMap, ShellDecomposition).

    The image lives in the p-sum of the blocks, as a PointCloud with blocks.
    """
    decomposition = decompose(cloud, target_p)
    image = np.array([decomposition.phi(x) for x in decomposition.points])
    check_boundaries(decomposition)
    target = PointCloud(image, p=decomposition.target_p, blocks=decomposition.block_dims)
    embedding = EmbeddingMap(pnorm_metric(cloud).scaled(decomposition.scale), target,
                             details={'scale': decomposition.scale,
                                      'block_dims': decomposition.block_dims})
    return embedding, decomposition


def boundary_disagreement(decomposition, vector):
    """|phi via shell i - phi via shell i+1| for a vector with norm 2^i."""
    norm = float(np.linalg.norm(vector))
    i = shell_index(norm)
    if i + 1 > decomposition.top or not math.isclose(norm, 2.0 ** i, rel_tol=1e-15):
        return 0.0
    return float(np.abs(decomposition.phi(vector, i) - decomposition.phi(vector, i + 1)).max())


def check_boundaries(decomposition):
    for a, r in enumerate(decomposition.norms):
        gap = boundary_disagreement(decomposition, decomposition.points[a])
        if gap > BOUNDARY_TOLERANCE * max(1.0, r):
            raise InvariantViolation("shell boundary evaluation disagrees by %.3e at point %d"
                                     % (gap, a))


@dataclass
class CaseBreakdown:
    pairs: list
    cases: np.ndarray
    distances: np.ndarray
    images: np.ndarray
    failures: list

    @property
    def ok(self):
        return not self.failures

    def counts(self):
        return {case: int((self.cases == case).sum()) for case in CASE_BOUNDS}


def case_breakdown(embedding, decomposition, pairs=None):
    """Tags pairs by shell position and checks the image against the case bounds.

    With |a| >= |b|: 1 when a and b share a shell, 2 for neighbouring shells,
    3 when further apart (then also |a|/2 <= image <= |a| + |b|); pairs with
    the origin are tagged 0. Distances are those of the rescaled points.
    """
    n = len(decomposition.points)
    if pairs is None:
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    image = embedding.image
    cases, distances, images, failures = [], [], [], []
    for u, v in pairs:
        a, b = (u, v) if decomposition.norms[u] >= decomposition.norms[v] else (v, u)
        d = float(np.linalg.norm(decomposition.points[a] - decomposition.points[b]))
        e = float(image.norm(image.points[a] - image.points[b]))
        sa, sb = decomposition.shells[a], decomposition.shells[b]
        if sb == 0:
            case = ORIGIN
        elif sa == sb:
            case = SAME
        elif sa == sb + 1:
            case = CONSECUTIVE
        else:
            case = DISTANT
        lower, upper = CASE_BOUNDS[case]
        ok = lower * d * (1 - 1e-12) <= e <= upper * d * (1 + 1e-12)
        if case == DISTANT:
            ra, rb = decomposition.norms[a], decomposition.norms[b]
            ok = ok and ra / 2 * (1 - 1e-12) <= e <= (ra + rb) * (1 + 1e-12)
        if not ok:
            failures.append((u, v, case, d, e))
        cases.append(case)
        distances.append(d)
        images.append(e)
    return CaseBreakdown(pairs, np.array(cases), np.array(distances), np.array(images), failures)
