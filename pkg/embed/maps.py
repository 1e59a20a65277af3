import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from spaces.errors import InvariantViolation, ParameterError, ShapeError


def pair_arrays(source, image):
    """Source and image distances over the pairs u < v."""
    iu = np.triu_indices(len(source), 1)
    return source.dist[iu], image.distance_matrix()[iu]


@dataclass
class EmbeddingMap:
    """A map between index-aligned finite sets, with its Lipschitz data.

    lip = max image/source ratio, colip = max source/image ratio (the
    Lipschitz constant of the inverse, infinite when two points collide).
    """
    source: object
    image: object
    lip: float = None
    colip: float = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.source) != len(self.image):
            raise ShapeError("%d images for %d points" % (len(self.image), len(self.source)))
        lip, colip = self.measure()
        if self.lip is None:
            self.lip, self.colip = lip, colip

    def measure(self):
        if len(self.source) < 2:
            return 0.0, 0.0
        d, e = pair_arrays(self.source, self.image)
        lip = float((e / d).max())
        colip = math.inf if (e == 0).any() else float((d / e).max())
        return lip, colip

    @property
    def distortion(self):
        if len(self.source) < 2:
            return 1.0
        return self.lip * self.colip

    def check(self, tolerance=1e-12):
        lip, colip = self.measure()
        for name, stored, fresh in (('lip', self.lip, lip), ('colip', self.colip, colip)):
            if math.isinf(stored) and math.isinf(fresh):
                continue
            if abs(stored - fresh) > tolerance * max(1.0, abs(fresh)):
                raise InvariantViolation("stored %s %r, recomputed %r" % (name, stored, fresh))
        if len(self.source) >= 2 and self.distortion < 1 - tolerance:
            raise InvariantViolation("distortion %r below 1" % self.distortion)
        return self


@dataclass
class ModuliEstimate:
    """Per-bin min (rho1) and max (rho2) image distance over source distance bins."""
    edges: np.ndarray
    counts: list
    rho1: list
    rho2: list

    def rows(self):
        return [(self.edges[b], self.edges[b + 1], self.counts[b], self.rho1[b], self.rho2[b])
                for b in range(len(self.counts))]

    def rho1_staircase(self):
        """inf of image distance over source distance >= bin_lo; None past the last pair."""
        stair, low = [None] * len(self.counts), math.inf
        for b in reversed(range(len(self.counts))):
            if self.counts[b]:
                low = min(low, self.rho1[b])
            stair[b] = None if math.isinf(low) else low
        return stair

    def rho2_staircase(self):
        """sup of image distance over source distance <= bin_hi."""
        stair, high = [], None
        for b in range(len(self.counts)):
            if self.counts[b]:
                high = self.rho2[b] if high is None else max(high, self.rho2[b])
            stair.append(high)
        return stair


def empirical_moduli(embedding, bin_count=None):
    if bin_count is None:
        bin_count = settings.MODULI_BIN_COUNT
    if bin_count < 1:
        raise ParameterError("bin count must be positive")
    if len(embedding.source) < 2:
        raise ParameterError("moduli need at least two points")
    d, e = pair_arrays(embedding.source, embedding.image)
    lo, hi = float(d.min()), float(d.max())
    edges = np.linspace(lo, hi, bin_count + 1)
    if hi > lo:
        bins = np.minimum(((d - lo) / (hi - lo) * bin_count).astype(int), bin_count - 1)
    else:
        bins = np.zeros(len(d), dtype=int)
    counts, rho1, rho2 = [], [], []
    for b in range(bin_count):
        inside = e[bins == b]
        counts.append(int(len(inside)))
        rho1.append(float(inside.min()) if len(inside) else None)
        rho2.append(float(inside.max()) if len(inside) else None)
    return ModuliEstimate(edges, counts, rho1, rho2)


def lower_modulus(embedding, r):
    """min image distance over pairs at source distance >= r (None if there are none)."""
    d, e = pair_arrays(embedding.source, embedding.image)
    far = e[d >= r]
    return float(far.min()) if len(far) else None


def upper_modulus(embedding, r):
    """max image distance over pairs at source distance <= r (None if there are none)."""
    d, e = pair_arrays(embedding.source, embedding.image)
    near = e[d <= r]
    return float(near.max()) if len(near) else None
