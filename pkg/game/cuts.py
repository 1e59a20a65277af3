import numpy as np
from django.conf import settings

from spaces.errors import ScaleError, ParameterError


class CutSystem:
    """All 2**(n-1) - 1 nontrivial bipartitions of n points.

    Cut c is the set S_c of points whose bit is set in c + 1; the last point
    is never in S_c, so each bipartition appears once. ``incidence`` holds
    delta_S(u, v) with one row per unordered pair (u < v, lexicographic) and
    one column per cut.
    """
    def __init__(self, n, limit=None):
        if limit is None:
            limit = settings.CUT_ENUMERATION_MAX_POINTS
        if n > limit:
            raise ScaleError("cut enumeration needs at most %d points, got %d" % (limit, n))
        if n < 2:
            raise ParameterError("cuts need at least two points")
        self.n = n
        self.masks = np.arange(1, 1 << (n - 1), dtype=np.int64)
        self.pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        bits = (self.masks[None, :] >> np.arange(n)[:, None]) & 1
        u, v = np.array(self.pairs).T
        self.incidence = (bits[u] ^ bits[v]).astype(float)

    def __len__(self):
        return len(self.masks)

    def members(self, c):
        """Points on the side S of cut c."""
        mask = int(self.masks[c])
        return [i for i in range(self.n) if mask >> i & 1]

    def pair_index(self):
        return {pair: r for r, pair in enumerate(self.pairs)}

    def semimetric(self, weights):
        """The semimetric sum_S w_S delta_S as an n x n matrix."""
        flat = self.incidence @ np.asarray(weights, dtype=float)
        d = np.zeros((self.n, self.n))
        u, v = np.array(self.pairs).T
        d[u, v] = d[v, u] = flat
        return d

    def coordinates(self, weights, support_tolerance=0.0):
        """Explicit l1 points: one coordinate per used cut, w_S on S and 0 off it."""
        weights = np.asarray(weights, dtype=float)
        used = np.nonzero(weights > support_tolerance)[0]
        if not len(used):
            return np.zeros((self.n, 1))
        bits = (self.masks[used][None, :] >> np.arange(self.n)[:, None]) & 1
        return bits * weights[used][None, :]
