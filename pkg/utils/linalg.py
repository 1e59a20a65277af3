import logging

import numpy as np
from django.conf import settings

from spaces.errors import ConvergenceError, NotNegativeType, ShapeError

logger = logging.getLogger(__name__)


def off_diagonal_norm(a):
    off = a - np.diag(np.diag(a))
    return float(np.sqrt((off * off).sum()))


def jacobi_eigh(matrix, tolerance=None, max_sweeps=None):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius norm is at most
    ``tolerance`` times max(1, ||A||_F). Returns eigenvalues in decreasing
    order and the matching orthonormal eigenvectors as columns.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError("matrix must be square, got shape %s" % (a.shape,))
    if tolerance is None:
        tolerance = settings.JACOBI_TOLERANCE
    if max_sweeps is None:
        max_sweeps = settings.JACOBI_MAX_SWEEPS
    n = a.shape[0]
    a = (a + a.T) / 2
    v = np.eye(n)
    target = tolerance * max(1.0, float(np.sqrt((a * a).sum())))
    sweep = 0
    while off_diagonal_norm(a) > target:
        if sweep == max_sweeps:
            raise ConvergenceError("Jacobi iteration did not converge in %d sweeps "
                                   "(off-diagonal norm %.3e)" % (max_sweeps, off_diagonal_norm(a)))
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= target * 1e-6:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1))
                c = 1 / np.sqrt(t * t + 1)
                s = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * cp - s * cq, s * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * rp - s * rq, s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
        logger.debug("Jacobi sweep %d: off-diagonal norm %.3e", sweep, off_diagonal_norm(a))
    values = np.diag(a).copy()
    order = np.argsort(-values, kind='stable')
    return values[order], v[:, order]


def centered_gram(squared_distances):
    """Classical scaling: G = -1/2 J D J, J the centering projection."""
    d2 = np.asarray(squared_distances, dtype=float)
    n = d2.shape[0]
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    return -0.5 * j @ d2 @ j


def psd_factor(gram, clip=None, reject=None):
    """Rows X with X X^T = gram, for a positive semidefinite ``gram``.

    Eigenvalues in [-clip, 0] are rounding and become 0. Below -reject the
    matrix is not PSD and NotNegativeType is raised; values in between are
    clipped with a warning. Returns (points, smallest eigenvalue).
    """
    if clip is None:
        clip = settings.PSD_CLIP_TOLERANCE
    if reject is None:
        reject = settings.PSD_REJECT_TOLERANCE
    values, vectors = jacobi_eigh(gram)
    smallest = float(values[-1]) if len(values) else 0.0
    if smallest < -reject:
        raise NotNegativeType(smallest)
    if smallest < -clip:
        logger.warning("clipping eigenvalue %.3e of a Gram matrix to 0", smallest)
    keep = values > 0
    if not keep.any():
        return np.zeros((gram.shape[0], 1)), smallest
    points = vectors[:, keep] * np.sqrt(values[keep])
    return points, smallest
