import numpy as np

from spaces.errors import ParameterError, ShapeError
from game.minimax import lipschitz_constant


def certificate_average(images, certificate, source):
    """(mu-average of |f(u) - f(v)|_1 over the certificate's pairs, Lip(f), ratio).

    The ratio is average / Lip, and 0 for a constant map. By the certificate's
    optimality it never exceeds the game value D.
    """
    if len(images) != len(source):
        raise ShapeError("%d images for %d points" % (len(images), len(source)))
    if images.p != 1 or images.blocks:
        raise ParameterError("certificate averages are taken in l1 (p = 1)")
    u, v = np.array(certificate.pairs).T
    average = float(certificate.mu @ images.norm(images.points[u] - images.points[v]))
    lip = lipschitz_constant(source, images.points, p=1)
    return average, lip, average / lip if lip > 0 else 0.0
