import logging
from queue import Queue
from threading import Thread

from django.conf import settings

from spaces.errors import InfeasibleFamily, ParameterError
from utils.rng import derive_seed
from .certificates import expansion_certificate
from .regular import random_regular_graph

logger = logging.getLogger(__name__)


def certified_member(n, k, epsilon, seed):
    """First graph of order n whose certificate guarantees h >= epsilon.

    Attempt a uses seed derive_seed(seed, a).
    """
    best = None
    for attempt in range(settings.FAMILY_MAX_ATTEMPTS):
        graph = random_regular_graph(n, k, derive_seed(seed, attempt))
        if not graph.is_connected():
            logger.debug("n=%d attempt %d: disconnected", n, attempt)
            best = 0 if best is None else best
            continue
        certificate = expansion_certificate(graph)
        logger.debug("n=%d attempt %d: h >= %s (%s)", n, attempt,
                     certificate.h, certificate.method)
        if certificate.lower_bound >= epsilon:
            return graph, certificate
        if best is None or certificate.h > best:
            best = certificate.h
    raise InfeasibleFamily(n, epsilon, float(best))


def expander_family(sizes, k, epsilon, seed, workers=None):
    """Certified k-regular graphs, one per size, in the order given.

    Member i is drawn from derive_seed(seed, i). With several workers the
    members are certified on a thread pool; the result does not depend on
    the number of workers.
    """
    sizes = [int(n) for n in sizes]
    if not sizes:
        raise ParameterError("no sizes given")
    if not epsilon > 0:
        raise ParameterError("epsilon must be positive, got %s" % epsilon)
    for n in sizes:
        if n * k % 2:
            raise ParameterError("n*k must be even: %d*%d = %d" % (n, k, n * k))
    if workers is None:
        workers = settings.LAB_WORKERS
    jobs = [(n, k, epsilon, derive_seed(seed, i)) for i, n in enumerate(sizes)]
    if workers <= 1 or len(jobs) == 1:
        return [certified_member(*job) for job in jobs]

    results = [None] * len(jobs)
    queue = Queue()

    def worker():
        while True:
            i = queue.get()
            if i is None:
                return
            try:
                results[i] = certified_member(*jobs[i])
            except Exception as e:
                results[i] = e

    threads = [Thread(target=worker, daemon=True) for _ in range(min(workers, len(jobs)))]
    for thread in threads:
        thread.start()
    for i in range(len(jobs)):
        queue.put(i)
    for _ in threads:
        queue.put(None)
    for thread in threads:
        thread.join()
    for result in results:
        if isinstance(result, Exception):
            raise result
    return results
