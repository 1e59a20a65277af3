from collections import Counter
from dataclasses import dataclass

from spaces.errors import ShapeError, ParameterError

CONSISTENT = 'consistent'
INCONSISTENT = 'inconsistent'


@dataclass
class WeakContainmentWitness:
    """A map of one graph's vertices into a target metric space.

    ``mapping[v]`` is the index of the target point of vertex v.
    """
    graph: object
    target: object
    mapping: list

    def __post_init__(self):
        self.mapping = [int(x) for x in self.mapping]
        if len(self.mapping) != self.graph.n:
            raise ShapeError("map defined on %d of %d vertices" % (len(self.mapping), self.graph.n))
        if any(not 0 <= x < len(self.target) for x in self.mapping):
            raise ParameterError("map leaves the target's %d points" % len(self.target))

    @property
    def lip(self):
        """Edge maximum of the image distance; exact for graph metrics."""
        d = self.target.dist
        return max((float(d[self.mapping[u], self.mapping[v]]) for u, v in self.graph.edges),
                   default=0.0)

    @property
    def max_fiber_fraction(self):
        return max(Counter(self.mapping).values()) / self.graph.n


@dataclass
class ContainmentReport:
    lips: list
    fiber_fractions: list
    bounded_lipschitz: bool
    fibers_shrinking: bool

    @property
    def sup_lip(self):
        return max(self.lips)

    @property
    def verdict(self):
        return CONSISTENT if self.bounded_lipschitz and self.fibers_shrinking else INCONSISTENT


def _strictly_increasing(values):
    return all(a < b for a, b in zip(values, values[1:]))


def check_weak_containment(witnesses, lip_bound=None):
    """Judges finite witness data against the two conditions.

    (i) Lipschitz constants stay bounded: below ``lip_bound`` when given,
    otherwise the sequence must not increase strictly over three or more
    members. (ii) fibers shrink: fractions nonincreasing and the last below
    the first (a single member needs a fraction below 1).
    """
    witnesses = list(witnesses)
    if not witnesses:
        raise ParameterError("no witnesses given")
    lips = [w.lip for w in witnesses]
    fractions = [w.max_fiber_fraction for w in witnesses]
    if lip_bound is not None:
        bounded = max(lips) <= lip_bound
    else:
        bounded = not (len(lips) >= 3 and _strictly_increasing(lips))
    if len(fractions) == 1:
        shrinking = fractions[0] < 1
    else:
        shrinking = all(b <= a for a, b in zip(fractions, fractions[1:])) and \
            fractions[-1] < fractions[0]
    return ContainmentReport(lips, fractions, bounded, shrinking)
