"""Dense two-phase primal simplex with Bland's rule.

Phase 1 maximizes minus the sum of artificial variables; phase 2 the real
objective. Dual values are read from the columns of the starting basis,
which hold the inverse of the final basis.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from spaces.errors import ShapeError, StalledPivot

logger = logging.getLogger(__name__)

LE, EQ, GE = '<=', '=', '>='

OPTIMAL = 'optimal'
UNBOUNDED = 'unbounded'
INFEASIBLE = 'infeasible'

# rows and columns shown in a tableau dump
DUMP_LIMIT = 12


def format_table(rows):
    widths = [max(len(r[j]) for r in rows) for j in range(len(rows[0]))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in rows)


@dataclass
class LinearProgram:
    """maximize (or minimize) c.x  subject to  A x (<=|=|>=) b, x >= lower.

    Lower bounds are 0 or -inf (free variable).
    """
    objective: np.ndarray
    matrix: np.ndarray
    senses: list
    rhs: np.ndarray
    lower: list = None
    maximize: bool = True
    names: list = field(default=None, repr=False)

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        self.matrix = np.asarray(self.matrix, dtype=float).reshape(-1, len(self.objective))
        self.rhs = np.asarray(self.rhs, dtype=float)
        self.senses = list(self.senses)
        if self.lower is None:
            self.lower = [0.0] * len(self.objective)
        m, n = self.matrix.shape
        if len(self.rhs) != m or len(self.senses) != m:
            raise ShapeError("%d constraint rows, %d right-hand sides, %d senses"
                             % (m, len(self.rhs), len(self.senses)))
        if len(self.lower) != n:
            raise ShapeError("%d variables, %d lower bounds" % (n, len(self.lower)))
        if any(s not in (LE, EQ, GE) for s in self.senses):
            raise ShapeError("constraint senses must be <=, = or >=")
        if any(b not in (0, -math.inf) for b in self.lower):
            raise ShapeError("variable lower bounds must be 0 or -inf")
        if self.names is None:
            self.names = ["x%d" % j for j in range(n)]

    @property
    def shape(self):
        return self.matrix.shape

    def dump(self):
        """Plain-text listing of the program, truncated for large instances."""
        m, n = self.shape
        cols = min(n, DUMP_LIMIT)
        lines = ["%s %s" % ('maximize' if self.maximize else 'minimize',
                            " ".join("%+g*%s" % (c, name) for c, name in
                                     zip(self.objective[:cols], self.names)))]
        rows = [[''] + self.names[:cols] + ['', 'rhs']]
        for i in range(min(m, DUMP_LIMIT)):
            rows.append(['r%d' % i] + ['%g' % a for a in self.matrix[i, :cols]]
                        + [self.senses[i], '%g' % self.rhs[i]])
        lines.append(format_table(rows))
        if m > DUMP_LIMIT or n > DUMP_LIMIT:
            lines.append("(%d x %d, truncated)" % (m, n))
        free = [name for name, b in zip(self.names, self.lower) if b == -math.inf]
        if free:
            lines.append("free: %s" % ", ".join(free))
        return "\n".join(lines)


@dataclass
class LPResult:
    status: str
    x: np.ndarray = None
    objective: float = None
    duals: np.ndarray = None
    iterations: int = 0


class Tableau:
    def __init__(self, lp, tolerance):
        self.tolerance = tolerance
        m, n = lp.shape
        a = lp.matrix.copy()
        b = lp.rhs.copy()
        senses = list(lp.senses)
        self.flipped = b < 0
        a[self.flipped] *= -1
        b[self.flipped] *= -1
        for i in np.nonzero(self.flipped)[0]:
            senses[i] = {LE: GE, GE: LE, EQ: EQ}[senses[i]]

        free = [j for j in range(n) if lp.lower[j] == -math.inf]
        self.free = free
        columns = [a, -a[:, free]]
        slack = np.zeros((m, m))
        for i, sense in enumerate(senses):
            slack[i, i] = {LE: 1.0, GE: -1.0, EQ: 0.0}[sense]
        artificial_rows = [i for i, sense in enumerate(senses) if sense != LE]
        artificial = np.zeros((m, len(artificial_rows)))
        for k, i in enumerate(artificial_rows):
            artificial[i, k] = 1.0
        columns += [slack, artificial]
        self.structural = n + len(free)
        self.first_artificial = self.structural + m
        body = np.hstack(columns)
        self.width = body.shape[1]
        self.t = np.zeros((m + 1, self.width + 1))
        self.t[:m, :self.width] = body
        self.t[:m, -1] = b
        self.m = m
        self.basis = []
        for i, sense in enumerate(senses):
            if sense == LE:
                self.basis.append(self.structural + i)
            else:
                self.basis.append(self.first_artificial + artificial_rows.index(i))
        self.initial = list(self.basis)
        self.iterations = 0

    def set_cost(self, c):
        """Reduced costs c - c_B B^-1 [A|b] in the last row."""
        c = np.append(c, 0.0)
        self.c = c
        self.t[-1] = c - c[self.basis] @ self.t[:self.m]

    def pivot(self, i, j):
        t = self.t
        t[i] /= t[i, j]
        column = t[:, j].copy()
        column[i] = 0.0
        t -= np.outer(column, t[i])
        self.basis[i] = j
        self.iterations += 1

    def run(self, allowed):
        """Bland's rule over the columns below ``allowed``."""
        tol = self.tolerance
        limit = settings.SIMPLEX_MAX_ITERATIONS
        while True:
            if self.iterations >= limit:
                raise StalledPivot("simplex exceeded %d iterations" % limit, self.dump())
            entering = np.nonzero(self.t[-1, :allowed] > tol)[0]
            if not len(entering):
                return OPTIMAL
            j = int(entering[0])
            column = self.t[:self.m, j]
            rows = np.nonzero(column > tol)[0]
            if not len(rows):
                return UNBOUNDED
            ratios = self.t[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + tol * max(1.0, abs(best))]
            i = int(min(ties, key=lambda r: self.basis[r]))
            if abs(self.t[i, j]) <= tol:
                raise StalledPivot("pivot element %.3e at row %d column %d is below tolerance"
                                   % (self.t[i, j], i, j), self.dump())
            self.pivot(i, j)

    def objective(self):
        return -self.t[-1, -1]

    def drive_out_artificials(self):
        for i, j in enumerate(self.basis):
            if j < self.first_artificial:
                continue
            candidates = np.nonzero(np.abs(self.t[i, :self.first_artificial]) > self.tolerance)[0]
            if len(candidates):
                self.pivot(i, int(candidates[0]))

    def inverse(self):
        return self.t[:self.m, self.initial]

    def values(self):
        x = np.zeros(self.width)
        x[self.basis] = self.t[:self.m, -1]
        return x

    def dump(self):
        m = min(self.m, DUMP_LIMIT)
        cols = list(range(min(self.width, DUMP_LIMIT)))
        rows = [['basis'] + ['c%d' % j for j in cols] + ['rhs']]
        for i in range(m):
            rows.append(['c%d' % self.basis[i]] + ['%.4g' % self.t[i, j] for j in cols]
                        + ['%.6g' % self.t[i, -1]])
        rows.append(['cost'] + ['%.4g' % self.t[-1, j] for j in cols] + ['%.6g' % self.t[-1, -1]])
        text = format_table(rows)
        if self.m > DUMP_LIMIT or self.width > DUMP_LIMIT:
            text += "\n(%d rows x %d columns, truncated)" % (self.m, self.width)
        return "after %d pivots, basis %s\n%s" % (self.iterations, self.basis, text)


def dual_infeasibility(lp, duals):
    """Largest violation of dual feasibility by ``duals`` for ``lp``.

    In the maximize sense: y >= 0 on <= rows, y <= 0 on >= rows, y.A >= c on
    ordinary columns and y.A = c on free ones. Zero for an optimal dual.
    """
    sign = 1.0 if lp.maximize else -1.0
    y = sign * np.asarray(duals, dtype=float)
    reduced = y @ lp.matrix - sign * lp.objective
    free = np.array([b == -math.inf for b in lp.lower], dtype=bool)
    senses = np.array(lp.senses)
    violations = [0.0]
    violations += list(-reduced[~free])
    violations += list(np.abs(reduced[free]))
    violations += list(-y[senses == LE])
    violations += list(y[senses == GE])
    return float(max(violations))


def check_duals(lp, duals, objective, tolerance=None):
    """Raises StalledPivot unless ``duals`` is dual feasible and closes the gap."""
    if tolerance is None:
        tolerance = settings.SIMPLEX_DUALITY_GAP
    scale = 1 + float(np.abs(lp.objective).max(initial=0.0))
    violation = dual_infeasibility(lp, duals)
    if violation > tolerance * scale:
        raise StalledPivot("duals infeasible by %.3e at objective %.12g" % (violation, objective))
    gap = abs(objective - float(duals @ lp.rhs))
    if gap > tolerance * (1 + abs(objective)):
        raise StalledPivot("duality gap %.3e at objective %.12g" % (gap, objective))


def simplex_solve(lp, tolerance=None):
    """Solves ``lp``; the duals are checked feasible with objective = y.b."""
    if tolerance is None:
        tolerance = settings.SIMPLEX_TOLERANCE
    tableau = Tableau(lp, tolerance)
    m, n = lp.shape
    if tableau.width > tableau.first_artificial:
        phase1 = np.zeros(tableau.width)
        phase1[tableau.first_artificial:] = -1.0
        tableau.set_cost(phase1)
        tableau.run(tableau.width)
        scale = 1.0 + np.abs(lp.rhs).sum()
        if tableau.objective() < -tolerance * scale:
            logger.debug("phase 1 ended at %g: infeasible", tableau.objective())
            return LPResult(INFEASIBLE, iterations=tableau.iterations)
        tableau.drive_out_artificials()

    sign = 1.0 if lp.maximize else -1.0
    cost = np.zeros(tableau.width)
    cost[:n] = sign * lp.objective
    cost[n:tableau.structural] = -sign * lp.objective[tableau.free]
    tableau.set_cost(cost)
    status = tableau.run(tableau.first_artificial)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, iterations=tableau.iterations)

    values = tableau.values()
    x = values[:n].copy()
    x[tableau.free] -= values[n:tableau.structural]
    duals = cost[tableau.basis] @ tableau.inverse()
    duals[tableau.flipped] *= -1
    duals *= sign
    objective = float(lp.objective @ x)
    try:
        check_duals(lp, duals, objective)
    except StalledPivot as e:
        raise StalledPivot(str(e), tableau.dump())
    logger.debug("simplex: %d x %d optimal %.12g after %d pivots",
                 m, n, objective, tableau.iterations)
    return LPResult(OPTIMAL, x, objective, duals, tableau.iterations)
