import itertools
import json
import math
import os
import tempfile
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st

from spaces.errors import ParameterError, ScaleError, StalledPivot, ThresholdError
from spaces.files import read_any_space
from spaces.graphs import complete_graph, cycle_graph, graph_metric, path_graph
from spaces.metric import FiniteMetricSpace, disjoint_union
from .cuts import CutSystem
from .files import read_measure_certificate
from .minimax import (cut_sample_maps, far_pairs, harmonic_weights, l1_direct_sum,
                      lipschitz_constant, max_l1_average, minimax_measure, separating_map)
from .simplex import (EQ, GE, INFEASIBLE, LE, OPTIMAL, UNBOUNDED, LinearProgram,
                      check_duals, dual_infeasibility, simplex_solve)

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def vertex_optimum(lp, box):
    """Best objective over the vertices of the program cut down to |x_j| <= box.

    None when the boxed program has no vertex, that is, when it is infeasible.
    """
    m, n = lp.shape
    rows, rhs = [], []
    for row, sense, b in zip(lp.matrix, lp.senses, lp.rhs):
        if sense in (LE, EQ):
            rows.append(row)
            rhs.append(b)
        if sense in (GE, EQ):
            rows.append(-row)
            rhs.append(-b)
    for j, lower in enumerate(lp.lower):
        unit = np.eye(n)[j]
        rows += [unit, -unit]
        rhs += [box, box if lower == -math.inf else 0.0]
    g, h = np.array(rows), np.array(rhs)
    sign = 1.0 if lp.maximize else -1.0
    best = None
    for subset in itertools.combinations(range(len(g)), n):
        sub = g[list(subset)]
        if abs(np.linalg.det(sub)) < 0.5:
            continue
        x = np.linalg.solve(sub, h[list(subset)])
        if (g @ x <= h + 1e-7).all():
            value = sign * float(lp.objective @ x)
            best = value if best is None else max(best, value)
    return None if best is None else sign * best


def enumerated_outcome(lp):
    """Status and optimum by vertex enumeration.

    Integer data keeps every basic solution well inside a box of 1e4, so the
    optimum moves between the boxes 1e4 and 2e4 only for unbounded programs.
    """
    near = vertex_optimum(lp, 1e4)
    if near is None:
        return INFEASIBLE, None
    far = vertex_optimum(lp, 2e4)
    if abs(far - near) > 1e-6 * (1 + abs(near)):
        return UNBOUNDED, None
    return OPTIMAL, near


@st.composite
def integer_programs(draw):
    m, n = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    a = draw(st.lists(st.integers(-3, 3), min_size=m * n, max_size=m * n))
    b = draw(st.lists(st.integers(-6, 6), min_size=m, max_size=m))
    c = draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n))
    senses = draw(st.lists(st.sampled_from([LE, EQ, GE]), min_size=m, max_size=m))
    free = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return LinearProgram(c, np.array(a).reshape(m, n), senses, b,
                         lower=[-math.inf if f else 0.0 for f in free],
                         maximize=draw(st.booleans()))


class SimplexTest(SimpleTestCase):
    def test_one_variable(self):
        result = simplex_solve(LinearProgram([1], [[1]], [LE], [3]))
        self.assertEqual(result.status, OPTIMAL)
        self.assertAlmostEqual(result.objective, 3)

    def test_two_variables(self):
        result = simplex_solve(LinearProgram([1, 1], [[1, 1]], [LE], [1]))
        self.assertAlmostEqual(result.objective, 1)
        self.assertAlmostEqual(result.x.sum(), 1)

    def test_duals(self):
        lp = LinearProgram([3, 5], [[1, 0], [0, 2], [3, 2]], [LE] * 3, [4, 12, 18])
        result = simplex_solve(lp)
        self.assertAlmostEqual(result.objective, 36)
        np.testing.assert_allclose(result.x, [2, 6], atol=1e-9)
        np.testing.assert_allclose(result.duals, [0, 1.5, 1], atol=1e-9)

    def test_minimize_with_covering_rows(self):
        lp = LinearProgram([2, 3], [[1, 1], [1, 3]], [GE, GE], [4, 6], maximize=False)
        result = simplex_solve(lp)
        self.assertAlmostEqual(result.objective, 9)
        np.testing.assert_allclose(result.x, [3, 1], atol=1e-9)

    def test_infeasible(self):
        result = simplex_solve(LinearProgram([1], [[1], [1]], [LE, GE], [1, 2]))
        self.assertEqual(result.status, INFEASIBLE)

    def test_unbounded(self):
        result = simplex_solve(LinearProgram([1, 0], [[1, -1]], [LE], [1]))
        self.assertEqual(result.status, UNBOUNDED)

    def test_free_variable(self):
        lp = LinearProgram([0, -1], [[1, -1], [1, 0]], [EQ, LE], [1, 3],
                           lower=[0, -math.inf])
        result = simplex_solve(lp)
        self.assertAlmostEqual(result.objective, 1)
        self.assertAlmostEqual(result.x[1], -1)

    def test_dump(self):
        lp = LinearProgram([0, -1], [[1, -1]], [EQ], [1], lower=[0, -math.inf])
        text = lp.dump()
        self.assertTrue(text.startswith('maximize'))
        self.assertIn('r0', text)
        self.assertIn('free: x1', text)

    def test_dual_check(self):
        lp = LinearProgram([3, 5], [[1, 0], [0, 2], [3, 2]], [LE] * 3, [4, 12, 18])
        check_duals(lp, np.array([0, 1.5, 1]), 36)
        # the basis after the first pivot prices x1 only
        self.assertAlmostEqual(dual_infeasibility(lp, [3, 0, 0]), 5)
        with self.assertRaisesRegex(StalledPivot, "infeasible"):
            check_duals(lp, np.array([3.0, 0, 0]), 12)
        with self.assertRaisesRegex(StalledPivot, "gap"):
            check_duals(lp, np.array([0, 1.5, 1]), 30)

    def test_minimize_duals(self):
        lp = LinearProgram([2, 3], [[1, 1], [1, 3]], [GE, GE], [4, 6], maximize=False)
        result = simplex_solve(lp)
        np.testing.assert_allclose(result.duals, [1.5, 0.5], atol=1e-9)
        self.assertLess(dual_infeasibility(lp, result.duals), 1e-9)

    @hsettings(max_examples=200, deadline=None)
    @given(integer_programs())
    def test_matches_vertex_enumeration(self, lp):
        status, value = enumerated_outcome(lp)
        result = simplex_solve(lp)
        self.assertEqual(result.status, status)
        if status == OPTIMAL:
            self.assertAlmostEqual(result.objective, value, delta=1e-6 * (1 + abs(value)))
            self.assertLess(dual_infeasibility(lp, result.duals), 1e-7)
            self.assertAlmostEqual(result.duals @ lp.rhs, value, delta=1e-6 * (1 + abs(value)))


class CutSystemTest(SimpleTestCase):
    def test_counts(self):
        system = CutSystem(4)
        self.assertEqual(len(system), 7)
        self.assertEqual(system.incidence.shape, (6, 7))
        self.assertNotIn(3, itertools.chain.from_iterable(
            system.members(c) for c in range(len(system))))

    def test_uniform_weights(self):
        d = CutSystem(4).semimetric(np.ones(7))
        expected = 4 * (1 - np.eye(4))
        np.testing.assert_allclose(d, expected)

    def test_coordinates_realize_semimetric(self):
        system = CutSystem(5)
        weights = np.linspace(0, 1, len(system))
        points = system.coordinates(weights)
        l1 = np.abs(points[:, None, :] - points[None, :, :]).sum(axis=2)
        np.testing.assert_allclose(l1, system.semimetric(weights), atol=1e-12)

    def test_limit(self):
        with self.assertRaises(ScaleError):
            CutSystem(5, limit=4)
        with self.assertRaises(ParameterError):
            CutSystem(1)


class MaxAverageTest(SimpleTestCase):
    def test_path_point_mass(self):
        space = graph_metric(path_graph(3))
        value, _ = max_l1_average(space, [(0, 2)], [1.0])
        self.assertAlmostEqual(value, 2)

    def test_two_points(self):
        space = FiniteMetricSpace(['u', 'v'], [[0, 5], [5, 0]])
        value, weights = max_l1_average(space, [(0, 1)], {(0, 1): 1.0})
        self.assertAlmostEqual(value, 5)
        self.assertAlmostEqual(weights.sum(), 5)

    def test_five_cycle(self):
        space = graph_metric(cycle_graph(5))
        pairs = far_pairs(space, 2)
        self.assertEqual(len(pairs), 5)
        value, _ = max_l1_average(space, pairs, np.full(5, 0.2))
        self.assertAlmostEqual(value, 2, places=7)

    def test_negative_measure(self):
        space = graph_metric(path_graph(3))
        with self.assertRaises(ParameterError):
            max_l1_average(space, [(0, 2)], [-1.0])


class MinimaxTest(SimpleTestCase):
    def test_path_of_eleven(self):
        space = graph_metric(path_graph(11))
        certificate = minimax_measure(space, 3)
        self.assertAlmostEqual(certificate.value, 3, delta=1e-7)
        self.assertAlmostEqual(certificate.mu.sum(), 1)
        for (u, v), m in zip(certificate.pairs, certificate.mu):
            if space.dist[u, v] > 3:
                self.assertLess(m, 1e-7)

    def test_two_points(self):
        space = FiniteMetricSpace(['u', 'v'], [[0, 7], [7, 0]])
        certificate = minimax_measure(space, 7)
        self.assertEqual(certificate.pairs, [(0, 1)])
        self.assertAlmostEqual(certificate.value, 7)

    def test_two_cliques(self):
        k4 = graph_metric(complete_graph(4))
        space = disjoint_union([k4, k4])
        cross = space.dist[0, 4]
        self.assertEqual(cross, 5)
        certificate = minimax_measure(space, cross)
        self.assertEqual(len(certificate.pairs), 16)
        self.assertAlmostEqual(certificate.value, cross, delta=1e-7)

    def test_threshold_above_diameter(self):
        space = graph_metric(path_graph(5))
        with self.assertRaises(ThresholdError):
            minimax_measure(space, 5)
        with self.assertRaises(ParameterError):
            minimax_measure(space, 0)

    def test_scaling(self):
        space = graph_metric(path_graph(5))
        base = minimax_measure(space, 2).value
        scaled = minimax_measure(space.scaled(2.5), 5).value
        self.assertAlmostEqual(scaled, 2.5 * base, delta=1e-6)

    def test_far_pairs_shrink(self):
        space = graph_metric(cycle_graph(9))
        for low, high in ((1, 2), (2, 3), (3, 4)):
            self.assertTrue(set(far_pairs(space, high)) <= set(far_pairs(space, low)))

    def test_separating_map(self):
        space = graph_metric(cycle_graph(6))
        certificate = minimax_measure(space, 2)
        cloud = separating_map(space, 2, certificate)
        self.assertLessEqual(lipschitz_constant(space, cloud.points), 1 + 1e-7)
        image = cloud.distance_matrix()
        for u, v in certificate.pairs:
            self.assertGreaterEqual(image[u, v], certificate.value - 1e-7)

    def test_random_maps_stay_below_value(self):
        space = graph_metric(path_graph(11))
        certificate = minimax_measure(space, 3)
        u, v = np.array(certificate.pairs).T
        for cloud in cut_sample_maps(space, 1000, 11):
            self.assertAlmostEqual(lipschitz_constant(space, cloud.points), 1)
            moved = np.abs(cloud.points[u] - cloud.points[v]).sum(axis=1)
            self.assertLessEqual(certificate.mu @ moved, certificate.value + 1e-7)


class DirectSumTest(SimpleTestCase):
    def test_harmonic_weights(self):
        weights = harmonic_weights([1, 2, 4])
        self.assertAlmostEqual(weights.sum(), 1)
        self.assertAlmostEqual(weights[0] / weights[1], 4)

    def test_sum_is_one_lipschitz(self):
        space = graph_metric(cycle_graph(7))
        maps = cut_sample_maps(space, 3, 5)
        total = l1_direct_sum(maps, harmonic_weights([3, 4, 5]))
        self.assertEqual(total.p, 1)
        self.assertLessEqual(lipschitz_constant(space, total.points), 1 + 1e-12)

    def test_mismatched(self):
        space = graph_metric(cycle_graph(5))
        maps = cut_sample_maps(space, 2, 1)
        with self.assertRaises(ParameterError):
            l1_direct_sum(maps, [1.0])


class CertificateCommandTest(SimpleTestCase):
    def test_path_of_eleven(self):
        source = os.path.join(FIXTURES, 'path11.json')
        with tempfile.TemporaryDirectory() as tmp:
            stdout = StringIO()
            call_command('certificate', source, threshold=3, maps=1000, seed=3, out=tmp,
                         stdout=stdout)
            with open(os.path.join(tmp, 'certificate.json')) as fh:
                payload = json.load(fh)
            certificate = read_measure_certificate(os.path.join(tmp, 'certificate.json'),
                                                   read_any_space(source))
            self.assertTrue(os.path.exists(os.path.join(tmp, 'separating-map.json')))
        self.assertAlmostEqual(payload['value'], 3, delta=1e-7)
        self.assertEqual(len(certificate.pairs), 36)
        self.assertIn("1000 random 1-Lipschitz maps", stdout.getvalue())

    def test_exit_codes(self):
        cases = [
            ('two_points.json', {'threshold': 20}, 2),
            ('two_points.json', {'threshold': 7, 'maps': 5}, 2),
            ('two_points.json', {}, 2),
            ('malformed.json', {'threshold': 1}, 3),
            ('missing.json', {'threshold': 1}, 3),
        ]
        with tempfile.TemporaryDirectory() as tmp:
            for name, options, code in cases:
                with self.assertRaises(CommandError) as cm:
                    call_command('certificate', os.path.join(FIXTURES, name), out=tmp,
                                 stdout=StringIO(), **options)
                self.assertEqual(cm.exception.returncode, code, (name, options))
