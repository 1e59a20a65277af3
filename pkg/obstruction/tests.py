import csv
import json
import os
import tempfile
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st

from spaces.clouds import PointCloud
from spaces.errors import ParameterError, ShapeError
from spaces.graphs import complete_graph, cycle_graph, graph_metric, path_graph, petersen_graph
from expander.certificates import cheeger_exact
from expander.regular import random_regular_graph
from game.minimax import minimax_measure, separating_map
from .averages import certificate_average
from .containment import (CONSISTENT, INCONSISTENT, WeakContainmentWitness,
                          check_weak_containment)
from .poincare import (far_fraction, moduli_cap, poincare_bound, poincare_ratio,
                       random_euclidean_images)


class PoincareTest(SimpleTestCase):
    @hsettings(max_examples=25, deadline=None)
    @given(st.sampled_from([8, 10, 12, 16]), st.integers(0, 2 ** 64 - 1), st.integers(1, 4))
    def test_ratio_below_bound(self, n, seed, dimension):
        graph = random_regular_graph(n, 3, seed)
        if not graph.is_connected():
            return
        report = poincare_ratio(graph, random_euclidean_images(graph, dimension, seed))
        self.assertFalse(report.violated)
        self.assertLessEqual(report.ratio, report.bound + 1e-9)

    def test_eigenvector_attains_bound(self):
        graph = petersen_graph()
        values, vectors = np.linalg.eigh(graph.adjacency_matrix())
        images = PointCloud(vectors[:, [-2]], p=2)
        report = poincare_ratio(graph, images, float(values[-2]))
        self.assertAlmostEqual(report.bound, 1.5)
        self.assertAlmostEqual(report.ratio, report.bound, places=9)
        self.assertFalse(report.violated)

    def test_equality_instances(self):
        tetrahedron = PointCloud([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], p=2)
        report = poincare_ratio(complete_graph(4), tetrahedron, -1.0)
        self.assertAlmostEqual(report.bound, 0.75)
        self.assertAlmostEqual(report.ratio, 0.75, delta=1e-9)
        square = PointCloud([[1, 0], [0, 1], [-1, 0], [0, -1]], p=2)
        report = poincare_ratio(cycle_graph(4), square, 0.0)
        self.assertAlmostEqual(report.ratio, 1, delta=1e-9)
        self.assertEqual(report.bound, 1)

    def test_constant_map(self):
        graph = complete_graph(4)
        report = poincare_ratio(graph, PointCloud(np.ones((4, 2)), p=2))
        self.assertTrue(report.degenerate)
        self.assertIsNone(report.ratio)
        self.assertFalse(report.violated)

    def test_wrong_images(self):
        graph = complete_graph(4)
        with self.assertRaises(ShapeError):
            poincare_ratio(graph, PointCloud(np.zeros((3, 1)), p=2))
        with self.assertRaises(ParameterError):
            poincare_ratio(graph, PointCloud(np.eye(4), p=1))
        with self.assertRaises(ParameterError):
            poincare_bound(3, 3)


class ModuliCapTest(SimpleTestCase):
    def family(self):
        return [(g, cheeger_exact(g)) for g in (petersen_graph(), random_regular_graph(12, 3, 4))
                if g.is_connected()]

    def test_far_fraction(self):
        self.assertAlmostEqual(far_fraction(graph_metric(complete_graph(4)), 1), 0.75)
        self.assertEqual(far_fraction(graph_metric(path_graph(3)), 3), 0)

    def test_monotone_in_t(self):
        family = self.family()
        caps = [[c.rho1_cap for c in moduli_cap(family, 1.0, t)] for t in (1, 2)]
        for low, high in zip(*caps):
            self.assertLessEqual(low, high)

    def test_scales_with_lipschitz(self):
        family = self.family()
        one = moduli_cap(family, 1.0, 2)
        two = moduli_cap(family, 2.0, 2)
        for a, b in zip(one, two):
            self.assertAlmostEqual(b.rho1_cap, 2 * a.rho1_cap)

    def test_vacuous_beyond_diameter(self):
        [constraint] = moduli_cap([(petersen_graph(), cheeger_exact(petersen_graph()))], 1.0, 3)
        self.assertEqual(constraint.diameter, 2)
        self.assertTrue(constraint.vacuous)
        with self.assertRaises(ParameterError):
            moduli_cap(self.family(), 0, 1)

    def test_cap_holds_for_graph_metric_maps(self):
        graph = petersen_graph()
        [constraint] = moduli_cap([(graph, cheeger_exact(graph))], 1.0, 2)
        # 1-Lipschitz maps send some pair at distance 2 within the cap
        images = random_euclidean_images(graph, 3, 0)
        d = images.distance_matrix()
        u, v = np.array(graph.edges).T
        images = PointCloud(images.points / d[u, v].max(), p=2)
        space = graph_metric(graph)
        far = images.distance_matrix()[space.dist >= 2]
        self.assertLessEqual(far.min(), constraint.rho1_cap)


class ContainmentTest(SimpleTestCase):
    def identity(self, n):
        graph = cycle_graph(n)
        return WeakContainmentWitness(graph, graph_metric(graph), list(range(n)))

    def folded(self, n, target):
        graph = cycle_graph(n)
        space = graph_metric(cycle_graph(target))
        return WeakContainmentWitness(graph, space, [i % target for i in range(n)])

    def test_witness_values(self):
        witness = self.identity(6)
        self.assertEqual(witness.lip, 1)
        self.assertAlmostEqual(witness.max_fiber_fraction, 1 / 6)

    def test_consistent_series(self):
        report = check_weak_containment([self.identity(n) for n in (4, 6, 8)])
        self.assertEqual(report.verdict, CONSISTENT)
        self.assertEqual(report.sup_lip, 1)

    def test_growing_fibers(self):
        report = check_weak_containment([self.folded(n, 4) for n in (4, 8, 12)])
        self.assertEqual(report.fiber_fractions, [0.25, 0.25, 0.25])
        self.assertEqual(report.verdict, INCONSISTENT)

    def test_constant_map(self):
        graph = cycle_graph(5)
        witness = WeakContainmentWitness(graph, graph_metric(graph), [0] * 5)
        self.assertEqual(witness.lip, 0)
        self.assertEqual(check_weak_containment([witness]).verdict, INCONSISTENT)

    def test_lipschitz_growth(self):
        graph = cycle_graph(4)
        witnesses = [WeakContainmentWitness(graph, graph_metric(path_graph(8)), [0, s, 2 * s, s])
                     for s in (1, 2, 3)]
        report = check_weak_containment(witnesses)
        self.assertEqual(report.lips, [1, 2, 3])
        self.assertFalse(report.bounded_lipschitz)
        self.assertTrue(check_weak_containment(witnesses, lip_bound=3).bounded_lipschitz)

    def test_bad_witness(self):
        graph = cycle_graph(4)
        with self.assertRaises(ShapeError):
            WeakContainmentWitness(graph, graph_metric(graph), [0, 1])
        with self.assertRaises(ParameterError):
            WeakContainmentWitness(graph, graph_metric(graph), [0, 1, 2, 9])
        with self.assertRaises(ParameterError):
            check_weak_containment([])


class CertificateAverageTest(SimpleTestCase):
    def test_separating_map_reaches_value(self):
        space = graph_metric(path_graph(7))
        certificate = minimax_measure(space, 3)
        average, lip, ratio = certificate_average(separating_map(space, 3, certificate),
                                                  certificate, space)
        self.assertLessEqual(lip, 1 + 1e-7)
        self.assertAlmostEqual(average, certificate.value, delta=1e-6)
        self.assertLessEqual(ratio, certificate.value + 1e-6)

    def test_ratio_bounded_by_value(self):
        space = graph_metric(cycle_graph(8))
        certificate = minimax_measure(space, 3)
        rng = np.random.default_rng(2)
        for _ in range(20):
            images = PointCloud(rng.standard_normal((8, 3)), p=1)
            _, _, ratio = certificate_average(images, certificate, space)
            self.assertLessEqual(ratio, certificate.value + 1e-7)

    def test_constant_map(self):
        space = graph_metric(path_graph(4))
        certificate = minimax_measure(space, 2)
        self.assertEqual(certificate_average(PointCloud(np.zeros((4, 2)), p=1), certificate,
                                             space), (0.0, 0.0, 0.0))
        with self.assertRaises(ParameterError):
            certificate_average(PointCloud(np.zeros((4, 2)), p=2), certificate, space)


class ObstructCommandTest(SimpleTestCase):
    def test_writes_tables(self):
        with tempfile.TemporaryDirectory() as tmp:
            family = os.path.join(tmp, 'family')
            call_command('gen_expander', n=[10, 12], seed=7, out=family, stdout=StringIO())
            call_command('obstruct', family, t=2, seed=7, maps=2, out=tmp, stdout=StringIO())
            with open(os.path.join(tmp, 'moduli.csv'), newline='') as fh:
                rows = list(csv.reader(fh))
            with open(os.path.join(tmp, 'poincare.json')) as fh:
                reports = json.load(fh)
        self.assertEqual(rows[0], ['n', 't', 'far_fraction', 'bound', 'rho1_cap'])
        self.assertEqual([row[0] for row in rows[1:]], ['10', '12'])
        self.assertEqual(len(reports), 4)
        self.assertTrue(all(r['ratio'] <= r['bound'] for r in reports))

    def test_exit_codes(self):
        with tempfile.TemporaryDirectory() as tmp:
            cases = [
                ({'t': 2}, 2),
                ({'seed': 1}, 2),
                ({'t': 2, 'seed': 1}, 3),
            ]
            for options, code in cases:
                with self.assertRaises(CommandError) as cm:
                    call_command('obstruct', os.path.join(tmp, 'nothing'), out=tmp,
                                 stdout=StringIO(), **options)
                self.assertEqual(cm.exception.returncode, code, options)
