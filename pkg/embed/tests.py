import csv
import json
import math
import os
import tempfile
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings as hsettings, strategies as st

from spaces.clouds import PointCloud, norms, pnorm_metric
from spaces.errors import InvariantViolation, ParameterError, ThresholdError
from spaces.files import read_cloud
from spaces.metric import FiniteMetricSpace
from .coarse import assemble_coarse_embedding, check_coarse_moduli, rho2_bound
from .files import read_embedding, write_embedding
from .kernels import bandwidth, gaussian_dg_map, mazur_map, schoenberg_l1_to_l2
from .maps import EmbeddingMap, empirical_moduli, lower_modulus, upper_modulus
from .shells import (CASE_BOUNDS, ORIGIN, boundary_disagreement, case_breakdown,
                     shell_embedding)

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def log_uniform_cloud(seed, n=200, dimension=5):
    """Random directions with norms 2^U[0, 10]."""
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((n, dimension))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    return PointCloud(directions * 2 ** rng.uniform(0, 10, n)[:, None], p=2)


def two_clusters(seed=3, size=25):
    rng = np.random.default_rng(seed)
    near = rng.uniform(0, 5, (size, 2))
    far = rng.uniform(0, 5, (size, 2)) + [200, 0]
    return pnorm_metric(PointCloud(np.vstack([near, far]), p=2))


class ShellEmbeddingTest(SimpleTestCase):
    def test_random_suite(self):
        for seed in (0, 1, 2):
            cloud = log_uniform_cloud(seed)
            for target_p in (1, 2):
                embedding, decomposition = shell_embedding(cloud, target_p)
                breakdown = case_breakdown(embedding, decomposition)
                self.assertTrue(breakdown.ok, breakdown.failures[:3])
                self.assertLessEqual(embedding.distortion, 70)
                self.assertEqual(sum(breakdown.counts().values()), 200 * 199 // 2)

    def test_boundary_points(self):
        cloud = PointCloud([[1, 0], [0, 2], [4, 0], [0, 8], [3, 3]], p=2)
        embedding, decomposition = shell_embedding(cloud)
        self.assertEqual(decomposition.shells, [1, 1, 2, 3, 3])
        for point in decomposition.points:
            self.assertEqual(boundary_disagreement(decomposition, point), 0)
        a = decomposition.points[1]
        np.testing.assert_allclose(decomposition.phi(a, 2), decomposition.embed_block(a, 2))
        np.testing.assert_allclose(decomposition.phi(a), decomposition.embed_block(a, 2))

    def test_image_norms(self):
        embedding, decomposition = shell_embedding(read_cloud(os.path.join(FIXTURES,
                                                                            'shells.json')))
        np.testing.assert_allclose(embedding.image.point_norms(), decomposition.norms,
                                   atol=1e-9)

    def test_equal_norms(self):
        embedding, _ = shell_embedding(PointCloud([[1, 0], [3, 0], [0, 3]], p=2), 2)
        d = embedding.source.dist[1, 2]
        e = embedding.image.distance_matrix()[1, 2]
        self.assertTrue(d / 2 - 1e-12 <= e <= d + 1e-12)

    def test_origin(self):
        cloud = PointCloud([[0, 0], [2, 0], [0, 5], [1, 1]], p=2)
        embedding, decomposition = shell_embedding(cloud, 3)
        self.assertFalse(embedding.image.points[0].any())
        breakdown = case_breakdown(embedding, decomposition)
        self.assertEqual(breakdown.counts()[ORIGIN], 3)
        lower, upper = CASE_BOUNDS[ORIGIN]
        for a in (1, 2, 3):
            e = embedding.image.distance_matrix()[0, a]
            r = decomposition.norms[a]
            self.assertTrue(lower * r - 1e-12 <= e <= upper * r + 1e-12)

    def test_rejects(self):
        with self.assertRaises(ParameterError):
            shell_embedding(PointCloud([[0, 1], [1, 0]], p=1))
        with self.assertRaises(ParameterError):
            shell_embedding(PointCloud([[0, 0]], p=2))


class SchoenbergTest(SimpleTestCase):
    def test_triangle(self):
        embedding = schoenberg_l1_to_l2(read_cloud(os.path.join(FIXTURES, 'l1_triangle.json')))
        image = embedding.image.distance_matrix()
        self.assertAlmostEqual(image[0, 1], 1, places=9)
        self.assertAlmostEqual(image[0, 2], 1, places=9)
        self.assertAlmostEqual(image[1, 2], math.sqrt(2), places=9)
        self.assertAlmostEqual(embedding.distortion, 1, places=9)

    def test_two_points(self):
        embedding = schoenberg_l1_to_l2(PointCloud([[0], [4]], p=1))
        self.assertAlmostEqual(embedding.image.distance_matrix()[0, 1], 2, places=12)

    def test_single_point(self):
        embedding = schoenberg_l1_to_l2(PointCloud([[1, 2]], p=1))
        self.assertEqual(len(embedding.image), 1)
        self.assertEqual(embedding.distortion, 1)

    @hsettings(max_examples=20, deadline=None)
    @given(st.integers(2, 9), st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
    def test_squared_distances(self, n, dimension, seed):
        points = np.random.default_rng(seed).integers(0, 6, (n, dimension))
        points = np.unique(points, axis=0)
        cloud = PointCloud(points, p=1)
        embedding = schoenberg_l1_to_l2(cloud)
        np.testing.assert_allclose(embedding.image.distance_matrix() ** 2,
                                   cloud.distance_matrix(), atol=1e-9)

    def test_rejects_euclidean(self):
        with self.assertRaises(ParameterError):
            schoenberg_l1_to_l2(PointCloud([[0, 0], [1, 1]], p=2))


class GaussianTest(SimpleTestCase):
    def setUp(self):
        self.space = pnorm_metric(PointCloud([[0], [1], [2], [5]], p=2))

    def test_kernel_identity(self):
        cloud, t, _ = gaussian_dg_map(self.space, 1, 0.5)
        expected = 2 - 2 * np.exp(-self.space.dist ** 2 / t)
        np.testing.assert_allclose(cloud.distance_matrix() ** 2, expected, atol=1e-9)
        np.testing.assert_allclose(cloud.point_norms(), 1, atol=1e-9)

    def test_radius_lands_at_eps(self):
        cloud, _, _ = gaussian_dg_map(self.space, 1, 0.5)
        image = cloud.distance_matrix()
        self.assertAlmostEqual(image[0, 1], 0.5, places=9)
        self.assertLess(image[0, 1], image[0, 2])
        self.assertLess(image[0, 3], math.sqrt(2))

    def test_parameters(self):
        self.assertAlmostEqual(bandwidth(2, 1), 4 / math.log(2))
        with self.assertRaises(ParameterError):
            bandwidth(0, 0.5)
        with self.assertRaises(ParameterError):
            bandwidth(1, 1.5)
        with self.assertRaises(ParameterError):
            bandwidth(1, 0)


class MazurMapTest(SimpleTestCase):
    def test_identity_at_two(self):
        x = np.array([0.6, -0.8])
        np.testing.assert_array_equal(mazur_map(x, 2), x)

    def test_basis_vectors(self):
        np.testing.assert_array_equal(mazur_map(np.eye(3), 1), np.eye(3))

    def test_diagonal(self):
        x = np.array([1, -1]) / math.sqrt(2)
        np.testing.assert_allclose(mazur_map(x, 1), [0.5, -0.5])

    def test_lands_on_sphere(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((10, 4))
        x /= np.linalg.norm(x, axis=1)[:, None]
        for p in (1, 1.5, 3):
            np.testing.assert_allclose(norms(mazur_map(x, p), p), 1, atol=1e-12)

    def test_rejects(self):
        with self.assertRaises(ParameterError):
            mazur_map([1.0, 1.0], 1)
        with self.assertRaises(ParameterError):
            mazur_map([1.0, 0.0], 'inf')


class CoarseTest(SimpleTestCase):
    def test_two_points(self):
        space = FiniteMetricSpace(['a', 'b'], [[0, 5], [5, 0]])
        for p in (1, 2):
            embedding, _ = assemble_coarse_embedding(space, p, [5])
            self.assertAlmostEqual(embedding.image.distance_matrix()[0, 1], 1)
            self.assertFalse(embedding.image.points[0].any())
            check_coarse_moduli(embedding)

    def test_three_blocks(self):
        space = two_clusters()
        embedding, estimate = assemble_coarse_embedding(space, 2, [4, 32, 144])
        check_coarse_moduli(embedding)
        self.assertEqual(len(embedding.details['deltas']), 3)
        for i, t in enumerate((4, 32, 144), start=1):
            self.assertGreaterEqual(lower_modulus(embedding, t), i * (1 - 1e-9))
        self.assertEqual(len(estimate.counts), 10)
        self.assertEqual(sum(estimate.counts), 50 * 49 // 2)

    def test_rho2_bound(self):
        deltas = [0.5, 1.0]
        self.assertAlmostEqual(rho2_bound(0.5, deltas), 0.5 + 0.25)
        self.assertAlmostEqual(rho2_bound(1, deltas), 0.5 + 0.25)
        self.assertAlmostEqual(rho2_bound(1.5, deltas), 4 + 0.25)
        self.assertAlmostEqual(rho2_bound(10, deltas), 4 + 4)

    def test_thresholds(self):
        space = two_clusters()
        with self.assertRaises(ThresholdError):
            assemble_coarse_embedding(space, 2, [4, 1000])
        with self.assertRaises(ParameterError):
            assemble_coarse_embedding(space, 2, [4, 4])
        with self.assertRaises(ParameterError):
            assemble_coarse_embedding(space, 2, [4], block_count=2)
        with self.assertRaises(ParameterError):
            assemble_coarse_embedding(space, 'inf', [4])

    @override_settings(COARSE_BANDWIDTH_STEPS=10)
    def test_unmet_bandwidth(self):
        space = FiniteMetricSpace(['a', 'b', 'c'], [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
        with self.assertRaises(ThresholdError):
            assemble_coarse_embedding(space, 2, [2])

    def test_violation_detected(self):
        space = FiniteMetricSpace(['a', 'b'], [[0, 5], [5, 0]])
        embedding, _ = assemble_coarse_embedding(space, 2, [5])
        embedding.details['deltas'] = [100.0]
        with self.assertRaises(InvariantViolation):
            check_coarse_moduli(embedding)


class ModuliTest(SimpleTestCase):
    def setUp(self):
        cloud = PointCloud([[0], [1], [3]], p=2)
        self.embedding = EmbeddingMap(pnorm_metric(cloud), cloud)

    def test_identity(self):
        self.assertEqual((self.embedding.lip, self.embedding.colip), (1, 1))
        self.assertEqual(self.embedding.distortion, 1)

    def test_bins_and_staircases(self):
        estimate = empirical_moduli(self.embedding, 2)
        self.assertEqual(estimate.counts, [1, 2])
        self.assertEqual(estimate.rho1, [1, 2])
        self.assertEqual(estimate.rho2, [1, 3])
        self.assertEqual(estimate.rho1_staircase(), [1, 2])
        self.assertEqual(estimate.rho2_staircase(), [1, 3])

    def test_empty_bins(self):
        estimate = empirical_moduli(self.embedding, 4)
        self.assertEqual(estimate.counts, [1, 0, 1, 1])
        self.assertIsNone(estimate.rho1[1])
        self.assertEqual(estimate.rho1_staircase(), [1, 2, 2, 3])

    def test_moduli_functions(self):
        self.assertEqual(lower_modulus(self.embedding, 2), 2)
        self.assertEqual(upper_modulus(self.embedding, 1.5), 1)
        self.assertIsNone(lower_modulus(self.embedding, 4))
        with self.assertRaises(ParameterError):
            empirical_moduli(self.embedding, 0)

    def test_collision(self):
        source = pnorm_metric(PointCloud([[0], [1]], p=2))
        embedding = EmbeddingMap(source, PointCloud([[2], [2]], p=2))
        self.assertEqual(embedding.lip, 0)
        self.assertTrue(math.isinf(embedding.colip))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'embedding.json')
            write_embedding(path, embedding)
            with open(path) as fh:
                self.assertIsNone(json.load(fh)['colip'])
            self.assertTrue(math.isinf(read_embedding(path).colip))


class EmbedCommandTest(SimpleTestCase):
    def embed(self, tmp, kind, name, **options):
        call_command('embed', kind, os.path.join(FIXTURES, name), out=tmp, stdout=StringIO(),
                     **options)
        with open(os.path.join(tmp, 'moduli.csv'), newline='') as fh:
            rows = list(csv.reader(fh))
        return read_embedding(os.path.join(tmp, 'embedding.json')), rows

    def test_shell(self):
        with tempfile.TemporaryDirectory() as tmp:
            embedding, rows = self.embed(tmp, 'shell', 'shells.json', bins=4)
        self.assertEqual(rows[0], ['bin_lo', 'bin_hi', 'count', 'rho1', 'rho2'])
        self.assertEqual(len(rows), 5)
        self.assertEqual(embedding.image.p, 1)
        self.assertLessEqual(embedding.distortion, 70)

    def test_schoenberg(self):
        with tempfile.TemporaryDirectory() as tmp:
            embedding, _ = self.embed(tmp, 'schoenberg', 'l1_triangle.json')
        self.assertAlmostEqual(embedding.source.dist[1, 2], math.sqrt(2))
        self.assertAlmostEqual(embedding.distortion, 1, places=9)

    def test_coarse(self):
        with tempfile.TemporaryDirectory() as tmp:
            embedding, _ = self.embed(tmp, 'coarse', 'far_pair.json', thresholds=[5],
                                      target_p='1')
        self.assertEqual(embedding.image.p, 1)
        self.assertAlmostEqual(embedding.image.distance_matrix()[0, 1], 1)

    def test_moduli_command(self):
        with tempfile.TemporaryDirectory() as tmp:
            self.embed(tmp, 'shell', 'shells.json')
            stdout = StringIO()
            call_command('moduli', os.path.join(tmp, 'embedding.json'), bins=3,
                         out=os.path.join(tmp, 'again'), stdout=stdout)
            with open(os.path.join(tmp, 'again', 'moduli.csv'), newline='') as fh:
                self.assertEqual(len(list(csv.reader(fh))), 4)
        self.assertIn('rho1 >=', stdout.getvalue())

    def test_exit_codes(self):
        spaces_fixtures = os.path.abspath(os.path.join(FIXTURES, '..', '..', 'spaces', 'fixtures'))
        cases = [
            ((None, None), {}, 2),
            (('shell', None), {}, 2),
            (('schoenberg', 'l1_triangle.json'), {'target_p': '3'}, 2),
            (('schoenberg', 'shells.json'), {}, 2),
            (('coarse', 'far_pair.json'), {}, 2),
            (('coarse', 'far_pair.json'), {'thresholds': [6]}, 2),
            (('shell', 'missing.json'), {}, 3),
            (('shell', os.path.join(spaces_fixtures, 'truncated.json')), {}, 3),
        ]
        with tempfile.TemporaryDirectory() as tmp:
            for (kind, name), options, code in cases:
                args = [a for a in (kind, name and os.path.join(FIXTURES, name)) if a]
                with self.assertRaises(CommandError) as cm:
                    call_command('embed', *args, out=tmp, stdout=StringIO(), **options)
                self.assertEqual(cm.exception.returncode, code, (kind, name, options))
            for args, code in (([], 2), ([os.path.join(tmp, 'none.json')], 3)):
                with self.assertRaises(CommandError) as cm:
                    call_command('moduli', *args, out=tmp, stdout=StringIO())
                self.assertEqual(cm.exception.returncode, code, args)


class PipelineTest(SimpleTestCase):
    ARTIFACTS = [
        'family/graph-12.json', 'family/certificate-12.json',
        'obstruct/moduli.csv', 'obstruct/poincare.json',
        'game/certificate.json', 'game/separating-map.json',
        'embed/embedding.json', 'embed/moduli.csv', 'embed/moduli.svg',
    ]

    def run_pipeline(self, out):
        family = os.path.join(out, 'family')
        quiet = {'stdout': StringIO()}
        call_command('gen_expander', n=[10, 12], seed=7, out=family, **quiet)
        call_command('obstruct', family, t=2, seed=7, maps=2, out=os.path.join(out, 'obstruct'),
                     **quiet)
        call_command('certificate', os.path.join(family, 'graph-10.json'), threshold=2, maps=10,
                     seed=7, out=os.path.join(out, 'game'), **quiet)
        call_command('embed', 'coarse', os.path.join(family, 'graph-12.json'), thresholds=[3],
                     out=os.path.join(out, 'embed'), **quiet)
        call_command('plot', os.path.join(out, 'embed', 'moduli.csv'), 'moduli.svg',
                     staircase=True, out=os.path.join(out, 'embed'), **quiet)

    def test_byte_identical(self):
        with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
            self.run_pipeline(a)
            self.run_pipeline(b)
            for name in self.ARTIFACTS:
                with open(os.path.join(a, name), 'rb') as fa, open(os.path.join(b, name), 'rb') as fb:
                    self.assertEqual(fa.read(), fb.read(), name)
