import os
import tempfile
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st

from spaces.errors import ConvergenceError, NotNegativeType, ShapeError
from spaces.files import write_csv
from .charts import build_chart, numeric
from .linalg import centered_gram, jacobi_eigh, off_diagonal_norm, psd_factor
from .rng import SplitMix64, check_seed, derive_seed, mix


@st.composite
def symmetric_matrices(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    entries = draw(st.lists(st.floats(-10, 10, allow_nan=False), min_size=n * n, max_size=n * n))
    a = np.array(entries).reshape(n, n)
    return (a + a.T) / 2


class JacobiTest(SimpleTestCase):
    @hsettings(max_examples=80, deadline=None)
    @given(symmetric_matrices())
    def test_matches_numpy(self, a):
        values, vectors = jacobi_eigh(a)
        np.testing.assert_allclose(values, np.linalg.eigvalsh(a)[::-1], atol=1e-8)
        np.testing.assert_allclose(a @ vectors, vectors * values, atol=1e-8)
        np.testing.assert_allclose(vectors.T @ vectors, np.eye(len(a)), atol=1e-10)

    def test_off_diagonal_norm(self):
        a = np.diag([1e8, 1.0, 2.0])
        a[0, 1] = a[1, 0] = 1e-13
        self.assertAlmostEqual(off_diagonal_norm(a), np.sqrt(2) * 1e-13, delta=1e-20)
        self.assertEqual(off_diagonal_norm(np.diag([1e8, 1.0])), 0)

    def test_nearly_diagonal(self):
        a = np.diag([3.0, 2.0, 1.0]) + 1e-7 * np.array([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
        values, vectors = jacobi_eigh(a)
        np.testing.assert_allclose(a @ vectors, vectors * values, atol=1e-11)
        np.testing.assert_allclose(values, np.linalg.eigvalsh(a)[::-1], atol=1e-11)

    def test_scaled_adjacency_converges(self):
        for scale in (1.0, 1e3, 1e6):
            a = scale * (np.ones((12, 12)) - np.eye(12)) / 11 * 3
            values, _ = jacobi_eigh(a)
            self.assertAlmostEqual(values[0] / scale, 3, delta=1e-9)
            self.assertAlmostEqual(values.sum() / scale, 0, delta=1e-9)

    def test_descending(self):
        values, _ = jacobi_eigh(np.diag([1.0, 3.0, 2.0]))
        self.assertEqual(list(values), [3.0, 2.0, 1.0])

    def test_no_sweeps_left(self):
        with self.assertRaises(ConvergenceError):
            jacobi_eigh([[2.0, 1.0], [1.0, 2.0]], max_sweeps=0)

    def test_not_square(self):
        with self.assertRaises(ShapeError):
            jacobi_eigh(np.ones((2, 3)))


class PsdFactorTest(SimpleTestCase):
    def test_reconstructs_gram(self):
        x = np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0], [1.0, 1.0]])
        d2 = ((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2)
        points, smallest = psd_factor(centered_gram(d2))
        rebuilt = ((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
        np.testing.assert_allclose(rebuilt, d2, atol=1e-9)
        self.assertGreater(smallest, -1e-9)

    def test_rejects_indefinite(self):
        with self.assertRaises(NotNegativeType) as cm:
            psd_factor(np.array([[0.0, 1.0], [1.0, 0.0]]))
        self.assertAlmostEqual(cm.exception.eigenvalue, -1.0)

    def test_clips_small_negatives(self):
        with self.assertLogs('utils.linalg', 'WARNING'):
            points, smallest = psd_factor(np.diag([1.0, -1e-7]))
        self.assertAlmostEqual(smallest, -1e-7)
        self.assertEqual(points.shape, (2, 1))

    def test_zero_matrix(self):
        points, _ = psd_factor(np.zeros((3, 3)))
        self.assertEqual(points.shape, (3, 1))
        self.assertFalse(points.any())


class SplitMixTest(SimpleTestCase):
    def test_reference_output(self):
        self.assertEqual(SplitMix64(0).next_u64(), 0xE220A8397B1DCDAF)

    def test_deterministic(self):
        a, b = SplitMix64(7), SplitMix64(7)
        self.assertEqual([a.next_u64() for _ in range(5)], [b.next_u64() for _ in range(5)])
        self.assertNotEqual(derive_seed(7, 0), derive_seed(7, 1))
        self.assertEqual(derive_seed(7, 3), mix(7 ^ 3))

    def test_ranges(self):
        rng = SplitMix64(42)
        for _ in range(200):
            self.assertTrue(0 <= rng.random() < 1)
            self.assertTrue(0 <= rng.below(7) < 7)
        self.assertEqual(sorted(rng.shuffle(list(range(20)))), list(range(20)))

    def test_seed_range(self):
        with self.assertRaises(ValueError):
            check_seed(-1)
        with self.assertRaises(ValueError):
            check_seed(1 << 64)


class ChartTest(SimpleTestCase):
    def test_numeric_cells(self):
        self.assertEqual(numeric('2.5'), 2.5)
        self.assertIsNone(numeric('NA'))
        self.assertIsNone(numeric('vacuous'))
        self.assertIsNone(numeric('inf'))

    def test_skips_na(self):
        chart = build_chart(['r', 'rho1', 'rho2'], [['0', 'NA', '1'], ['1', '2', '3']])
        self.assertEqual(chart.series[0].points, [(1.0, 2.0)])
        self.assertEqual(chart.series[1].points, [(0.0, 1.0), (1.0, 3.0)])

    def test_staircase_path(self):
        chart = build_chart(['x', 'y'], [['0', '0'], ['1', '1']], staircase=True)
        self.assertEqual(len(chart.series[0].path), 3)

    def test_pixels_inside_frame(self):
        chart = build_chart(['x', 'y'], [[str(i), str(i * i)] for i in range(5)])
        for x, y in chart.series[0].pixels:
            self.assertTrue(chart.left <= x <= chart.right)
            self.assertTrue(chart.top <= y <= chart.bottom)


class PlotCommandTest(SimpleTestCase):
    def plot(self, tmp, header, rows, **options):
        source = os.path.join(tmp, 'table.csv')
        if header is None:
            open(source, 'w').close()
        else:
            write_csv(source, header, rows)
        call_command('plot', source, 'chart.svg', out=tmp, stdout=StringIO(), **options)
        with open(os.path.join(tmp, 'chart.svg')) as fh:
            return fh.read()

    def test_empty_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            svg = self.plot(tmp, None, [])
        self.assertIn('width="800" height="600"', svg)
        self.assertEqual(svg.count('<line '), 2 + 12)
        self.assertNotIn('<circle', svg)
        self.assertNotIn('<polyline', svg)

    def test_single_row(self):
        with tempfile.TemporaryDirectory() as tmp:
            svg = self.plot(tmp, ['n', 'rho1_cap'], [[50, 1.5]])
        self.assertEqual(svg.count('<circle'), 1)
        self.assertNotIn('<polyline', svg)
        self.assertIn('>n</text>', svg)
        self.assertIn('>rho1_cap</text>', svg)

    def test_na_cells_skipped(self):
        with tempfile.TemporaryDirectory() as tmp:
            svg = self.plot(tmp, ['bin_lo', 'rho1'], [[0, 'NA'], [1, 2], [2, 3]])
        self.assertEqual(svg.count('<circle'), 2)

    def test_deterministic(self):
        rows = [[i, i * 0.5, 'NA' if i % 3 else i] for i in range(10)]
        with tempfile.TemporaryDirectory() as tmp:
            first = self.plot(tmp, ['x', 'a', 'b'], rows, staircase=True)
            second = self.plot(tmp, ['x', 'a', 'b'], rows, staircase=True)
        self.assertEqual(first, second)

    def test_unknown_column(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(CommandError) as cm:
                self.plot(tmp, ['x', 'y'], [[1, 2]], y=['z'])
        self.assertEqual(cm.exception.returncode, 2)

    def test_missing_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(CommandError) as cm:
                call_command('plot', os.path.join(tmp, 'none.csv'), out=tmp)
        self.assertEqual(cm.exception.returncode, 3)
