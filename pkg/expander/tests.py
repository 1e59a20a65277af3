import itertools
import json
import math
import os
import tempfile
import threading
from fractions import Fraction
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings as hsettings, strategies as st

from spaces.errors import (InfeasibleFamily, InvariantViolation, ParameterError,
                           ResamplingExhausted, ScaleError)
from spaces.graphs import complete_graph, cycle_graph, petersen_graph
from utils.linalg import jacobi_eigh
from utils.rng import derive_seed
from .certificates import (EXACT, SPECTRAL, boundary_size, check_spectrum, cheeger_exact,
                           cheeger_spectral, expansion_certificate, spectral_gap)
from .family import certified_member, expander_family
from .files import read_family, read_regular_graph
from .regular import RegularGraph, random_regular_graph

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def combinations_cheeger(graph):
    """h(G) by listing every subset of at most n/2 vertices."""
    return min(Fraction(boundary_size(graph, subset), size)
               for size in range(1, graph.n // 2 + 1)
               for subset in itertools.combinations(range(graph.n), size))


class RandomRegularGraphTest(SimpleTestCase):
    def test_four_vertices(self):
        for seed in (0, 1, 99):
            self.assertEqual(random_regular_graph(4, 3, seed), complete_graph(4))

    def test_ten_vertices(self):
        graph = random_regular_graph(10, 3, 42)
        self.assertEqual(graph.degrees(), [3] * 10)
        self.assertEqual(graph.edge_count, 15)
        self.assertEqual(graph, random_regular_graph(10, 3, 42))

    def test_parameters(self):
        with self.assertRaisesRegex(ParameterError, 'even'):
            random_regular_graph(5, 3, 0)
        with self.assertRaises(ParameterError):
            random_regular_graph(6, 2, 0)
        with self.assertRaises(ParameterError):
            random_regular_graph(4, 4, 0)

    @override_settings(PAIRING_MAX_SAMPLES=0)
    def test_exhausted(self):
        with self.assertRaises(ResamplingExhausted):
            random_regular_graph(8, 3, 0)

    def test_irregular_rejected(self):
        with self.assertRaises(ParameterError):
            RegularGraph(3, [(0, 1), (1, 2)])


class CheegerTest(SimpleTestCase):
    def test_small_graphs(self):
        self.assertEqual(cheeger_exact(complete_graph(4)).h, 2)
        self.assertEqual(cheeger_exact(cycle_graph(4)).h, 1)
        self.assertEqual(cheeger_exact(cycle_graph(6)).h, Fraction(2, 3))
        self.assertEqual(cheeger_exact(petersen_graph()).h, 1)

    def test_witness_attains(self):
        certificate = cheeger_exact(cycle_graph(6))
        self.assertEqual(sorted(certificate.witness), [0, 1, 2])
        self.assertEqual(certificate.boundary, 2)
        self.assertEqual(certificate.method, EXACT)

    @hsettings(max_examples=15, deadline=None)
    @given(st.sampled_from([6, 8, 10, 12]), st.integers(0, 2 ** 64 - 1))
    def test_exact_matches_combinations(self, n, seed):
        graph = random_regular_graph(n, 3, seed)
        certificate = cheeger_exact(graph)
        self.assertEqual(certificate.h, combinations_cheeger(graph))
        lower, upper = certificate.cheeger_bounds()
        self.assertTrue(lower - 1e-9 <= float(certificate.h) <= upper + 1e-9)

    def test_known_eigenvalues(self):
        for graph, expected in ((complete_graph(4), -1), (cycle_graph(4), 0), (petersen_graph(), 1)):
            lambda2, _ = spectral_gap(graph)
            self.assertAlmostEqual(lambda2, expected, delta=1e-9)

    def test_gap_matches_numpy(self):
        graph = random_regular_graph(16, 3, 5)
        lambda2, gap = spectral_gap(graph)
        expected = np.linalg.eigvalsh(graph.adjacency_matrix())[-2]
        self.assertAlmostEqual(lambda2, expected, places=9)
        self.assertAlmostEqual(gap, 3 - expected, places=9)

    def test_spectral_below_exact(self):
        graph = random_regular_graph(12, 3, 11)
        spectral, exact = cheeger_spectral(graph), cheeger_exact(graph)
        self.assertEqual(spectral.method, SPECTRAL)
        self.assertLessEqual(spectral.h, exact.h)
        self.assertEqual(spectral.h, Fraction(math.floor((3 - spectral.lambda2) / 2 * 10 ** 9),
                                              10 ** 9))
        self.assertLessEqual(len(spectral.witness), 6)
        self.assertGreaterEqual(Fraction(spectral.boundary, len(spectral.witness)), exact.h)

    @override_settings(EXACT_CHEEGER_MAX_VERTICES=8)
    def test_scale_limit(self):
        graph = random_regular_graph(10, 3, 3)
        with self.assertRaises(ScaleError):
            cheeger_exact(graph)
        self.assertEqual(expansion_certificate(graph).method, SPECTRAL)
        self.assertEqual(expansion_certificate(complete_graph(4)).method, EXACT)


class SpectrumStructureTest(SimpleTestCase):
    def test_certified_graphs(self):
        sizes = [6, 8, 10, 12, 14, 16, 18, 20, 22, 24]
        for i in range(50):
            n = sizes[i % len(sizes)]
            graph, certificate = certified_member(n, 3, 0.01, derive_seed(2024, i))
            values, _ = jacobi_eigh(graph.adjacency_matrix())
            self.assertAlmostEqual(values.sum(), 0, delta=1e-9)
            self.assertAlmostEqual((values * values).sum(), 3 * n, delta=1e-9)
            self.assertAlmostEqual(certificate.lambda2, values[1], delta=1e-9)
            lower, upper = certificate.cheeger_bounds()
            self.assertLessEqual(lower - 1e-9, float(certificate.h), (n, i))
            self.assertLessEqual(float(certificate.h), upper + 1e-9, (n, i))

    def test_seeds_of_ten_vertices(self):
        for seed in range(20):
            graph = random_regular_graph(10, 3, seed)
            if graph.is_connected():
                lambda2, gap = spectral_gap(graph)
                self.assertLess(lambda2, 3)
                self.assertAlmostEqual(lambda2 + gap, 3)

    def test_broken_spectrum(self):
        graph = petersen_graph()
        values, _ = jacobi_eigh(graph.adjacency_matrix())
        check_spectrum(RegularGraph.from_graph(graph), values)
        with self.assertRaises(InvariantViolation):
            check_spectrum(RegularGraph.from_graph(graph), values + 1e-6)


class FamilyTest(SimpleTestCase):
    def test_member(self):
        graph, certificate = certified_member(4, 3, 1.5, 7)
        self.assertEqual(graph, complete_graph(4))
        self.assertEqual(certificate.h, 2)

    def test_workers_do_not_change_the_family(self):
        running = threading.active_count()
        one = expander_family([8, 10, 12], 3, 0.2, 7, workers=1)
        three = expander_family([8, 10, 12], 3, 0.2, 7, workers=3)
        self.assertEqual([g for g, _ in one], [g for g, _ in three])
        self.assertEqual([c.as_dict() for _, c in one], [c.as_dict() for _, c in three])
        self.assertEqual([g.n for g, _ in one], [8, 10, 12])
        self.assertEqual(threading.active_count(), running)

    @override_settings(FAMILY_MAX_ATTEMPTS=2)
    def test_infeasible(self):
        with self.assertRaises(InfeasibleFamily) as cm:
            certified_member(8, 3, 2.5, 7)
        self.assertLess(cm.exception.best, 2.5)

    def test_parity_checked_up_front(self):
        with self.assertRaises(ParameterError):
            expander_family([8, 9], 3, 0.2, 7)


class GenExpanderCommandTest(SimpleTestCase):
    def test_complete_graph_family(self):
        with tempfile.TemporaryDirectory() as tmp:
            call_command('gen_expander', n=[4], k=3, eps=1.5, seed=1, out=tmp, stdout=StringIO())
            with open(os.path.join(tmp, 'certificate-4.json')) as fh:
                certificate = json.load(fh)
            self.assertEqual((certificate['h_num'], certificate['h_den']), (2, 1))
            self.assertEqual(certificate['method'], 'exact')
            [(graph, stored)] = read_family(tmp)
            self.assertEqual(graph, complete_graph(4))
            self.assertEqual(stored.h, 2)

    def test_byte_identical_reruns(self):
        with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
            for out in (a, b):
                call_command('gen_expander', n=[10, 12], seed=7, out=out, stdout=StringIO())
            for name in ('graph-10.json', 'certificate-12.json'):
                with open(os.path.join(a, name), 'rb') as fa, open(os.path.join(b, name), 'rb') as fb:
                    self.assertEqual(fa.read(), fb.read())

    def test_exit_codes(self):
        with tempfile.TemporaryDirectory() as tmp:
            blocker = os.path.join(tmp, 'file')
            open(blocker, 'w').close()
            cases = [
                ({'n': [5], 'seed': 1, 'out': tmp}, 2),
                ({'n': [4], 'out': tmp}, 2),
                ({'n': [4], 'seed': -1, 'out': tmp}, 2),
                ({'n': [4], 'seed': 1, 'out': os.path.join(blocker, 'sub')}, 3),
            ]
            for options, code in cases:
                with self.assertRaises(CommandError) as cm:
                    call_command('gen_expander', stdout=StringIO(), **options)
                self.assertEqual(cm.exception.returncode, code, options)

    def test_missing_family(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(FileNotFoundError):
                read_family(os.path.join(tmp, 'nothing'))


class CheegerCommandTest(SimpleTestCase):
    def test_petersen(self):
        with tempfile.TemporaryDirectory() as tmp:
            call_command('cheeger', os.path.join(FIXTURES, 'petersen.json'), out=tmp,
                         stdout=StringIO())
            with open(os.path.join(tmp, 'certificate-petersen.json')) as fh:
                certificate = json.load(fh)
        self.assertEqual((certificate['h_num'], certificate['h_den']), (1, 1))
        self.assertAlmostEqual(certificate['lambda2'], 1.0, places=9)

    def test_spectral_method(self):
        with tempfile.TemporaryDirectory() as tmp:
            call_command('cheeger', os.path.join(FIXTURES, 'petersen.json'), method='spectral',
                         out=tmp, stdout=StringIO())
            with open(os.path.join(tmp, 'certificate-petersen.json')) as fh:
                certificate = json.load(fh)
        self.assertEqual(certificate['method'], 'spectral')
        self.assertGreaterEqual(Fraction(certificate['h_num'], certificate['h_den']),
                                Fraction(999999999, 10 ** 9))

    def test_irregular_graph(self):
        self.assertEqual(read_regular_graph(os.path.join(FIXTURES, 'petersen.json')),
                         petersen_graph())
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(CommandError) as cm:
                call_command('cheeger', os.path.join(FIXTURES, 'irregular.json'), out=tmp)
        self.assertEqual(cm.exception.returncode, 3)
