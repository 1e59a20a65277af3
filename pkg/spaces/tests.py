import json
import math
import os
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st

from .clouds import PointCloud, parse_exponent, pnorm_metric
from .errors import ConnectivityError, FormatError, ParameterError, ShapeError
from .files import read_any_space, read_cloud, read_csv, read_space, space_payload, dumps
from .graphs import (SimpleGraph, complete_graph, cycle_graph, graph_metric, path_graph,
                     petersen_graph)
from .metric import (FiniteMetricSpace, ball_truncation, bounded_geometry_profile,
                     disjoint_union, distance_distribution, restrict, validate_metric)

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def fixture(name):
    return os.path.join(FIXTURES, name)


def path_enumeration_distance(graph, source, target):
    """Shortest length over all simple paths, by exhaustive depth-first search."""
    best = [math.inf]

    def walk(u, seen, length):
        if u == target:
            best[0] = min(best[0], length)
            return
        for v in graph.adjacency[u]:
            if v not in seen:
                walk(v, seen | {v}, length + 1)

    walk(source, {source}, 0)
    return best[0]


@st.composite
def connected_graphs(draw, max_n=7):
    n = draw(st.integers(min_value=1, max_value=max_n))
    # a random spanning tree keeps the graph connected
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, n)}
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=8))
    edges |= {(min(u, v), max(u, v)) for u, v in extra if u != v}
    return SimpleGraph(n, sorted(edges))


class ValidateMetricTest(SimpleTestCase):
    def test_two_point_metric(self):
        self.assertTrue(validate_metric([[0, 1], [1, 0]], tolerance=0).ok)

    def test_asymmetry(self):
        report = validate_metric([[0, 1], [2, 0]], tolerance=0)
        self.assertEqual(report.violations, [('asymmetry', (0, 1))])

    def test_triangle(self):
        report = validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]], tolerance=0)
        self.assertIn(('triangle', (0, 2, 1)), report.violations)
        self.assertFalse(report.ok)

    def test_non_square(self):
        with self.assertRaises(ShapeError):
            validate_metric([[0, 1, 2], [1, 0, 1]])

    def test_zero_distance_between_points(self):
        report = validate_metric([[0, 0], [0, 0]])
        self.assertEqual(report.violations, [('non-positive distance', (0, 1))])

    def test_real_matrix_tolerance(self):
        d = [[0, 1, 2 + 1e-13], [1, 0, 1], [2 + 1e-13, 1, 0]]
        self.assertTrue(validate_metric(d).ok)
        self.assertFalse(validate_metric(d, tolerance=1e-14).ok)

    def test_space_rejects_non_metric(self):
        with self.assertRaises(ParameterError):
            FiniteMetricSpace(['a', 'b'], [[0, 1], [2, 0]])
        with self.assertRaises(ParameterError):
            FiniteMetricSpace(['a', 'a'], [[0, 1], [1, 0]])


class GraphMetricTest(SimpleTestCase):
    def test_four_cycle(self):
        space = graph_metric(cycle_graph(4))
        self.assertEqual(space.dist[0, 2], 2)
        self.assertEqual(space.dist[0, 1], 1)
        self.assertTrue(space.is_integral())

    def test_single_edge(self):
        self.assertEqual(graph_metric(complete_graph(2)).dist[0, 1], 1)

    def test_path(self):
        self.assertEqual(graph_metric(path_graph(3)).dist[0, 2], 2)

    def test_disconnected(self):
        with self.assertRaises(ConnectivityError) as cm:
            graph_metric(SimpleGraph(4, [(0, 1), (2, 3)]))
        self.assertEqual((cm.exception.u, cm.exception.v), (0, 2))

    def test_invalid_edges(self):
        with self.assertRaises(ParameterError):
            SimpleGraph(3, [(1, 1)])
        with self.assertRaises(ParameterError):
            SimpleGraph(3, [(0, 1), (1, 0)])
        with self.assertRaises(ShapeError):
            SimpleGraph(3, [(0, 3)])

    def test_petersen(self):
        graph = petersen_graph()
        self.assertEqual(graph.edge_count, 15)
        self.assertEqual(set(graph.degrees()), {3})
        self.assertEqual(graph_metric(graph).diameter, 2)

    @hsettings(max_examples=60, deadline=None)
    @given(connected_graphs())
    def test_bfs_matches_path_enumeration(self, graph):
        space = graph_metric(graph)
        for u in range(graph.n):
            for v in range(graph.n):
                self.assertEqual(space.dist[u, v], path_enumeration_distance(graph, u, v))
        self.assertTrue(validate_metric(space.dist).ok)


class PointCloudTest(SimpleTestCase):
    def setUp(self):
        self.points = [[1, 0], [0, 1]]

    def test_unit_vectors(self):
        self.assertEqual(pnorm_metric(PointCloud(self.points, p=1)).dist[0, 1], 2)
        self.assertAlmostEqual(pnorm_metric(PointCloud(self.points, p=2)).dist[0, 1],
                               math.sqrt(2), places=15)
        self.assertEqual(pnorm_metric(PointCloud(self.points, p='inf')).dist[0, 1], 1)

    def test_exponent(self):
        self.assertEqual(parse_exponent('inf'), math.inf)
        self.assertEqual(parse_exponent('3'), 3.0)
        with self.assertRaises(ParameterError):
            parse_exponent(0.5)
        with self.assertRaises(ParameterError):
            PointCloud(self.points, p=0.5)

    def test_shapes(self):
        with self.assertRaises(ShapeError):
            PointCloud([1, 2, 3])
        with self.assertRaises(ShapeError):
            PointCloud(self.points, blocks=[1, 2])

    def test_blocks(self):
        # blocks (2, 1): l1 sum of the Euclidean norms 5 and 1
        cloud = PointCloud([[3, 4, 1], [0, 0, 0]], p=1, blocks=[2, 1])
        self.assertEqual(cloud.distance_matrix()[0, 1], 6)
        self.assertEqual(list(cloud.point_norms()), [6, 0])

    def test_coincident_points(self):
        with self.assertRaises(ParameterError):
            pnorm_metric(PointCloud([[1, 1], [1, 1]]))

    @hsettings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3),
                    min_size=2, max_size=8, unique_by=tuple),
           st.sampled_from([1, 1.5, 2, 3, 'inf']))
    def test_norm_metrics_are_metrics(self, points, p):
        space = pnorm_metric(PointCloud(points, p=p))
        self.assertTrue(validate_metric(space.dist).ok)


class ProfileTest(SimpleTestCase):
    def setUp(self):
        self.c4 = graph_metric(cycle_graph(4))

    def test_four_cycle_profile(self):
        profile = bounded_geometry_profile(self.c4, [0, 1, 2])
        self.assertEqual(profile.counts, (1, 3, 4))

    def test_radius_beyond_diameter(self):
        space = graph_metric(petersen_graph())
        self.assertEqual(bounded_geometry_profile(space, [space.diameter]).counts, (10,))

    def test_radii_checked(self):
        with self.assertRaises(ParameterError):
            bounded_geometry_profile(self.c4, [1, 1])
        with self.assertRaises(ParameterError):
            bounded_geometry_profile(self.c4, [-1])

    def test_distance_distribution(self):
        self.assertEqual(distance_distribution(self.c4), [(0.0, 4), (1.0, 8), (2.0, 4)])

    def test_restrict_and_ball(self):
        path = graph_metric(path_graph(5))
        ball = ball_truncation(path, 2, 1)
        self.assertEqual(ball.labels, ('1', '2', '3'))
        self.assertEqual(ball.dist[0, 2], 2)
        sub = restrict(path, [4, 0])
        self.assertEqual(sub.labels, ('4', '0'))
        self.assertEqual(sub.dist[0, 1], 4)


class DisjointUnionTest(SimpleTestCase):
    def test_two_points(self):
        point = FiniteMetricSpace(['x'], [[0]])
        union = disjoint_union([point, point])
        self.assertEqual(union.dist[0, 1], 3)
        self.assertEqual(union.labels, ('1:x', '2:x'))

    def test_two_edges(self):
        edge = graph_metric(complete_graph(2))
        union = disjoint_union([edge, edge])
        self.assertEqual(union.dist[0, 1], 1)
        self.assertEqual(union.dist[2, 3], 1)
        self.assertEqual(union.dist[0, 2], 5)
        self.assertTrue(validate_metric(union.dist).ok)

    def test_single_space(self):
        edge = graph_metric(complete_graph(2))
        self.assertIs(disjoint_union([edge]), edge)


class FilesTest(SimpleTestCase):
    def test_read_space(self):
        space = read_space(fixture('k2.json'))
        self.assertEqual(space.labels, ('a', 'b'))

    def test_read_any_space(self):
        self.assertEqual(read_any_space(fixture('c4.json')).dist[0, 2], 2)
        self.assertEqual(read_any_space(fixture('unit_vectors.json')).dist[0, 1], 2)
        self.assertEqual(read_cloud(fixture('unit_vectors.json')).p, 1)

    def test_syntax_error_position(self):
        with self.assertRaisesRegex(FormatError, r'truncated\.json: line \d+ column \d+'):
            read_space(fixture('truncated.json'))

    def test_non_metric_file(self):
        with self.assertRaisesRegex(FormatError, 'asymmetric.json'):
            read_space(fixture('asymmetric.json'))

    def test_field_diagnostics(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'space.json')
            with open(path, 'w') as fh:
                json.dump({'labels': ['a', 'b'], 'dist': [[0, 1]], 'colour': 'red'}, fh)
            with self.assertRaisesRegex(FormatError, 'unexpected field.*colour'):
                read_space(path)
            with open(path, 'w') as fh:
                json.dump({'labels': ['a', 'b'], 'dist': [[0, 1]]}, fh)
            with self.assertRaisesRegex(FormatError, 'dist: Distance matrix must be 2 x 2'):
                read_space(path)

    def test_integral_payload(self):
        text = dumps(space_payload(graph_metric(path_graph(2))))
        self.assertEqual(json.loads(text)['dist'], [[0, 1], [1, 0]])


class MetricCommandTest(SimpleTestCase):
    def test_profile_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            call_command('metric', fixture('c4.json'), radii=[0, 1, 2], out=tmp, stdout=StringIO())
            header, rows = read_csv(os.path.join(tmp, 'profile.csv'))
            self.assertEqual(header, ['radius', 'max_ball'])
            self.assertEqual([r[1] for r in rows], ['1', '3', '4'])
            header, rows = read_csv(os.path.join(tmp, 'distances.csv'))
            self.assertEqual(sum(int(r[1]) for r in rows), 16)
            with open(os.path.join(tmp, 'space.json')) as fh:
                self.assertEqual(json.load(fh)['dist'][0], [0, 1, 2, 1])

    def test_union_and_ball(self):
        with tempfile.TemporaryDirectory() as tmp:
            call_command('metric', fixture('k2.json'), fixture('k2.json'), ball=[0, 1],
                         out=tmp, stdout=StringIO())
            with open(os.path.join(tmp, 'space.json')) as fh:
                self.assertEqual(json.load(fh)['labels'], ['1:a', '1:b'])

    def test_exit_codes(self):
        with tempfile.TemporaryDirectory() as tmp:
            cases = [
                ((fixture('missing.json'),), 3),
                ((fixture('asymmetric.json'),), 3),
                ((fixture('disconnected.json'),), 2),
                ((), 2),
            ]
            for args, code in cases:
                with self.assertRaises(CommandError) as cm:
                    call_command('metric', *args, out=tmp)
                self.assertEqual(cm.exception.returncode, code, args)
            with self.assertRaises(CommandError) as cm:
                call_command('metric', fixture('c4.json'), radii=[2, 1], out=tmp,
                             stdout=StringIO())
            self.assertEqual(cm.exception.returncode, 2)

    def test_unknown_config_key(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = os.path.join(tmp, 'run.json')
            with open(config, 'w') as fh:
                json.dump({'seed': 7, 'radius': 3}, fh)
            with self.assertRaisesRegex(CommandError, 'radius') as cm:
                call_command('metric', fixture('c4.json'), config=config, out=tmp)
            self.assertEqual(cm.exception.returncode, 3)

    def test_config_supplies_inputs(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = os.path.join(tmp, 'run.json')
            with open(config, 'w') as fh:
                json.dump({'inputs': [fixture('c4.json')], 'radii': [1]}, fh)
            call_command('metric', config=config, out=tmp, stdout=StringIO())
            header, rows = read_csv(os.path.join(tmp, 'profile.csv'))
            self.assertEqual(rows, [['1.0', '3']])

    def test_tolerance_flag(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'near.json')
            with open(path, 'w') as fh:
                json.dump({'labels': ['a', 'b', 'c'],
                           'dist': [[0, 1, 2.000001], [1, 0, 1], [2.000001, 1, 0]]}, fh)
            with self.assertRaises(CommandError):
                call_command('metric', path, out=tmp)
            call_command('metric', path, tol=1e-5, out=tmp, stdout=StringIO())
            with open(os.path.join(tmp, 'space.json')) as fh:
                self.assertEqual(json.load(fh)['dist'][0][2], 2.000001)
