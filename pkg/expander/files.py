import glob
import os
import re
from fractions import Fraction

from spaces.errors import FormatError, LabError
from spaces.files import graph_payload, load_json, read_graph, validate_payload, write_json
from .certificates import ExpansionCertificate, boundary_size
from .forms import CertificateForm
from .regular import RegularGraph

GRAPH_NAME = 'graph-%d.json'
CERTIFICATE_NAME = 'certificate-%d.json'


def write_member(directory, graph, certificate):
    write_json(os.path.join(directory, GRAPH_NAME % graph.n), graph_payload(graph))
    write_json(os.path.join(directory, CERTIFICATE_NAME % graph.n), certificate.as_dict())


def read_regular_graph(path):
    graph = read_graph(path)
    try:
        return RegularGraph.from_graph(graph)
    except LabError as e:
        raise FormatError("%s: %s" % (path, e))


def read_certificate(path, graph):
    data = validate_payload(CertificateForm, load_json(path), path)
    if any(v >= graph.n for v in data['witness']):
        raise FormatError("%s: witness: vertex index out of range" % path)
    return ExpansionCertificate(graph.n, graph.k, Fraction(data['h_num'], data['h_den']),
                                tuple(data['witness']), boundary_size(graph, data['witness']),
                                data['lambda2'], data['gap'], data['method'])


def read_family(directory):
    """(graph, certificate) pairs of a family directory, by increasing order."""
    if not os.path.isdir(directory):
        raise FileNotFoundError("family directory %s does not exist" % directory)
    members = []
    for path in glob.glob(os.path.join(directory, 'graph-*.json')):
        match = re.search(r'graph-(\d+)\.json$', path)
        if match:
            members.append((int(match.group(1)), path))
    if not members:
        raise FormatError("%s: no graph-<n>.json files" % directory)
    family = []
    for n, path in sorted(members):
        graph = read_regular_graph(path)
        if graph.n != n:
            raise FormatError("%s: file name says n=%d, graph has %d vertices" % (path, n, graph.n))
        family.append((graph, read_certificate(os.path.join(directory, CERTIFICATE_NAME % n), graph)))
    return family
