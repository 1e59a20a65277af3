"""Reading and writing laboratory artifacts.

JSON payloads are checked with the forms in ``forms.py``; a file that does
not validate raises FormatError naming the file and the offending fields.
Writers produce byte-identical output for identical objects.
"""
import csv
import io
import json
import math
import os

import numpy as np

from .clouds import PointCloud, format_exponent, pnorm_metric
from .errors import FormatError, LabError
from .forms import MetricSpaceForm, GraphForm, PointCloudForm
from .graphs import SimpleGraph, graph_metric
from .metric import FiniteMetricSpace


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError("%r is not JSON serializable" % (o,))


def dumps(payload):
    return json.dumps(payload, indent=2, default=_default, allow_nan=False) + "\n"


def write_text(path, text):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', newline='') as fh:
        fh.write(text)


def write_json(path, payload):
    write_text(path, dumps(payload))


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def write_csv(path, header, rows):
    write_text(path, csv_text(header, rows))


def read_csv(path):
    """Header and rows of a CSV file, cells as strings."""
    with open(path, newline='') as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return [], []
    return rows[0], rows[1:]


def load_json(path):
    with open(path) as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError("%s: line %d column %d: %s" % (path, e.lineno, e.colno, e.msg))


def validate_payload(form_class, payload, path, strict=True):
    """Runs ``form_class`` over a decoded payload and returns cleaned_data."""
    if not isinstance(payload, dict):
        raise FormatError("%s: expected a JSON object at top level" % path)
    if strict:
        unknown = sorted(set(payload) - set(form_class.base_fields))
        if unknown:
            raise FormatError("%s: unexpected field(s): %s" % (path, ", ".join(unknown)))
    form = form_class(data=payload)
    if not form.is_valid():
        problems = []
        for field, errors in form.errors.items():
            for error in errors:
                problems.append("%s: %s" % (field, error))
        raise FormatError("%s: %s" % (path, "; ".join(problems)))
    return form.cleaned_data


def _build(path, factory, *args, **kwargs):
    try:
        return factory(*args, **kwargs)
    except LabError as e:
        raise FormatError("%s: %s" % (path, e))


def space_from_payload(payload, path='<space>'):
    data = validate_payload(MetricSpaceForm, payload, path)
    return _build(path, FiniteMetricSpace, data['labels'], data['dist'])


def graph_from_payload(payload, path='<graph>'):
    data = validate_payload(GraphForm, payload, path)
    return _build(path, SimpleGraph, data['n'], data['edges'])


def cloud_from_payload(payload, path='<cloud>'):
    data = validate_payload(PointCloudForm, payload, path)
    return _build(path, PointCloud, data['points'], data['p'], data['blocks'])


def read_space(path):
    return space_from_payload(load_json(path), path)


def read_graph(path):
    return graph_from_payload(load_json(path), path)


def read_cloud(path):
    return cloud_from_payload(load_json(path), path)


def space_payload(space):
    dist = space.dist
    if space.is_integral():
        dist = dist.astype(np.int64)
    return {'labels': list(space.labels), 'dist': dist}


def graph_payload(graph):
    return {'n': graph.n, 'edges': [list(e) for e in graph.edges]}


def cloud_payload(cloud):
    payload = {'p': format_exponent(cloud.p), 'points': cloud.points}
    if cloud.blocks:
        payload['blocks'] = list(cloud.blocks)
    return payload


def number_cell(value):
    """CSV cell for a float; NaN and None become NA."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return 'NA'
    if isinstance(value, float) and math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return repr(float(value)) if isinstance(value, (float, np.floating)) else str(value)


def read_any_space(path):
    """A metric space from a space, graph or point-cloud file."""
    payload = load_json(path)
    if isinstance(payload, dict) and 'dist' in payload:
        return space_from_payload(payload, path)
    if isinstance(payload, dict) and 'edges' in payload:
        return graph_metric(graph_from_payload(payload, path))
    if isinstance(payload, dict) and 'points' in payload:
        return pnorm_metric(cloud_from_payload(payload, path))
    raise FormatError("%s: not a space, graph or point cloud (no dist, edges or points)" % path)
