import math
import numbers

from django import forms

from .clouds import parse_exponent
from .errors import ParameterError


def is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def clean_vector_list(value, what):
    """Rows of finite numbers sharing one length."""
    if not isinstance(value, list) or not value:
        raise forms.ValidationError("Expected a nonempty list of %s." % what)
    width = None
    for r, row in enumerate(value):
        if not isinstance(row, list):
            raise forms.ValidationError("Row %d is not a list." % r)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise forms.ValidationError(
                "Row %d has %d entries, row 0 has %d." % (r, len(row), width))
        for c, x in enumerate(row):
            if not is_number(x) or not math.isfinite(x):
                raise forms.ValidationError("Entry [%d][%d] is not a finite number." % (r, c))
    return value


class MetricSpaceForm(forms.Form):
    labels = forms.JSONField()
    dist = forms.JSONField()

    def clean_labels(self):
        labels = self.cleaned_data['labels']
        if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
            raise forms.ValidationError("Labels must be a list of strings.")
        if len(set(labels)) != len(labels):
            raise forms.ValidationError("Labels must be unique.")
        return labels

    def clean_dist(self):
        return clean_vector_list(self.cleaned_data['dist'], "distance rows")

    def clean(self):
        cleaned_data = super().clean()
        labels, dist = cleaned_data.get('labels'), cleaned_data.get('dist')
        if labels is not None and dist is not None:
            if len(dist) != len(labels) or len(dist[0]) != len(labels):
                self.add_error('dist', "Distance matrix must be %d x %d to match "
                               "the labels." % (len(labels), len(labels)))
        return cleaned_data


class GraphForm(forms.Form):
    n = forms.IntegerField(min_value=1)
    edges = forms.JSONField(required=False)

    def clean_edges(self):
        edges = self.cleaned_data['edges'] or []
        if not isinstance(edges, list):
            raise forms.ValidationError("Edges must be a list of [u, v] pairs.")
        for e, edge in enumerate(edges):
            if not isinstance(edge, list) or len(edge) != 2 or \
               not all(isinstance(x, int) and not isinstance(x, bool) for x in edge):
                raise forms.ValidationError("Edge %d is not a pair of integers." % e)
            if edge[0] >= edge[1]:
                raise forms.ValidationError("Edge %d must be listed as [u, v] with u < v." % e)
        if len(set(map(tuple, edges))) != len(edges):
            raise forms.ValidationError("Edges must be listed once.")
        return edges

    def clean(self):
        cleaned_data = super().clean()
        n, edges = cleaned_data.get('n'), cleaned_data.get('edges')
        if n is not None and edges is not None:
            for e, (u, v) in enumerate(edges):
                if u < 0 or v >= n:
                    self.add_error('edges', "Edge %d leaves the vertex range 0..%d." % (e, n - 1))
                    break
        return cleaned_data


class PointCloudForm(forms.Form):
    p = forms.CharField()
    points = forms.JSONField()
    blocks = forms.JSONField(required=False)

    def clean_p(self):
        p = self.cleaned_data['p']
        try:
            return parse_exponent(p)
        except (ValueError, ParameterError):
            raise forms.ValidationError("p must be a number >= 1 or \"inf\".")

    def clean_points(self):
        return clean_vector_list(self.cleaned_data['points'], "points")

    def clean_blocks(self):
        blocks = self.cleaned_data['blocks']
        if blocks is None:
            return None
        if not isinstance(blocks, list) or not all(
                isinstance(b, int) and not isinstance(b, bool) and b > 0 for b in blocks):
            raise forms.ValidationError("Blocks must be a list of positive integers.")
        return blocks

    def clean(self):
        cleaned_data = super().clean()
        points, blocks = cleaned_data.get('points'), cleaned_data.get('blocks')
        if points is not None and len(points[0]) < 1:
            self.add_error('points', "Points must have dimension at least 1.")
        elif points is not None and blocks and sum(blocks) != len(points[0]):
            self.add_error('blocks', "Block sizes must add up to the dimension %d." % len(points[0]))
        return cleaned_data
