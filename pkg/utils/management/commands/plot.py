from django.template.loader import render_to_string

from spaces.errors import ParameterError
from spaces.files import read_csv, write_text
from utils.charts import build_chart
from utils.commands import LabCommand


class Command(LabCommand):
    help = 'Draws CSV columns as an SVG line (or staircase) chart.'
    defaults = {'csv': None, 'svg': 'plot.svg', 'x': None, 'y': [], 'staircase': False}

    def add_lab_arguments(self, parser):
        parser.add_argument('csv', nargs='?', default=None, help='Input CSV file.')
        parser.add_argument('svg', nargs='?', default=None,
                            help='Output SVG, relative to --out (default plot.svg).')
        parser.add_argument('--x', default=None, help='Column on the x axis (default: the first).')
        parser.add_argument('--y', nargs='+', default=None,
                            help='Columns to draw (default: all others).')
        parser.add_argument('--staircase', action='store_true', default=None,
                            help='Draw steps instead of straight segments.')

    def run(self, config):
        if not config['csv']:
            raise ParameterError("an input CSV file is required")
        header, rows = read_csv(config['csv'])
        for column in [config['x']] + list(config['y'] or []):
            if column is not None and header and column not in header:
                raise ParameterError("%s has no column %r" % (config['csv'], column))
        chart = build_chart(header, rows, config['x'], config['y'] or None,
                            staircase=bool(config['staircase']))
        path = self.output_path(config, config['svg'])
        write_text(path, render_to_string('utils/plot.svg', {'chart': chart}))
        self.stdout.write("%s: %s" % (path, ", ".join(
            "%s (%d points)" % (s.name, len(s.points)) for s in chart.series)))
