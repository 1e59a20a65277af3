import os

from utils.commands import LabCommand
from spaces.errors import ParameterError
from expander.certificates import cheeger_exact, cheeger_spectral, expansion_certificate
from expander.files import read_regular_graph
from spaces.files import write_json

METHODS = {
    'auto': expansion_certificate,
    'exact': cheeger_exact,
    'spectral': cheeger_spectral,
}


class Command(LabCommand):
    help = 'Certifies the expansion of a regular graph file.'
    defaults = {'graph': None, 'method': 'auto'}

    def add_lab_arguments(self, parser):
        parser.add_argument('graph', nargs='?', default=None, help='Graph JSON file.')
        parser.add_argument('--method', choices=sorted(METHODS), default=None)

    def run(self, config):
        if not config['graph']:
            raise ParameterError("a graph file is required")
        if config['method'] not in METHODS:
            raise ParameterError("unknown method %r" % config['method'])
        graph = read_regular_graph(config['graph'])
        certificate = METHODS[config['method']](graph)
        name = os.path.splitext(os.path.basename(config['graph']))[0]
        write_json(self.output_path(config, 'certificate-%s.json' % name), certificate.as_dict())
        self.stdout.write("h %s %s (%s), witness %s" % (
            '=' if certificate.method == 'exact' else '>=', certificate.h,
            certificate.method, list(certificate.witness)))
        self.stdout.write("lambda2=%.12g gap=%.12g" % (certificate.lambda2, certificate.gap))
