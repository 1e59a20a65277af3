from django.conf import settings

from spaces.errors import ParameterError
from utils.commands import LabCommand
from expander.family import expander_family
from expander.files import write_member


class Command(LabCommand):
    help = 'Generates a certified family of random k-regular expanders.\n\n' \
           'Writes graph-<n>.json and certificate-<n>.json for every order n.'
    requires_seed = True
    defaults = {'n': None, 'k': 3, 'eps': None}

    def add_lab_arguments(self, parser):
        parser.add_argument('--n', type=int, nargs='+', default=None,
                            help='Orders of the family members.')
        parser.add_argument('--k', type=int, default=None, help='Degree (default 3).')
        parser.add_argument('--eps', type=float, default=None,
                            help='Required expansion lower bound.')

    def run(self, config):
        if not config['n']:
            raise ParameterError("at least one order --n is required")
        epsilon = config['eps']
        if epsilon is None:
            epsilon = settings.DEFAULT_EXPANSION_EPSILON
        sizes = config['n'] if isinstance(config['n'], list) else [config['n']]
        family = expander_family(sizes, config['k'], epsilon, config['seed'])
        for graph, certificate in family:
            write_member(config['out'], graph, certificate)
            self.stdout.write("n=%d k=%d h %s %s (%s) lambda2=%.6f gap=%.6f" % (
                graph.n, graph.k, '=' if certificate.method == 'exact' else '>=',
                certificate.h, certificate.method, certificate.lambda2, certificate.gap))
