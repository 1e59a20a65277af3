from spaces.errors import InvariantViolation, ParameterError
from spaces.files import number_cell, write_csv, write_json
from utils.commands import LabCommand
from utils.rng import derive_seed
from expander.files import read_family
from obstruction.poincare import moduli_cap, poincare_ratio, random_euclidean_images


class Command(LabCommand):
    help = 'Spectral obstructions for a certified expander family.\n\n' \
           'Writes moduli.csv (caps on rho1 at distance t for L-Lipschitz maps) ' \
           'and poincare.json (Poincare ratios of random Gaussian maps).'
    requires_seed = True
    defaults = {'family': None, 'L': 1.0, 't': None, 'dimension': 3, 'maps': 1}

    def add_lab_arguments(self, parser):
        parser.add_argument('family', nargs='?', default=None,
                            help='Directory written by gen_expander.')
        parser.add_argument('--L', dest='L', type=float, default=None,
                            help='Lipschitz constant of the maps (default 1).')
        parser.add_argument('--t', dest='t', type=float, default=None,
                            help='Distance threshold.')
        parser.add_argument('--dimension', type=int, default=None,
                            help='Dimension of the random Euclidean maps (default 3).')
        parser.add_argument('--maps', type=int, default=None,
                            help='Random maps per graph (default 1).')

    def run(self, config):
        if not config['family']:
            raise ParameterError("a family directory is required")
        if config['t'] is None:
            raise ParameterError("--t is required")
        family = read_family(config['family'])
        constraints = moduli_cap(family, config['L'], config['t'])
        write_csv(self.output_path(config, 'moduli.csv'),
                  ['n', 't', 'far_fraction', 'bound', 'rho1_cap'],
                  [[c.n, number_cell(c.t), number_cell(c.far_fraction), number_cell(c.bound),
                    'vacuous' if c.vacuous else number_cell(c.rho1_cap)]
                   for c in constraints])
        for c in constraints:
            self.stdout.write("n=%d diameter=%g far_fraction=%.6g rho1(%g) <= %s" % (
                c.n, c.diameter, c.far_fraction, c.t,
                'vacuous' if c.vacuous else '%.6g' % c.rho1_cap))

        reports = []
        for i, (graph, certificate) in enumerate(family):
            for j in range(config['maps']):
                images = random_euclidean_images(
                    graph, config['dimension'], derive_seed(derive_seed(config['seed'], i), j))
                report = poincare_ratio(graph, images, certificate.lambda2)
                if report.violated:
                    raise InvariantViolation("Poincare ratio %.12g exceeds the bound %.12g on n=%d"
                                             % (report.ratio, report.bound, graph.n))
                reports.append(report.as_dict())
        write_json(self.output_path(config, 'poincare.json'), reports)
