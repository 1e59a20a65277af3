import numpy as np
from django.conf import settings

from spaces.errors import InvariantViolation, ParameterError
from spaces.files import write_json, cloud_payload, read_any_space
from utils.commands import LabCommand
from game.minimax import minimax_measure, separating_map, cut_sample_maps


class Command(LabCommand):
    help = 'Solves the far-pair measure game of a finite metric space.\n\n' \
           'Writes certificate.json (threshold, pairs, mu, value) and ' \
           'separating-map.json, an optimal 1-Lipschitz map into l1.'
    defaults = {'space': None, 'threshold': None, 'maps': 0}

    def add_lab_arguments(self, parser):
        parser.add_argument('space', nargs='?', default=None,
                            help='Space, graph or point-cloud JSON file.')
        parser.add_argument('--threshold', type=float, default=None,
                            help='Far pairs are those at distance >= threshold.')
        parser.add_argument('--maps', type=int, default=None,
                            help='Random 1-Lipschitz cut maps to test the certificate on.')

    def run(self, config):
        if not config['space']:
            raise ParameterError("a space file is required")
        if config['threshold'] is None:
            raise ParameterError("--threshold is required")
        if config['maps'] and config['seed'] is None:
            raise ParameterError("testing random maps needs a seed")
        space = read_any_space(config['space'])
        certificate = minimax_measure(space, config['threshold'])
        write_json(self.output_path(config, 'certificate.json'), certificate.as_dict())
        write_json(self.output_path(config, 'separating-map.json'),
                   cloud_payload(separating_map(space, config['threshold'], certificate)))
        support = [(p, m) for p, m in zip(certificate.pairs, certificate.mu) if m > 1e-12]
        self.stdout.write("threshold %s: %d far pairs, value D = %.9g" % (
            certificate.threshold, len(certificate.pairs), certificate.value))
        self.stdout.write("mu supported on %d pairs: %s" % (
            len(support), ", ".join("%s-%s:%.4g" % (space.labels[u], space.labels[v], m)
                                    for (u, v), m in support[:10])))
        if config['maps']:
            self.check_maps(space, certificate, config['maps'], config['seed'])

    def check_maps(self, space, certificate, count, seed):
        u, v = np.array(certificate.pairs).T
        worst = 0.0
        for cloud in cut_sample_maps(space, count, seed):
            moved = np.abs(cloud.points[u] - cloud.points[v]).sum(axis=1)
            worst = max(worst, float(certificate.mu @ moved))
        if worst > certificate.value + settings.CERTIFICATE_TOLERANCE:
            raise InvariantViolation("a 1-Lipschitz map averages %.12g > D = %.12g"
                                     % (worst, certificate.value))
        self.stdout.write("%d random 1-Lipschitz maps: largest mu-average %.9g <= D"
                          % (count, worst))
