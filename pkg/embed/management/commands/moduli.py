from spaces.errors import ParameterError
from utils.commands import LabCommand
from embed.files import read_embedding, write_moduli
from embed.maps import empirical_moduli


class Command(LabCommand):
    help = 'Bins the source distances of a stored embedding and writes moduli.csv ' \
           '(per-bin smallest and largest image distance).'
    defaults = {'embedding': None, 'bins': None}

    def add_lab_arguments(self, parser):
        parser.add_argument('embedding', nargs='?', default=None, help='embedding.json file.')
        parser.add_argument('--bins', type=int, default=None,
                            help='Number of equal-width bins.')

    def run(self, config):
        if not config['embedding']:
            raise ParameterError("an embedding file is required")
        embedding = read_embedding(config['embedding'])
        estimate = empirical_moduli(embedding, config['bins'])
        write_moduli(self.output_path(config, 'moduli.csv'), estimate)
        stair = estimate.rho1_staircase()
        for (lo, hi, count, rho1, rho2), low in zip(estimate.rows(), stair):
            self.stdout.write("[%.6g, %.6g] %d pairs, rho1 >= %s" % (
                lo, hi, count, 'NA' if low is None else '%.6g' % low))
