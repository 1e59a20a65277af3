from spaces.clouds import parse_exponent
from spaces.errors import InvariantViolation, ParameterError
from spaces.files import read_any_space, read_cloud
from utils.commands import LabCommand
from embed.coarse import assemble_coarse_embedding, check_coarse_moduli
from embed.files import write_embedding, write_moduli
from embed.kernels import schoenberg_l1_to_l2
from embed.maps import empirical_moduli
from embed.shells import case_breakdown, shell_embedding

KINDS = ('shell', 'schoenberg', 'coarse')


class Command(LabCommand):
    help = 'Builds an embedding and measures it.\n\n' \
           'shell: Euclidean cloud into an l_p-sum of blocks; schoenberg: l1 cloud ' \
           'with the square-root metric into l2; coarse: any space into an l_p-sum ' \
           'of spheres. Writes embedding.json and moduli.csv.'
    defaults = {'kind': None, 'input': None, 'target_p': None, 'thresholds': [],
                'bins': None}

    def add_lab_arguments(self, parser):
        parser.add_argument('kind', nargs='?', choices=KINDS, default=None)
        parser.add_argument('input', nargs='?', default=None,
                            help='Point-cloud file (shell, schoenberg) or any space file (coarse).')
        parser.add_argument('--target-p', dest='target_p', default=None,
                            help='Target exponent (default 1 for shell, 2 for coarse).')
        parser.add_argument('--thresholds', type=float, nargs='+', default=None,
                            help='Coarse block thresholds t_1 < ... < t_m.')
        parser.add_argument('--bins', type=int, default=None,
                            help='Moduli bins (default settings.MODULI_BIN_COUNT).')

    def run(self, config):
        if config['kind'] not in KINDS:
            raise ParameterError("kind must be one of %s" % ", ".join(KINDS))
        if not config['input']:
            raise ParameterError("an input file is required")
        embedding = getattr(self, 'embed_%s' % config['kind'])(config)
        estimate = empirical_moduli(embedding, config['bins'])
        embedding.check()
        write_embedding(self.output_path(config, 'embedding.json'), embedding)
        write_moduli(self.output_path(config, 'moduli.csv'), estimate)
        self.stdout.write("%s embedding of %d points: lip=%.9g colip=%.9g distortion=%.9g" % (
            config['kind'], len(embedding.source), embedding.lip, embedding.colip,
            embedding.distortion))

    def embed_shell(self, config):
        target_p = 1 if config['target_p'] is None else config['target_p']
        embedding, decomposition = shell_embedding(read_cloud(config['input']), target_p)
        breakdown = case_breakdown(embedding, decomposition)
        if not breakdown.ok:
            u, v, case, d, e = breakdown.failures[0]
            raise InvariantViolation("pair (%d, %d) in case %d: distance %.12g sent to %.12g"
                                     % (u, v, case, d, e))
        self.stdout.write("scale %.9g, blocks %s, pairs per case %s" % (
            decomposition.scale, decomposition.block_dims, breakdown.counts()))
        return embedding

    def embed_schoenberg(self, config):
        if config['target_p'] is not None and parse_exponent(config['target_p']) != 2:
            raise ParameterError("Schoenberg's map lands in l2")
        return schoenberg_l1_to_l2(read_cloud(config['input']))

    def embed_coarse(self, config):
        if not config['thresholds']:
            raise ParameterError("--thresholds is required for coarse embeddings")
        target_p = 2 if config['target_p'] is None else config['target_p']
        embedding, _ = assemble_coarse_embedding(read_any_space(config['input']), target_p,
                                                 config['thresholds'])
        check_coarse_moduli(embedding)
        self.stdout.write("deltas %s" % ", ".join("%.6g" % d for d in embedding.details['deltas']))
        return embedding
