from spaces.errors import ParameterError
from spaces.files import read_any_space, space_payload, write_json, write_csv
from spaces.metric import (validate_metric, disjoint_union, ball_truncation,
                           bounded_geometry_profile, distance_distribution)
from utils.commands import LabCommand


class Command(LabCommand):
    help = 'Builds, validates and profiles finite metric spaces.\n\n' \
           'Several inputs are glued with the disjoint union.'
    defaults = {'inputs': None, 'radii': None, 'ball': None}

    def add_lab_arguments(self, parser):
        parser.add_argument('inputs', nargs='*', default=None,
                            help='Space, graph or point-cloud JSON files.')
        parser.add_argument('--radii', type=float, nargs='+', default=None,
                            help='Radii for the bounded-geometry profile.')
        parser.add_argument('--ball', type=float, nargs=2, default=None,
                            metavar=('CENTER', 'RADIUS'),
                            help='Keep only the closed ball around point index CENTER.')

    def run(self, config):
        if not config['inputs']:
            raise ParameterError("at least one input file is required")
        space = disjoint_union([read_any_space(path) for path in config['inputs']])
        if config['ball']:
            center, radius = config['ball']
            if center != int(center) or not 0 <= center < len(space):
                raise ParameterError("ball center must be a point index below %d" % len(space))
            space = ball_truncation(space, int(center), radius)
        report = validate_metric(space.dist)
        self.stdout.write("%d points, diameter %s, metric check: %s"
                          % (len(space), space.diameter, report))
        write_json(self.output_path(config, 'space.json'), space_payload(space))
        write_csv(self.output_path(config, 'distances.csv'), ['distance', 'ordered_pairs'],
                  distance_distribution(space))
        if config['radii']:
            profile = bounded_geometry_profile(space, config['radii'])
            write_csv(self.output_path(config, 'profile.csv'), ['radius', 'max_ball'],
                      zip(profile.radii, profile.counts))
            for r, m in zip(profile.radii, profile.counts):
                self.stdout.write("M(%s) = %d" % (r, m))
