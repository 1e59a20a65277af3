import functools
import logging
import os

from django.core.management.base import BaseCommand, CommandError
from django.test.utils import override_settings

from spaces.errors import LabError, InvariantViolation, FormatError, ParameterError
from spaces.files import load_json
from utils.rng import check_seed

logger = logging.getLogger(__name__)

# Exit codes of every laboratory command.
EXIT_INVARIANT = 1
EXIT_DOMAIN = 2
EXIT_IO = 3


def lab_errors(handle):
    """Turns laboratory exceptions into CommandError with the matching exit code."""
    @functools.wraps(handle)
    def inner(self, *args, **options):
        try:
            return handle(self, *args, **options)
        except CommandError:
            raise
        except InvariantViolation as e:
            logger.error("invariant violated: %s", e)
            raise CommandError("internal invariant violated: %s" % e, returncode=EXIT_INVARIANT)
        except LabError as e:
            raise CommandError(str(e), returncode=EXIT_DOMAIN)
        except (FormatError, OSError) as e:
            raise CommandError(str(e), returncode=EXIT_IO)
    return inner


class LabCommand(BaseCommand):
    """Base for the laboratory's management commands.

    Subclasses list their own option defaults in ``defaults`` and implement
    ``run(config)``. Options may also come from ``--config FILE`` (a JSON
    object); flags given on the command line win over the file.
    """
    defaults = {}
    requires_seed = False

    def add_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=None,
                            help='Unsigned 64-bit seed.')
        parser.add_argument('--out', default=None,
                            help='Output directory (default: current directory).')
        parser.add_argument('--tol', type=float, default=None,
                            help='Metric validation tolerance.')
        parser.add_argument('--config', default=None,
                            help='JSON run configuration.')
        self.add_lab_arguments(parser)

    def add_lab_arguments(self, parser):
        pass

    def run_config(self, options):
        allowed = {'seed', 'out', 'tol'} | set(self.defaults)
        from_file = {}
        if options.get('config'):
            from_file = load_json(options['config'])
            if not isinstance(from_file, dict):
                raise FormatError("%s: run configuration must be a JSON object" % options['config'])
            unknown = sorted(set(from_file) - allowed)
            if unknown:
                raise FormatError("%s: unknown configuration key(s): %s"
                                  % (options['config'], ", ".join(unknown)))
        config = {'seed': None, 'out': '.', 'tol': None}
        config.update(self.defaults)
        config.update(from_file)
        for key in allowed:
            if options.get(key) not in (None, []):
                config[key] = options[key]
        if config['seed'] is not None:
            try:
                config['seed'] = check_seed(config['seed'])
            except (TypeError, ValueError) as e:
                raise ParameterError(str(e))
        elif self.requires_seed:
            raise ParameterError("a seed is required (--seed or \"seed\" in the configuration)")
        if config['tol'] is not None and not config['tol'] >= 0:
            raise ParameterError("tolerance must be nonnegative")
        return config

    @lab_errors
    def handle(self, *args, **options):
        config = self.run_config(options)
        logger.debug("%s with %s", self.__class__.__module__, config)
        if config['tol'] is None:
            return self.run(config)
        with override_settings(METRIC_TOLERANCE=config['tol']):
            return self.run(config)

    def run(self, config):
        raise NotImplementedError

    def output_path(self, config, name):
        return os.path.join(config['out'], name)
