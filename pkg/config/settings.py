# Django settings for the metric embedding laboratory.

DEBUG = False

SECRET_KEY = 'change-this-to-some-strong-random-text'

# No models; the laboratory works on files.
DATABASES = {}

INSTALLED_APPS = (
    'utils',
    'spaces',
    'expander',
    'obstruction',
    'game',
    'embed',
)

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [],
        },
    },
]

USE_I18N = False
USE_TZ = True
TIME_ZONE = 'UTC'

# Metric validation. p-norm distances incur rounding, integer (graph)
# distances are checked exactly regardless of this value.
METRIC_TOLERANCE = 1e-12

# Exhaustive scans: 2**(n-1) subsets for Cheeger constants, 2**(n-1) - 1 cuts
# for L1 averages. Beyond these sizes callers must fall back to bounds.
EXACT_CHEEGER_MAX_VERTICES = 24
CUT_ENUMERATION_MAX_POINTS = 16
MINIMAX_MAX_POINTS = 14

# Simplex engine
SIMPLEX_TOLERANCE = 1e-9
SIMPLEX_DUALITY_GAP = 1e-7
SIMPLEX_MAX_ITERATIONS = 200000

# Jacobi eigensolver and positive semidefinite factorizations
JACOBI_TOLERANCE = 1e-12
JACOBI_MAX_SWEEPS = 100
PSD_CLIP_TOLERANCE = 1e-9
PSD_REJECT_TOLERANCE = 1e-6

# Expander generation
PAIRING_MAX_SAMPLES = 10 ** 6
FAMILY_MAX_ATTEMPTS = 100
DEFAULT_EXPANSION_EPSILON = 0.2
CHEEGER_INEQUALITY_TOLERANCE = 1e-9
SPECTRUM_STRUCTURE_TOLERANCE = 1e-9

# Obstructions and certificates
POINCARE_TOLERANCE = 1e-9
CERTIFICATE_TOLERANCE = 1e-7

# Embeddings
COARSE_BANDWIDTH_STEPS = 40
MODULI_BIN_COUNT = 10

# Worker threads used for family certification; results are ordered by size
# whatever this is set to.
LAB_WORKERS = 1

# SVG charts
PLOT_WIDTH = 800
PLOT_HEIGHT = 600

# Quiet layout: warnings and errors to the console only.
PRODUCTION_LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '%(levelname)s %(message)s'
        },
    },
    'handlers': {
        'console': {
            'level': 'WARNING',
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        name: {
            'handlers': ['console'],
            'level': 'WARNING',
        } for name in INSTALLED_APPS
    },
}

DEBUG_LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format' : "[%(asctime)s] %(levelname)s [%(name)s:%(lineno)s] %(message)s",
            'datefmt' : "%d/%b/%Y %H:%M:%S"
        },
        'simple': {
            'format': '%(levelname)s %(message)s'
        },
    },
    'handlers': {
        'file': {
            'level': 'DEBUG',
            'class': 'logging.FileHandler',
            'filename': '/tmp/metric-lab.log',
            'formatter': 'verbose'
        },
    },
    'loggers': {
        name: {
            'handlers': ['file'],
            'level': 'DEBUG',
        } for name in INSTALLED_APPS
    },
}

LOGGING = DEBUG_LOGGING if DEBUG else PRODUCTION_LOGGING
