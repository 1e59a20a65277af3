import math

from spaces.errors import FormatError
from spaces.files import (cloud_from_payload, cloud_payload, load_json, number_cell,
                          space_from_payload, space_payload, validate_payload, write_csv,
                          write_json)
from .forms import EmbeddingForm
from .maps import EmbeddingMap

MODULI_HEADER = ['bin_lo', 'bin_hi', 'count', 'rho1', 'rho2']


def embedding_payload(embedding):
    """The stored form; an infinite colip (collision) is written as null."""
    return {
        'source': space_payload(embedding.source),
        'image': cloud_payload(embedding.image),
        'lip': embedding.lip,
        'colip': None if math.isinf(embedding.colip) else embedding.colip,
    }


def write_embedding(path, embedding):
    write_json(path, embedding_payload(embedding))


def read_embedding(path):
    data = validate_payload(EmbeddingForm, load_json(path), path)
    source = space_from_payload(data['source'], '%s: source' % path)
    image = cloud_from_payload(data['image'], '%s: image' % path)
    if len(source) != len(image):
        raise FormatError("%s: %d image points for %d source points" % (path, len(image), len(source)))
    colip = math.inf if data['colip'] is None else data['colip']
    return EmbeddingMap(source, image, data['lip'], colip)


def write_moduli(path, estimate):
    write_csv(path, MODULI_HEADER,
              [[number_cell(lo), number_cell(hi), count, number_cell(rho1), number_cell(rho2)]
               for lo, hi, count, rho1, rho2 in estimate.rows()])
