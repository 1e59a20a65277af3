import numpy as np

from spaces.errors import FormatError
from spaces.files import load_json, validate_payload
from .forms import MeasureCertificateForm
from .minimax import MeasureCertificate, is_far


def read_measure_certificate(path, space=None):
    data = validate_payload(MeasureCertificateForm, load_json(path), path)
    certificate = MeasureCertificate(data['threshold'], data['pairs'],
                                     np.array(data['mu'], dtype=float), data['value'])
    if space is not None:
        if any(v >= len(space) for _, v in certificate.pairs):
            raise FormatError("%s: pairs: index out of range for %d points" % (path, len(space)))
        close = [p for p in certificate.pairs if not is_far(space.dist[p], certificate.threshold)]
        if close:
            raise FormatError("%s: pairs: %s is closer than the threshold" % (path, list(close[0])))
    return certificate
