"""Strength of a singularity read from the C^1 fiber radius."""
import logging

from ..analysis.spectrum import PointSearch
from ..analysis.topologies import TargetTopology
from ..nets.generalized import embed_classical
from ..nets.scales import power_scale

_LOGGER = logging.getLogger(__name__)

INTEGER_TOLERANCE = 0.2


class StrengthReadout(object):
    """\
    Attributes
    ----------
    n : int
        Rounded C^1 fiber radius.
    radius : float
    fiber_endpoint : str or None
    strength : int
        -n: order of the highest derivative continuous across the point,
        -1 for a jump and -k-2 for the k-th delta derivative.
    """

    def __init__(self, label, point, n, radius, fiber_endpoint):
        self.label = label
        self.point = point
        self.n = n
        self.radius = radius
        self.fiber_endpoint = fiber_endpoint

    @property
    def strength(self):
        return -self.n

    def __repr__(self):
        return "StrengthReadout('{}', n={}, R={:.4f})".format(self.label,
                                                             self.n,
                                                             self.radius)

    def as_row(self):
        return {'net': self.label, 'point': list(self.point), 'n': self.n,
                'radius': self.radius, 'fiber_endpoint': self.fiber_endpoint,
                'strength': self.strength}


def read_strength(unet, point, ladder=None, tolerance=INTEGER_TOLERANCE,
                  **options):
    """
    C^1 fiber radius of a net at a point rounded to the strength index n

    Raises
    ------
    RuntimeError
        Empty or infinite fiber, or a radius further than tolerance from an
        integer.
    """
    search = PointSearch(unet, power_scale(), point, TargetTopology('Cp', 1),
                         ladder, **options)
    radius, n_endpoint = search.critical()
    if radius is None:
        raise RuntimeError("{} is C^1-regular at {}: no singularity to grade"
                           .format(unet.label, search.point))
    nearest = round(radius)
    if abs(radius - nearest) > tolerance:
        raise RuntimeError("Inconsistent strength for {} at {}: radius {:.4f}"
                           " is not within {} of an integer"
                           .format(unet.label, search.point, radius,
                                   tolerance))
    fiber_endpoint = {'open': 'closed', 'closed': 'open'}.get(n_endpoint,
                                                              n_endpoint)
    if fiber_endpoint != 'closed':
        _LOGGER.warning("Fiber of {} at {} has a {} endpoint".format(
            unet.label, search.point, fiber_endpoint))
    readout = StrengthReadout(unet.label, search.point, int(nearest),
                              float(radius), fiber_endpoint)
    _LOGGER.info("{!r}".format(readout))
    return readout


def strength_of_singularity(f_spec, x0, ladder=None, **options):
    """
    Strength index n of a piecewise-smooth function or delta derivative

    Parameters
    ----------
    f_spec : PiecewiseSmooth or DeltaDerivative
    x0 : float
        Singular point, interior to the embedding domain.

    Returns
    -------
    readout : StrengthReadout
        n = 1 for a jump, 0 for a kink, k+2 for the k-th delta derivative.
    """
    return read_strength(embed_classical(f_spec), x0, ladder, **options)


def strength_table(specs, ladder=None, **options):
    """Readouts for (f_spec, x0, expected_n) triples as rows."""
    rows = []
    for f_spec, x0, expected in specs:
        readout = strength_of_singularity(f_spec, x0, ladder, **options)
        row = readout.as_row()
        row['expected'] = expected
        row['pass'] = (readout.n == expected
                       and abs(readout.radius - expected) <= INTEGER_TOLERANCE)
        rows.append(row)
    return rows
