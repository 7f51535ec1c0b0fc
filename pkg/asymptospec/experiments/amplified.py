"""\
Amplified smooth nets eps**-1 f and eps**-1 |ln eps| f

Both have fiber radius 1; the log factor moves r = 1 from N_x into the
fiber, so the fiber is [0, 1) for the first and [0, 1] for the second.
"""
import logging

from . import RADIUS_TOLERANCE
from ..analysis.spectrum import critical_exponent
from ..analysis.topologies import TargetTopology
from ..nets.generalized import make_amplified, smooth
from ..nets.scales import power_scale

_LOGGER = logging.getLogger(__name__)

# (label, log power, fiber endpoint, radius tolerance)
AMPLIFIED_CASES = (
    ('eps^-1 f', 0.0, 'open', 0.1),
    ('eps^-1 |ln eps| f', 1.0, 'closed', RADIUS_TOLERANCE),
)


def amplified_table(f_spec=None, points=(0.0, 0.5), topologies=('C0', 'C1'),
                    ladder=None, **options):
    """
    Fiber radius of the amplified nets at points where f is nonzero

    Parameters
    ----------
    f_spec : PiecewiseSmooth, optional
        Smooth f, cos by default.

    Returns
    -------
    rows : list of dict
    """
    f_spec = f_spec or smooth('cos')
    rows = []
    for label, log_power, expected_endpoint, tolerance in AMPLIFIED_CASES:
        net = make_amplified(f_spec, 1.0, log_power)
        for topstr in topologies:
            top = TargetTopology.from_string(topstr)
            for x in points:
                radius, n_endpoint = critical_exponent(
                    net, power_scale(), x, top, ladder, **options)
                endpoint = {'open': 'closed', 'closed': 'open'}.get(
                    n_endpoint, n_endpoint)
                ok = (radius is not None and abs(radius - 1.0) <= tolerance
                      and endpoint == expected_endpoint)
                rows.append({'net': label, 'topology': top.name, 'x': x,
                             'radius': radius, 'expected': 1.0,
                             'endpoint': endpoint,
                             'expected_endpoint': expected_endpoint,
                             'pass': ok})
                _LOGGER.info("{} {} at {}: R={} ({})".format(
                    label, top.name, x, radius, endpoint))
    return rows
