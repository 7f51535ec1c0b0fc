"""Spectra of delta powers in C^p and D', with the frequential contrast."""
import logging

from . import RADIUS_TOLERANCE
from ..analysis.frequential import wavefront_estimate
from ..analysis.spectrum import critical_exponent
from ..analysis.topologies import TargetTopology
from ..nets.generalized import make_delta
from ..nets.scales import power_scale

_LOGGER = logging.getLogger(__name__)

MAX_POWER = 4
_FIBER_OF_N = {'closed': 'open', 'open': 'closed'}


def expected_fiber(m, topology, dim=1):
    """
    Radius and fiber endpoint of delta**m at its centre

    C^p: [0, m*d + p], closed. D': [0, m - 1), open, empty for m = 1.

    >>> from asymptospec.analysis.topologies import TargetTopology
    >>> from asymptospec.experiments.deltapowers import expected_fiber
    >>> expected_fiber(3, TargetTopology('Cp', 1))
    (4.0, 'closed')
    >>> expected_fiber(1, TargetTopology('Dprime'))
    (None, None)
    """
    if topology.kind == 'Cp':
        return float(m*dim + topology.order), 'closed'
    if m == 1:
        return None, None
    return float(m - 1), 'open'


def _topologies(p_list, topologies):
    tops = [TargetTopology('Cp', p) for p in p_list]
    for top in topologies:
        if isinstance(top, str):
            top = TargetTopology.from_string(top)
        if top not in tops:
            tops.append(top)
    return tops


def _passes(radius, endpoint, expected, expected_endpoint, tolerance):
    if expected is None:
        return radius is None
    if radius is None:
        return False
    return (abs(radius - expected) <= tolerance
            and endpoint == expected_endpoint)


def run_delta_powers(m_list=(1, 2, 3), p_list=(0, 1), topologies=("D'",),
                     ladder=None, tolerance=RADIUS_TOLERANCE, **options):
    """
    Fiber radius of delta**m at 0 against its known value

    Parameters
    ----------
    m_list : sequence of int
        Powers, at most 4.
    p_list : sequence of int
        C^p orders to test.
    topologies : sequence of str or TargetTopology
        Further topologies, D' by default.

    Returns
    -------
    rows : list of dict
        One row per (m, topology) with estimated and expected radius and
        fiber endpoint, and 'pass'.
    """
    bad = [m for m in m_list if not 1 <= m <= MAX_POWER]
    if bad:
        raise ValueError("Delta powers must lie in [1, {}], got {}"
                         .format(MAX_POWER, bad))
    tops = _topologies(p_list, topologies)
    rows = []
    for m in m_list:
        net = make_delta(m)
        for top in tops:
            radius, n_endpoint = critical_exponent(net, power_scale(), 0.0,
                                                   top, ladder, **options)
            endpoint = _FIBER_OF_N.get(n_endpoint, n_endpoint)
            expected, expected_endpoint = expected_fiber(m, top)
            ok = _passes(radius, endpoint, expected, expected_endpoint,
                         tolerance)
            rows.append({'m': m, 'topology': top.name, 'radius': radius,
                         'expected': expected, 'endpoint': endpoint,
                         'expected_endpoint': expected_endpoint, 'pass': ok})
            log = _LOGGER.info if ok else _LOGGER.warning
            log("delta^{} {}: R={} ({}) expected {} ({})".format(
                m, top.name, radius, endpoint, expected, expected_endpoint))
    return rows


def delta_power_wavefronts(m_list=(1, 2, 3), grid=(0.0,), ladder=None,
                           **options):
    """
    Frequential verdicts for delta**m, which do not depend on m

    Returns
    -------
    rows : list of dict
        'm', 'singular' as sorted (x, direction) pairs and 'same_as_first'.
    """
    rows = []
    first = None
    for m in m_list:
        estimate = wavefront_estimate(make_delta(m), grid, ladder, **options)
        pairs = estimate.singular
        first = pairs if first is None else first
        rows.append({'m': m, 'singular': pairs,
                     'same_as_first': pairs == first})
    if not all(row['same_as_first'] for row in rows):
        _LOGGER.warning("Wave front of delta powers depends on m: {}".format(
            [(row['m'], row['singular']) for row in rows]))
    return rows
