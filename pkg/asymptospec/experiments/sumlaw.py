"""\
Sum law for the interaction of two transported singularities

u(x,t) = u0(x-t) and v(x,t) = v0(x+t) carry singular data from x = -1 and
x = +1 along characteristics meeting at (0, 1); w solves d_t w = u v with
w(., 0) = 0, so

    w(x, t) = int_0^t u0(x - tau) v0(x + tau) dtau.
"""
import logging
from math import comb

import numpy

from .strength import read_strength
from ..analysis.spectrum import critical_exponent
from ..analysis.topologies import TargetTopology
from ..nets.generalized import DeltaProfile, DomainBox, GeneralizedNet
from ..nets.mollifiers import DEFAULT_MOLLIFIER, composite_gauss
from ..nets.scales import power_scale

_LOGGER = logging.getLogger(__name__)

# eps/4-wide panels across the tau window of length <= 2 eps
WINDOW_PANELS = 8
SUMLAW_POINT = (0.0, 1.25)
SUMLAW_ETA = 0.125
SUMLAW_DEPTH = 4
PROFILE_KINDS = ('derivative', 'power')


def sumlaw_profile(kind, order, center, phi=None):
    """
    Delta-type data at center

    kind 'derivative' gives the order-th derivative of delta, 'power' the
    order-th power.
    """
    phi = phi or DEFAULT_MOLLIFIER
    if kind == 'derivative':
        return DeltaProfile(phi, center, power=1, derivative=order)
    if kind == 'power':
        if order < 1:
            raise ValueError("Delta power must be >= 1, got {}".format(order))
        return DeltaProfile(phi, center, power=order)
    raise ValueError("Unknown profile kind '{}', choose from {}"
                     .format(kind, PROFILE_KINDS))


class SumLawProblem(object):
    """\
    Parameters
    ----------
    u_profile, v_profile : DeltaProfile
        Data centred at -1 and +1.
    t_end : float
        At least 1.5, past the interaction time 1.
    x_range : (float, float)
    """

    def __init__(self, u_profile, v_profile, t_end=1.5, x_range=(-2.0, 2.0)):
        if u_profile.center != -1.0 or v_profile.center != 1.0:
            raise ValueError("Sum-law data must sit at -1 and +1, got {} and {}"
                             .format(u_profile.center, v_profile.center))
        if t_end < 1.5:
            raise ValueError("t_end must be >= 1.5, got {}".format(t_end))
        self.u_profile = u_profile
        self.v_profile = v_profile
        self.t_end = float(t_end)
        self.x_range = (float(x_range[0]), float(x_range[1]))

    @property
    def domain(self):
        return DomainBox((self.x_range[0], 0.0), (self.x_range[1], self.t_end))

    @property
    def label(self):
        def describe(prof):
            if prof.derivative:
                return 'd^{}delta({:+g})'.format(prof.derivative, prof.center)
            return 'delta^{}({:+g})'.format(prof.power, prof.center)
        return 'w[{}, {}]'.format(describe(self.u_profile),
                                  describe(self.v_profile))


def _window(x, t, eps):
    """tau range where both data are nonzero, clipped to [0, t]."""
    lo = numpy.maximum.reduce([numpy.zeros(x.shape), x + 1.0 - eps,
                               1.0 - x - eps])
    hi = numpy.minimum.reduce([t, x + 1.0 + eps, 1.0 - x + eps])
    return lo, hi


def interaction_values(problem, x, t, eps, order=(0, 0)):
    """
    d_x**a d_t**b w at points (x, t)

    b = 0 integrates the differentiated integrand over the tau window;
    b >= 1 uses d_t w = u0(x - t) v0(x + t) and the Leibniz expansion.
    """
    nx, nt = order
    uprof, vprof = problem.u_profile, problem.v_profile
    if nt == 0:
        lo, hi = _window(x, t, eps)
        nodes, weights = composite_gauss(lo, hi, nr_panels=WINDOW_PANELS)
        left = x[:, None] - nodes
        right = x[:, None] + nodes
        integrand = numpy.zeros(nodes.shape)
        for p in range(nx+1):
            integrand += (comb(nx, p)*uprof.values(left, eps, p)
                          * vprof.values(right, eps, nx - p))
        return numpy.sum(weights*integrand, axis=-1)
    total = numpy.zeros(x.shape)
    for q in range(nt):
        for p in range(nx+1):
            coef = comb(nt - 1, q)*(-1)**q*comb(nx, p)
            total += (coef*uprof.values(x - t, eps, q + p)
                      * vprof.values(x + t, eps, nt - 1 - q + nx - p))
    return total


def solve_rauch_reed(problem, max_order=2):
    """
    The interaction component w as a space-time net

    Returns
    -------
    net : GeneralizedNet
        Analytic derivatives up to max_order; features at x = 0, t = 1.
    """
    def evaluator(points, eps, order):
        return interaction_values(problem, points[:, 0], points[:, 1], eps,
                                  order)
    return GeneralizedNet(problem.domain, evaluator, max_order,
                          features=((0.0,), (1.0,)), label=problem.label)


def sum_law_table(pairs=((0, 0), (0, 1), (1, 0), (1, 1)), kind='derivative',
                  point=SUMLAW_POINT, ladder=None, eta=SUMLAW_ETA,
                  depth=SUMLAW_DEPTH):
    """
    C^1 fiber radius of w at a point past the interaction

    For 'derivative' data of orders (j, k) the expected strength index is
    j + k + 2; for 'power' data (m, n) the radius is bounded by m + n.

    Returns
    -------
    rows : list of dict
    """
    rows = []
    for j, k in pairs:
        problem = SumLawProblem(sumlaw_profile(kind, j, -1.0),
                                sumlaw_profile(kind, k, 1.0))
        net = solve_rauch_reed(problem)
        if kind == 'derivative':
            readout = read_strength(net, point, ladder, eta=eta, depth=depth)
            radius, expected = readout.radius, j + k + 2
            endpoint = readout.fiber_endpoint
        else:
            radius, endpoint = critical_exponent(
                net, power_scale(), point, TargetTopology('Cp', 1), ladder,
                eta=eta, depth=depth)
            expected = j + k
        rows.append({'kind': kind, 'j': j, 'k': k, 'x': point[0],
                     't': point[1], 'radius': radius, 'expected': expected,
                     'endpoint': endpoint})
        _LOGGER.info("sum law {} ({}, {}): R={} expected {}".format(
            kind, j, k, radius, expected))
    return rows
