"""\
Semilinear transport d_t u = F(u) along characteristics (zero speed)

Three nonlinearities with closed-form solutions:

    dissipative  F(u) = -u**3             u0/sqrt(2 t u0**2 + 1)
    sqrt_exp     F(u) = sqrt(1 + u**2)    u0 cosh t + sqrt(1 + u0**2) sinh t
    log_growth   F(u) = (u+1) log(u+1)    (u0 + 1)**exp(t) - 1

The closed forms give the solution nets; a vectorized RK4 integration is
kept as an independent check.
"""
import logging

import numpy

from . import DEFAULT_TIMES
from ..analysis.spectrum import critical_exponent
from ..analysis.topologies import TargetTopology
from ..nets.generalized import DomainBox, GeneralizedNet, make_delta
from ..nets.scales import EpsLadder, power_scale
from ..nets.seminorms import sampling_grid

_LOGGER = logging.getLogger(__name__)

CROSS_CHECK_TOL = 1e-4
MAX_STEP = 0.01
STEP_FACTOR = 0.05


def _dissipative(u0, t):
    return u0/numpy.sqrt(2.0*t*u0**2 + 1.0)


def _sqrt_exp(u0, t):
    return u0*numpy.cosh(t) + numpy.sqrt(1.0 + u0**2)*numpy.sinh(t)


def _log_growth(u0, t):
    return (u0 + 1.0)**numpy.exp(t) - 1.0


# name: (F, F', closed-form solution)
NONLINEARITIES = {
    'dissipative': (lambda u: -u**3, lambda u: -3.0*u**2, _dissipative),
    'sqrt_exp': (lambda u: numpy.sqrt(1.0 + u**2),
                 lambda u: u/numpy.sqrt(1.0 + u**2), _sqrt_exp),
    'log_growth': (lambda u: (u + 1.0)*numpy.log(u + 1.0),
                   lambda u: numpy.log(u + 1.0) + 1.0, _log_growth),
}


class TransportProblem(object):
    """\
    d_t u = F(u), u(., 0) = u0 on a 1-D initial net

    Parameters
    ----------
    nonlinearity : str
        'dissipative', 'sqrt_exp' or 'log_growth'.
    initial_net : GeneralizedNet
        1-D initial data.
    t_end : float
        End of the time interval [0, t_end].
    times : sequence of float
        Sample times for cross-validation and fiber tables.
    """

    def __init__(self, nonlinearity, initial_net, t_end=1.5,
                 times=DEFAULT_TIMES):
        if nonlinearity not in NONLINEARITIES:
            raise ValueError("Unknown nonlinearity '{}', choose from {}"
                             .format(nonlinearity, sorted(NONLINEARITIES)))
        if initial_net.domain.dim != 1:
            raise ValueError("Initial data must be a 1-D net, {} has dim {}"
                             .format(initial_net.label,
                                     initial_net.domain.dim))
        if t_end <= 0 or any(not 0 < t <= t_end for t in times):
            raise ValueError("Times {} must lie in (0, t_end={}]"
                             .format(list(times), t_end))
        self.nonlinearity = nonlinearity
        self.initial_net = initial_net
        self.t_end = float(t_end)
        self.times = tuple(float(t) for t in times)
        self.rhs, self.drhs, self.closed_form = NONLINEARITIES[nonlinearity]

    @property
    def domain(self):
        space = self.initial_net.domain
        return DomainBox((space.lo[0], 0.0), (space.hi[0], self.t_end))

    def initial_samples(self, eps):
        """u0 on the adaptive grid of the initial net at one eps."""
        grid = sampling_grid(self.initial_net.domain,
                             self.initial_net.features, [eps])
        return grid[:, 0], self.initial_net.evaluate(grid, eps)

    def check_initial(self, ladder):
        """log_growth needs u0 > -1 on every sampled rung."""
        if self.nonlinearity != 'log_growth':
            return
        for eps in ladder:
            _, values = self.initial_samples(eps)
            if numpy.min(values) <= -1.0:
                raise ValueError("log_growth needs initial data > -1, got {:g}"
                                 " at eps={:g}".format(numpy.min(values), eps))


def rk4_integrate(rhs, drhs, u0, t_end, max_step=MAX_STEP,
                  step_factor=STEP_FACTOR):
    """
    Integrate u' = rhs(u) from u0 to t_end with per-point RK4 steps

    Each point takes steps min(max_step, step_factor/|rhs'(u)|, remaining
    time), so stiff points advance slowly while others finish early.

    >>> from asymptospec.experiments.transport import rk4_integrate
    >>> out = rk4_integrate(lambda u: u, lambda u: 1.0 + 0*u, numpy.ones(2), 1.0)
    >>> bool(numpy.allclose(out, numpy.e, rtol=1e-8))
    True
    """
    u = numpy.array(u0, dtype=float)
    elapsed = numpy.zeros(u.shape)
    active = elapsed < t_end
    while numpy.any(active):
        ua = u[active]
        with numpy.errstate(divide='ignore'):
            stiff = step_factor/numpy.abs(drhs(ua))
        step = numpy.minimum(numpy.minimum(max_step, stiff),
                             t_end - elapsed[active])
        k1 = rhs(ua)
        k2 = rhs(ua + 0.5*step*k1)
        k3 = rhs(ua + 0.5*step*k2)
        k4 = rhs(ua + step*k3)
        u[active] = ua + step*(k1 + 2.0*k2 + 2.0*k3 + k4)/6.0
        elapsed[active] += step
        active = elapsed < t_end*(1.0 - 1e-14)
    return u


def cross_validate(problem, eps):
    """
    Largest relative deviation of RK4 from the closed form at one eps

    Compared on the initial net's adaptive grid at every sample time.
    """
    _, values = problem.initial_samples(eps)
    worst = 0.0
    for t in problem.times:
        exact = problem.closed_form(values, t)
        approx = rk4_integrate(problem.rhs, problem.drhs, values, t)
        rel = numpy.abs(approx - exact)/numpy.maximum(numpy.abs(exact),
                                                      1e-300)
        worst = max(worst, float(numpy.max(rel)))
    return worst


def solve_transport(problem, ladder=None, cross_check=True):
    """
    Space-time solution net of a transport problem

    Parameters
    ----------
    problem : TransportProblem
    ladder : EpsLadder, optional
        Rungs checked for the log_growth precondition; its midpoint is used
        for the RK4 cross-check.
    cross_check : bool

    Returns
    -------
    net : GeneralizedNet
        Domain [x_lo, x_hi] x [0, t_end]; derivatives by finite differences.

    Raises
    ------
    ValueError
        log_growth initial data <= -1.
    RuntimeError
        RK4 and closed form disagree beyond 1e-4 relative.
    """
    ladder = ladder or EpsLadder()
    problem.check_initial(ladder)
    if cross_check:
        worst = cross_validate(problem, ladder.midpoint)
        _LOGGER.info("{} transport of {}: RK4 deviation {:.3g}".format(
            problem.nonlinearity, problem.initial_net.label, worst))
        if worst > CROSS_CHECK_TOL:
            raise RuntimeError("RK4 deviates {:.3g} from the closed form for "
                               "{}".format(worst, problem.nonlinearity))
    initial = problem.initial_net
    closed_form = problem.closed_form

    def evaluator(points, eps, order):
        u0 = initial.evaluate(points[:, :1], eps)
        with numpy.errstate(over='ignore', invalid='ignore'):
            return closed_form(u0, points[:, 1])
    return GeneralizedNet(problem.domain, evaluator, max_order=1,
                          derivative_mode='finite-difference',
                          features=(initial.features[0], ()),
                          label='{}[{}]'.format(problem.nonlinearity,
                                                initial.label))


def transport_fibers(problem, grid, topology=None, ladder=None, **options):
    """
    Fiber radii of the solution on space-time points and of the data at x

    Returns
    -------
    rows : list of dict
        One row per point with 'x', 't', 'radius' and 'endpoint'; t = 0
        rows describe the initial net.
    """
    topology = topology or TargetTopology('Dprime')
    ladder = ladder or EpsLadder()
    solution = solve_transport(problem, ladder)
    scale = power_scale()
    rows = []
    for x in sorted(set(point[0] for point in grid)):
        radius, endpoint = critical_exponent(problem.initial_net, scale, x,
                                             topology, ladder, **options)
        rows.append({'x': x, 't': 0.0, 'radius': radius,
                     'endpoint': endpoint})
    for x, t in grid:
        radius, endpoint = critical_exponent(solution, scale, (x, t),
                                             topology, ladder, **options)
        rows.append({'x': x, 't': t, 'radius': radius, 'endpoint': endpoint})
    return rows


def log_growth_table(m_values=(1, 2), times=DEFAULT_TIMES, ladder=None,
                     **options):
    """
    D' radius at (0, t) of the log_growth solution with delta**m data

    Returns
    -------
    rows : list of dict
        'm', 't', 'radius', 'expected' = m*exp(t) - 1 and 'rel_error'.
    """
    ladder = ladder or EpsLadder()
    t_end = max(times) + 0.5
    rows = []
    for m in m_values:
        problem = TransportProblem('log_growth', make_delta(m), t_end, times)
        solution = solve_transport(problem, ladder)
        for t in times:
            radius, endpoint = critical_exponent(
                solution, power_scale(), (0.0, t), TargetTopology('Dprime'),
                ladder, **options)
            expected = m*numpy.exp(t) - 1.0
            rel = abs(radius - expected)/expected \
                if radius is not None and numpy.isfinite(radius) else numpy.inf
            rows.append({'m': m, 't': t, 'radius': radius,
                         'expected': float(expected), 'rel_error': float(rel),
                         'endpoint': endpoint})
            _LOGGER.info("log_growth m={} t={}: R={} expected {:.4f}".format(
                m, t, radius, expected))
    return rows
