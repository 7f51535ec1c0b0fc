"""\
Regularized blow-up d_t u = chi_eps(u) u**2, u(x, 0) = (H * phi_eps)(x)

Without the cut-off the data y0 = 1 blow up at t = 1. chi_eps equals 1 on
|z| <= eps**-s and 0 beyond eps**-s + 0.5, so the regularized solution
stays below eps**-s + 0.5 and the singularity strength at t >= 1 is s.
"""
import functools
import logging

import numpy
from scipy.integrate import solve_ivp

from ..analysis.spectrum import critical_exponent
from ..analysis.topologies import TargetTopology
from ..nets.generalized import DomainBox, GeneralizedNet
from ..nets.mollifiers import DEFAULT_MOLLIFIER
from ..nets.scales import power_scale

_LOGGER = logging.getLogger(__name__)

TRANSITION = 0.5
MAX_RK4_STEP = 1e-3


def smooth_step(y):
    """
    S(y) = f(y)/(f(y) + f(1-y)), f(y) = exp(-1/y) for y > 0, else 0

    >>> from asymptospec.experiments.blowup import smooth_step
    >>> smooth_step([-1.0, 0.5, 2.0]).tolist()
    [0.0, 0.5, 1.0]
    """
    y = numpy.asarray(y, dtype=float)

    def flat(v):
        out = numpy.zeros(v.shape)
        pos = v > 0
        out[pos] = numpy.exp(-1.0/v[pos])
        return out
    left, right = flat(y), flat(1.0 - y)
    return left/(left + right)


class BlowupProblem(object):
    """\
    Parameters
    ----------
    s : float
        Cut-off exponent, plateau |z| <= eps**-s.
    t_end : float
    x_range : (float, float)
        Spatial interval, containing 0 in its interior.
    transition : float
        Width of the cut-off ramp in z.
    """

    def __init__(self, s=0.5, t_end=2.0, x_range=(-1.0, 1.0),
                 transition=TRANSITION):
        if s <= 0:
            raise ValueError("Cut-off exponent s must be positive, got {}"
                             .format(s))
        if t_end <= 1.0:
            raise ValueError("t_end must exceed the blow-up time 1, got {}"
                             .format(t_end))
        if not x_range[0] < 0.0 < x_range[1]:
            raise ValueError("x_range {} must contain 0 in its interior"
                             .format(x_range))
        self.s = float(s)
        self.t_end = float(t_end)
        self.x_range = (float(x_range[0]), float(x_range[1]))
        self.transition = float(transition)

    @property
    def domain(self):
        return DomainBox((self.x_range[0], 0.0), (self.x_range[1], self.t_end))

    def plateau(self, eps):
        return eps**-self.s

    def cutoff(self, z, eps):
        """chi_eps(z): 1 on the plateau, 0 beyond plateau + transition."""
        ramp = (numpy.abs(z) - self.plateau(eps))/self.transition
        return 1.0 - smooth_step(ramp)

    def rhs(self, z, eps):
        return self.cutoff(z, eps)*z**2

    def cutoff_violations(self, eps, nr_samples=4001):
        """Sampled z where 0 <= chi <= 1 or |chi z**2| <= (1+eps**-s)**2 fails."""
        top = self.plateau(eps) + 2.0*self.transition
        z = numpy.linspace(-top, top, nr_samples)
        chi = self.cutoff(z, eps)
        bad = (chi < 0.0) | (chi > 1.0) \
            | (numpy.abs(chi*z**2) > (1.0 + self.plateau(eps))**2)
        return z[bad]

    def as_dict(self):
        return {'s': self.s, 't_end': self.t_end, 'x_range': list(self.x_range),
                'transition': self.transition,
                'cutoff': 'smooth double ramp of width {:g}'.format(
                    self.transition)}


@functools.lru_cache(maxsize=64)
def _capped_curve(s, transition, t_end, eps):
    """Dense solution W(tau) of W' = chi(W) W**2, W(0) = eps**-s."""
    problem = BlowupProblem(s, t_end, transition=transition)
    start = problem.plateau(eps)

    def rhs(tau, w):
        return problem.rhs(w, eps)

    def jac(tau, w):
        step = 1e-7*max(1.0, abs(w[0]))
        slope = (problem.rhs(w + step, eps)
                 - problem.rhs(w - step, eps))/(2.0*step)
        return slope.reshape(1, 1)
    sol = solve_ivp(rhs, (0.0, t_end), [start], method='Radau',
                    dense_output=True, rtol=1e-10, atol=1e-10, jac=jac)
    if not sol.success:
        raise RuntimeError("Capped blow-up curve failed at eps={:g}: {}"
                           .format(eps, sol.message))
    return sol.sol


def blowup_values(problem, y0, t, eps):
    """
    Regularized solution for initial values y0 in [0, 1] at times t

    Exact 1/(1/y0 - t) until the plateau is reached at t_s = 1/y0 - eps**s,
    then the universal capped curve W(t - t_s).
    """
    y0, t = numpy.broadcast_arrays(numpy.asarray(y0, dtype=float),
                                   numpy.asarray(t, dtype=float))
    out = numpy.zeros(y0.shape)
    pos = y0 > 0.0
    switch = numpy.full(y0.shape, numpy.inf)
    switch[pos] = 1.0/y0[pos] - eps**problem.s
    early = pos & (t <= switch)
    out[early] = y0[early]/(1.0 - y0[early]*t[early])
    late = pos & (t > switch)
    if numpy.any(late):
        curve = _capped_curve(problem.s, problem.transition, problem.t_end,
                              eps)
        out[late] = curve(t[late] - switch[late])[0]
    return out


def solve_blowup(problem):
    """
    Space-time net of the regularized blow-up problem

    Returns
    -------
    net : GeneralizedNet
        Values only (C^0 analysis); features at x = 0 and t = 1.
    """
    phi = DEFAULT_MOLLIFIER

    def evaluator(points, eps, order):
        if any(order):
            raise ValueError("Blow-up net carries values only, got order {}"
                             .format(order))
        y0 = phi.cumulative(points[:, 0]/eps)
        return blowup_values(problem, y0, points[:, 1], eps)
    return GeneralizedNet(problem.domain, evaluator, max_order=0,
                          features=((0.0,), (1.0,)),
                          label='blowup[s={:g}]'.format(problem.s))


def rk4_blowup(problem, eps, y0, t, step=None):
    """
    Fixed-step RK4 path of d_t u = chi_eps(u) u**2 from y0 to time t

    Raises
    ------
    RuntimeError
        step above min(1e-3, eps**(2s)/4), or |u| above 2(1 + eps**-s).
    """
    bound = min(MAX_RK4_STEP, eps**(2.0*problem.s)/4.0)
    step = bound if step is None else step
    if step > bound:
        raise RuntimeError("RK4 step {:g} exceeds the stability bound {:g}"
                           .format(step, bound))
    nr_steps = max(int(numpy.ceil(t/step)), 1)
    step = t/nr_steps
    guard = 2.0*(1.0 + problem.plateau(eps))
    u = numpy.array(y0, dtype=float)
    for _ in range(nr_steps):
        k1 = problem.rhs(u, eps)
        k2 = problem.rhs(u + 0.5*step*k1, eps)
        k3 = problem.rhs(u + 0.5*step*k2, eps)
        k4 = problem.rhs(u + step*k3, eps)
        u = u + step*(k1 + 2.0*k2 + 2.0*k3 + k4)/6.0
        if numpy.any(numpy.abs(u) > guard):
            raise RuntimeError("Blow-up path exceeded the overflow guard {:g}"
                               .format(guard))
    return u


def blowup_regions(problem, ladder=None, **options):
    """
    C^0 fiber radii on the S1 (x = 0, t < 1), S2 (x > 0, t > 1) and
    zero (x < 0) sample points

    Returns
    -------
    rows : list of dict
    """
    net = solve_blowup(problem)
    samples = ([('S1', (0.0, t)) for t in (0.25, 0.5, 0.75)]
               + [('S2', (x, t)) for x in (0.1, 0.5) for t in (1.2, 1.5)]
               + [('zero', (-0.5, t)) for t in (0.5, 1.5)])
    rows = []
    for region, point in samples:
        radius, endpoint = critical_exponent(net, power_scale(), point,
                                             TargetTopology('Cp', 0), ladder,
                                             **options)
        expected = {'S1': 0.0, 'S2': problem.s, 'zero': None}[region]
        rows.append({'region': region, 'x': point[0], 't': point[1],
                     'radius': radius, 'endpoint': endpoint,
                     'expected': expected})
        _LOGGER.info("blowup {} {}: R={}".format(region, point, radius))
    return rows
