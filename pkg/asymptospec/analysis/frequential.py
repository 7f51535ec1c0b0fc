"""\
Frequential microlocal analysis of 1-D nets

Windowed Fourier transforms on every rung of a ladder, decay exponents of
|xi|**q |(chi u_eps)^(xi)| on the two half-line cones, wave front estimates
and the cutoff-sequence test with C^L-type prefactors.
"""
import logging
from multiprocessing.pool import ThreadPool

import numpy
from scipy import fft
from scipy.interpolate import BSpline

from .classes import RegularitySequenceFamily, clip_exponents
from .valuation import MIN_SAMPLES, fit_valuation
from ..nets.mollifiers import DEFAULT_MOLLIFIER, composite_gauss
from ..nets.scales import EpsLadder

_LOGGER = logging.getLogger(__name__)

XI_FACTOR = 256.0
DEFAULT_WIDTH = 0.25
CONE_FRACTION = 1.0/8.0
NOISE_FLOOR = 1e-13
MIN_CONE_SAMPLES = 8
DEFAULT_Q_MAX = 4
MAX_Q = 8
REGULAR_SLACK = 0.25
SINGULAR_SLACK = 0.5
RRL_SLACK = 0.5
DEFAULT_K_MAX = 6
# Plateau half-width, B-spline width and mollifier radius as window fractions
PLATEAU_FRACTION = 3.0/8.0
SPLINE_FRACTION = 1.0/8.0
MOLLIFIER_FRACTION = 1.0/64.0


def frequential_ladder():
    """Default ladder for transforms: 2**-4 .. 2**-9."""
    return EpsLadder(2.0**-4, 0.5, 6)


def window_bump(x, x0, width):
    """chi(x) = exp(1 - 1/(1 - s**2)), s = (x - x0)/(width/2)."""
    s = (numpy.asarray(x, dtype=float) - x0)/(0.5*width)
    out = numpy.zeros(s.shape)
    inside = numpy.abs(s) < 1.0
    out[inside] = numpy.exp(1.0 - 1.0/(1.0 - s[inside]**2))
    return out


class RungTransform(object):
    """Transform of chi*u_eps on one rung."""

    def __init__(self, eps, freqs, magnitudes, step, xi_max, mass, energy):
        self.eps = eps
        self.freqs = freqs
        self.magnitudes = magnitudes
        self.step = step
        self.xi_max = xi_max
        self.mass = mass
        self.energy = energy

    @property
    def spacing(self):
        return abs(self.freqs[1] - self.freqs[0])

    def parseval_gap(self):
        """Relative mismatch of sum |u^|**2 dxi against 2 pi sum |chi u|**2 h."""
        lhs = numpy.sum(self.magnitudes**2)*self.spacing
        rhs = 2.0*numpy.pi*self.energy
        if rhs == 0.0:
            return 0.0 if lhs == 0.0 else numpy.inf
        return abs(lhs - rhs)/rhs

    def cone(self, direction, fraction=CONE_FRACTION):
        """Frequencies and floored magnitudes with direction*xi in the cone."""
        sel = ((direction*self.freqs >= fraction*self.xi_max)
               & (numpy.abs(self.freqs) <= self.xi_max))
        mags = self.magnitudes[sel]
        mags = numpy.where(mags < NOISE_FLOOR*self.mass, 0.0, mags)
        return self.freqs[sel], mags


class WindowedSpectrum(object):
    """\
    |(chi u_eps)^(xi)| on every rung of a ladder

    Attributes
    ----------
    x0, width : float
        Base point and window length; chi(x0) = 1.
    rungs : list of RungTransform
    """

    def __init__(self, label, x0, width, rungs, cutoff_name='bump'):
        self.label = label
        self.x0 = x0
        self.width = width
        self.rungs = list(rungs)
        self.cutoff_name = cutoff_name

    @property
    def eps(self):
        return numpy.array([rung.eps for rung in self.rungs])

    def cone_sups(self, direction, q):
        """sup over the cone of (1+|xi|)**q |u^| per rung."""
        sups = []
        for rung in self.rungs:
            freqs, mags = rung.cone(direction)
            if freqs.size < MIN_CONE_SAMPLES:
                raise ValueError("Only {} frequency samples in the {} cone at "
                                 "eps={:g}".format(freqs.size, direction,
                                                   rung.eps))
            sups.append(float(numpy.max((1.0 + numpy.abs(freqs))**q*mags)))
        return numpy.array(sups)


def _check_window(unet, x0, width):
    if unet.domain.dim != 1:
        raise ValueError("Frequential analysis needs a 1-D net, {} has dim {}"
                         .format(unet.label, unet.domain.dim))
    if width <= 0:
        raise ValueError("Window width must be positive, got {}".format(width))
    lo, hi = x0 - 0.5*width, x0 + 0.5*width
    if lo < unet.domain.lo[0] or hi > unet.domain.hi[0]:
        raise ValueError("Window [{:g}, {:g}] escapes domain {}"
                         .format(lo, hi, unet.domain))


def rung_transform(unet, x0, width, eps, cutoff, xi_factor=XI_FACTOR,
                   step=None):
    """
    Discrete transform of cutoff*u_eps at one eps

    u^(xi) = h * sum_j (cutoff u_eps)(x_j) exp(-i x_j xi) on the uniform grid
    of spacing h over the window, via scipy.fft with two-fold zero padding.
    """
    xi_max = xi_factor/eps
    if step is None:
        step = min(eps/8.0, numpy.pi/xi_max)
    elif step*xi_max > numpy.pi:
        raise ValueError("Step {:g} cannot resolve xi_max={:g} (h*xi_max > pi)"
                         .format(step, xi_max))
    start = x0 - 0.5*width
    nr_samples = int(numpy.ceil(width/step)) + 1
    xs = start + step*numpy.arange(nr_samples)
    with numpy.errstate(over='ignore', invalid='ignore'):
        values = cutoff(xs)*unet.evaluate(xs, eps)
    size = fft.next_fast_len(2*nr_samples)
    freqs = 2.0*numpy.pi*fft.fftfreq(size, d=step)
    spectrum = step*fft.fft(values, n=size)*numpy.exp(-1j*freqs*start)
    return RungTransform(eps, freqs, numpy.abs(spectrum), step, xi_max,
                         float(numpy.sum(numpy.abs(values))*step),
                         float(numpy.sum(numpy.abs(values)**2)*step))


def windowed_fourier(unet, x0, width=DEFAULT_WIDTH, ladder=None,
                     xi_factor=XI_FACTOR, step=None):
    """
    Windowed Fourier transform of a 1-D net on every rung

    Parameters
    ----------
    unet : GeneralizedNet
    x0 : float
        Base point; the window [x0 - width/2, x0 + width/2] must fit the
        domain.
    width : float
    ladder : EpsLadder, optional
        Defaults to the frequential ladder 2**-4 .. 2**-9.
    xi_factor : float
        xi_max(eps) = xi_factor/eps.
    step : float, optional
        Explicit grid spacing; must satisfy step*xi_max <= pi on every rung.

    Returns
    -------
    spectrum : WindowedSpectrum
    """
    _check_window(unet, x0, width)
    ladder = ladder or frequential_ladder()

    def cutoff(xs):
        return window_bump(xs, x0, width)
    rungs = [rung_transform(unet, x0, width, eps, cutoff, xi_factor, step)
             for eps in ladder]
    return WindowedSpectrum(unet.label, x0, width, rungs)


class ConeReport(object):
    """\
    Decay exponents and verdict on one cone

    Attributes
    ----------
    x0 : float
    direction : int
        +1 or -1.
    exponents : list of float
        N(q), q = 0..q_max; -inf where the cone is empty of signal.
    verdict : str
        'regular', 'singular' or 'unknown'.
    family : str
    """

    def __init__(self, x0, direction, exponents, verdict, family):
        self.x0 = x0
        self.direction = direction
        self.exponents = list(exponents)
        self.verdict = verdict
        self.family = family

    def __repr__(self):
        return "ConeReport(x0={:g}, direction={:+d}, verdict='{}')".format(
            self.x0, self.direction, self.verdict)

    def monotone_violations(self, tol=SINGULAR_SLACK):
        """q where N(q) drops below N(q-1) by more than tol."""
        nplus = clip_exponents(self.exponents)
        return [q for q in range(1, nplus.size)
                if nplus[q] < nplus[q-1] - tol]

    def as_row(self):
        row = {'x0': self.x0, 'direction': self.direction,
               'verdict': self.verdict, 'family': self.family}
        for q, expo in enumerate(self.exponents):
            row['N{}'.format(q)] = float(expo)
        return row


def _exponent(eps, sups):
    pos = sups > 0
    if pos.sum() < MIN_SAMPLES:
        return -numpy.inf
    return fit_valuation(zip(eps[pos], sups[pos]), tail=eps.size).exponent


def _cone_verdict(exponents, family):
    nplus = clip_exponents(exponents)
    if family.fits(nplus, REGULAR_SLACK):
        return 'regular'
    if family.exceeds(nplus, SINGULAR_SLACK):
        return 'singular'
    if family.kind == 'affine' and nplus.size > 1 \
            and numpy.max(numpy.diff(nplus)) > family.b + SINGULAR_SLACK:
        return 'singular'
    return 'unknown'


def cone_decay_classify(spectrum, direction, q_max=DEFAULT_Q_MAX,
                        family=None):
    """
    Fit N(q) for s_q(eps) = sup over the cone of (1+|xi|)**q |u^(xi)|

    Parameters
    ----------
    spectrum : WindowedSpectrum
    direction : int
        +1 or -1; the cone is direction*xi >= xi_max/8.
    q_max : int
        At most 8.
    family : RegularitySequenceFamily, optional
        Defaults to Bo.

    Returns
    -------
    report : ConeReport
    """
    if direction not in (1, -1):
        raise ValueError("Direction must be +1 or -1, got {}".format(direction))
    if not 0 <= q_max <= MAX_Q:
        raise ValueError("q_max must lie in [0, {}], got {}".format(MAX_Q,
                                                                    q_max))
    family = family or RegularitySequenceFamily('bounded')
    eps = spectrum.eps
    exponents = [_exponent(eps, spectrum.cone_sups(direction, q))
                 for q in range(q_max+1)]
    report = ConeReport(spectrum.x0, direction, exponents,
                        _cone_verdict(exponents, family), family.name)
    _LOGGER.debug("{}: {!r} N={}".format(spectrum.label, report,
                                         numpy.round(exponents, 3).tolist()))
    return report


class WaveFrontEstimate(object):
    """Cone reports on a grid and the (x, direction) pairs flagged singular."""

    def __init__(self, label, reports, family):
        self.label = label
        self.reports = list(reports)
        self.family = family

    @property
    def singular(self):
        return sorted((rep.x0, rep.direction) for rep in self.reports
                      if rep.verdict == 'singular')

    @property
    def unknown(self):
        return sorted((rep.x0, rep.direction) for rep in self.reports
                      if rep.verdict == 'unknown')

    def projection(self):
        """Base points carrying a singular direction."""
        return sorted(set(x0 for x0, _ in self.singular))

    def rows(self):
        return [rep.as_row() for rep in self.reports]


def _point_reports(unet, x0, width, ladder, q_max, family, xi_factor):
    spectrum = windowed_fourier(unet, x0, width, ladder, xi_factor)
    return [cone_decay_classify(spectrum, direction, q_max, family)
            for direction in (1, -1)]


def wavefront_estimate(unet, grid, ladder=None, family=None,
                       q_max=DEFAULT_Q_MAX, width=DEFAULT_WIDTH,
                       xi_factor=XI_FACTOR, jobs=1):
    """
    Estimate the generalized wave front set of a 1-D net on a grid

    Returns
    -------
    estimate : WaveFrontEstimate
        Unknown verdicts are kept in the reports, never raised.
    """
    family = family or RegularitySequenceFamily('bounded')
    ladder = ladder or frequential_ladder()
    arglist = [(unet, float(x0), width, ladder, q_max, family, xi_factor)
               for x0 in grid]
    if jobs > 1 and len(arglist) > 1:
        with ThreadPool(jobs) as pool:
            nested = pool.starmap(_point_reports, arglist)
    else:
        nested = [_point_reports(*args) for args in arglist]
    estimate = WaveFrontEstimate(unet.label,
                                 [rep for reps in nested for rep in reps],
                                 family.name)
    _LOGGER.info("Wave front of {}: {}".format(unet.label, estimate.singular))
    return estimate


class CutoffSequence(object):
    """\
    Cutoffs chi_k = 1_I * B_k * rho, k >= 1, around x0

    I = [x0 - 3w/8, x0 + 3w/8], B_k is the k-fold convolution of boxes of
    width beta_k = w/(8k) (a cardinal B-spline density) and rho the
    mollifier of radius w/64. Then chi_k = 1 near x0, supp chi_k lies in the
    window and d^j chi_k = D^j (1_I * B_{k-j} * rho) with the shift
    difference D g = (g(.+beta/2) - g(.-beta/2))/beta, so
    |chi_k^(j)| <= (2/beta_k)**j for j <= k.
    """

    def __init__(self, x0, width, phi=None):
        self.x0 = float(x0)
        self.width = float(width)
        self.phi = phi or DEFAULT_MOLLIFIER
        self.plateau = (self.x0 - PLATEAU_FRACTION*width,
                        self.x0 + PLATEAU_FRACTION*width)
        self._splines = {}

    def beta(self, k):
        return SPLINE_FRACTION*self.width/k

    def _cdf(self, nr_boxes, beta):
        key = (nr_boxes, beta)
        if key not in self._splines:
            knots = beta*(numpy.arange(nr_boxes+1) - 0.5*nr_boxes)
            density = BSpline.basis_element(knots, extrapolate=False)
            self._splines[key] = (density.antiderivative(), knots)
        return self._splines[key]

    def smoothed_indicator(self, nr_boxes, beta, x):
        """1_I * B (x), B the nr_boxes-fold box density of box width beta."""
        x = numpy.asarray(x, dtype=float)
        lo, hi = self.plateau
        if nr_boxes == 0:
            return ((x >= lo) & (x <= hi)).astype(float)
        cdf, knots = self._cdf(nr_boxes, beta)

        base = float(cdf(knots[0]))

        def cumulative(s):
            s = numpy.clip(s, knots[0], knots[-1])
            return (cdf(s) - base)/beta
        return cumulative(x - lo) - cumulative(x - hi)

    def _mollified(self, nr_boxes, beta, x):
        radius = MOLLIFIER_FRACTION*self.width
        nodes, weights = composite_gauss(-1.0, 1.0)
        kernel = weights*self.phi(nodes)
        shifted = numpy.asarray(x, dtype=float)[..., None] - radius*nodes
        return numpy.sum(kernel*self.smoothed_indicator(nr_boxes, beta,
                                                        shifted), axis=-1)

    def derivative(self, k, j, x):
        """j-th derivative of chi_k, j <= k, by exact shift differences."""
        if not 0 <= j <= k:
            raise ValueError("Derivative order {} must lie in [0, {}]"
                             .format(j, k))
        beta = self.beta(k)
        x = numpy.asarray(x, dtype=float)
        total = numpy.zeros(x.shape)
        # D^j g = beta**-j * sum_i (-1)**i C(j, i) g(x + (j/2 - i)*beta)
        coeff = 1.0
        for i in range(j+1):
            total += coeff*self._mollified(k - j, beta, x + (0.5*j - i)*beta)
            coeff *= -(j - i)/(i + 1.0)
        return total/beta**j

    def __call__(self, k, x):
        return self.derivative(k, 0, x)

    def verify(self, k, nr_points=2049):
        """
        Check chi_k(x0) = 1, support in the window and the derivative bounds

        Raises
        ------
        RuntimeError
            A bound fails on the verification grid.
        """
        xs = numpy.linspace(self.x0 - 0.5*self.width,
                            self.x0 + 0.5*self.width, nr_points)
        if abs(float(self(k, self.x0)) - 1.0) > 1e-9:
            raise RuntimeError("Cutoff chi_{} is not 1 at x0".format(k))
        edge = self(k, xs[[0, -1]])
        if numpy.any(numpy.abs(edge) > 1e-12):
            raise RuntimeError("Cutoff chi_{} leaks out of the window"
                               .format(k))
        for j in range(k+1):
            bound = (2.0/self.beta(k))**j
            peak = float(numpy.max(numpy.abs(self.derivative(k, j, xs))))
            if peak > bound*(1.0 + 1e-9):
                raise RuntimeError(
                    "Cutoff chi_{} derivative {} reaches {:g} above bound {:g}"
                    .format(k, j, peak, bound))
        return True


def sequence_rule(rule):
    """
    L_k sequence from a callable or 'analytic' (k+1) / 'gevrey:<sigma>'

    >>> from asymptospec.analysis.frequential import sequence_rule
    >>> sequence_rule('gevrey:2')(2)
    9.0
    """
    if callable(rule):
        return rule
    if rule == 'analytic':
        return lambda k: float(k + 1)
    if rule.startswith('gevrey:'):
        sigma = float(rule.split(':', 1)[1])
        return lambda k: float(k + 1)**sigma
    raise ValueError("Unknown L sequence '{}', use analytic or gevrey:<sigma>"
                     .format(rule))


class RRLVerdict(object):
    """\
    Outcome of the cutoff-sequence test

    Attributes
    ----------
    verdict : str
        'regular' or 'singular'.
    exponents : list of float
        Fitted N(k), k = 1..k_max.
    ratios : list of float
        C_k**(1/k)/L_k for the fitted prefactors C_k.
    constant : float
        Fitted c (median ratio).
    exponent_ok, prefactor_ok : bool
    """

    def __init__(self, verdict, exponents, ratios, constant, exponent_ok,
                 prefactor_ok):
        self.verdict = verdict
        self.exponents = exponents
        self.ratios = ratios
        self.constant = constant
        self.exponent_ok = exponent_ok
        self.prefactor_ok = prefactor_ok

    def __repr__(self):
        return "RRLVerdict('{}', c={:.4g})".format(self.verdict, self.constant)

    def as_dict(self):
        return {'verdict': self.verdict,
                'exponents': [float(e) for e in self.exponents],
                'ratios': [float(r) for r in self.ratios],
                'constant': float(self.constant),
                'exponent_ok': self.exponent_ok,
                'prefactor_ok': self.prefactor_ok}


def rRL_microlocal_test(unet, x0, direction, L='analytic', family=None,
                        k_max=DEFAULT_K_MAX, width=DEFAULT_WIDTH, ladder=None,
                        xi_factor=XI_FACTOR):
    """
    Microlocal regularity with factorial-type prefactors along a cutoff
    sequence

    For k = 1..k_max, S_k(eps) = sup over the cone of |xi|**k
    |(chi_k u_eps)^(xi)| is fitted as C_k*eps**-N(k). The net is regular when
    N fits the family within 0.5 and C_k**(1/k)/L_k <= 2c with c the median
    of those ratios.

    Returns
    -------
    verdict : RRLVerdict

    Raises
    ------
    RuntimeError
        A cutoff fails its derivative-bound verification.
    """
    if direction not in (1, -1):
        raise ValueError("Direction must be +1 or -1, got {}".format(direction))
    if not 1 <= k_max <= MAX_Q:
        raise ValueError("k_max must lie in [1, {}], got {}".format(MAX_Q,
                                                                    k_max))
    _check_window(unet, x0, width)
    family = family or RegularitySequenceFamily('bounded')
    rule = sequence_rule(L)
    ladder = ladder or frequential_ladder()
    cutoffs = CutoffSequence(x0, width)
    eps = numpy.asarray(ladder.values)
    exponents, ratios = [], []
    for k in range(1, k_max+1):
        cutoffs.verify(k)
        rungs = [rung_transform(unet, x0, width, e,
                                lambda xs, k=k: cutoffs(k, xs), xi_factor)
                 for e in ladder]
        spectrum = WindowedSpectrum(unet.label, x0, width, rungs,
                                    'chi_{}'.format(k))
        freqs_sups = []
        for rung in spectrum.rungs:
            freqs, mags = rung.cone(direction)
            freqs_sups.append(float(numpy.max(numpy.abs(freqs)**k*mags))
                              if freqs.size else 0.0)
        sups = numpy.array(freqs_sups)
        pos = sups > 0
        if pos.sum() < MIN_SAMPLES:
            exponents.append(-numpy.inf)
            ratios.append(0.0)
            continue
        fit = fit_valuation(zip(eps[pos], sups[pos]), tail=eps.size)
        exponents.append(fit.exponent)
        ratios.append(numpy.exp(fit.intercept/k)/rule(k))
    constant = float(numpy.median(ratios))
    exponent_ok = family.fits(exponents, RRL_SLACK)
    prefactor_ok = bool(max(ratios) <= 2.0*constant)
    verdict = 'regular' if exponent_ok and prefactor_ok else 'singular'
    result = RRLVerdict(verdict, exponents, ratios, constant, exponent_ok,
                        prefactor_ok)
    _LOGGER.debug("rRL test {} at {:g}{:+d}: {!r}".format(
        unet.label, x0, direction, result))
    return result
