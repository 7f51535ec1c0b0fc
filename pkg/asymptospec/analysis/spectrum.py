"""\
Local asymptotic singular spectrum

A net u is regular at x in the sense (a, F) when a(r)u_eps converges in F on
some neighbourhood of x. The critical exponent R_x splits [0, inf) into the
fiber of u over x (no convergence) and N_x (convergence).
"""
import logging
from multiprocessing.pool import ThreadPool

import numpy

from . import RADIUS_TOL
from .topologies import pairing_rule, pairing_weights
from .valuation import DEFAULT_TAIL, MIN_SAMPLES, fit_valuation
from ..nets.generalized import mul_nets, pow_net
from ..nets.scales import EpsLadder
from ..nets.seminorms import multi_indices, sampling_grid

_LOGGER = logging.getLogger(__name__)

STATUSES = ('converges-to-zero', 'converges-nonzero', 'diverges', 'unknown')
# Norm slope band treated as bounded
BOUND_TOL = 0.005
INCREMENT_SLOPE = 0.2
ZERO_INCREMENT = 1e-10
NONZERO_FACTOR = 10.0
OSCILLATION = 0.1
UNKNOWN_SLOPE = -0.05
PAIRING_FLOOR = 1e-12

DEFAULT_ETA = 0.25
DEFAULT_DEPTH = 6
R_MAX = 16.0
BISECTION_STEPS = 24
FIBER_STEP = 0.25

_COMPLEMENT = {'closed': 'open', 'open': 'closed', 'unknown': 'unknown'}


class ConvergenceVerdict(object):
    """\
    Outcome of one convergence test

    Attributes
    ----------
    status : str
        One of STATUSES.
    limit_norm : float or None
        Estimated norm of the limit when converging.
    diagnostics : list of (eps, increment)
        Increment sequence of the deciding norm.
    norm_fit : ScaleFit or None
        Valuation fit of the slowest decaying norm sequence.
    pairing_statuses : list of str, optional
        Per test function, for D' tests.
    """

    def __init__(self, status, limit_norm=None, diagnostics=(),
                 norm_fit=None, pairing_statuses=None):
        if status not in STATUSES:
            raise ValueError("Unknown convergence status '{}'".format(status))
        self.status = status
        self.limit_norm = limit_norm
        self.diagnostics = list(diagnostics)
        self.norm_fit = norm_fit
        self.pairing_statuses = pairing_statuses

    @property
    def converges(self):
        return self.status in ('converges-to-zero', 'converges-nonzero')

    def __repr__(self):
        return "ConvergenceVerdict('{}', limit={})".format(self.status,
                                                           self.limit_norm)

    def as_dict(self):
        return {'status': self.status, 'limit_norm': self.limit_norm,
                'diagnostics': [[float(e), float(d)]
                                for e, d in self.diagnostics],
                'pairing_statuses': self.pairing_statuses}


def _slope(eps, values):
    pos = values > 0
    if pos.sum() < MIN_SAMPLES:
        return None
    return fit_valuation(zip(eps[pos], values[pos]), tail=eps.size)


def judge_sequence(eps, norms, increments):
    """
    Decide convergence of one norm sequence on the ladder tail

    Parameters
    ----------
    eps : array
        Tail rungs, decreasing.
    norms : array
        m_i, norm of a(r)u at rung i.
    increments : array
        d_i, norm of the difference between rungs i and i+1.

    Returns
    -------
    status : str
    limit : float or None
    fit : ScaleFit or None
        Fit of the norm sequence.
    """
    if not (numpy.all(numpy.isfinite(norms))
            and numpy.all(numpy.isfinite(increments))):
        return 'diverges', None, None
    fit = _slope(eps, norms)
    if fit is None:
        return 'converges-to-zero', 0.0, None
    if fit.slope > BOUND_TOL:
        return 'converges-to-zero', 0.0, fit
    if fit.slope < -BOUND_TOL:
        return 'diverges', None, fit
    limit = float(norms[-1])
    settled = True
    dfit = None
    if not numpy.all(increments <= ZERO_INCREMENT*norms.max()):
        dfit = _slope(eps[:-1], increments)
        if dfit is not None:
            settled = dfit.slope >= INCREMENT_SLOPE
    if settled:
        if limit > 0.0 and limit > NONZERO_FACTOR*increments[-1]:
            return 'converges-nonzero', limit, fit
        return 'converges-to-zero', limit, fit
    ratios = numpy.diff(numpy.log(increments[increments > 0]))
    flips = numpy.any(numpy.sign(ratios[1:]) != numpy.sign(ratios[:-1]))
    if (dfit.slope > UNKNOWN_SLOPE and flips
            and numpy.max(numpy.abs(ratios)) > OSCILLATION):
        return 'unknown', None, fit
    return 'diverges', None, fit


class ConvergenceProbe(object):
    """\
    Cached ladder samples of a net on one neighbourhood

    Evaluations do not depend on r, so every convergence test on the same
    (net, neighbourhood, topology, ladder) reuses them; only the scale
    factors a(r)(eps_i) change.

    Parameters
    ----------
    unet : GeneralizedNet
    vbox : DomainBox
        Neighbourhood, inside the net's domain.
    topology : TargetTopology
    ladder : EpsLadder, optional
    tail : int
    """

    def __init__(self, unet, vbox, topology, ladder=None, tail=DEFAULT_TAIL):
        ladder = ladder or EpsLadder()
        if not unet.domain.contains(vbox):
            raise ValueError("Neighbourhood {} outside domain {}"
                             .format(vbox, unet.domain))
        if topology.kind == 'Cp' and topology.order > unet.max_order:
            raise ValueError("Topology {} needs derivatives beyond max_order {}"
                             " of {}".format(topology.name, unet.max_order,
                                             unet.label))
        self.unet = unet
        self.vbox = vbox
        self.topology = topology
        self.eps = numpy.asarray(ladder.values)[ladder.tail_indices(tail)]
        with numpy.errstate(over='ignore', invalid='ignore'):
            if topology.kind == 'Cp':
                self._sample_cp()
            else:
                self._sample_dprime()

    def _sample_cp(self):
        alphas = multi_indices(self.unet.domain.dim, self.topology.order)
        features = self.unet.features

        def stacked(grid, eps):
            return numpy.stack([self.unet.evaluate(grid, eps, alpha)
                                for alpha in alphas])
        self.own = numpy.array([
            numpy.max(numpy.abs(stacked(sampling_grid(self.vbox, features,
                                                      [eps]), eps)))
            for eps in self.eps])
        self.pairs = []
        for eps1, eps2 in zip(self.eps[:-1], self.eps[1:]):
            grid = sampling_grid(self.vbox, features, [eps1, eps2])
            self.pairs.append((stacked(grid, eps1), stacked(grid, eps2)))

    def _sample_dprime(self):
        nr_rungs = self.eps.size
        self.pairings = None
        for i, eps in enumerate(self.eps):
            nodes, weights, axes = pairing_rule(self.vbox, self.unet.features,
                                                eps)
            psi = pairing_weights(self.vbox, axes)
            vals = self.unet.evaluate(nodes, eps)
            if self.pairings is None:
                self.pairings = numpy.zeros((nr_rungs, psi.shape[0]))
                self.absolute = numpy.zeros((nr_rungs, psi.shape[0]))
            self.pairings[i] = psi @ (weights*vals)
            self.absolute[i] = numpy.abs(psi) @ (weights*numpy.abs(vals))

    def verdict(self, scale, r):
        """Convergence verdict of a(r)u_eps on this neighbourhood."""
        factors = scale.value(r, self.eps)
        with numpy.errstate(over='ignore', invalid='ignore'):
            if self.topology.kind == 'Cp':
                return self._verdict_cp(factors)
            return self._verdict_dprime(factors)

    def _verdict_cp(self, factors):
        norms = factors*self.own
        increments = numpy.array([
            numpy.max(numpy.abs(fac1*vals1 - fac2*vals2))
            for (vals1, vals2), fac1, fac2
            in zip(self.pairs, factors[:-1], factors[1:])])
        status, limit, fit = judge_sequence(self.eps, norms, increments)
        return ConvergenceVerdict(status, limit,
                                  zip(self.eps[:-1], increments), fit)

    def _verdict_dprime(self, factors):
        scaled = factors[:, None]*self.pairings
        absolute = factors[:, None]*self.absolute
        scaled = numpy.where(numpy.abs(scaled) <= PAIRING_FLOOR*absolute,
                             0.0, scaled)
        increments = numpy.abs(scaled[:-1] - scaled[1:])
        increments = numpy.where(
            increments <= PAIRING_FLOOR*(absolute[:-1] + absolute[1:]),
            0.0, increments)
        outcomes = [judge_sequence(self.eps, numpy.abs(scaled[:, j]),
                                   increments[:, j])
                    for j in range(scaled.shape[1])]
        statuses = [status for status, _, _ in outcomes]
        if 'diverges' in statuses:
            status = 'diverges'
        elif 'unknown' in statuses:
            status = 'unknown'
        elif 'converges-nonzero' in statuses:
            status = 'converges-nonzero'
        else:
            status = 'converges-to-zero'
        fits = [(fit.slope, j) for j, (_, _, fit) in enumerate(outcomes)
                if fit is not None]
        deciding = min(fits)[1] if fits else 0
        limits = [limit for _, limit, _ in outcomes if limit is not None]
        limit = max(limits) if status.startswith('converges') and limits \
            else None
        return ConvergenceVerdict(status, limit,
                                  zip(self.eps[:-1], increments[:, deciding]),
                                  outcomes[deciding][2], statuses)


def test_convergence(unet, scale, r, vbox, topology, ladder=None,
                     tail=DEFAULT_TAIL):
    """
    Does a(r)u_eps converge in the topology on the neighbourhood vbox?

    Parameters
    ----------
    unet : GeneralizedNet
    scale : AsymptoticScale
    r : float
        Nonnegative exponent.
    vbox : DomainBox
    topology : TargetTopology
    ladder : EpsLadder, optional

    Returns
    -------
    verdict : ConvergenceVerdict

    Raises
    ------
    ValueError
        C^p order above the net's max_order, or vbox outside the domain.
    """
    if r < 0:
        raise ValueError("Exponent r must be >= 0, got {}".format(r))
    return ConvergenceProbe(unet, vbox, topology, ladder, tail).verdict(scale,
                                                                        r)


test_convergence.__test__ = False


def _as_point(point, dim):
    point = tuple(float(c) for c in numpy.atleast_1d(point))
    if len(point) != dim:
        raise ValueError("Point {} does not have {} coordinates"
                         .format(point, dim))
    return point


class PointSearch(object):
    """\
    Convergence tests at one point over shrinking neighbourhoods

    V_k = point +- eta*2**-k for k < depth, clipped to the domain; r is
    regular when the test converges on some V_k. Probes are built lazily
    from the smallest neighbourhood up.
    """

    def __init__(self, unet, scale, point, topology, ladder=None,
                 tail=DEFAULT_TAIL, eta=DEFAULT_ETA, depth=DEFAULT_DEPTH):
        self.unet = unet
        self.scale = scale
        self.point = _as_point(point, unet.domain.dim)
        if not unet.domain.contains_point(self.point):
            raise ValueError("Point {} outside domain {}"
                             .format(self.point, unet.domain))
        self.topology = topology
        self.ladder = ladder or EpsLadder()
        self.tail = tail
        self.boxes = [unet.domain.neighbourhood(self.point, eta*2.0**-k)
                      for k in reversed(range(depth))]
        self._probes = {}

    def probe(self, k):
        if k not in self._probes:
            self._probes[k] = ConvergenceProbe(self.unet, self.boxes[k],
                                               self.topology, self.ladder,
                                               self.tail)
        return self._probes[k]

    def verdict(self, r):
        """
        Returns
        -------
        verdict : ConvergenceVerdict
            From the first converging neighbourhood, else an unknown verdict
            if one occurred, else the smallest neighbourhood's.
        box : DomainBox or None
            Converging neighbourhood.
        """
        fallback = None
        for k in range(len(self.boxes)):
            verdict = self.probe(k).verdict(self.scale, r)
            if verdict.converges:
                return verdict, self.boxes[k]
            if fallback is None or verdict.status == 'unknown':
                fallback = verdict
        return fallback, None

    def regular_at(self, r):
        return self.verdict(r)[0].converges

    def critical(self, r_max=R_MAX, steps=BISECTION_STEPS):
        """
        Bisection for R_x on [0, r_max] plus endpoint refinement

        Returns
        -------
        radius : float, None or inf
            None when the fiber is empty, inf when r_max does not converge.
        endpoint : str or None
            'closed', 'open' or 'unknown' for N_x = [R, inf) or (R, inf).
        """
        if self.regular_at(0.0):
            if not self.regular_at(r_max):
                raise RuntimeError(
                    "Contradictory verdicts at {}: converges at r=0 but not at"
                    " r={}".format(self.point, r_max))
            return None, None
        if not self.regular_at(r_max):
            return numpy.inf, None
        lower, upper = 0.0, float(r_max)
        for _ in range(steps):
            mid = 0.5*(lower + upper)
            if self.regular_at(mid):
                upper = mid
            else:
                lower = mid
        verdict, _ = self.verdict(upper)
        if verdict.status == 'converges-nonzero':
            return upper, 'closed'
        fit = verdict.norm_fit
        if (self.scale.name == 'power' and fit is not None
                and fit.verdict == 'power-like'):
            # Norms scale like eps**(r - R): the slope at upper locates R
            crit = max(upper - fit.slope, 0.0)
            at_crit, _ = self.verdict(crit)
            if at_crit.converges:
                return crit, 'closed'
            return crit, 'unknown' if at_crit.status == 'unknown' else 'open'
        return upper, 'open'

    def fiber_samples(self, stop, step=FIBER_STEP):
        """(r, status) on the r grid 0, step, ... up to stop."""
        rvals = numpy.arange(0.0, stop + 0.5*step, step)
        return [(float(r), self.verdict(r)[0].status) for r in rvals]


def critical_exponent(unet, scale, point, topology, ladder=None,
                      r_max=R_MAX, steps=BISECTION_STEPS, eta=DEFAULT_ETA,
                      depth=DEFAULT_DEPTH, tail=DEFAULT_TAIL):
    """
    Critical exponent R_x of u at a point

    Returns
    -------
    radius : float, None or inf
        None when u is regular at the point (empty fiber).
    endpoint : str or None
        Whether N_x = {r : a(r)u converges} is 'closed' ([R, inf)), 'open'
        ((R, inf)) or 'unknown'. The fiber's endpoint is the complement.

    Raises
    ------
    RuntimeError
        Verdicts contradict the monotonicity of N_x.
    """
    search = PointSearch(unet, scale, point, topology, ladder, tail, eta,
                         depth)
    return search.critical(r_max, steps)


class SpectrumPoint(object):
    """\
    Fiber of the singular spectrum over one point

    Attributes
    ----------
    point : tuple
    radius : float, None or inf
        None for an empty fiber; nan when the search failed.
    fiber_endpoint : str or None
        'closed' ([0, R]), 'open' ([0, R)) or 'unknown'.
    samples : list of (r, status)
    error : str or None
    """

    def __init__(self, point, radius, n_endpoint=None, samples=(),
                 error=None):
        self.point = point
        self.radius = radius
        self.n_endpoint = n_endpoint
        self.samples = list(samples)
        self.error = error

    @property
    def fiber_endpoint(self):
        return _COMPLEMENT.get(self.n_endpoint)

    @property
    def singular(self):
        return self.radius is not None and self.error is None

    def contains(self, r):
        """True when r lies in the fiber."""
        if self.radius is None or numpy.isnan(self.radius):
            return False
        if r < self.radius:
            return True
        return r == self.radius and self.fiber_endpoint == 'closed'

    def monotone_violations(self):
        """\
        Sampled (r, status) above a converging r that is not a convergence
        to zero

        Convergence at r forces convergence to zero at every larger r.

        >>> SpectrumPoint((0.0,), 0.5, samples=[
        ...     (0.5, 'converges-nonzero'), (0.75, 'converges-nonzero'),
        ...     (1.0, 'unknown')]).monotone_violations()
        [(0.75, 'converges-nonzero'), (1.0, 'unknown')]
        """
        converged = False
        bad = []
        for r, status in sorted(self.samples):
            if converged and status != 'converges-to-zero':
                bad.append((r, status))
            elif status in ('converges-to-zero', 'converges-nonzero'):
                converged = True
        return bad

    def as_row(self):
        radius = self.radius
        return {'point': list(self.point),
                'radius': 'none' if radius is None else float(radius),
                'fiber_endpoint': self.fiber_endpoint or '',
                'error': self.error or ''}

    def __repr__(self):
        return "SpectrumPoint({}, R={}, fiber={})".format(
            self.point, self.radius, self.fiber_endpoint)


class SpectrumResult(object):
    """Singular spectrum of a net sampled on a grid of points."""

    def __init__(self, label, topology, scale, points, ladder):
        self.label = label
        self.topology = topology
        self.scale = scale
        self.points = list(points)
        self.ladder = ladder

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def at(self, point):
        """SpectrumPoint for a grid point."""
        point = tuple(float(c) for c in numpy.atleast_1d(point))
        for spt in self.points:
            if spt.point == point:
                return spt
        raise KeyError(point)

    def singular_support(self):
        return [spt.point for spt in self.points if spt.singular]

    def as_dict(self):
        return {'net': self.label, 'topology': self.topology.name,
                'scale': self.scale.name, 'ladder': self.ladder.as_dict(),
                'points': [spt.as_row() for spt in self.points]}


def _spectrum_point(unet, scale, point, topology, ladder, options):
    search = PointSearch(unet, scale, point, topology, ladder,
                         options['tail'], options['eta'], options['depth'])
    try:
        radius, n_endpoint = search.critical(options['r_max'],
                                             options['steps'])
    except RuntimeError as err:
        _LOGGER.warning("Spectrum search failed at {}: {}".format(point, err))
        return SpectrumPoint(search.point, numpy.nan, 'unknown', error=str(err))
    if radius is None:
        stop = 1.0
    elif numpy.isinf(radius):
        stop = options['r_max']
    else:
        stop = min(options['r_max'], numpy.floor(radius) + 1.0)
    samples = search.fiber_samples(stop, options['fiber_step'])
    spt = SpectrumPoint(search.point, radius, n_endpoint, samples)
    if spt.monotone_violations():
        _LOGGER.warning("Non-monotone verdicts at {}: {}"
                        .format(spt.point, spt.monotone_violations()))
    _LOGGER.debug("{} at {}: {!r}".format(unet.label, point, spt))
    return spt


def _run_points(func, arglist, jobs):
    if jobs > 1 and len(arglist) > 1:
        with ThreadPool(jobs) as pool:
            return pool.starmap(func, arglist)
    return [func(*args) for args in arglist]


def singular_spectrum(unet, scale, grid, topology, ladder=None, r_max=R_MAX,
                      steps=BISECTION_STEPS, eta=DEFAULT_ETA,
                      depth=DEFAULT_DEPTH, tail=DEFAULT_TAIL,
                      fiber_step=FIBER_STEP, jobs=1):
    """
    Sample the singular spectrum S^F_a(u) on a grid of points

    Parameters
    ----------
    unet : GeneralizedNet
    scale : AsymptoticScale
    grid : iterable
        Points (floats in 1-D, (x, t) pairs in 2-D) inside the domain.
    topology : TargetTopology
    ladder : EpsLadder, optional
    jobs : int
        Worker threads; results keep grid order.

    Returns
    -------
    result : SpectrumResult
    """
    ladder = ladder or EpsLadder()
    options = {'r_max': r_max, 'steps': steps, 'eta': eta, 'depth': depth,
               'tail': tail, 'fiber_step': fiber_step}
    arglist = [(unet, scale, point, topology, ladder, options)
               for point in grid]
    _LOGGER.info("Spectrum of {} in {} on {} points".format(
        unet.label, topology.name, len(arglist)))
    points = _run_points(_spectrum_point, arglist, jobs)
    return SpectrumResult(unet.label, topology, scale, points, ladder)


def _irregular_at(unet, scale, point, topology, ladder, options):
    search = PointSearch(unet, scale, point, topology, ladder,
                         options['tail'], options['eta'], options['depth'])
    return None if search.regular_at(0.0) else search.point


def singular_support(unet, scale, grid, topology, ladder=None,
                     eta=DEFAULT_ETA, depth=DEFAULT_DEPTH, tail=DEFAULT_TAIL,
                     jobs=1):
    """
    Grid points where u_eps itself does not converge in the topology

    Same neighbourhoods and tests as singular_spectrum at r = 0, so it
    equals the projection of the sampled spectrum.
    """
    ladder = ladder or EpsLadder()
    options = {'eta': eta, 'depth': depth, 'tail': tail}
    arglist = [(unet, scale, point, topology, ladder, options)
               for point in grid]
    found = _run_points(_irregular_at, arglist, jobs)
    return [point for point in found if point is not None]


def _radius_key(radius):
    if radius is None:
        return -numpy.inf
    return radius


def check_nonlinear_bounds(unet, vnet, scale, grid, topology, powers=(2,),
                           ladder=None, tolerance=RADIUS_TOL, jobs=1,
                           **options):
    """
    Compare radii of products and powers with their asymptotic bounds

    At x singular for both factors R(uv) <= R(u) + R(v); at x singular for
    one factor only, R(uv) <= that factor's radius; at x regular for both,
    uv is regular. R(u**p) <= p*R(u).

    Returns
    -------
    report : list of dict
        One row per point and relation with 'bound', 'radius' and 'ok';
        violations are reported, never raised.
    """
    ladder = ladder or EpsLadder()
    grid = list(grid)

    def spectrum(net):
        return singular_spectrum(net, scale, grid, topology, ladder,
                                 jobs=jobs, **options)
    spec_u = spectrum(unet)
    spec_v = spectrum(vnet)
    spec_uv = spectrum(mul_nets(unet, vnet))
    spec_pows = {p: spectrum(pow_net(unet, p)) for p in powers}
    report = []
    for idx, spt in enumerate(spec_u.points):
        r_u = spt.radius
        r_v = spec_v.points[idx].radius
        r_uv = spec_uv.points[idx].radius
        if r_u is not None and r_v is not None:
            bound, case = r_u + r_v, 'both'
        elif r_u is not None:
            bound, case = r_u, 'u-only'
        elif r_v is not None:
            bound, case = r_v, 'v-only'
        else:
            bound, case = None, 'neither'
        ok = _radius_key(r_uv) <= _radius_key(bound) + tolerance
        report.append({'point': list(spt.point), 'relation': 'product',
                       'case': case, 'radius': r_uv, 'bound': bound,
                       'ok': bool(ok)})
        for p, spec_p in spec_pows.items():
            r_p = spec_p.points[idx].radius
            bound_p = None if r_u is None else p*r_u
            ok = _radius_key(r_p) <= _radius_key(bound_p) + tolerance
            report.append({'point': list(spt.point),
                           'relation': 'power{}'.format(p), 'case': case,
                           'radius': r_p, 'bound': bound_p, 'ok': bool(ok)})
    bad = [row for row in report if not row['ok']]
    if bad:
        _LOGGER.warning("{} nonlinear bound violations".format(len(bad)))
    return report
