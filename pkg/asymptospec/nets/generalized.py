"""\
Generalized nets: one representative (u_eps) of a Colombeau-type class

A net is a deterministic evaluator (points, eps, order) -> values on a
DomainBox. Points have shape (n, dim) and order is a per-axis tuple of
derivative orders.
"""
import itertools
import logging
from math import comb

import numpy
from numpy.polynomial import Polynomial

from . import FD_STEP_RATIO
from .mollifiers import DEFAULT_MOLLIFIER, composite_gauss

_LOGGER = logging.getLogger(__name__)

DERIVATIVE_MODES = ('analytic', 'finite-difference')


class DomainBox(object):
    """\
    Axis-aligned box; dim 1 is space, dim 2 is space-time (x, t)

    >>> from asymptospec.nets.generalized import DomainBox
    >>> box = DomainBox(-1, 1)
    >>> box.contains(DomainBox(-0.5, 0.25))
    True
    >>> box.neighbourhood(0.9, 0.25).hi
    (1.0,)
    """

    def __init__(self, lo, hi):
        lo = tuple(float(v) for v in numpy.atleast_1d(lo))
        hi = tuple(float(v) for v in numpy.atleast_1d(hi))
        if len(lo) != len(hi) or len(lo) not in (1, 2):
            raise ValueError("Box needs 1 or 2 axes with matching bounds, got"
                             " lo={} hi={}".format(lo, hi))
        for axis, (l, h) in enumerate(zip(lo, hi)):
            if not l < h:
                raise ValueError("Box axis {} has lo={} not below hi={}"
                                 .format(axis, l, h))
        self.lo = lo
        self.hi = hi

    @property
    def dim(self):
        return len(self.lo)

    def __eq__(self, other):
        return (isinstance(other, DomainBox) and self.lo == other.lo
                and self.hi == other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return "DomainBox({}, {})".format(list(self.lo), list(self.hi))

    def contains(self, other, tol=1e-12):
        if other.dim != self.dim:
            return False
        return all(sl - tol <= ol and oh <= sh + tol for sl, sh, ol, oh
                   in zip(self.lo, self.hi, other.lo, other.hi))

    def contains_point(self, point, tol=0.0):
        point = numpy.atleast_1d(point)
        return all(l - tol <= p <= h + tol
                   for l, h, p in zip(self.lo, self.hi, point))

    def is_interior(self, point):
        point = numpy.atleast_1d(point)
        return all(l < p < h for l, h, p in zip(self.lo, self.hi, point))

    def neighbourhood(self, center, halfwidth):
        """Box center +- halfwidth on every axis, clipped to this box."""
        center = numpy.atleast_1d(center)
        lo = [max(l, c - halfwidth) for l, c in zip(self.lo, center)]
        hi = [min(h, c + halfwidth) for h, c in zip(self.hi, center)]
        return DomainBox(lo, hi)

    def as_dict(self):
        return {'lo': list(self.lo), 'hi': list(self.hi)}


def _as_points(points, dim):
    points = numpy.asarray(points, dtype=float)
    if dim == 1 and points.ndim <= 1:
        points = points.reshape(-1, 1)
    if points.ndim != 2 or points.shape[1] != dim:
        raise ValueError("Points must have shape (n, {}), got {}"
                         .format(dim, points.shape))
    return points


def _as_order(order, dim):
    if order is None:
        return (0,)*dim
    order = tuple(int(o) for o in numpy.atleast_1d(order))
    if len(order) != dim or min(order) < 0:
        raise ValueError("Derivative order {} invalid for dim {}"
                         .format(order, dim))
    return order


def finite_difference(evaluator, points, eps, order, step_ratio=FD_STEP_RATIO):
    """
    Derivative by Richardson-extrapolated central differences

    Each derivative is taken with step h = eps*step_ratio, combined as
    (4*D(h/2) - D(h))/3, and lower orders recurse through the evaluator.
    """
    for axis, nr in enumerate(order):
        if nr == 0:
            continue
        lower = list(order)
        lower[axis] -= 1
        lower = tuple(lower)

        def central(step):
            shift = numpy.zeros(points.shape[1])
            shift[axis] = step
            fwd = finite_difference(evaluator, points + shift, eps, lower,
                                    step_ratio)
            bwd = finite_difference(evaluator, points - shift, eps, lower,
                                    step_ratio)
            return (fwd - bwd)/(2.0*step)

        step = eps*step_ratio
        return (4.0*central(step/2.0) - central(step))/3.0
    return evaluator(points, eps, order)


def merge_features(*nets):
    dim = nets[0].domain.dim
    merged = []
    for axis in range(dim):
        coords = set()
        for net in nets:
            coords.update(net.features[axis])
        merged.append(tuple(sorted(coords)))
    return tuple(merged)


class GeneralizedNet(object):
    """\
    Representative (u_eps) of a generalized function on a DomainBox

    Parameters
    ----------
    domain : DomainBox
        Where the net is defined.
    evaluator : callable
        (points, eps, order) -> values, pure. In finite-difference mode it
        is only called with zero order.
    max_order : int
        Largest total derivative order supported.
    derivative_mode : str
        'analytic' or 'finite-difference'.
    features : tuple
        Per-axis tuple of coordinates carrying eps-scale structure; sampling
        grids refine around them.
    label : str
        Human readable description.
    """

    def __init__(self, domain, evaluator, max_order=2,
                 derivative_mode='analytic', features=None, label=''):
        if derivative_mode not in DERIVATIVE_MODES:
            raise ValueError("derivative_mode must be one of {}, got '{}'"
                             .format(DERIVATIVE_MODES, derivative_mode))
        if max_order < 0:
            raise ValueError("max_order must be >= 0, got {}".format(max_order))
        self.domain = domain
        self._evaluator = evaluator
        self.max_order = int(max_order)
        self.derivative_mode = derivative_mode
        if features is None:
            features = ((),)*domain.dim
        self.features = tuple(tuple(float(c) for c in axis)
                              for axis in features)
        self.label = label

    def __repr__(self):
        return "GeneralizedNet('{}', {}, max_order={}, {})".format(
            self.label, self.domain, self.max_order, self.derivative_mode)

    @property
    def evaluator(self):
        return self._evaluator

    def evaluate(self, points, eps, order=None):
        dim = self.domain.dim
        points = _as_points(points, dim)
        order = _as_order(order, dim)
        if sum(order) > self.max_order:
            raise ValueError("Derivative order {} exceeds max_order {} of {}"
                             .format(order, self.max_order, self.label))
        if self.derivative_mode == 'finite-difference' and any(order):
            return finite_difference(self._evaluator, points, eps, order)
        return self._evaluator(points, eps, order)

    __call__ = evaluate

    def as_finite_difference(self):
        """Same net, derivatives taken by finite differences of its values."""
        return GeneralizedNet(self.domain, self._evaluator, self.max_order,
                              'finite-difference', self.features,
                              self.label + ' [fd]')


class DeltaProfile(object):
    """\
    eps**-(power+derivative) * (phi**power)^(derivative)((x - center)/eps)

    Covers delta powers (derivative=0) and delta derivatives (power=1).
    """

    def __init__(self, phi, center=0.0, power=1, derivative=0):
        self.phi = phi
        self.center = float(center)
        self.power = int(power)
        self.derivative = int(derivative)

    def values(self, y, eps, nr=0):
        """nr-th derivative of the profile at coordinates y."""
        total = self.derivative + nr
        return (eps**-(self.power + total)
                * self.phi.power_derivative((y - self.center)/eps, total,
                                            self.power))

    def evaluator(self, points, eps, order):
        return self.values(points[:, 0], eps, order[0])


def _default_domain(domain):
    if domain is None:
        return DomainBox(-1.0, 1.0)
    if not isinstance(domain, DomainBox):
        return DomainBox(*domain)
    return domain


def make_delta(m, phi=None, center=0.0, domain=None):
    """
    Delta power net (x, eps) -> eps**-m * phi(x/eps)**m

    Parameters
    ----------
    m : int
        Positive power.
    phi : Mollifier, optional
        Defaults to the normalized exp(-1/(1-x**2)) bump.
    center : float
        Location of the delta; must be interior to the domain.
    domain : DomainBox or (lo, hi), optional
        Defaults to [-1, 1].

    Returns
    -------
    net : GeneralizedNet
        Analytic derivatives via the chain rule on phi**m.
    """
    if int(m) != m or m < 1:
        raise ValueError("Delta power m must be a positive integer, got {}"
                         .format(m))
    phi = phi or DEFAULT_MOLLIFIER
    domain = _default_domain(domain)
    if not domain.is_interior(center):
        raise ValueError("Delta center {} not interior to {}"
                         .format(center, domain))
    profile = DeltaProfile(phi, center, power=m)
    label = 'delta^{}'.format(m) if center == 0.0 \
        else 'delta^{}(x-{:g})'.format(m, center)
    return GeneralizedNet(domain, profile.evaluator, phi.max_order,
                          features=((float(center),),), label=label)


class PiecewiseSmooth(object):
    """\
    Classical function given by smooth pieces between sorted breakpoints

    Piece j applies on (breakpoints[j-1], breakpoints[j]) with the outer
    pieces unbounded. Pieces are vectorized callables.

    >>> from asymptospec.nets.generalized import heaviside
    >>> heaviside()([-1.0, 2.0]).tolist()
    [0.0, 1.0]
    """

    def __init__(self, breakpoints, pieces, label=''):
        self.breakpoints = tuple(sorted(float(b) for b in breakpoints))
        self.pieces = tuple(pieces)
        if len(self.pieces) != len(self.breakpoints) + 1:
            raise ValueError("Need {} pieces for {} breakpoints, got {}"
                             .format(len(self.breakpoints)+1,
                                     len(self.breakpoints), len(self.pieces)))
        self.label = label

    def __call__(self, x):
        x = numpy.asarray(x, dtype=float)
        idx = numpy.searchsorted(self.breakpoints, x, side='right')
        out = numpy.zeros(x.shape)
        for j, piece in enumerate(self.pieces):
            sel = idx == j
            if numpy.any(sel):
                out[sel] = piece(x[sel])
        return out


class DeltaDerivative(object):
    """k-th derivative of the Dirac delta at x0."""

    def __init__(self, k=0, x0=0.0):
        if int(k) != k or k < 0:
            raise ValueError("Delta derivative order must be >= 0, got {}"
                             .format(k))
        self.k = int(k)
        self.x0 = float(x0)
        self.breakpoints = (self.x0,)
        self.label = 'delta^({})(x-{:g})'.format(self.k, self.x0) if self.x0 \
            else 'delta^({})'.format(self.k)


def _const(value):
    return lambda x: numpy.full(numpy.shape(x), float(value))


def constant(c):
    return PiecewiseSmooth((), (_const(c),), label='const({:g})'.format(c))


def heaviside(x0=0.0):
    return PiecewiseSmooth((x0,), (_const(0.0), _const(1.0)),
                           label='H(x-{:g})'.format(x0) if x0 else 'H')


def kink(x0=0.0):
    """|x - x0|"""
    return PiecewiseSmooth((x0,), (lambda x: x0 - x, lambda x: x - x0),
                           label='|x-{:g}|'.format(x0) if x0 else '|x|')


def polynomial(coeffs):
    return PiecewiseSmooth((), (Polynomial(coeffs),),
                           label='poly{}'.format(list(coeffs)))


def piecewise(breakpoints, coeffs):
    """Piecewise polynomial; coeffs[j] are the ascending coefficients of piece j."""
    return PiecewiseSmooth(breakpoints, [Polynomial(c) for c in coeffs],
                           label='piecewise{}'.format(list(breakpoints)))


_SMOOTH_FUNCS = {
    'sin': lambda freq=1.0, amp=1.0, phase=0.0:
        lambda x: amp*numpy.sin(freq*x + phase),
    'cos': lambda freq=1.0, amp=1.0, phase=0.0:
        lambda x: amp*numpy.cos(freq*x + phase),
    'exp': lambda rate=1.0, amp=1.0:
        lambda x: amp*numpy.exp(rate*x),
    'gaussian': lambda width=0.25, amp=1.0, center=0.0:
        lambda x: amp*numpy.exp(-(x - center)**2/(2.0*width**2)),
    'bump': lambda radius=0.5, amp=1.0, center=0.0:
        lambda x: amp*_wide_bump((x - center)/radius),
}


def _wide_bump(s):
    s = numpy.asarray(s, dtype=float)
    out = numpy.zeros(s.shape)
    inside = numpy.abs(s) < 1.0
    out[inside] = numpy.exp(1.0 - 1.0/(1.0 - s[inside]**2))
    return out


def smooth(name, **params):
    """Named smooth function: sin, cos, exp, gaussian or bump."""
    try:
        func = _SMOOTH_FUNCS[name](**params)
    except KeyError:
        raise ValueError("Unknown smooth function '{}', choose from {}"
                         .format(name, sorted(_SMOOTH_FUNCS)))
    return PiecewiseSmooth((), (func,), label=name)


def delta_derivative(k=0, x0=0.0):
    return DeltaDerivative(k, x0)


class _Convolution(object):
    """(f * phi_eps) and its derivatives by piecewise quadrature in y."""

    def __init__(self, func, phi):
        self.func = func
        self.phi = phi

    def values(self, x, eps, nr=0):
        # d^n/dx^n (f*phi_eps)(x) = eps**-n * int f(x - eps*y) phi^(n)(y) dy
        bounds = (-numpy.inf,) + self.func.breakpoints + (numpy.inf,)
        total = numpy.zeros(x.shape)
        for j, piece in enumerate(self.func.pieces):
            ylo = numpy.clip((x - bounds[j+1])/eps, -1.0, 1.0)
            yhi = numpy.clip((x - bounds[j])/eps, -1.0, 1.0)
            nodes, weights = composite_gauss(ylo, yhi)
            integrand = (piece(x[:, None] - eps*nodes)
                         * self.phi.power_derivative(nodes, nr))
            total += numpy.sum(weights*integrand, axis=-1)
        return eps**-nr*total

    def evaluator(self, points, eps, order):
        return self.values(points[:, 0], eps, order[0])


def embed_classical(spec, phi=None, domain=None):
    """
    Embed a classical object as (f * phi_eps)

    Parameters
    ----------
    spec : PiecewiseSmooth or DeltaDerivative
        Piecewise-smooth function or the k-th delta derivative at x0.
    phi : Mollifier, optional
    domain : DomainBox or (lo, hi), optional

    Returns
    -------
    net : GeneralizedNet
        Quadrature of f(x - eps*y)phi(y) split at breakpoints, or the closed
        form eps**(-1-k) phi^(k)((x-x0)/eps).
    """
    if not isinstance(spec, (DeltaDerivative, PiecewiseSmooth)):
        raise TypeError("Cannot embed {!r}".format(spec))
    phi = phi or DEFAULT_MOLLIFIER
    domain = _default_domain(domain)
    for bpt in spec.breakpoints:
        if not domain.is_interior(bpt):
            raise ValueError("Singular point {} of {} must be interior to {}"
                             .format(bpt, spec.label, domain))
    if isinstance(spec, DeltaDerivative):
        profile = DeltaProfile(phi, spec.x0, power=1, derivative=spec.k)
        evaluator = profile.evaluator
        max_order = phi.max_order - spec.k
    else:
        evaluator = _Convolution(spec, phi).evaluator
        max_order = phi.max_order
    return GeneralizedNet(domain, evaluator, max_order,
                          features=(spec.breakpoints,),
                          label='iota({})'.format(spec.label))


def _scalar_factor_net(base, factor, label):
    def evaluator(points, eps, order):
        with numpy.errstate(over='ignore', invalid='ignore'):
            return factor(eps)*base.evaluate(points, eps, order)
    return GeneralizedNet(base.domain, evaluator, base.max_order,
                          features=base.features, label=label)


def make_amplified(spec, exponent=1.0, log_power=0.0, phi=None, domain=None):
    """eps**-exponent * |ln eps|**log_power * iota(spec)"""
    base = embed_classical(spec, phi, domain)

    def factor(eps):
        return eps**-exponent*numpy.abs(numpy.log(eps))**log_power
    label = 'eps^-{:g}|ln eps|^{:g} {}'.format(exponent, log_power,
                                               base.label)
    return _scalar_factor_net(base, factor, label)


def make_exponential(spec, rate=1.0, phi=None, domain=None):
    """exp(rate/eps) * iota(spec), a net that is not moderate."""
    base = embed_classical(spec, phi, domain)
    return _scalar_factor_net(base, lambda eps: numpy.exp(rate/eps),
                              'exp({:g}/eps) {}'.format(rate, base.label))


def zero_net(domain=None, max_order=12):
    domain = _default_domain(domain)

    def evaluator(points, eps, order):
        return numpy.zeros(points.shape[0])
    return GeneralizedNet(domain, evaluator, max_order, label='0')


def _check_same_domain(nets):
    for net in nets[1:]:
        if net.domain != nets[0].domain:
            raise ValueError("Domain mismatch: {} vs {}"
                             .format(nets[0].domain, net.domain))


def _mode(nets):
    if any(n.derivative_mode == 'finite-difference' for n in nets):
        return 'finite-difference'
    return 'analytic'


def add_nets(*nets):
    _check_same_domain(nets)

    def evaluator(points, eps, order):
        return sum(n.evaluate(points, eps, order) for n in nets)
    return GeneralizedNet(nets[0].domain, evaluator,
                          min(n.max_order for n in nets), _mode(nets),
                          merge_features(*nets),
                          ' + '.join(n.label for n in nets))


def _sub_orders(order):
    return itertools.product(*[range(o+1) for o in order])


def mul_nets(unet, vnet):
    """Product; derivatives by the Leibniz rule when both are analytic."""
    _check_same_domain((unet, vnet))
    mode = _mode((unet, vnet))

    def evaluator(points, eps, order):
        total = numpy.zeros(points.shape[0])
        for beta in _sub_orders(order):
            coef = 1
            for a, b in zip(order, beta):
                coef *= comb(a, b)
            rest = tuple(a - b for a, b in zip(order, beta))
            total += (coef*unet.evaluate(points, eps, beta)
                      * vnet.evaluate(points, eps, rest))
        return total
    return GeneralizedNet(unet.domain, evaluator,
                          min(unet.max_order, vnet.max_order), mode,
                          merge_features(unet, vnet),
                          '({})*({})'.format(unet.label, vnet.label))


def pow_net(unet, p):
    if int(p) != p or p < 1:
        raise ValueError("Net power must be a positive integer, got {}"
                         .format(p))
    result = unet
    for _ in range(int(p) - 1):
        result = mul_nets(result, unet)
    if p > 1:
        result.label = '({})^{}'.format(unet.label, int(p))
    return result


def derive_net(unet, alpha):
    alpha = _as_order(alpha, unet.domain.dim)
    if sum(alpha) > unet.max_order:
        raise ValueError("Derivative {} overflows max_order {} of {}"
                         .format(alpha, unet.max_order, unet.label))

    def evaluator(points, eps, order):
        return unet.evaluate(points, eps,
                             tuple(a + o for a, o in zip(alpha, order)))
    return GeneralizedNet(unet.domain, evaluator, unet.max_order - sum(alpha),
                          features=unet.features,
                          label='d^{}({})'.format(list(alpha), unet.label))


def scale_net(unet, scale, r):
    """a(r)(eps) * u_eps"""
    def evaluator(points, eps, order):
        return scale.value(r, eps)*unet.evaluate(points, eps, order)
    return GeneralizedNet(unet.domain, evaluator, unet.max_order,
                          unet.derivative_mode, unet.features,
                          'a_{}({:g})*({})'.format(scale.name, r, unet.label))


_ALGEBRA_OPS = {'add': add_nets, 'mul': mul_nets, 'pow': pow_net,
                'derive': derive_net, 'scale_by': scale_net}


def net_algebra(op, *operands):
    """
    Combine nets: add(u, v, ...), mul(u, v), pow(u, p), derive(u, alpha),
    scale_by(u, scale, r)
    """
    try:
        func = _ALGEBRA_OPS[op]
    except KeyError:
        raise ValueError("Unknown net operation '{}', choose from {}"
                         .format(op, sorted(_ALGEBRA_OPS)))
    return func(*operands)


def restrict(unet, subbox):
    """Same evaluator on a smaller box."""
    if not unet.domain.contains(subbox):
        raise ValueError("Restriction box {} not inside {}"
                         .format(subbox, unet.domain))
    return GeneralizedNet(subbox, unet.evaluator, unet.max_order,
                          unet.derivative_mode, unet.features,
                          '{}|{}'.format(unet.label, list(subbox.lo)
                                         + list(subbox.hi)))
