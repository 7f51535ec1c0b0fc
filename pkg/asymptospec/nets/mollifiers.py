"""Mollifier profiles and the composite quadrature rules used with them."""
import logging
import threading

import numpy
from numpy.polynomial import legendre
from numpy.polynomial.polynomial import polyval2d

_LOGGER = logging.getLogger(__name__)

NR_PANELS = 16
NR_NODES = 12
# Beyond h = 1/(1-x^2) = H_CUTOFF the bump is below exp(-700) and is set to 0
H_CUTOFF = 700.0


def composite_gauss(lo, hi, nr_panels=NR_PANELS, nr_nodes=NR_NODES):
    """
    Composite Gauss-Legendre rule on [lo, hi]

    Parameters
    ----------
    lo, hi : float or array_like
        Interval ends. Arrays broadcast against each other and give one rule
        per element; an empty interval (hi <= lo) gets zero weights.
    nr_panels : int
        Number of equal panels.
    nr_nodes : int
        Gauss-Legendre nodes per panel.

    Returns
    -------
    nodes, weights : array
        Shape lo.shape + (nr_panels*nr_nodes,).

    Examples
    --------
    >>> from asymptospec.nets.mollifiers import composite_gauss
    >>> nodes, weights = composite_gauss(0.0, 2.0, nr_panels=2, nr_nodes=3)
    >>> round(float(weights.sum()), 12)
    2.0
    >>> round(float((weights*nodes**5).sum()), 10)
    10.6666666667
    """
    gl_x, gl_w = legendre.leggauss(nr_nodes)
    edges = numpy.linspace(0.0, 1.0, nr_panels+1)
    width = 1.0/nr_panels
    unit_nodes = (edges[:-1, None] + width*(gl_x[None, :]+1.0)/2.0).ravel()
    unit_weights = numpy.tile(gl_w*width/2.0, nr_panels)
    lo = numpy.asarray(lo, dtype=float)
    hi = numpy.asarray(hi, dtype=float)
    span = numpy.maximum(hi - lo, 0.0)[..., None]
    nodes = lo[..., None] + span*unit_nodes
    weights = span*unit_weights
    return nodes, weights


def panel_gauss(breaks, nr_nodes=NR_NODES):
    """
    Gauss-Legendre rule on consecutive panels given by sorted breakpoints

    >>> from asymptospec.nets.mollifiers import panel_gauss
    >>> nodes, weights = panel_gauss([0.0, 0.5, 2.0], nr_nodes=4)
    >>> round(float(weights.sum()), 12)
    2.0
    """
    breaks = numpy.asarray(breaks, dtype=float)
    gl_x, gl_w = legendre.leggauss(nr_nodes)
    left = breaks[:-1, None]
    half = (breaks[1:, None] - left)/2.0
    nodes = (left + half*(gl_x[None, :]+1.0)).ravel()
    weights = (half*gl_w[None, :]).ravel()
    return nodes, weights


def _next_coeffs(coeffs, power):
    """Advance P_n to P_{n+1} where (phi**power)^(n) = phi**power * P_n(x,h)."""
    ni, nj = coeffs.shape
    out = numpy.zeros((ni+1, nj+2))
    ii = numpy.arange(ni)[:, None]
    jj = numpy.arange(nj)[None, :]
    # d/dx acting on x**i
    out[:ni-1, :nj] += ii[1:]*coeffs[1:, :]
    # dh/dx = 2 x h**2 acting on h**j
    out[1:, 1:nj+1] += 2.0*jj*coeffs
    # d/dx of exp(-power*h)
    out[1:, 2:] -= 2.0*power*coeffs
    return out


class Mollifier(object):
    """\
    Normalized bump phi(x) = c*exp(-1/(1-x**2)) on (-1, 1)

    The normalization c is computed with the same composite rule that
    `composite_gauss` uses by default, so integrating phi over [-1, 1] with
    that rule returns 1 to rounding.

    Examples
    --------
    >>> from asymptospec.nets.mollifiers import Mollifier
    >>> phi = Mollifier()
    >>> round(float(phi.power_derivative(0.0)*numpy.e/phi.norm), 12)
    1.0
    >>> float(phi.power_derivative(1.5, 3))
    0.0
    """
    support = (-1.0, 1.0)

    def __init__(self, max_order=12):
        if max_order < 2:
            raise ValueError("Mollifier max_order must be >= 2, got {}"
                             .format(max_order))
        self.max_order = max_order
        nodes, weights = composite_gauss(-1.0, 1.0)
        self.norm = 1.0/numpy.sum(weights*numpy.exp(-1.0/(1.0 - nodes**2)))
        # power -> coefficient tables for orders 0..max_order
        self._coeffs = {}
        self._lock = threading.Lock()

    def _derivative_coeffs(self, n, power):
        with self._lock:
            if power not in self._coeffs:
                table = [numpy.ones((1, 1))]
                for _ in range(self.max_order):
                    table.append(_next_coeffs(table[-1], power))
                self._coeffs[power] = tuple(table)
            return self._coeffs[power][n]

    def power_derivative(self, x, n=0, power=1):
        """
        n-th derivative of phi**power

        Parameters
        ----------
        x : array_like
            Evaluation points.
        n : int
            Derivative order, at most max_order.
        power : int
            Positive power of the profile.

        Returns
        -------
        values : array
            Same shape as x; zero outside (-1, 1).
        """
        if n > self.max_order:
            raise ValueError("Derivative order {} exceeds mollifier max_order {}"
                             .format(n, self.max_order))
        x = numpy.asarray(x, dtype=float)
        values = numpy.zeros(x.shape)
        inside = numpy.abs(x) < 1.0
        xin = x[inside]
        hin = 1.0/(1.0 - xin**2)
        keep = hin < H_CUTOFF
        xin, hin = xin[keep], hin[keep]
        coeffs = self._derivative_coeffs(n, power)
        inner = self.norm**power*numpy.exp(-power*hin)*polyval2d(xin, hin,
                                                                 coeffs)
        sel = numpy.flatnonzero(inside)[keep]
        values.flat[sel] = inner
        return values

    def __call__(self, x):
        return self.power_derivative(x)

    def cumulative(self, x):
        """Integral of phi from -1 to x."""
        x = numpy.clip(numpy.asarray(x, dtype=float), -1.0, 1.0)
        nodes, weights = composite_gauss(-1.0, x)
        return numpy.sum(weights*self.power_derivative(nodes), axis=-1)

    def moment(self, k, power=1):
        """Integral of y**k phi(y)**power over [-1, 1]."""
        nodes, weights = composite_gauss(-1.0, 1.0)
        return float(numpy.sum(weights*nodes**k
                               * self.power_derivative(nodes, 0, power)))


DEFAULT_MOLLIFIER = Mollifier()
