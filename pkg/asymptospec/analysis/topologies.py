"""Target topologies C^p / D' and the test-function pairings used for D'."""
import logging

import numpy

from ..nets.mollifiers import panel_gauss

_LOGGER = logging.getLogger(__name__)

COARSE_PANELS = 16
FINE_PANEL_DIVISOR = 4
FINE_REACH = 4
PAIRING_NODES = 12


class TargetTopology(object):
    """\
    Topology in which the rescaled net a(r)u_eps is required to converge

    Examples
    --------
    >>> from asymptospec.analysis.topologies import TargetTopology
    >>> TargetTopology.from_string('C1').order
    1
    >>> TargetTopology.from_string('Dprime').name
    'Dprime'
    """
    KINDS = ('Cp', 'Dprime')

    def __init__(self, kind='Cp', order=0):
        if kind not in self.KINDS:
            raise ValueError("Topology kind must be one of {}, got '{}'"
                             .format(self.KINDS, kind))
        if kind == 'Cp' and (int(order) != order or order < 0):
            raise ValueError("C^p order must be a nonnegative integer, got {}"
                             .format(order))
        self.kind = kind
        self.order = int(order) if kind == 'Cp' else 0

    @classmethod
    def from_string(cls, topstr):
        """'C0', 'C1', ..., 'Cp:<p>', 'Dprime' or "D'"."""
        if topstr in ('Dprime', "D'", 'D'):
            return cls('Dprime')
        if topstr.startswith('Cp:'):
            return cls('Cp', int(topstr[3:]))
        if topstr.startswith('C') and topstr[1:].isdigit():
            return cls('Cp', int(topstr[1:]))
        raise ValueError("Unknown topology '{}', use C<p> or Dprime"
                         .format(topstr))

    @property
    def name(self):
        return 'C{}'.format(self.order) if self.kind == 'Cp' else 'Dprime'

    def __eq__(self, other):
        return (isinstance(other, TargetTopology)
                and (self.kind, self.order) == (other.kind, other.order))

    def __hash__(self):
        return hash((self.kind, self.order))

    def __repr__(self):
        return "TargetTopology('{}')".format(self.name)


def bump(s):
    """exp(1 - 1/(1-s**2)) on (-1, 1), equal to 1 at s = 0."""
    s = numpy.asarray(s, dtype=float)
    out = numpy.zeros(s.shape)
    inside = numpy.abs(s) < 1.0
    out[inside] = numpy.exp(1.0 - 1.0/(1.0 - s[inside]**2))
    return out


class TestFunction(object):
    """\
    psi(y) = ((y - x)/eta)**moment * bump((y - center)/width) on one axis

    Space-time pairings multiply a spatial TestFunction with a temporal one.
    """
    __test__ = False

    def __init__(self, anchor, eta, center, width, moment=0):
        self.anchor = float(anchor)
        self.eta = float(eta)
        self.center = float(center)
        self.width = float(width)
        self.moment = int(moment)

    @property
    def support(self):
        return self.center - self.width, self.center + self.width

    def __call__(self, y):
        y = numpy.asarray(y, dtype=float)
        vals = bump((y - self.center)/self.width)
        if self.moment:
            vals = vals*((y - self.anchor)/self.eta)**self.moment
        return vals

    def __repr__(self):
        return "TestFunction(center={:g}, width={:g}, moment={})".format(
            self.center, self.width, self.moment)


def axis_test_family(lo, hi):
    """
    The nine spatial test functions on [lo, hi]

    Centres {c-eta/2, c, c+eta/2} times widths {eta/2, eta/4}, first and
    second moments of the eta/2 bump, and the wide bump of width eta, where
    c and eta are the midpoint and half-length of the interval.

    >>> from asymptospec.analysis.topologies import axis_test_family
    >>> fam = axis_test_family(-0.25, 0.25)
    >>> len(fam), all(-0.25 <= f.support[0] and f.support[1] <= 0.25 for f in fam)
    (9, True)
    """
    mid = 0.5*(lo + hi)
    eta = 0.5*(hi - lo)
    family = [TestFunction(mid, eta, mid + shift*eta, frac*eta)
              for shift in (-0.5, 0.0, 0.5) for frac in (0.5, 0.25)]
    family.append(TestFunction(mid, eta, mid, 0.5*eta, moment=1))
    family.append(TestFunction(mid, eta, mid, 0.5*eta, moment=2))
    family.append(TestFunction(mid, eta, mid, eta))
    return family


def time_test_function(lo, hi):
    """Single bump filling [lo, hi] for the time axis of space-time pairings."""
    mid = 0.5*(lo + hi)
    eta = 0.5*(hi - lo)
    return TestFunction(mid, eta, mid, eta)


def axis_breaks(lo, hi, features, eps):
    """
    Panel breakpoints on [lo, hi]: COARSE_PANELS equal panels, replaced by
    eps/4-wide panels within 4*eps of every feature.
    """
    coarse = numpy.linspace(lo, hi, COARSE_PANELS+1)
    parts = []
    keep = numpy.ones(coarse.size, dtype=bool)
    steps = numpy.arange(-FINE_REACH*FINE_PANEL_DIVISOR,
                         FINE_REACH*FINE_PANEL_DIVISOR+1)/FINE_PANEL_DIVISOR
    reach = FINE_REACH*eps
    for x0 in features:
        if lo - reach < x0 < hi + reach:
            keep &= ~((coarse > x0 - reach) & (coarse < x0 + reach))
            fine = x0 + eps*steps
            parts.append(fine[(fine > lo) & (fine < hi)])
    keep[0] = keep[-1] = True
    parts.append(coarse[keep])
    return numpy.unique(numpy.concatenate(parts))


def pairing_rule(box, features, eps, nr_nodes=PAIRING_NODES):
    """
    Tensor Gauss-Legendre rule on box refined near features at scale eps

    Returns
    -------
    nodes : array, shape (n, dim)
    weights : array, shape (n,)
    axes : list of 1-D node arrays per axis
    """
    axes_nodes, axes_weights = [], []
    for axis in range(box.dim):
        feats = features[axis] if axis < len(features) else ()
        breaks = axis_breaks(box.lo[axis], box.hi[axis], feats, eps)
        nodes, weights = panel_gauss(breaks, nr_nodes)
        axes_nodes.append(nodes)
        axes_weights.append(weights)
    if box.dim == 1:
        return axes_nodes[0][:, None], axes_weights[0], axes_nodes
    xx, tt = numpy.meshgrid(axes_nodes[0], axes_nodes[1], indexing='ij')
    ww = numpy.outer(axes_weights[0], axes_weights[1])
    nodes = numpy.stack([xx.ravel(), tt.ravel()], axis=-1)
    return nodes, ww.ravel(), axes_nodes


def pairing_weights(box, axes_nodes):
    """
    Values of every test function on the tensor nodes, shape (J, n)

    Spatial test functions are multiplied by the time bump on space-time
    boxes.
    """
    family = axis_test_family(box.lo[0], box.hi[0])
    xvals = numpy.array([psi(axes_nodes[0]) for psi in family])
    if box.dim == 1:
        return xvals
    theta = time_test_function(box.lo[1], box.hi[1])(axes_nodes[1])
    return (xvals[:, :, None]*theta[None, None, :]).reshape(len(family), -1)
