"""ε-ladders and asymptotic scales a(r)(ε)."""
import logging

import numpy

from . import DEFAULT_EPS0, DEFAULT_Q, DEFAULT_COUNT

_LOGGER = logging.getLogger(__name__)

MIN_LADDER_LENGTH = 6


class EpsLadder(object):
    """\
    Finite geometric ladder eps_i = eps0*q**i on which asymptotics are sampled

    Examples
    --------
    >>> from asymptospec.nets.scales import EpsLadder
    >>> ladder = EpsLadder(0.5, 0.5, 6)
    >>> ladder.values.tolist()
    [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625]
    >>> EpsLadder.from_string('0.0625,0.5,8').count
    8
    """

    def __init__(self, eps0=DEFAULT_EPS0, q=DEFAULT_Q, count=DEFAULT_COUNT):
        errs = ladder_violations(eps0, q, count)
        if errs:
            raise ValueError("; ".join(errs))
        self.eps0 = float(eps0)
        self.q = float(q)
        self.count = int(count)
        self.values = self.eps0*self.q**numpy.arange(self.count)

    @classmethod
    def from_string(cls, ladderstr):
        """Parse 'eps0,q,count'."""
        try:
            eps0, q, count = ladderstr.split(',')
            return cls(float(eps0), float(q), int(count))
        except (TypeError, ValueError) as err:
            raise ValueError("Ladder '{}' must be 'eps0,q,count': {}"
                             .format(ladderstr, err))

    def __len__(self):
        return self.count

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, idx):
        return self.values[idx]

    def __eq__(self, other):
        return (isinstance(other, EpsLadder)
                and (self.eps0, self.q, self.count)
                == (other.eps0, other.q, other.count))

    def __hash__(self):
        return hash((self.eps0, self.q, self.count))

    def __repr__(self):
        return "EpsLadder(eps0={}, q={}, count={})".format(self.eps0, self.q,
                                                         self.count)

    def tail_indices(self, tail):
        """Indices of the last `tail` rungs."""
        return numpy.arange(max(self.count - tail, 0), self.count)

    @property
    def midpoint(self):
        return self.values[self.count//2]

    def as_dict(self):
        return {'eps0': self.eps0, 'q': self.q, 'count': self.count}


def ladder_violations(eps0, q, count):
    errs = []
    if not 0.0 < eps0 <= 1.0:
        errs.append("eps0 must lie in (0,1], got {}".format(eps0))
    if not 0.0 < q < 1.0:
        errs.append("q must lie in (0,1), got {}".format(q))
    if int(count) != count or count < MIN_LADDER_LENGTH:
        errs.append("count must be an integer >= {}, got {}"
                    .format(MIN_LADDER_LENGTH, count))
    return errs


class AsymptoticScale(object):
    """\
    Family a(r)(eps) of positive nets with a(0) = 1, submultiplicative in r

    Parameters
    ----------
    name : str
        Label, 'power' or 'gevrey:<sigma>' for the built-in scales.
    log_rule : callable
        (r, eps) -> log a(r)(eps).
    """

    def __init__(self, name, log_rule):
        self.name = name
        self._log_rule = log_rule

    def log_value(self, r, eps):
        return self._log_rule(r, numpy.asarray(eps, dtype=float))

    def value(self, r, eps):
        return numpy.exp(self.log_value(r, eps))

    def rule(self, r):
        """The net eps -> a(r)(eps)."""
        return lambda eps: self.value(r, eps)

    def __repr__(self):
        return "AsymptoticScale('{}')".format(self.name)

    def submultiplicative_gap(self, ladder, rvals):
        """
        Largest relative excess of a(r+s) over a(r)a(s) on the ladder

        A non-positive result (within rounding) means the scale is
        submultiplicative on the sampled exponents.
        """
        eps = numpy.asarray(ladder.values)
        gap = -numpy.inf
        for r in rvals:
            for s in rvals:
                lhs = self.value(r+s, eps)
                rhs = self.value(r, eps)*self.value(s, eps)
                with numpy.errstate(invalid='ignore', divide='ignore'):
                    rel = numpy.where(rhs > 0, (lhs - rhs)/rhs, 0.0)
                gap = max(gap, float(numpy.max(rel)))
        return gap


def power_scale():
    """a(r)(eps) = eps**r"""
    return AsymptoticScale('power', lambda r, eps: r*numpy.log(eps))


def gevrey_scale(sigma):
    """a(r)(eps) = exp(-r*eps**(-1/(2*sigma-1))), sigma > 1/2"""
    if sigma <= 0.5:
        raise ValueError("Gevrey sigma must exceed 1/2, got {}".format(sigma))
    expo = 1.0/(2.0*sigma - 1.0)
    return AsymptoticScale('gevrey:{:g}'.format(sigma),
                           lambda r, eps: -r*eps**(-expo))


def scale_from_string(scalestr):
    """
    Parse 'power' or 'gevrey:<sigma>'

    >>> from asymptospec.nets.scales import scale_from_string
    >>> scale_from_string('gevrey:2').name
    'gevrey:2'
    """
    if scalestr == 'power':
        return power_scale()
    if scalestr.startswith('gevrey:'):
        return gevrey_scale(float(scalestr.split(':', 1)[1]))
    raise ValueError("Unknown scale '{}', use power or gevrey:<sigma>"
                     .format(scalestr))
