"""Moderateness, negligibility and regularity-class membership of nets."""
import logging
import math

import numpy

from . import N_CAP, M_CAP, UNIFORM_TOL, SLOW_SCALE_TOL
from .valuation import DEFAULT_TAIL, MIN_SAMPLES, fit_valuation
from ..nets.generalized import DomainBox, mul_nets
from ..nets.scales import EpsLadder
from ..nets.seminorms import multi_indices, sampling_grid, sup_by_order

_LOGGER = logging.getLogger(__name__)

# Slack used when rounding fitted exponents up to integers
ROUNDING_SLACK = 0.05


class RegularitySequenceFamily(object):
    """\
    Regular family R of exponent sequences N(k)

    Kinds are 'all-sequences', 'bounded' (Bo: constant sequences) and
    'affine' (N(k) = a + b*k, intercepts a' >= a).

    Examples
    --------
    >>> from asymptospec.analysis.classes import RegularitySequenceFamily
    >>> fam = RegularitySequenceFamily.from_string('affine:1,1')
    >>> fam.fits([1.0, 2.02, 3.1], 0.25)
    True
    >>> RegularitySequenceFamily('bounded').fits([1.0, 2.0], 0.25)
    False
    """
    KINDS = ('all-sequences', 'bounded', 'affine')

    def __init__(self, kind='bounded', a=0.0, b=1.0):
        if kind not in self.KINDS:
            raise ValueError("Family kind must be one of {}, got '{}'"
                             .format(self.KINDS, kind))
        self.kind = kind
        self.a = float(a)
        self.b = float(b)

    @classmethod
    def from_string(cls, famstr):
        """'all', 'bounded' (or 'Bo') or 'affine:a,b'"""
        if famstr in ('all', 'all-sequences'):
            return cls('all-sequences')
        if famstr in ('bounded', 'Bo'):
            return cls('bounded')
        if famstr.startswith('affine:'):
            a, b = famstr.split(':', 1)[1].split(',')
            return cls('affine', float(a), float(b))
        raise ValueError("Unknown regularity family '{}'".format(famstr))

    @property
    def name(self):
        if self.kind == 'affine':
            return 'affine:{:g},{:g}'.format(self.a, self.b)
        return self.kind

    def __repr__(self):
        return "RegularitySequenceFamily('{}')".format(self.name)

    def envelope(self, k, anchor=0.0):
        """Upper envelope at k; bounded sequences are anchored at N(0)."""
        if self.kind == 'all-sequences':
            return numpy.inf
        if self.kind == 'bounded':
            return anchor
        return self.a + self.b*k

    def fits(self, exponents, slack):
        """True if the clipped exponents lie under the family envelope."""
        nplus = clip_exponents(exponents)
        if self.kind == 'all-sequences' or nplus.size == 0:
            return True
        env = numpy.array([self.envelope(k, nplus[0])
                           for k in range(nplus.size)])
        return bool(numpy.all(nplus <= env + slack))

    def exceeds(self, exponents, slack):
        """True if some clipped exponent leaves the envelope by more than slack."""
        nplus = clip_exponents(exponents)
        if self.kind == 'all-sequences' or nplus.size == 0:
            return False
        env = numpy.array([self.envelope(k, nplus[0])
                           for k in range(nplus.size)])
        return bool(numpy.any(nplus > env + slack))

    def member(self, level):
        """Member sequence k -> N(k) at a given level (intercept)."""
        if self.kind == 'bounded':
            return lambda k: level + 0.0*numpy.asarray(k)
        return lambda k: max(level, self.a) + self.b*numpy.asarray(k)

    def dominating_level(self, seq):
        """Smallest member level dominating seq(0..K), None if there is none."""
        seq = numpy.asarray(seq, dtype=float)
        if self.kind == 'all-sequences':
            return 0.0
        if self.kind == 'bounded':
            return float(seq.max())
        kvals = numpy.arange(seq.size)
        return max(self.a, float(numpy.max(seq - self.b*kvals)))


def clip_exponents(exponents):
    """N+ = max(N, 0) with -inf (negligible) mapped to 0."""
    vals = numpy.asarray(exponents, dtype=float)
    return numpy.where(numpy.isfinite(vals) | (vals > 0),
                       numpy.maximum(vals, 0.0), 0.0)


def check_overstability(family, kmax=32, levels=(0.0, 1.0, 3.0)):
    """
    Verify the regular-family closure properties on k <= kmax

    Translation N(n+k)+k' and maximum max(N1, N2) of sampled members must be
    dominated by a member, and N1(l1) + N2(l2) <= N(l1+l2) for some member.

    Returns
    -------
    ok : bool
    """
    if family.kind == 'all-sequences':
        return True
    nvals = numpy.arange(kmax+1)
    members = [family.member(level) for level in levels]
    for mem in members:
        for k in range(kmax+1):
            for kprime in (0, 1, kmax):
                seq = mem(nvals + k) + kprime
                level = family.dominating_level(seq)
                if level is None or numpy.any(seq > family.member(level)(nvals)
                                              + 1e-9):
                    return False
    for mem1 in members:
        for mem2 in members:
            seq = numpy.maximum(mem1(nvals), mem2(nvals))
            level = family.dominating_level(seq)
            if level is None or numpy.any(seq > family.member(level)(nvals)
                                          + 1e-9):
                return False
            # N1(l1) + N2(l2) <= N(l1+l2) for every split of l1+l2 <= kmax
            sums = numpy.full(kmax+1, -numpy.inf)
            for l1 in range(kmax+1):
                l2 = nvals[:kmax+1-l1]
                sums[l1 + l2] = numpy.maximum(sums[l1 + l2],
                                              mem1(l1) + mem2(l2))
            level = family.dominating_level(sums)
            if level is None or numpy.any(sums > family.member(level)(nvals)
                                          + 1e-9):
                return False
    return True


class ClassVerdict(object):
    """\
    Regularity-class membership of a net on a compact box

    Attributes
    ----------
    moderate, negligible, g_infinity, g_R, slow_scale : bool
    exponents : list of float
        Fitted N(l) = -slope of p_{K,l}; -inf for nets zero on the tail,
        inf for non-finite seminorms.
    orders : list of int or None
        N(l) rounded up.
    uniform_N : float or None
        Uniform exponent when g_infinity holds.
    family : str
    """

    def __init__(self, moderate, negligible, g_infinity, g_R, slow_scale,
                 exponents, orders, uniform_N=None, family='bounded'):
        self.moderate = moderate
        self.negligible = negligible
        self.g_infinity = g_infinity
        self.g_R = g_R
        self.slow_scale = slow_scale
        self.exponents = exponents
        self.orders = orders
        self.uniform_N = uniform_N
        self.family = family

    def __repr__(self):
        return ("ClassVerdict(moderate={}, negligible={}, g_infinity={}, "
                "g_R={}, slow_scale={}, N={})".format(
                    self.moderate, self.negligible, self.g_infinity, self.g_R,
                    self.slow_scale, self.orders))

    def chain_violations(self):
        """Broken links of negligible => slow_scale => g_infinity => g_R => moderate."""
        chain = [('negligible', self.negligible),
                 ('slow_scale', self.slow_scale),
                 ('g_infinity', self.g_infinity), ('g_R', self.g_R),
                 ('moderate', self.moderate)]
        return ['{} => {}'.format(chain[i][0], chain[i+1][0])
                for i in range(len(chain)-1)
                if chain[i][1] and not chain[i+1][1]]

    def as_dict(self):
        return {'moderate': self.moderate, 'negligible': self.negligible,
                'g_infinity': self.g_infinity, 'g_R': self.g_R,
                'slow_scale': self.slow_scale,
                'exponents': [float(e) for e in self.exponents],
                'orders': self.orders, 'uniform_N': self.uniform_N,
                'family': self.family}


def _as_box(kbox):
    return kbox if isinstance(kbox, DomainBox) else DomainBox(*kbox)


def seminorm_table(unet, kbox, l_max, ladder):
    """
    p_{K,l}(u_eps) for l = 0..l_max on every rung, shape (len(ladder), l_max+1)

    One evaluation per rung and multi-index; p_{K,l} is the running max over
    |alpha| <= l.
    """
    kbox = _as_box(kbox)
    if l_max > unet.max_order:
        raise ValueError("l_max {} exceeds max_order {} of {}"
                         .format(l_max, unet.max_order, unet.label))
    if not unet.domain.contains(kbox):
        raise ValueError("Box {} outside domain {}".format(kbox,
                                                             unet.domain))
    alphas = multi_indices(unet.domain.dim, l_max)
    table = numpy.zeros((len(ladder), l_max+1))
    for i, eps in enumerate(ladder):
        grid = sampling_grid(kbox, unet.features, [eps])
        with numpy.errstate(over='ignore', invalid='ignore'):
            sups = sup_by_order(unet, grid, eps, l_max)
        per_order = numpy.zeros(l_max+1)
        for alpha, sup in zip(alphas, sups):
            lev = sum(alpha)
            per_order[lev] = max(per_order[lev], sup) \
                if numpy.isfinite(sup) else numpy.inf
        table[i] = numpy.maximum.accumulate(per_order)
    return table


def order_fits(unet, kbox, l_max, ladder=None, tail=DEFAULT_TAIL):
    """
    Fitted exponent N(l) per order

    Returns
    -------
    exponents : list of float
        -slope per l; -inf when the tail is (almost) all zeros, inf when
        any tail seminorm is non-finite.
    table : array
        Raw seminorm table.
    """
    ladder = ladder or EpsLadder()
    table = seminorm_table(unet, kbox, l_max, ladder)
    eps = numpy.asarray(ladder.values)
    idx = ladder.tail_indices(tail)
    exponents = []
    for lev in range(l_max+1):
        vals = table[idx, lev]
        if not numpy.all(numpy.isfinite(vals)):
            exponents.append(numpy.inf)
            continue
        pos = vals > 0
        if pos.sum() < MIN_SAMPLES:
            exponents.append(-numpy.inf)
            continue
        fit = fit_valuation(zip(eps[idx][pos], vals[pos]), tail=idx.size)
        exponents.append(fit.exponent)
    return exponents, table


def _round_up(exponent):
    if not numpy.isfinite(exponent):
        return None
    return int(math.ceil(exponent - ROUNDING_SLACK))


def is_moderate(unet, kbox, l_max, ladder=None, n_cap=N_CAP,
                tail=DEFAULT_TAIL):
    """
    Moderateness: p_{K,l}(u_eps) = O(eps**-N) for every l <= l_max

    Returns
    -------
    moderate : bool
        True iff every fitted slope is >= -n_cap and all seminorms finite.
    orders : list
        -slope rounded up per l (None for zero or non-finite rows).
    """
    exponents, _ = order_fits(unet, kbox, l_max, ladder, tail)
    moderate = all(e <= n_cap for e in exponents)
    return moderate, [_round_up(e) for e in exponents]


def is_negligible(unet, kbox, l_max, ladder=None, m_cap=M_CAP,
                  tail=DEFAULT_TAIL):
    """
    Negligibility: p_{K,l}(u_eps) = O(eps**m) for every m, operationally
    slope > m_cap or zero on the ladder tail, for every l <= l_max
    """
    exponents, _ = order_fits(unet, kbox, l_max, ladder, tail)
    return all(e < -m_cap for e in exponents)


def classify(unet, kbox, l_max, family=None, ladder=None, n_cap=N_CAP,
             m_cap=M_CAP, uniform_tol=UNIFORM_TOL, tail=DEFAULT_TAIL):
    """
    Classify a net into the regularity classes on a compact box

    O(eps**-N) and o(eps**-N) bounds are both read as thresholds on the
    fitted exponents; a finite ladder cannot tell them apart.

    Parameters
    ----------
    unet : GeneralizedNet
    kbox : DomainBox or (lo, hi)
    l_max : int
    family : RegularitySequenceFamily, optional
        Defaults to the bounded family Bo.
    ladder : EpsLadder, optional

    Returns
    -------
    verdict : ClassVerdict
    """
    family = family or RegularitySequenceFamily('bounded')
    exponents, _ = order_fits(unet, kbox, l_max, ladder, tail)
    orders = [_round_up(e) for e in exponents]
    negligible = all(e < -m_cap for e in exponents)
    if negligible:
        return ClassVerdict(True, True, True, True, True, exponents, orders,
                            0.0, family.name)
    moderate = all(e <= n_cap for e in exponents)
    nplus = clip_exponents(exponents)
    slow_scale = moderate and bool(numpy.all(nplus <= SLOW_SCALE_TOL))
    spread = float(nplus.max() - nplus.min())
    g_infinity = moderate and (slow_scale or spread <= uniform_tol)
    g_R = moderate and family.fits(exponents, uniform_tol)
    uniform_N = float(nplus.max()) if g_infinity else None
    verdict = ClassVerdict(moderate, False, g_infinity, g_R, slow_scale,
                           exponents, orders, uniform_N, family.name)
    _LOGGER.debug("classify {} on {}: {!r}".format(unet.label, kbox, verdict))
    return verdict


def product_exponent_bound(unet, vnet, kbox, order, ladder=None,
                           tail=DEFAULT_TAIL):
    """
    Compare fitted N(u*v) with N(u) + N(v) at a given seminorm order

    Returns
    -------
    report : dict
        'N_uv', 'N_u', 'N_v' and 'excess' = N_uv - N_u - N_v on clipped
        exponents.
    """
    nu = clip_exponents(order_fits(unet, kbox, order, ladder, tail)[0])[-1]
    nv = clip_exponents(order_fits(vnet, kbox, order, ladder, tail)[0])[-1]
    nuv = clip_exponents(order_fits(mul_nets(unet, vnet), kbox, order, ladder,
                                    tail)[0])[-1]
    return {'N_uv': float(nuv), 'N_u': float(nu), 'N_v': float(nv),
            'excess': float(nuv - nu - nv)}


WINDOW_HALFWIDTH = 1.0/16


def irregular_points(unet, grid, halfwidth=WINDOW_HALFWIDTH, l_max=2,
                     ladder=None, tail=DEFAULT_TAIL):
    """
    Points of a 1-D grid whose window [x - h, x + h] is not G-infinity

    This is the singular support seen by derivative-uniform exponents; the
    frequential wave front projects onto it.
    """
    l_max = min(l_max, unet.max_order)
    found = []
    for x0 in grid:
        x0 = float(x0)
        window = unet.domain.neighbourhood(x0, halfwidth)
        verdict = classify(unet, window, l_max, ladder=ladder, tail=tail)
        if not verdict.g_infinity:
            found.append(x0)
    return found
