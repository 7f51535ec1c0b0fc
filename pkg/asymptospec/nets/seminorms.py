"""Sampling grids and the seminorms p_{K,l}."""
import itertools
import logging

import numpy

from . import LATTICE_SPACING, REFINE_DIVISOR, REFINE_REACH
from .generalized import DomainBox

_LOGGER = logging.getLogger(__name__)

_REFINE_STEPS = numpy.arange(-REFINE_REACH, REFINE_REACH+1)/REFINE_DIVISOR


def axis_points(lo, hi, features=(), eps_list=()):
    """
    Sample coordinates on [lo, hi]

    Global lattice points of spacing LATTICE_SPACING inside [lo, hi], plus
    x0 + eps*k/8 for |k| <= 32 around every feature x0 and every eps. Since
    the lattice is global, a sub-interval samples a subset of the points of
    any interval containing it.

    >>> from asymptospec.nets.seminorms import axis_points
    >>> pts = axis_points(-2**-7, 2**-7, features=[0.0], eps_list=[2**-10])
    >>> float(pts.min()), float(pts.max()), len(pts)
    (-0.0078125, 0.0078125, 67)
    """
    first = numpy.ceil(lo/LATTICE_SPACING)
    last = numpy.floor(hi/LATTICE_SPACING)
    lattice = numpy.arange(first, last+1)*LATTICE_SPACING
    if lattice.size == 0:
        lattice = numpy.array([lo, 0.5*(lo + hi), hi])
    parts = [lattice]
    for eps in eps_list:
        reach = REFINE_REACH*eps/REFINE_DIVISOR
        for x0 in features:
            if lo - reach <= x0 <= hi + reach:
                pts = x0 + eps*_REFINE_STEPS
                parts.append(pts[(pts >= lo) & (pts <= hi)])
    return numpy.unique(numpy.concatenate(parts))


def sampling_grid(box, features, eps_list):
    """Tensor grid over box refined for all eps in eps_list, shape (n, dim)."""
    axes = []
    for axis in range(box.dim):
        feats = features[axis] if axis < len(features) else ()
        axes.append(axis_points(box.lo[axis], box.hi[axis], feats, eps_list))
    if box.dim == 1:
        return axes[0][:, None]
    mesh = numpy.meshgrid(*axes, indexing='ij')
    return numpy.stack([m.ravel() for m in mesh], axis=-1)


def multi_indices(dim, order):
    """
    All derivative multi-indices of total order <= order

    >>> from asymptospec.nets.seminorms import multi_indices
    >>> multi_indices(2, 1)
    [(0, 0), (0, 1), (1, 0)]
    """
    return sorted(alpha for alpha in
                  itertools.product(range(order+1), repeat=dim)
                  if sum(alpha) <= order)


def sup_by_order(unet, points, eps, order):
    """Max |d^alpha u_eps| over points for each |alpha| <= order, as a list."""
    sups = []
    for alpha in multi_indices(unet.domain.dim, order):
        vals = unet.evaluate(points, eps, alpha)
        sups.append(float(numpy.max(numpy.abs(vals))) if vals.size else 0.0)
    return sups


def seminorm(unet, kbox, order, eps, grid=None):
    """
    p_{K,l}(u_eps) = sup over x in K and |alpha| <= l of |d^alpha u_eps(x)|

    Parameters
    ----------
    unet : GeneralizedNet
    kbox : DomainBox
        Closed sub-box K of the net's domain.
    order : int
        l, at most unet.max_order.
    eps : float
    grid : array, optional
        Explicit sample points of shape (n, dim); by default the adaptive
        grid refined to eps/8 near the net's features.

    Returns
    -------
    value : float
        Nonnegative; inf or nan propagate for overflowing nets.
    """
    if not isinstance(kbox, DomainBox):
        kbox = DomainBox(*kbox)
    if order > unet.max_order:
        raise ValueError("Seminorm order {} exceeds max_order {} of {}"
                         .format(order, unet.max_order, unet.label))
    if not unet.domain.contains(kbox):
        raise ValueError("Seminorm box {} outside domain {}"
                         .format(kbox, unet.domain))
    if grid is None:
        grid = sampling_grid(kbox, unet.features, [eps])
    with numpy.errstate(over='ignore', invalid='ignore'):
        return max(sup_by_order(unet, grid, eps, order))


def seminorm_series(unet, kbox, order, ladder):
    """p_{K,l}(u_eps) for every rung of the ladder."""
    return numpy.array([seminorm(unet, kbox, order, eps) for eps in ladder])
