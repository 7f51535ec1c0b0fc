import numpy
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from asymptospec.analysis.classes import classify
from asymptospec.analysis.spectrum import (SpectrumPoint, singular_spectrum,
                                           singular_support)
from asymptospec.analysis.topologies import TargetTopology
from asymptospec.analysis.valuation import fit_ladder
from asymptospec.experiments.deltapowers import expected_fiber
from asymptospec.nets.generalized import (DomainBox, add_nets, derive_net,
                                          embed_classical, heaviside,
                                          make_delta, mul_nets)
from asymptospec.nets.mollifiers import DEFAULT_MOLLIFIER
from asymptospec.nets.scales import EpsLadder, gevrey_scale, power_scale
from asymptospec.runner.registry import random_net

EPS = 2.0**-numpy.arange(4, 17)
SLOPE_TOL = 1e-8
GRID = [-0.5, -0.25, 0.0, 0.25, 0.5]
SHORT_GRID = [-0.25, 0.0, 0.25]
LADDER = EpsLadder(2.0**-4, 0.5, 8)

exponents = st.floats(min_value=0.0, max_value=4.0)
eps_values = st.floats(min_value=2.0**-10, max_value=0.5)
interior = st.floats(min_value=-0.9, max_value=0.9)


@seed(1)
@given(rvals=st.lists(exponents, min_size=1, max_size=4),
       sigma=st.floats(min_value=1.0, max_value=4.0))
def test_scales_are_submultiplicative(rvals, sigma):
    ladder = EpsLadder(0.5, 0.5, 6)
    assert power_scale().submultiplicative_gap(ladder, rvals) <= 1e-9
    assert gevrey_scale(sigma).submultiplicative_gap(ladder, rvals) <= 1e-9


@seed(2)
@given(slope=st.floats(min_value=-4.0, max_value=4.0),
       const=st.floats(min_value=1e-3, max_value=1e3))
def test_power_laws_fit_exactly(slope, const):
    fit = fit_ladder(EPS, const*EPS**slope)
    assert abs(fit.slope - slope) <= SLOPE_TOL
    assert fit.verdict == 'power-like'


@seed(3)
@given(radius=st.floats(min_value=0.0, max_value=16.0),
       n_endpoint=st.sampled_from(['open', 'closed']),
       r1=st.floats(min_value=0.0, max_value=16.0),
       r2=st.floats(min_value=0.0, max_value=16.0))
def test_fibers_are_intervals_from_zero(radius, n_endpoint, r1, r2):
    spt = SpectrumPoint((0.0,), radius, n_endpoint)
    low, high = sorted((r1, r2))
    if spt.contains(high):
        assert spt.contains(low)
    assert spt.contains(radius) == (n_endpoint == 'open')


@seed(4)
@given(m=st.integers(min_value=1, max_value=4),
       p=st.integers(min_value=0, max_value=5))
def test_delta_fibers_grow_with_regularity_order(m, p):
    radius, _ = expected_fiber(m, TargetTopology('Cp', p))
    bigger, _ = expected_fiber(m, TargetTopology('Cp', p + 1))
    assert bigger == radius + 1.0
    weak, _ = expected_fiber(m, TargetTopology('Dprime'))
    assert weak is None or weak < radius


@seed(5)
@given(y=arrays(numpy.float64, (16,),
                elements=st.floats(min_value=-2.0, max_value=2.0)))
def test_mollifier_cumulative_is_a_distribution(y):
    y = numpy.sort(y)
    cdf = DEFAULT_MOLLIFIER.cumulative(y)
    assert numpy.all((cdf >= 0.0) & (cdf <= 1.0 + 1e-12))
    assert numpy.all(numpy.diff(cdf) >= -1e-10)


@seed(6)
@settings(max_examples=20, deadline=None)
@given(x=interior, eps=eps_values)
def test_sums_and_products_act_pointwise(x, eps):
    unet, vnet = make_delta(1), embed_classical(heaviside())
    u, v = unet.evaluate([[x]], eps)[0], vnet.evaluate([[x]], eps)[0]
    assert add_nets(unet, vnet).evaluate([[x]], eps)[0] \
        == pytest.approx(u + v, rel=1e-12, abs=1e-12)
    assert mul_nets(unet, vnet).evaluate([[x]], eps)[0] \
        == pytest.approx(u*v, rel=1e-12, abs=1e-12)


@seed(7)
@given(center=interior, halfwidth=st.floats(min_value=1e-3, max_value=0.5))
def test_neighbourhoods_stay_inside_the_domain(center, halfwidth):
    domain = DomainBox(-1.0, 1.0)
    vbox = domain.neighbourhood((center,), halfwidth)
    assert domain.contains(vbox)
    assert vbox.contains_point((center,))


@pytest.mark.slow
@seed(8)
@settings(max_examples=20, deadline=None)
@given(netseed=st.integers(min_value=0, max_value=2**16))
def test_random_nets_respect_the_class_chain(netseed):
    unet = random_net(netseed)
    verdict = classify(unet, DomainBox(-0.75, 0.75), 1, ladder=LADDER)
    assert verdict.chain_violations() == []


@pytest.mark.slow
@seed(9)
@settings(max_examples=20, deadline=None)
@given(netseed=st.integers(min_value=0, max_value=2**16))
def test_random_spectrum_projection_is_the_support(netseed):
    unet = random_net(netseed)
    top = TargetTopology('Cp', 0)
    result = singular_spectrum(unet, power_scale(), SHORT_GRID, top, LADDER,
                               steps=10)
    assert singular_support(unet, power_scale(), SHORT_GRID, top, LADDER) \
        == result.singular_support()
    for spt in result:
        assert spt.monotone_violations() == []


def _within_a_cell(points, support, cell=0.25):
    return all(any(abs(p[0] - q[0]) <= cell + 1e-12 for q in support)
               for p in points)


def _support(unet, topology):
    return singular_support(unet, power_scale(), GRID, topology, LADDER)


@pytest.mark.slow
@seed(10)
@settings(max_examples=20, deadline=None)
@given(useed=st.integers(min_value=0, max_value=2**16),
       vseed=st.integers(min_value=0, max_value=2**16),
       topname=st.sampled_from(['C0', 'Dprime']))
def test_sum_singularities_lie_in_the_union(useed, vseed, topname):
    unet, vnet = random_net(useed), random_net(vseed)
    top = TargetTopology.from_string(topname)
    union = _support(unet, top) + _support(vnet, top)
    assert _within_a_cell(_support(add_nets(unet, vnet), top), union)


@pytest.mark.slow
@seed(11)
@settings(max_examples=20, deadline=None)
@given(netseed=st.integers(min_value=0, max_value=2**16))
def test_derivative_singularities_lie_in_the_support(netseed):
    unet = random_net(netseed)
    dnet = derive_net(unet, 1)
    # d/dx maps C1 into C0 and D' into D'
    assert _within_a_cell(_support(dnet, TargetTopology('Cp', 0)),
                          _support(unet, TargetTopology('Cp', 1)))
    assert _within_a_cell(_support(dnet, TargetTopology('Dprime')),
                          _support(unet, TargetTopology('Dprime')))
