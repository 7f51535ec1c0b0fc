import numpy
import pytest

from asymptospec.analysis.classes import (ClassVerdict,
                                          RegularitySequenceFamily,
                                          check_overstability, classify,
                                          clip_exponents, irregular_points,
                                          is_moderate, is_negligible,
                                          order_fits, product_exponent_bound,
                                          seminorm_table)
from asymptospec.nets.generalized import (DomainBox, constant,
                                          embed_classical, heaviside,
                                          make_amplified, make_delta,
                                          make_exponential, smooth, zero_net)
from asymptospec.nets.mollifiers import DEFAULT_MOLLIFIER
from asymptospec.nets.seminorms import seminorm

BOX = DomainBox(-0.5, 0.5)
EXPONENT_TOL = 0.1


def test_family_parsing():
    assert RegularitySequenceFamily.from_string('Bo').kind == 'bounded'
    assert RegularitySequenceFamily.from_string('all').kind == 'all-sequences'
    fam = RegularitySequenceFamily.from_string('affine:2,0.5')
    assert (fam.a, fam.b, fam.name) == (2.0, 0.5, 'affine:2,0.5')
    with pytest.raises(ValueError):
        RegularitySequenceFamily.from_string('gevrey')
    with pytest.raises(ValueError):
        RegularitySequenceFamily('polynomial')


def test_family_envelopes():
    bounded = RegularitySequenceFamily('bounded')
    assert bounded.fits([1.0, 1.1, 1.2], 0.25)
    assert bounded.exceeds([1.0, 2.0], 0.25)
    assert RegularitySequenceFamily('all-sequences').fits([0.0, 50.0], 0.0)
    affine = RegularitySequenceFamily('affine', 1.0, 1.0)
    assert affine.fits([1.0, 2.0, 3.0], 0.0)
    assert affine.exceeds([1.0, 2.0, 4.0], 0.25)


@pytest.mark.parametrize('famstr', ['bounded', 'all', 'affine:0,1',
                                    'affine:1,2'])
def test_families_are_overstable(famstr):
    assert check_overstability(RegularitySequenceFamily.from_string(famstr))


def test_clip_exponents():
    clipped = clip_exponents([-numpy.inf, -1.0, 2.0, numpy.inf])
    assert clipped[:3].tolist() == [0.0, 0.0, 2.0]
    assert numpy.isinf(clipped[3])


def test_seminorm_of_delta_at_its_peak():
    eps = 2.0**-6
    value = seminorm(make_delta(1), BOX, 0, eps)
    assert value == pytest.approx(float(DEFAULT_MOLLIFIER(0.0))/eps)


def test_seminorm_is_monotone_in_box_and_order():
    net = embed_classical(heaviside())
    eps = 2.0**-5
    small = seminorm(net, DomainBox(-0.1, 0.1), 1, eps)
    large = seminorm(net, DomainBox(-0.4, 0.4), 1, eps)
    assert small <= large
    assert seminorm(net, BOX, 0, eps) <= seminorm(net, BOX, 2, eps)


def test_seminorm_checks_arguments():
    net = make_delta(1)
    with pytest.raises(ValueError):
        seminorm(net, BOX, net.max_order + 1, 0.1)
    with pytest.raises(ValueError):
        seminorm(net, DomainBox(-2.0, 0.0), 0, 0.1)


def test_seminorm_table_is_cumulative(short_ladder):
    table = seminorm_table(make_delta(1), BOX, 2, short_ladder)
    assert table.shape == (len(short_ladder), 3)
    assert numpy.all(numpy.diff(table, axis=1) >= 0.0)


def test_delta_exponents(short_ladder):
    exponents, _ = order_fits(make_delta(1), BOX, 2, short_ladder)
    assert exponents == pytest.approx([1.0, 2.0, 3.0], abs=EXPONENT_TOL)


def test_delta_classification(short_ladder):
    verdict = classify(make_delta(1), BOX, 2, ladder=short_ladder)
    assert verdict.moderate
    assert not verdict.negligible
    assert not verdict.g_infinity
    assert not verdict.g_R
    assert verdict.orders == [1, 2, 3]
    assert verdict.chain_violations() == []


def test_delta_is_in_affine_class(short_ladder):
    family = RegularitySequenceFamily('affine', 1.0, 1.0)
    verdict = classify(make_delta(1), BOX, 2, family, short_ladder)
    assert verdict.g_R
    assert verdict.family == 'affine:1,1'


def test_smooth_function_is_slow_scale(short_ladder):
    verdict = classify(embed_classical(smooth('cos')), BOX, 2,
                       ladder=short_ladder)
    assert verdict.moderate and verdict.g_infinity and verdict.g_R
    assert verdict.slow_scale
    assert not verdict.negligible
    assert verdict.uniform_N == pytest.approx(0.0, abs=EXPONENT_TOL)


def test_log_amplified_constant_is_g_infinity(short_ladder):
    net = make_amplified(constant(1.0), exponent=0.0, log_power=1.0)
    verdict = classify(net, BOX, 2, ladder=short_ladder)
    assert verdict.moderate and verdict.g_infinity
    assert not verdict.negligible


def test_zero_net_is_negligible(short_ladder):
    verdict = classify(zero_net(), BOX, 2, ladder=short_ladder)
    assert verdict.negligible
    assert verdict.chain_violations() == []
    assert is_negligible(zero_net(), BOX, 2, short_ladder)


def test_exponential_net_is_not_moderate():
    net = make_exponential(constant(1.0))
    moderate, orders = is_moderate(net, BOX, 1)
    assert not moderate
    assert orders == [None, None]
    assert not classify(net, BOX, 1).moderate


def test_moderate_orders(short_ladder):
    moderate, orders = is_moderate(make_delta(2), BOX, 1, short_ladder)
    assert moderate
    assert orders == [2, 3]
    assert not is_negligible(make_delta(2), BOX, 1, short_ladder)


def test_chain_violations_reported():
    verdict = ClassVerdict(False, False, True, True, False, [0.0], [0])
    assert verdict.chain_violations() == ['g_R => moderate']
    assert verdict.as_dict()['g_infinity'] is True


def test_product_exponents_add(short_ladder):
    report = product_exponent_bound(make_delta(1), make_delta(1), BOX, 0,
                                    short_ladder)
    assert report['N_uv'] == pytest.approx(2.0, abs=EXPONENT_TOL)
    assert report['excess'] <= EXPONENT_TOL


def test_irregular_points_of_heaviside(short_ladder):
    net = embed_classical(heaviside())
    assert irregular_points(net, [-0.5, 0.0, 0.5], ladder=short_ladder) \
        == [0.0]
