import numpy
import pytest

from asymptospec.analysis.classes import RegularitySequenceFamily
from asymptospec.analysis.frequential import (ConeReport, CutoffSequence,
                                              cone_decay_classify,
                                              frequential_ladder,
                                              rRL_microlocal_test,
                                              sequence_rule,
                                              wavefront_estimate,
                                              window_bump, windowed_fourier)
from asymptospec.nets.generalized import (DomainBox, GeneralizedNet,
                                          derive_net, embed_classical,
                                          heaviside, kink, make_delta,
                                          mul_nets, smooth)

PARSEVAL_TOL = 1e-10
BOTH_DIRECTIONS = [(0.0, -1), (0.0, 1)]
WAVEFRONT_GRID = [-0.5, 0.0, 0.5]
CORPUS = {
    'delta': lambda: make_delta(1),
    'delta2': lambda: make_delta(2),
    'heaviside': lambda: embed_classical(heaviside()),
    'kink': lambda: embed_classical(kink()),
}


def test_frequential_ladder():
    ladder = frequential_ladder()
    assert ladder.values.tolist() == [2.0**-k for k in range(4, 10)]


def test_window_bump():
    assert float(window_bump(0.3, 0.3, 0.25)) == 1.0
    assert numpy.all(window_bump([0.175, 0.425, 1.0], 0.3, 0.25) == 0.0)


def test_discrete_parseval_is_exact():
    spectrum = windowed_fourier(make_delta(2), 0.0)
    assert len(spectrum.rungs) == 6
    for rung in spectrum.rungs:
        assert rung.parseval_gap() <= PARSEVAL_TOL
        assert rung.step*rung.xi_max <= numpy.pi*(1.0 + 1e-12)


def test_frequency_cutoff_scales_with_eps():
    spectrum = windowed_fourier(make_delta(1), 0.0)
    eps = spectrum.eps
    xi_max = numpy.array([rung.xi_max for rung in spectrum.rungs])
    assert numpy.allclose(xi_max*eps, xi_max[0]*eps[0])


def test_window_must_fit_the_domain():
    with pytest.raises(ValueError):
        windowed_fourier(make_delta(1), 0.9)
    with pytest.raises(ValueError):
        windowed_fourier(make_delta(1), 0.0, width=0.0)
    net2d = GeneralizedNet(DomainBox((-1, 0), (1, 1)),
                           lambda pts, eps, order: pts[:, 0])
    with pytest.raises(ValueError):
        windowed_fourier(net2d, 0.0)


def test_coarse_step_is_rejected():
    with pytest.raises(ValueError, match='cannot resolve'):
        windowed_fourier(make_delta(1), 0.0, step=0.01)


@pytest.mark.parametrize('direction', [1, -1])
def test_delta_cones_are_singular(direction):
    spectrum = windowed_fourier(make_delta(1), 0.0)
    report = cone_decay_classify(spectrum, direction)
    assert report.verdict == 'singular'
    assert report.exponents[0] == pytest.approx(0.0, abs=0.25)
    assert report.exponents[1] == pytest.approx(1.0, abs=0.25)
    assert report.monotone_violations() == []


def test_smooth_cones_are_regular():
    spectrum = windowed_fourier(embed_classical(smooth('cos')), 0.0)
    for direction in (1, -1):
        assert cone_decay_classify(spectrum, direction).verdict == 'regular'


def test_cone_arguments():
    spectrum = windowed_fourier(make_delta(1), 0.0)
    with pytest.raises(ValueError):
        cone_decay_classify(spectrum, 0)
    with pytest.raises(ValueError):
        cone_decay_classify(spectrum, 1, q_max=9)


def test_cone_report_row():
    report = ConeReport(0.0, -1, [0.0, 1.0, -numpy.inf], 'singular',
                        'bounded')
    row = report.as_row()
    assert row['direction'] == -1 and row['N1'] == 1.0
    assert numpy.isneginf(row['N2'])


@pytest.mark.parametrize('m', [1, 2, 3])
def test_wavefront_of_delta_powers_ignores_the_power(m):
    estimate = wavefront_estimate(make_delta(m), [0.0, 0.5])
    assert estimate.singular == BOTH_DIRECTIONS
    assert estimate.projection() == [0.0]


def test_wavefront_of_heaviside():
    estimate = wavefront_estimate(embed_classical(heaviside()),
                                  [-0.5, 0.0, 0.5], jobs=2)
    assert estimate.singular == BOTH_DIRECTIONS
    assert len(estimate.rows()) == 6


def test_wavefront_of_smooth_function_is_empty():
    estimate = wavefront_estimate(embed_classical(smooth('cos')),
                                  [-0.5, 0.0, 0.5])
    assert estimate.singular == []
    assert estimate.projection() == []


def test_affine_family_allows_linear_growth():
    family = RegularitySequenceFamily('affine', 0.0, 1.0)
    estimate = wavefront_estimate(make_delta(1), [0.0], family=family)
    assert estimate.family == 'affine:0,1'
    assert all(rep.verdict != 'singular' for rep in estimate.reports)


def _within_a_cell(pairs, reference, cell=0.5):
    return all(any(abs(x - y) <= cell and d == e for y, e in reference)
               for x, d in pairs)


@pytest.mark.slow
@pytest.mark.parametrize('name', sorted(CORPUS))
def test_wavefront_of_derivative_lies_in_the_wavefront(name):
    unet = CORPUS[name]()
    original = wavefront_estimate(unet, WAVEFRONT_GRID).singular
    derived = wavefront_estimate(derive_net(unet, 1), WAVEFRONT_GRID)
    assert _within_a_cell(derived.singular, original)


@pytest.mark.slow
@pytest.mark.parametrize('name', sorted(CORPUS))
def test_smooth_factor_adds_no_wavefront(name):
    unet = CORPUS[name]()
    original = wavefront_estimate(unet, WAVEFRONT_GRID).singular
    gnet = embed_classical(smooth('cos'))
    product = wavefront_estimate(mul_nets(gnet, unet), WAVEFRONT_GRID)
    assert _within_a_cell(product.singular, original)


@pytest.mark.slow
@pytest.mark.parametrize('name', sorted(CORPUS))
def test_halving_the_window_keeps_the_verdicts(name):
    unet = CORPUS[name]()
    full = wavefront_estimate(unet, WAVEFRONT_GRID, width=0.25)
    half = wavefront_estimate(unet, WAVEFRONT_GRID, width=0.125)
    assert half.singular == full.singular


@pytest.mark.parametrize('k', [1, 2, 3])
def test_cutoff_sequence_bounds(k):
    cutoffs = CutoffSequence(0.0, 0.25)
    assert cutoffs.verify(k)
    assert float(cutoffs(k, 0.0)) == pytest.approx(1.0, abs=1e-9)


def test_cutoff_derivative_order_checked():
    with pytest.raises(ValueError):
        CutoffSequence(0.0, 0.25).derivative(1, 2, 0.0)


def test_sequence_rules():
    assert sequence_rule('analytic')(3) == 4.0
    assert sequence_rule(lambda k: 2.0*k)(3) == 6.0
    with pytest.raises(ValueError):
        sequence_rule('factorial')


def test_rrl_flags_delta():
    verdict = rRL_microlocal_test(make_delta(1), 0.0, 1, k_max=3)
    assert verdict.verdict == 'singular'
    assert not verdict.exponent_ok
    assert len(verdict.exponents) == 3
    record = verdict.as_dict()
    assert record['verdict'] == 'singular'


def test_rrl_arguments():
    with pytest.raises(ValueError):
        rRL_microlocal_test(make_delta(1), 0.0, 2)
    with pytest.raises(ValueError):
        rRL_microlocal_test(make_delta(1), 0.0, 1, k_max=0)
