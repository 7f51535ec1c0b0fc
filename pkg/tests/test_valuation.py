import numpy
import pytest

from asymptospec.analysis.valuation import fit_ladder, fit_valuation

EPS = 2.0**-numpy.arange(4, 17)
EXACT_TOL = 1e-10


@pytest.mark.parametrize('slope', [-3.0, -1.0, 0.0, 0.5, 2.0])
@pytest.mark.parametrize('const', [1e-3, 1.0, 7.5])
def test_pure_powers_are_exact(slope, const):
    fit = fit_ladder(EPS, const*EPS**slope)
    assert fit.slope == pytest.approx(slope, abs=EXACT_TOL)
    assert fit.intercept == pytest.approx(numpy.log(const), abs=EXACT_TOL)
    assert fit.residual <= EXACT_TOL
    assert fit.verdict == 'power-like'
    assert fit.exponent == pytest.approx(-slope, abs=EXACT_TOL)


def test_only_the_tail_is_fitted():
    values = EPS**-1.0
    values[:5] = 1.0
    fit = fit_ladder(EPS, values, tail=8)
    assert fit.slope == pytest.approx(-1.0, abs=EXACT_TOL)
    assert fit.nr_samples == 8


def test_logarithmic_correction_is_detected():
    fit = fit_ladder(EPS, numpy.abs(numpy.log(EPS))/EPS)
    assert fit.verdict == 'log-corrected'
    assert -1.3 < fit.slope < -1.0
    assert fit.drift > 0.05


def test_oscillating_net_is_irregular():
    wobble = 1.0 + 0.5*(-1.0)**numpy.arange(EPS.size)
    fit = fit_ladder(EPS, EPS*wobble)
    assert fit.verdict == 'irregular'


def test_unordered_samples_are_sorted():
    pairs = list(zip(EPS, EPS**2))
    fit = fit_valuation(reversed(pairs))
    assert fit.slope == pytest.approx(2.0, abs=EXACT_TOL)


def test_zeros_and_nonfinite_values_are_dropped():
    values = EPS**2
    values[-2] = 0.0
    values[-5] = numpy.inf
    fit = fit_ladder(EPS, values)
    assert fit.slope == pytest.approx(2.0, abs=EXACT_TOL)
    assert fit.nr_samples == 6


def test_insufficient_data():
    with pytest.raises(ValueError, match='Insufficient data'):
        fit_ladder(EPS[:3], EPS[:3])
    with pytest.raises(ValueError):
        fit_ladder(EPS, numpy.zeros(EPS.size))


def test_as_dict():
    record = fit_ladder(EPS, EPS).as_dict()
    assert set(record) == {'slope', 'intercept', 'residual', 'verdict',
                           'drift'}
