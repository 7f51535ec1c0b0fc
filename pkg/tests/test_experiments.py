import numpy
import pytest

from asymptospec.analysis.topologies import TargetTopology
from asymptospec.experiments.amplified import AMPLIFIED_CASES, amplified_table
from asymptospec.experiments.deltapowers import (delta_power_wavefronts,
                                                 expected_fiber,
                                                 run_delta_powers)
from asymptospec.experiments.strength import (StrengthReadout, read_strength,
                                              strength_of_singularity,
                                              strength_table)
from asymptospec.experiments.sumlaw import (SumLawProblem, interaction_values,
                                            solve_rauch_reed, sum_law_table,
                                            sumlaw_profile)
from asymptospec.nets.generalized import (delta_derivative, embed_classical,
                                          heaviside, kink, smooth)

EPS = 0.25


@pytest.mark.parametrize('m, topstr, expected', [
    (1, 'C0', (1.0, 'closed')),
    (2, 'C1', (3.0, 'closed')),
    (1, 'Dprime', (None, None)),
    (2, 'Dprime', (1.0, 'open')),
    (4, 'Dprime', (3.0, 'open')),
])
def test_expected_fibers(m, topstr, expected):
    assert expected_fiber(m, TargetTopology.from_string(topstr)) == expected


def test_delta_powers_range():
    with pytest.raises(ValueError):
        run_delta_powers(m_list=(0, 1))
    with pytest.raises(ValueError):
        run_delta_powers(m_list=(5,))


@pytest.mark.slow
def test_delta_powers_table():
    rows = run_delta_powers(m_list=(1, 2), p_list=(0,),
                            topologies=('Dprime',))
    assert [(row['m'], row['topology']) for row in rows] \
        == [(1, 'C0'), (1, 'Dprime'), (2, 'C0'), (2, 'Dprime')]
    assert all(row['pass'] for row in rows)


def test_delta_power_wavefronts_agree():
    rows = delta_power_wavefronts(m_list=(1, 2))
    assert all(row['same_as_first'] for row in rows)
    assert rows[0]['singular'] == [(0.0, -1), (0.0, 1)]


def test_amplified_cases_differ_in_endpoint_only():
    endpoints = [case[2] for case in AMPLIFIED_CASES]
    assert endpoints == ['open', 'closed']


@pytest.mark.slow
def test_amplified_table():
    rows = amplified_table(points=(0.0,), topologies=('C0',))
    assert len(rows) == 2
    for row in rows:
        assert row['radius'] == pytest.approx(1.0, abs=0.15)
    assert rows[1]['endpoint'] == 'closed'


def test_strength_readout():
    readout = StrengthReadout('H', (0.0,), 1, 1.02, 'closed')
    assert readout.strength == -1
    assert readout.as_row()['point'] == [0.0]
    assert 'n=1' in repr(readout)


@pytest.mark.slow
@pytest.mark.parametrize('spec, expected', [
    (heaviside(), 1),
    (kink(), 0),
    (delta_derivative(0), 2),
    (delta_derivative(1), 3),
])
def test_strength_of_classical_singularities(spec, expected):
    readout = strength_of_singularity(spec, 0.0)
    assert readout.n == expected
    assert readout.radius == pytest.approx(expected, abs=0.2)


@pytest.mark.slow
def test_regular_point_has_no_strength():
    with pytest.raises(RuntimeError, match='C\\^1-regular'):
        read_strength(embed_classical(smooth('cos')), 0.0)


@pytest.mark.slow
def test_strength_table_rows():
    rows = strength_table([(heaviside(), 0.0, 1)])
    assert rows[0]['pass'] and rows[0]['expected'] == 1


def test_sumlaw_profiles():
    prof = sumlaw_profile('derivative', 1, -1.0)
    assert (prof.power, prof.derivative, prof.center) == (1, 1, -1.0)
    assert sumlaw_profile('power', 2, 1.0).power == 2
    with pytest.raises(ValueError):
        sumlaw_profile('power', 0, 1.0)
    with pytest.raises(ValueError):
        sumlaw_profile('integral', 1, 1.0)


def test_sumlaw_problem_validation():
    with pytest.raises(ValueError, match='-1 and \\+1'):
        SumLawProblem(sumlaw_profile('power', 1, 0.0),
                      sumlaw_profile('power', 1, 1.0))
    with pytest.raises(ValueError):
        SumLawProblem(sumlaw_profile('power', 1, -1.0),
                      sumlaw_profile('power', 1, 1.0), t_end=1.0)


def _problem(kind='power', j=1, k=1):
    return SumLawProblem(sumlaw_profile(kind, j, -1.0),
                         sumlaw_profile(kind, k, 1.0))


def test_interaction_vanishes_before_the_meeting():
    problem = _problem()
    x = numpy.array([0.0, 0.5, -0.5])
    t = numpy.array([0.5, 0.25, 0.25])
    assert numpy.all(interaction_values(problem, x, t, EPS) == 0.0)


def test_time_derivative_is_the_product_of_data():
    problem = _problem('derivative', 0, 1)
    x, t, h = numpy.array([0.02]), 1.0, 1e-3
    forward = interaction_values(problem, x, numpy.array([t + h]), EPS)
    backward = interaction_values(problem, x, numpy.array([t - h]), EPS)
    dtw = interaction_values(problem, x, numpy.array([t]), EPS, (0, 1))
    assert dtw[0] == pytest.approx((forward - backward)[0]/(2*h), rel=1e-3)


def test_interaction_net():
    net = solve_rauch_reed(_problem())
    assert net.features == ((0.0,), (1.0,))
    assert net.label == 'w[delta^1(-1), delta^1(+1)]'
    assert net.evaluate([[0.0, 1.25]], EPS)[0] > 0.0


@pytest.mark.slow
def test_sum_law_of_delta_derivatives():
    rows = sum_law_table(pairs=((0, 0), (1, 0)))
    for row in rows:
        assert row['expected'] == row['j'] + row['k'] + 2
        assert row['radius'] == pytest.approx(row['expected'], abs=0.2)
