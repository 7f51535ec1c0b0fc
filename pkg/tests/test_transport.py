import numpy
import pytest

from asymptospec.analysis.topologies import TargetTopology
from asymptospec.experiments.transport import (NONLINEARITIES,
                                               TransportProblem,
                                               cross_validate,
                                               log_growth_table,
                                               rk4_integrate, solve_transport,
                                               transport_fibers)
from asymptospec.nets.generalized import (DomainBox, constant, delta_derivative,
                                          embed_classical, make_delta)

U0 = numpy.array([0.0, 0.5, 2.0, 7.5])
RK4_TOL = 1e-7


@pytest.mark.parametrize('name', sorted(NONLINEARITIES))
def test_closed_form_starts_at_the_data(name):
    closed_form = NONLINEARITIES[name][2]
    assert numpy.allclose(closed_form(U0, 0.0), U0, rtol=1e-14)


@pytest.mark.parametrize('name', sorted(NONLINEARITIES))
def test_rk4_matches_closed_form(name):
    rhs, drhs, closed_form = NONLINEARITIES[name]
    approx = rk4_integrate(rhs, drhs, U0, 0.5)
    assert numpy.allclose(approx, closed_form(U0, 0.5), rtol=RK4_TOL,
                          atol=RK4_TOL)


def test_closed_form_solves_the_equation():
    rhs, _, closed_form = NONLINEARITIES['sqrt_exp']
    t, h = 0.4, 1e-5
    slope = (closed_form(U0, t + h) - closed_form(U0, t - h))/(2*h)
    assert numpy.allclose(slope, rhs(closed_form(U0, t)), rtol=1e-6)


def test_problem_validation():
    with pytest.raises(ValueError, match='Unknown nonlinearity'):
        TransportProblem('burgers', make_delta(1))
    with pytest.raises(ValueError, match='Times'):
        TransportProblem('dissipative', make_delta(1), t_end=1.0,
                         times=(0.5, 2.0))
    with pytest.raises(ValueError):
        TransportProblem('dissipative', make_delta(1), t_end=0.0)


def test_space_time_domain():
    problem = TransportProblem('dissipative', make_delta(2), t_end=1.5)
    assert problem.domain == DomainBox((-1.0, 0.0), (1.0, 1.5))


def test_log_growth_rejects_data_below_minus_one():
    problem = TransportProblem('log_growth', embed_classical(constant(-2.0)))
    with pytest.raises(ValueError, match='log_growth'):
        solve_transport(problem)


def test_cross_validation_of_dissipative_delta():
    problem = TransportProblem('dissipative', make_delta(2))
    assert cross_validate(problem, 0.125) < 1e-4


def test_solution_net_equals_data_at_time_zero():
    initial = make_delta(1)
    net = solve_transport(TransportProblem('sqrt_exp', initial))
    xs = numpy.array([-0.05, 0.0, 0.02, 0.5])
    points = numpy.column_stack([xs, numpy.zeros(xs.size)])
    eps = 0.0625
    assert numpy.allclose(net.evaluate(points, eps),
                          initial.evaluate(xs[:, None], eps), rtol=1e-12)
    assert net.domain.dim == 2
    assert net.label == 'sqrt_exp[delta^1]'


def test_dissipative_solution_is_bounded_by_the_data():
    net = solve_transport(TransportProblem('dissipative', make_delta(3)),
                          cross_check=False)
    eps = 0.03125
    xs = numpy.linspace(-0.1, 0.1, 41)
    data = make_delta(3).evaluate(xs[:, None], eps)
    later = net.evaluate(numpy.column_stack([xs, numpy.ones(xs.size)]), eps)
    assert numpy.all(numpy.abs(later) <= numpy.abs(data) + 1e-12)
    # |u(t)| <= (2t)**-1/2 for every eps
    assert numpy.max(numpy.abs(later)) <= 2.0**-0.5 + 1e-12


@pytest.mark.slow
def test_dissipative_transport_regularizes_delta_square():
    problem = TransportProblem('dissipative', make_delta(2), t_end=1.5,
                               times=(0.5, 1.0))
    rows = transport_fibers(problem, [(0.0, 0.5), (0.0, 1.0)],
                            TargetTopology('Dprime'))
    data = [row for row in rows if row['t'] == 0.0]
    solution = [row for row in rows if row['t'] > 0.0]
    assert len(data) == 1
    assert data[0]['radius'] == pytest.approx(1.0, abs=0.15)
    assert all(row['radius'] is None for row in solution)


@pytest.mark.slow
def test_log_growth_radius_follows_m_exp_t():
    rows = log_growth_table(m_values=(1, 2), times=(0.25, 0.5, 1.0))
    assert [(row['m'], row['t']) for row in rows] == [
        (1, 0.25), (1, 0.5), (1, 1.0), (2, 0.25), (2, 0.5), (2, 1.0)]
    for row in rows:
        assert row['expected'] == pytest.approx(
            row['m']*numpy.exp(row['t']) - 1)
        assert row['rel_error'] <= 0.1
    for m in (1, 2):
        radii = [row['radius'] for row in rows if row['m'] == m]
        assert radii == sorted(radii)


@pytest.mark.slow
@pytest.mark.parametrize('initial, solution_radius', [
    (make_delta(1), None),
    (embed_classical(delta_derivative(k=1)), 1.0),
])
def test_sqrt_exp_transport_of_delta_data(initial, solution_radius):
    problem = TransportProblem('sqrt_exp', initial, t_end=1.5,
                               times=(0.5, 1.0))
    rows = transport_fibers(problem, [(0.0, 0.5), (0.0, 1.0)],
                            TargetTopology('Dprime'))
    data = [row for row in rows if row['t'] == 0.0]
    solution = [row for row in rows if row['t'] > 0.0]
    assert len(data) == 1 and len(solution) == 2
    assert data[0]['radius'] is None
    for row in solution:
        if solution_radius is None:
            assert row['radius'] is None
        else:
            assert row['radius'] == pytest.approx(solution_radius, abs=0.1)
