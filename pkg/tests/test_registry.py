import numpy
import pytest
import yaml

from asymptospec.runner import registry
from asymptospec.runner.programs import EXPERIMENTS, VERB_OPERATIONS
from asymptospec.runner.config import EXPERIMENT_NAMES
from asymptospec.runner.registry import (NET_CONSTRUCTORS, build_net,
                                         classical_spec, load_expectations,
                                         net_key, parse_net_string,
                                         random_net)

NET_SPECS = [
    'delta:m=2',
    'constant:c=1.5',
    'heaviside',
    'kink:x0=0.25',
    {'constructor': 'polynomial', 'params': {'coeffs': [1.0, 2.0]}},
    {'constructor': 'piecewise',
     'params': {'breakpoints': [0.0], 'coeffs': [[0.0], [0.0, 1.0]]}},
    'smooth:name=gaussian',
    'delta_derivative:k=1',
    {'constructor': 'amplified', 'params': {'f': 'smooth:name=cos'}},
    {'constructor': 'exponential', 'params': {'f': 'heaviside'}},
    'zero',
    {'constructor': 'sum', 'params': {'operands': ['heaviside', 'kink']}},
    {'constructor': 'product',
     'params': {'operands': ['delta:m=1', 'heaviside']}},
    {'constructor': 'power', 'params': {'operand': 'heaviside', 'p': 2}},
    {'constructor': 'derivative', 'params': {'operand': 'kink'}},
    {'constructor': 'transport',
     'params': {'nonlinearity': 'dissipative', 'initial': 'delta:m=1'}},
    'blowup',
    'sum_law:kind=power,j=1,k=1',
    'random:seed=3',
]

LIBRARY_OPERATIONS = [
    'make_delta', 'embed_classical', 'net_algebra', 'restrict', 'seminorm',
    'fit_valuation', 'is_moderate', 'is_negligible', 'classify',
    'test_convergence', 'critical_exponent', 'singular_support',
    'singular_spectrum', 'check_nonlinear_bounds', 'windowed_fourier',
    'cone_decay_classify', 'wavefront_estimate', 'rRL_microlocal_test',
    'run_delta_powers', 'solve_transport', 'solve_blowup',
    'strength_of_singularity', 'solve_rauch_reed', 'parse_config', 'run',
]


def _name(spec):
    return spec['constructor'] if isinstance(spec, dict) \
        else parse_net_string(spec)[0]


def test_parse_net_string_values_are_yaml():
    assert parse_net_string('smooth:name=cos,freq=2') \
        == ('smooth', {'name': 'cos', 'freq': 2})
    with pytest.raises(ValueError, match='key=value'):
        parse_net_string('delta:2')


def test_net_key_is_canonical():
    assert net_key('delta', {'m': 2, 'center': 0.5}) \
        == 'delta:center=0.5,m=2'
    assert net_key(*parse_net_string('smooth:name=cos')) == 'smooth:name=cos'
    assert net_key('zero') == 'zero'


def test_constructor_table_is_covered():
    assert {_name(spec) for spec in NET_SPECS} == set(NET_CONSTRUCTORS)


@pytest.mark.parametrize('spec', NET_SPECS, ids=str)
def test_every_constructor_builds(spec):
    net = build_net(spec)
    dim = net.domain.dim
    point = [0.5]*dim if dim == 1 else [0.5, 0.5]
    value = net.evaluate([point], 0.125)
    assert value.shape == (1,)


def test_build_net_with_separate_params():
    net = build_net('delta', {'m': 3})
    assert net.label == 'delta^3'


def test_build_net_errors():
    with pytest.raises(ValueError, match='Unknown net constructor'):
        build_net('nosuch')
    with pytest.raises(ValueError, match='Bad parameters'):
        build_net('delta:n=2')
    with pytest.raises(ValueError, match='two operands'):
        build_net({'constructor': 'product', 'params': {'operands': ['zero']}})


def test_classical_spec():
    assert classical_spec('heaviside')([1.0]).tolist() == [1.0]
    with pytest.raises(ValueError):
        classical_spec('delta:m=1')


def test_random_net_is_seeded():
    xs = numpy.linspace(-0.9, 0.9, 19)[:, None]
    first = random_net(7).evaluate(xs, 0.0625)
    again = random_net(7).evaluate(xs, 0.0625)
    assert numpy.array_equal(first, again)


def test_user_expectations_override(tmp_path):
    user_file = tmp_path/'expectations.yml'
    user_file.write_text(yaml.safe_dump(
        {'classify': {'zero': {'negligible': False}},
         'wavefront': {'kink': {'singular': []}}}))
    expectations = load_expectations(str(user_file))
    assert expectations['classify']['zero'] == {'negligible': False}
    assert 'delta:m=1' in expectations['classify']
    assert expectations['wavefront']['kink'] == {'singular': []}


def test_bundled_expectations_without_user_file(tmp_path, monkeypatch):
    monkeypatch.setattr(registry, 'USER_CONF_DIR', str(tmp_path))
    expectations = load_expectations()
    assert expectations['experiments']['blowup'] == {'s1_max': 0.1}


def test_every_library_operation_has_a_verb():
    reached = {op for ops in VERB_OPERATIONS.values() for op in ops}
    assert set(LIBRARY_OPERATIONS) <= reached


def test_experiment_programs_match_names():
    assert set(EXPERIMENTS) == set(EXPERIMENT_NAMES)
