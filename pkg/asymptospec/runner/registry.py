"""\
Named constructors for nets and the bundled expectation registry

Nets are declared as records {constructor: <name>, params: {...}}, on the
command line as 'name:key=value,...'.
"""
import json
import logging
import os

import numpy
import yaml

from . import SHARE_DIR, USER_CONF_DIR
from ..experiments.blowup import BlowupProblem, solve_blowup
from ..experiments.sumlaw import SumLawProblem, solve_rauch_reed, \
    sumlaw_profile
from ..experiments.transport import TransportProblem, solve_transport
from ..nets.generalized import (add_nets, constant, delta_derivative,
                                embed_classical, heaviside, kink,
                                make_amplified, make_delta, make_exponential,
                                net_algebra, piecewise, polynomial, smooth,
                                zero_net)

_LOGGER = logging.getLogger(__name__)

EXPECTATIONS_FILE = 'expectations.yml'

CLASSICAL_SPECS = {
    'constant': constant,
    'heaviside': heaviside,
    'kink': kink,
    'polynomial': polynomial,
    'piecewise': piecewise,
    'smooth': smooth,
    'delta_derivative': delta_derivative,
}


def parse_net_string(netstr):
    """
    Split 'name:key=value,...' into a constructor name and params

    Values are read as YAML scalars.

    >>> from asymptospec.runner.registry import parse_net_string
    >>> parse_net_string('delta:m=2,center=0.5')
    ('delta', {'m': 2, 'center': 0.5})
    >>> parse_net_string('zero')
    ('zero', {})
    """
    name, _, argstr = netstr.partition(':')
    params = {}
    for item in filter(None, argstr.split(',')):
        key, sep, value = item.partition('=')
        if not sep:
            raise ValueError("Net parameter '{}' in '{}' must be key=value"
                             .format(item, netstr))
        params[key.strip()] = yaml.safe_load(value)
    return name.strip(), params


def net_key(constructor, params=None):
    """Canonical 'name:key=value,...' string with sorted keys."""
    params = params or {}
    items = []
    for key in sorted(params):
        value = params[key]
        text = value if isinstance(value, str) \
            else json.dumps(value, sort_keys=True)
        items.append('{}={}'.format(key, text))
    if not items:
        return constructor
    return '{}:{}'.format(constructor, ','.join(items))


def _as_record(spec):
    if isinstance(spec, str):
        constructor, params = parse_net_string(spec)
        return {'constructor': constructor, 'params': params}
    return {'constructor': spec['constructor'],
            'params': dict(spec.get('params') or {})}


def classical_spec(spec):
    """PiecewiseSmooth or DeltaDerivative from a record or string."""
    record = _as_record(spec)
    try:
        func = CLASSICAL_SPECS[record['constructor']]
    except KeyError:
        raise ValueError("Unknown classical function '{}', choose from {}"
                         .format(record['constructor'],
                                 sorted(CLASSICAL_SPECS)))
    return func(**record['params'])


def _classical_net(name):
    def build(domain=None, **params):
        return embed_classical(CLASSICAL_SPECS[name](**params),
                               domain=domain)
    return build


def _amplified(f, exponent=1.0, log_power=0.0, domain=None):
    return make_amplified(classical_spec(f), exponent, log_power,
                          domain=domain)


def _exponential(f, rate=1.0, domain=None):
    return make_exponential(classical_spec(f), rate, domain=domain)


def _delta(m=1, center=0.0, domain=None):
    return make_delta(m, center=center, domain=domain)


def _zero(domain=None):
    return zero_net(domain)


def _sum(operands):
    return net_algebra('add', *[build_net(op) for op in operands])


def _product(operands):
    if len(operands) != 2:
        raise ValueError("product takes two operands, got {}"
                         .format(len(operands)))
    return net_algebra('mul', build_net(operands[0]), build_net(operands[1]))


def _power(operand, p=2):
    return net_algebra('pow', build_net(operand), p)


def _derivative(operand, order=1):
    return net_algebra('derive', build_net(operand), order)


def _transport(nonlinearity, initial, t_end=1.5):
    problem = TransportProblem(nonlinearity, build_net(initial), t_end,
                               times=(t_end,))
    return solve_transport(problem)


def _blowup(s=0.5, t_end=2.0):
    return solve_blowup(BlowupProblem(s, t_end))


def _sum_law(kind='derivative', j=0, k=0, t_end=1.5):
    problem = SumLawProblem(sumlaw_profile(kind, j, -1.0),
                            sumlaw_profile(kind, k, 1.0), t_end)
    return solve_rauch_reed(problem)


# Term kinds drawn by random_net
_RANDOM_TERMS = ('heaviside', 'kink', 'delta', 'smooth')


def random_net(seed, size=2):
    """
    Sum of `size` singular or smooth terms at random lattice centres

    Centres are multiples of 1/8 in [-1/2, 1/2] so grids of step 1/8 see
    them exactly.
    """
    rng = numpy.random.default_rng(seed)
    terms = []
    for _ in range(int(size)):
        kind = _RANDOM_TERMS[rng.integers(len(_RANDOM_TERMS))]
        center = float(rng.integers(-4, 5))/8.0
        if kind == 'delta':
            terms.append(make_delta(int(rng.integers(1, 3)), center=center))
        elif kind == 'smooth':
            terms.append(embed_classical(smooth('gaussian', center=center)))
        else:
            terms.append(embed_classical(CLASSICAL_SPECS[kind](center)))
    return add_nets(*terms)


NET_CONSTRUCTORS = {
    'delta': _delta,
    'constant': _classical_net('constant'),
    'heaviside': _classical_net('heaviside'),
    'kink': _classical_net('kink'),
    'polynomial': _classical_net('polynomial'),
    'piecewise': _classical_net('piecewise'),
    'smooth': _classical_net('smooth'),
    'delta_derivative': _classical_net('delta_derivative'),
    'amplified': _amplified,
    'exponential': _exponential,
    'zero': _zero,
    'sum': _sum,
    'product': _product,
    'power': _power,
    'derivative': _derivative,
    'transport': _transport,
    'blowup': _blowup,
    'sum_law': _sum_law,
    'random': random_net,
}


def build_net(spec, params=None):
    """
    GeneralizedNet from a declarative spec

    Parameters
    ----------
    spec : str or dict
        Constructor name (with params given separately), 'name:k=v,...' or
        a record {constructor, params}.
    params : dict, optional

    Raises
    ------
    ValueError
        Unknown constructor or bad parameters.
    """
    if params is not None:
        record = {'constructor': spec, 'params': dict(params)}
    else:
        record = _as_record(spec)
    name = record['constructor']
    try:
        constructor = NET_CONSTRUCTORS[name]
    except KeyError:
        raise ValueError("Unknown net constructor '{}', choose from {}"
                         .format(name, sorted(NET_CONSTRUCTORS)))
    try:
        return constructor(**record['params'])
    except TypeError as err:
        raise ValueError("Bad parameters {} for net '{}': {}"
                         .format(record['params'], name, err))


def load_expectations(user_file=None):
    """
    Bundled expectations, overridden per case by the user's file

    Parameters
    ----------
    user_file : str, optional
        Defaults to USER_CONF_DIR/expectations.yml, if present.

    Returns
    -------
    expectations : dict
        {section: {case: entry}}.
    """
    with open(os.path.join(SHARE_DIR, EXPECTATIONS_FILE)) as expfp:
        expectations = yaml.safe_load(expfp)
    user_file = user_file or os.path.join(USER_CONF_DIR, EXPECTATIONS_FILE)
    try:
        with open(user_file) as expfp:
            overrides = yaml.safe_load(expfp) or {}
    except IOError:
        overrides = {}
    for section, cases in overrides.items():
        expectations.setdefault(section, {}).update(cases or {})
        _LOGGER.debug("User expectations override {}: {}".format(
            section, sorted(cases or {})))
    return expectations
