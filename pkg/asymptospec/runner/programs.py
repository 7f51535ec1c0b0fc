"""\
Programs behind the runner verbs

Each program takes a RunConfig and the expectation registry and returns a
ResultRecord; nothing is written here.
"""
import logging

import numpy

from .records import ResultRecord
from .registry import build_net, classical_spec, net_key
from ..analysis.classes import (classify, irregular_points, is_moderate,
                                is_negligible)
from ..analysis.frequential import (frequential_ladder, rRL_microlocal_test,
                                    wavefront_estimate)
from ..analysis.spectrum import (check_nonlinear_bounds, singular_spectrum,
                                 singular_support, test_convergence)
from ..analysis.topologies import TargetTopology
from ..experiments.amplified import amplified_table
from ..experiments.blowup import (BlowupProblem, blowup_regions, rk4_blowup,
                                  solve_blowup)
from ..experiments.deltapowers import delta_power_wavefronts, run_delta_powers
from ..experiments.strength import strength_table
from ..experiments.sumlaw import sum_law_table
from ..experiments.transport import (TransportProblem, log_growth_table,
                                     transport_fibers)
from ..nets.generalized import DomainBox, restrict
from ..nets.mollifiers import DEFAULT_MOLLIFIER
from ..nets.scales import EpsLadder
from ..nets.seminorms import seminorm

_LOGGER = logging.getLogger(__name__)

# Neighbourhood half-width for fixed-r convergence tests
PROBE_HALFWIDTH = 0.125
BLOWUP_PROBE = (0.5, 0.5)
BLOWUP_VALUE_TOL = 1e-3


def _params(params, defaults, name):
    """Experiment parameters over defaults; unknown keys are an error."""
    unknown = sorted(set(params) - set(defaults))
    if unknown:
        raise ValueError("Unknown parameters {} for {}, expected {}"
                         .format(unknown, name, sorted(defaults)))
    return {**defaults, **params}


def _radius_ok(radius, expected, tolerance):
    if expected is None:
        return radius is None
    return radius is not None and abs(radius - expected) <= tolerance


def _as_list(point):
    return list(point) if isinstance(point, tuple) else [point]


def _checks_from_rows(name, rows, keys):
    """One check per row carrying a 'pass' flag."""
    checks = []
    for row in rows:
        if 'pass' not in row:
            continue
        case = ' '.join('{}={}'.format(key, row[key]) for key in keys)
        checks.append({'case': '{} {}'.format(name, case),
                       'pass': bool(row['pass'])})
    return checks


def _cases(entry):
    return entry if isinstance(entry, list) else [entry]


# Analyses

def _spectrum_checks(config, result, key, expectations):
    tolerance = config['tolerances']['radius']
    case = '{}/{}'.format(key, result.topology.name)
    checks = []
    for entry in _cases(expectations.get('spectrum', {}).get(case, [])):
        point = entry.get('point', 0.0)
        try:
            spt = result.at(point)
        except KeyError:
            continue
        ok = _radius_ok(spt.radius, entry.get('radius'),
                        entry.get('tolerance', tolerance))
        if ok and entry.get('endpoint'):
            ok = spt.fiber_endpoint == entry['endpoint']
        checks.append({'case': '{} at {}'.format(case, point),
                       'expected': entry.get('radius'),
                       'endpoint': entry.get('endpoint'),
                       'radius': spt.radius,
                       'fiber_endpoint': spt.fiber_endpoint, 'pass': ok})
    return checks


def _fixed_r_rows(config, net, points, r):
    rows = []
    for point in points:
        vbox = net.domain.neighbourhood(point, PROBE_HALFWIDTH)
        verdict = test_convergence(net, config.scale, r, vbox,
                                   config.topology, config.ladder)
        rows.append({'point': _as_list(point), 'r': r,
                     'status': verdict.status,
                     'limit_norm': verdict.limit_norm})
    return rows


def run_spectrum(config, expectations):
    """
    Singular spectrum on the config points

    analysis.params: r (test convergence at one exponent only), against (a
    second net whose product and powers are checked against the radius
    bounds) and powers.
    """
    params = _params(config['analysis']['params'],
                     {'r': None, 'against': None, 'powers': [2]}, 'spectrum')
    net = build_net(config['net'])
    key = net_key(config['net']['constructor'], config['net']['params'])
    points = config.points
    if params['r'] is not None:
        rows = _fixed_r_rows(config, net, points, float(params['r']))
        return ResultRecord(config.as_dict(), 'spectrum', rows)
    if params['against'] is not None:
        report = check_nonlinear_bounds(
            net, build_net(params['against']), config.scale, points,
            config.topology, params['powers'], config.ladder,
            config['tolerances']['radius'], config['jobs'])
        checks = [{'case': '{} {} at {}'.format(row['relation'], row['case'],
                                                row['point']),
                   'pass': row['ok']} for row in report]
        return ResultRecord(config.as_dict(), 'spectrum', report,
                            checks=checks)
    result = singular_spectrum(net, config.scale, points, config.topology,
                               config.ladder, jobs=config['jobs'])
    rows = []
    for spt in result:
        base = spt.as_row()
        if not spt.samples:
            rows.append({**base, 'r': None, 'status': None,
                         'in_fiber': None})
        for r, status in spt.samples:
            rows.append({**base, 'r': r, 'status': status,
                         'in_fiber': spt.contains(r)})
    summary = result.as_dict()
    summary['singular_support'] = [list(p) for p in result.singular_support()]
    summary['monotone_violations'] = {
        str(list(spt.point)): spt.monotone_violations()
        for spt in result if spt.monotone_violations()}
    checks = _spectrum_checks(config, result, key, expectations)
    support = singular_support(net, config.scale, points, config.topology,
                               config.ladder, jobs=config['jobs'])
    checks.append({'case': 'spectrum projection {}'.format(key),
                   'pass': support == result.singular_support()})
    return ResultRecord(config.as_dict(), 'spectrum', rows, summary, checks)


def _within_cell(found, reference, cell):
    return all(any(abs(a - b) <= cell + 1e-12 for b in reference)
               for a in found)


def run_wavefront(config, expectations):
    """
    Frequential wave front on the config points of a 1-D net

    analysis.params: ladder ('eps0,q,count', the frequential ladder by
    default), compare_support (check the projection against the windowed
    G-infinity support) and rrl ({direction, L, k_max}, run the
    cutoff-sequence test at every point).
    """
    params = _params(config['analysis']['params'],
                     {'ladder': None, 'compare_support': True, 'rrl': None},
                     'wavefront')
    net = build_net(config['net'])
    key = net_key(config['net']['constructor'], config['net']['params'])
    ladder = EpsLadder.from_string(params['ladder']) if params['ladder'] \
        else frequential_ladder()
    points = [float(p) for p in config.points]
    estimate = wavefront_estimate(net, points, ladder, config.family,
                                  config['analysis']['q_max'],
                                  jobs=config['jobs'])
    summary = {'net': estimate.label, 'family': estimate.family,
               'ladder': ladder.as_dict(),
               'singular': [list(p) for p in estimate.singular],
               'unknown': [list(p) for p in estimate.unknown],
               'projection': estimate.projection()}
    checks = []
    if params['compare_support']:
        support = irregular_points(net, points, ladder=config.ladder)
        cell = float(numpy.min(numpy.diff(sorted(points)))) \
            if len(points) > 1 else 0.0
        match = (_within_cell(estimate.projection(), support, cell)
                 and _within_cell(support, estimate.projection(), cell))
        summary['g_infinity_support'] = support
        checks.append({'case': 'wavefront projection {}'.format(key),
                       'pass': bool(match)})
    if params['rrl'] is not None:
        rrl = _params(params['rrl'], {'direction': 1, 'L': 'analytic',
                                      'k_max': 6}, 'rrl')
        summary['rrl'] = {
            str(x0): rRL_microlocal_test(net, x0, rrl['direction'], rrl['L'],
                                         config.family, rrl['k_max']
                                         ).as_dict()
            for x0 in points}
    entry = expectations.get('wavefront', {}).get(key)
    if entry is not None:
        expected = sorted((float(x), int(d)) for x, d in entry['singular']
                          if float(x) in points)
        checks.append({'case': 'wavefront {}'.format(key),
                       'expected': [list(p) for p in expected],
                       'pass': estimate.singular == expected})
    return ResultRecord(config.as_dict(), 'wavefront', estimate.rows(),
                        summary, checks)


def run_classify(config, expectations):
    """Regularity classes of the net on analysis.box (its domain by default)."""
    net = build_net(config['net'])
    key = net_key(config['net']['constructor'], config['net']['params'])
    analysis = config['analysis']
    tol = config['tolerances']
    box = analysis['box'] or [net.domain.lo[0], net.domain.hi[0]]
    if box != [net.domain.lo[0], net.domain.hi[0]]:
        net = restrict(net, DomainBox(*box))
    l_max = min(analysis['l_max'], net.max_order)
    ladder = config.ladder
    verdict = classify(net, net.domain, l_max, config.family, ladder,
                       tol['n_cap'], tol['m_cap'], tol['uniform'])
    moderate, orders = is_moderate(net, net.domain, l_max, ladder,
                                   tol['n_cap'])
    negligible = is_negligible(net, net.domain, l_max, ladder, tol['m_cap'])
    rows = [{'order': lev, 'exponent': float(expo), 'rounded': orders[lev],
             'seminorm_mid': seminorm(net, net.domain, lev, ladder.midpoint)}
            for lev, expo in enumerate(verdict.exponents)]
    summary = verdict.as_dict()
    summary['chain_violations'] = verdict.chain_violations()
    checks = [{'case': 'classify chain {}'.format(key),
               'pass': not verdict.chain_violations()},
              {'case': 'classify quantifiers {}'.format(key),
               'pass': (moderate == verdict.moderate
                        and negligible == verdict.negligible)}]
    entry = expectations.get('classify', {}).get(key, {})
    for flag, expected in sorted(entry.items()):
        checks.append({'case': 'classify {} {}'.format(key, flag),
                       'expected': expected,
                       'pass': getattr(verdict, flag) == expected})
    return ResultRecord(config.as_dict(), 'classify', rows, summary, checks)


# Experiments

def _delta_powers(config, params, expectations):
    params = _params(params, {'m_list': [1, 2, 3], 'p_list': [0, 1],
                              'topologies': ["Dprime"], 'wavefront': True},
                     'delta_powers')
    rows = run_delta_powers(params['m_list'], params['p_list'],
                            params['topologies'], config.ladder,
                            config['tolerances']['radius'])
    summary = {}
    checks = _checks_from_rows('delta_powers', rows, ('m', 'topology'))
    if params['wavefront']:
        fronts = delta_power_wavefronts(params['m_list'])
        summary['wavefronts'] = fronts
        checks.append({'case': 'delta_powers wavefront independent of m',
                       'pass': all(row['same_as_first'] for row in fronts)})
    return rows, summary, checks


def _amplified(config, params, expectations):
    params = _params(params, {'f': 'smooth:name=cos', 'points': [0.0, 0.5],
                              'topologies': ['C0', 'C1']}, 'amplified')
    rows = amplified_table(classical_spec(params['f']), params['points'],
                           params['topologies'], config.ladder)
    return rows, {}, _checks_from_rows('amplified', rows,
                                       ('net', 'topology', 'x'))


def _transport(config, params, expectations):
    params = _params(params, {'nonlinearity': 'dissipative',
                              'initial': 'delta:m=2',
                              'times': [0.25, 0.5, 1.0], 'xs': [0.0, 0.5],
                              'topology': 'Dprime', 'm_values': [1, 2]},
                     'transport')
    ladder = config.ladder
    times = tuple(float(t) for t in params['times'])
    if params['nonlinearity'] == 'log_growth':
        rows = log_growth_table(params['m_values'], times, ladder)
        relative = config['tolerances']['relative']
        for row in rows:
            row['pass'] = bool(row['rel_error'] <= relative)
        return rows, {}, _checks_from_rows('transport', rows, ('m', 't'))
    initial = build_net(params['initial'])
    problem = TransportProblem(params['nonlinearity'], initial,
                               max(times) + 0.5, times)
    grid = [(float(x), t) for x in params['xs'] for t in times]
    rows = transport_fibers(problem, grid,
                            TargetTopology.from_string(params['topology']),
                            ladder)
    case = '{}/{}'.format(params['nonlinearity'], params['initial'])
    entry = expectations.get('experiments', {}).get('transport', {}).get(case)
    if entry is not None:
        tolerance = config['tolerances']['radius']
        for row in rows:
            if row['x'] != 0.0:
                expected = None
            elif row['t'] == 0.0:
                expected = entry.get('data')
            else:
                expected = entry.get('solution')
            row['expected'] = expected
            row['pass'] = _radius_ok(row['radius'], expected, tolerance)
    summary = {'nonlinearity': problem.nonlinearity,
               'initial': initial.label, 't_end': problem.t_end}
    return rows, summary, _checks_from_rows('transport', rows, ('x', 't'))


def _blowup(config, params, expectations):
    params = _params(params, {'s': 0.5, 't_end': 2.0}, 'blowup')
    entry = expectations.get('experiments', {}).get('blowup', {})
    s1_max = entry.get('s1_max', 0.1)
    tolerance = config['tolerances']['radius']
    problem = BlowupProblem(params['s'], params['t_end'])
    ladder = config.ladder
    rows = blowup_regions(problem, ladder)
    for row in rows:
        radius = row['radius']
        if row['region'] == 'S1':
            row['pass'] = radius is not None and radius <= s1_max
        else:
            row['pass'] = _radius_ok(radius, row['expected'], tolerance)
    eps = ladder.midpoint
    x, t = BLOWUP_PROBE
    value = float(solve_blowup(problem).evaluate([[x, t]], eps)[0])
    y0 = DEFAULT_MOLLIFIER.cumulative(numpy.array([x/eps]))
    path = float(rk4_blowup(problem, eps, y0, t)[0])
    exact = 1.0/(1.0 - t)
    summary = {'problem': problem.as_dict(),
               'cutoff_violations': int(problem.cutoff_violations(eps).size),
               'probe': {'x': x, 't': t, 'eps': float(eps), 'value': value,
                         'rk4': path, 'exact': exact}}
    checks = _checks_from_rows('blowup', rows, ('region', 'x', 't'))
    checks.append({'case': 'blowup value at {}'.format(BLOWUP_PROBE),
                   'pass': abs(value - exact) <= BLOWUP_VALUE_TOL*exact
                   and abs(path - exact) <= BLOWUP_VALUE_TOL*exact})
    checks.append({'case': 'blowup cutoff bounds',
                   'pass': summary['cutoff_violations'] == 0})
    return rows, summary, checks


def _strength(config, params, expectations):
    params = _params(params, {'cases': [['heaviside', 1], ['kink', 0],
                                        ['delta_derivative:k=0', 2],
                                        ['delta_derivative:k=1', 3]],
                              'x0': 0.0}, 'strength')
    specs = [(classical_spec(spec), float(params['x0']), int(expected))
             for spec, expected in params['cases']]
    rows = strength_table(specs, config.ladder)
    return rows, {}, _checks_from_rows('strength', rows, ('net',))


def _sum_law(config, params, expectations):
    params = _params(params, {'pairs': [[0, 0], [0, 1], [1, 0], [1, 1]],
                              'power_pairs': [[1, 1]]}, 'sum_law')
    ladder = config.ladder
    entry = expectations.get('experiments', {}).get('sum_law', {})
    strength_tol = entry.get('tolerance', 0.2)
    rows = sum_law_table([tuple(p) for p in params['pairs']], 'derivative',
                         ladder=ladder)
    for row in rows:
        row['pass'] = _radius_ok(row['radius'], row['expected'], strength_tol)
    if params['power_pairs']:
        power_rows = sum_law_table([tuple(p) for p in params['power_pairs']],
                                   'power', ladder=ladder)
        bound_tol = config['tolerances']['radius']
        for row in power_rows:
            row['pass'] = (row['radius'] is None
                           or row['radius'] <= row['expected'] + bound_tol)
        rows.extend(power_rows)
    return rows, {}, _checks_from_rows('sum_law', rows, ('kind', 'j', 'k'))


EXPERIMENTS = {
    'delta_powers': _delta_powers,
    'amplified': _amplified,
    'transport': _transport,
    'blowup': _blowup,
    'strength': _strength,
    'sum_law': _sum_law,
}


def run_experiment(config, expectations):
    name = config['analysis']['name']
    _LOGGER.info("Experiment {} with {}".format(
        name, config['analysis']['params']))
    rows, summary, checks = EXPERIMENTS[name](
        config, config['analysis']['params'], expectations)
    return ResultRecord(config.as_dict(), name, rows, summary, checks)


PROGRAMS = {
    'spectrum': run_spectrum,
    'wavefront': run_wavefront,
    'classify': run_classify,
    'experiment': run_experiment,
}

# Library operations each verb reaches
VERB_OPERATIONS = {
    'spectrum': ['make_delta', 'embed_classical', 'net_algebra', 'restrict',
                 'test_convergence', 'critical_exponent', 'singular_support',
                 'singular_spectrum', 'check_nonlinear_bounds'],
    'wavefront': ['windowed_fourier', 'cone_decay_classify',
                  'wavefront_estimate', 'rRL_microlocal_test', 'classify'],
    'classify': ['restrict', 'seminorm', 'fit_valuation', 'is_moderate',
                 'is_negligible', 'classify'],
    'experiment': ['run_delta_powers', 'solve_transport', 'solve_blowup',
                   'strength_of_singularity', 'solve_rauch_reed'],
    'check-all': ['parse_config', 'run'],
    'registry': [],
}


def execute(config, expectations):
    """Run the program for the config's analysis kind."""
    return PROGRAMS[config.analysis_kind](config, expectations)
