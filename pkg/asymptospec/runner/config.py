"""\
Run configuration files

A run config is a YAML (or JSON, by suffix) mapping:

    ladder:     {eps0: 0.0625, q: 0.5, count: 13}
    scale:      {kind: power}                # or {kind: gevrey, sigma: 2}
    net:        {constructor: delta, params: {m: 2}}
    analysis:   {kind: spectrum, topology: C0, points: [0.0]}
    tolerances: {radius: 0.15, relative: 0.1, n_cap: 64, m_cap: 16,
                 uniform: 0.25}
    output:     {dir: null, prefix: run}
    seed: null
    jobs: 1
    check: false

Only `analysis` is required. Analysis kinds are spectrum, wavefront,
classify and experiment; experiments are named by `analysis.name` and take
`analysis.params`.
"""
import copy
import json
import logging

import yaml

from .registry import NET_CONSTRUCTORS, parse_net_string
from ..analysis import M_CAP, N_CAP, RADIUS_TOL, UNIFORM_TOL
from ..analysis.classes import RegularitySequenceFamily
from ..analysis.topologies import TargetTopology
from ..nets import DEFAULT_COUNT, DEFAULT_EPS0, DEFAULT_Q
from ..nets.scales import EpsLadder, gevrey_scale, ladder_violations, \
    power_scale

_LOGGER = logging.getLogger(__name__)

ANALYSES = ('spectrum', 'wavefront', 'classify', 'experiment')
EXPERIMENT_NAMES = ('delta_powers', 'transport', 'blowup', 'strength',
                    'sum_law', 'amplified')

DEFAULTS = {
    'ladder': {'eps0': DEFAULT_EPS0, 'q': DEFAULT_Q, 'count': DEFAULT_COUNT},
    'scale': {'kind': 'power', 'sigma': None},
    'net': None,
    'analysis': {'kind': None, 'topology': 'C0', 'points': None,
                 'grid': None, 'box': None, 'family': 'bounded', 'l_max': 2,
                 'q_max': 4, 'name': None, 'params': {}},
    'tolerances': {'radius': RADIUS_TOL, 'relative': 0.1, 'n_cap': N_CAP,
                   'm_cap': M_CAP, 'uniform': UNIFORM_TOL},
    'output': {'dir': None, 'prefix': 'run'},
    'seed': None,
    'jobs': 1,
    'check': False,
}
SECTIONS = ('ladder', 'scale', 'analysis', 'tolerances', 'output')
UNIT_TOLERANCES = ('radius', 'relative', 'uniform')


def _syntax_error(path, err):
    mark = getattr(err, 'problem_mark', None)
    if mark is not None:
        return ValueError("{}:{}:{}: {}".format(path, mark.line+1,
                                                mark.column+1,
                                                getattr(err, 'problem', err)))
    if isinstance(err, json.JSONDecodeError):
        return ValueError("{}:{}:{}: {}".format(path, err.lineno, err.colno,
                                                err.msg))
    return ValueError("{}: {}".format(path, err))


def load_config_text(text, path='<string>'):
    """
    Raw mapping from YAML or JSON text

    Raises
    ------
    ValueError
        Syntax error, with line and column, or a non-mapping document.
    """
    try:
        if path.endswith('.json'):
            raw = json.loads(text)
        else:
            raw = yaml.safe_load(text)
    except (yaml.YAMLError, json.JSONDecodeError) as err:
        raise _syntax_error(path, err)
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ValueError("{}: config must be a mapping, got {}"
                         .format(path, type(raw).__name__))
    return raw


def normalize(raw):
    """
    Raw config merged onto DEFAULTS, without validation

    Unknown keys are kept so that validation can report them.
    """
    config = copy.deepcopy(DEFAULTS)
    for key, value in raw.items():
        if key in SECTIONS and isinstance(value, dict):
            config[key].update(value)
        elif key == 'net' and isinstance(value, str):
            constructor, params = parse_net_string(value)
            config['net'] = {'constructor': constructor, 'params': params}
        elif key == 'net' and isinstance(value, dict):
            config['net'] = {'constructor': value.get('constructor'),
                             'params': dict(value.get('params') or {})}
            config['net'].update({k: v for k, v in value.items()
                                  if k not in ('constructor', 'params')})
        else:
            config[key] = copy.deepcopy(value)
    analysis = config['analysis']
    if isinstance(analysis, dict) and analysis.get('params') is None:
        config['analysis']['params'] = {}
    return config


def _check_keys(config, violations):
    for key in config:
        if key not in DEFAULTS:
            violations.append("{}: unknown key".format(key))
    for section in SECTIONS:
        if not isinstance(config[section], dict):
            violations.append("{}: must be a mapping".format(section))
            continue
        for key in config[section]:
            if key not in DEFAULTS[section]:
                violations.append("{}.{}: unknown key".format(section, key))
    if isinstance(config['net'], dict):
        for key in config['net']:
            if key not in ('constructor', 'params'):
                violations.append("net.{}: unknown key".format(key))


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _check_ladder(ladder, violations):
    values = [ladder.get(key) for key in ('eps0', 'q', 'count')]
    for key, value in zip(('eps0', 'q', 'count'), values):
        if not _is_number(value):
            violations.append("ladder.{}: must be a number, got {!r}"
                              .format(key, value))
    if all(_is_number(v) for v in values):
        for err in ladder_violations(*values):
            key, _, msg = err.partition(' ')
            violations.append("ladder.{}: {}".format(key, msg))


def _check_scale(scale, violations):
    kind = scale.get('kind')
    if kind not in ('power', 'gevrey'):
        violations.append("scale.kind: must be power or gevrey, got {!r}"
                          .format(kind))
    elif kind == 'gevrey':
        sigma = scale.get('sigma')
        if not _is_number(sigma) or sigma <= 0.5:
            violations.append("scale.sigma: gevrey needs sigma > 1/2, got {!r}"
                              .format(sigma))


def _check_points(analysis, violations):
    points = analysis.get('points')
    grid = analysis.get('grid')
    if points is not None and grid is not None:
        violations.append("analysis.points: give points or grid, not both")
    if points is not None:
        if not isinstance(points, list) or not points:
            violations.append("analysis.points: must be a non-empty list")
    if grid is not None:
        if not isinstance(grid, dict) or set(grid) != {'lo', 'hi', 'num'}:
            violations.append("analysis.grid: must be {lo, hi, num}")
        elif not (_is_number(grid['lo']) and _is_number(grid['hi'])
                  and grid['lo'] < grid['hi'] and isinstance(grid['num'], int)
                  and grid['num'] >= 1):
            violations.append("analysis.grid: needs lo < hi and integer "
                              "num >= 1, got {}".format(grid))


def _check_analysis(config, violations):
    analysis = config['analysis']
    kind = analysis.get('kind')
    if kind is None:
        violations.append("analysis.kind: required, one of {}"
                          .format(', '.join(ANALYSES)))
        return
    if kind not in ANALYSES:
        violations.append("analysis.kind: unknown analysis {!r}, choose from "
                          "{}".format(kind, ', '.join(ANALYSES)))
        return
    if kind == 'experiment':
        if analysis.get('name') not in EXPERIMENT_NAMES:
            violations.append("analysis.name: unknown experiment {!r}, choose"
                              " from {}".format(analysis.get('name'),
                                                ', '.join(EXPERIMENT_NAMES)))
        if not isinstance(analysis.get('params'), dict):
            violations.append("analysis.params: must be a mapping")
        return
    net = config['net']
    if not isinstance(net, dict):
        violations.append("net: required for {} analysis".format(kind))
    elif net.get('constructor') not in NET_CONSTRUCTORS:
        violations.append("net.constructor: unknown constructor {!r}"
                          .format(net.get('constructor')))
    try:
        TargetTopology.from_string(str(analysis.get('topology')))
    except ValueError as err:
        violations.append("analysis.topology: {}".format(err))
    try:
        RegularitySequenceFamily.from_string(str(analysis.get('family')))
    except ValueError as err:
        violations.append("analysis.family: {}".format(err))
    for key in ('l_max', 'q_max'):
        value = analysis.get(key)
        if not isinstance(value, int) or isinstance(value, bool) \
                or value < 0:
            violations.append("analysis.{}: must be an integer >= 0, got {!r}"
                              .format(key, value))
    if kind == 'classify':
        box = analysis.get('box')
        if box is not None and (not isinstance(box, list) or len(box) != 2):
            violations.append("analysis.box: must be [lo, hi]")
    else:
        _check_points(analysis, violations)


def _check_tolerances(tolerances, violations):
    for key in UNIT_TOLERANCES:
        value = tolerances.get(key)
        if not _is_number(value) or not 0.0 < value < 1.0:
            violations.append("tolerances.{}: must lie in (0,1), got {!r}"
                              .format(key, value))
    for key in ('n_cap', 'm_cap'):
        value = tolerances.get(key)
        if not _is_number(value) or value <= 0:
            violations.append("tolerances.{}: must be positive, got {!r}"
                              .format(key, value))


def _check_run(config, violations):
    jobs = config['jobs']
    if not isinstance(jobs, int) or isinstance(jobs, bool) or jobs < 1:
        violations.append("jobs: must be an integer >= 1, got {!r}"
                          .format(jobs))
    seed = config['seed']
    if seed is not None and (not isinstance(seed, int) or seed < 0):
        violations.append("seed: must be a nonnegative integer, got {!r}"
                          .format(seed))
    if not isinstance(config['check'], bool):
        violations.append("check: must be true or false")
    prefix = config['output'].get('prefix')
    if not isinstance(prefix, str) or not prefix or '/' in prefix:
        violations.append("output.prefix: must be a plain name, got {!r}"
                          .format(prefix))


def config_violations(config):
    """All violations of a normalized config, each prefixed by key path."""
    violations = []
    _check_keys(config, violations)
    if any(not isinstance(config[s], dict) for s in SECTIONS):
        return violations
    _check_ladder(config['ladder'], violations)
    _check_scale(config['scale'], violations)
    _check_analysis(config, violations)
    _check_tolerances(config['tolerances'], violations)
    _check_run(config, violations)
    return violations


class RunConfig(object):
    """\
    Validated run configuration

    Attributes
    ----------
    data : dict
        Normalized config, every key present.
    source : str
        File or '<cli>' the config came from.
    """

    def __init__(self, data, source='<dict>'):
        self.data = data
        self.source = source

    def __getitem__(self, key):
        return self.data[key]

    def __repr__(self):
        return "RunConfig('{}', analysis={})".format(self.source,
                                                     self.analysis_kind)

    @property
    def analysis_kind(self):
        return self.data['analysis']['kind']

    @property
    def name(self):
        """Analysis kind, or the experiment name for experiments."""
        if self.analysis_kind == 'experiment':
            return self.data['analysis']['name']
        return self.analysis_kind

    @property
    def ladder(self):
        return EpsLadder(**self.data['ladder'])

    @property
    def scale(self):
        scale = self.data['scale']
        if scale['kind'] == 'gevrey':
            return gevrey_scale(scale['sigma'])
        return power_scale()

    @property
    def topology(self):
        return TargetTopology.from_string(str(self.data['analysis']['topology']))

    @property
    def family(self):
        return RegularitySequenceFamily.from_string(
            str(self.data['analysis']['family']))

    @property
    def points(self):
        """Grid points: floats in 1-D, (x, t) tuples for space-time nets."""
        analysis = self.data['analysis']
        if analysis['grid'] is not None:
            grid = analysis['grid']
            num = grid['num']
            if num == 1:
                return [float(grid['lo'])]
            step = (grid['hi'] - grid['lo'])/(num - 1)
            return [float(grid['lo'] + i*step) for i in range(num)]
        if analysis['points'] is not None:
            return [tuple(float(c) for c in p) if isinstance(p, list)
                    else float(p) for p in analysis['points']]
        return [0.0]

    def as_dict(self):
        return copy.deepcopy(self.data)


def config_from_dict(raw, source='<dict>'):
    """
    Validate a raw mapping

    Raises
    ------
    ValueError
        Listing every violation, one per line.
    """
    config = normalize(raw)
    violations = config_violations(config)
    if violations:
        raise ValueError("Invalid config {}:\n  {}".format(
            source, '\n  '.join(violations)))
    return RunConfig(config, source)


def parse_config(path):
    """
    Read and validate a run config file

    Parameters
    ----------
    path : str
        YAML file, or JSON when it ends with '.json'.

    Returns
    -------
    config : RunConfig

    Raises
    ------
    ValueError
        Syntax error with line and column, or all validation violations.
    OSError
        File cannot be read.
    """
    with open(path) as cfgfp:
        text = cfgfp.read()
    config = config_from_dict(load_config_text(text, path), path)
    _LOGGER.debug("Parsed {!r}".format(config))
    return config


def dump_config(config):
    """Normalized config as YAML text with sorted keys."""
    data = config.as_dict() if isinstance(config, RunConfig) else config
    return yaml.safe_dump(data, default_flow_style=False, sort_keys=True)
