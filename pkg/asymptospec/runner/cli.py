"""\
Command-line runner: asymptospec <verb> [options]

Exit codes: 0 on success, 2 when --check finds failing expectations, 1 on
errors.
"""
import argparse
import glob
import logging
import os
import sys

import yaml

from . import SHARE_DIR, default_out_dir
from .config import EXPERIMENT_NAMES, config_from_dict, load_config_text
from .programs import EXPERIMENTS, VERB_OPERATIONS, execute
from .registry import NET_CONSTRUCTORS, load_expectations, parse_net_string

_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2
EXAMPLES_DIR = os.path.join(SHARE_DIR, 'examples')


def _ladder_record(ladderstr):
    """
    Ladder section from 'eps0,q,count'

    Range checks are left to config validation.

    >>> from asymptospec.runner.cli import _ladder_record
    >>> _ladder_record('0.5,0.5,10')
    {'eps0': 0.5, 'q': 0.5, 'count': 10}
    """
    try:
        eps0, q, count = ladderstr.split(',')
        return {'eps0': float(eps0), 'q': float(q), 'count': int(count)}
    except ValueError:
        raise ValueError("--ladder '{}' must be 'eps0,q,count'"
                         .format(ladderstr))


def _scale_record(scalestr):
    """
    Scale section from 'power' or 'gevrey:sigma'

    >>> from asymptospec.runner.cli import _scale_record
    >>> _scale_record('gevrey:2')
    {'kind': 'gevrey', 'sigma': 2.0}
    """
    kind, _, sigma = scalestr.partition(':')
    if not sigma:
        return {'kind': kind, 'sigma': None}
    try:
        return {'kind': kind, 'sigma': float(sigma)}
    except ValueError:
        raise ValueError("--scale '{}' must be power or gevrey:sigma"
                         .format(scalestr))


def _floats(liststr):
    try:
        return [float(v) for v in liststr.split(',')]
    except ValueError:
        raise ValueError("Expected comma-separated numbers, got '{}'"
                         .format(liststr))


def _update(raw, section, key, value):
    if value is not None:
        raw.setdefault(section, {})[key] = value


def raw_from_args(args):
    """Raw config mapping: --config file overlaid with command-line flags."""
    if args.config:
        with open(args.config) as cfgfp:
            raw = load_config_text(cfgfp.read(), args.config)
    else:
        raw = {}
    analysis = raw.setdefault('analysis', {})
    if not isinstance(analysis, dict):
        raise ValueError("{}: analysis must be a mapping".format(args.config))
    analysis['kind'] = args.verb
    if args.verb == 'experiment':
        analysis['name'] = args.name
        params = analysis.setdefault('params', None) or {}
        for item in args.param or []:
            key, sep, value = item.partition('=')
            if not sep:
                raise ValueError("--param '{}' must be key=value"
                                 .format(item))
            params[key.strip()] = yaml.safe_load(value)
        if args.s is not None:
            params['s'] = args.s
        analysis['params'] = params
    if getattr(args, 'net', None):
        constructor, params = parse_net_string(args.net)
        raw['net'] = {'constructor': constructor, 'params': params}
    _update(raw, 'analysis', 'topology', getattr(args, 'topology', None))
    _update(raw, 'analysis', 'family', getattr(args, 'family', None))
    _update(raw, 'analysis', 'q_max', getattr(args, 'q_max', None))
    _update(raw, 'analysis', 'l_max', getattr(args, 'l_max', None))
    if getattr(args, 'points', None):
        analysis['points'] = _floats(args.points)
        analysis['grid'] = None
    if getattr(args, 'box', None):
        analysis['box'] = _floats(args.box)
    if args.ladder:
        raw['ladder'] = _ladder_record(args.ladder)
    if args.scale:
        raw['scale'] = _scale_record(args.scale)
    if args.seed is not None:
        raw['seed'] = args.seed
    if args.jobs is not None:
        raw['jobs'] = args.jobs
    if args.check:
        raw['check'] = True
    return raw


def _seed_random_net(raw):
    net = raw.get('net')
    if isinstance(net, dict) and net.get('constructor') == 'random':
        params = net.setdefault('params', {})
        if 'seed' not in params:
            params['seed'] = raw.get('seed') or 0


def out_dir(config, override=None):
    """--out, else the config's output.dir, else default_out_dir()."""
    return override or config['output']['dir'] or default_out_dir()


def run(config, outdir=None, expectations=None):
    """
    Execute a validated config and write its record

    Parameters
    ----------
    config : RunConfig
    outdir : str, optional
        Overrides the config's output directory.
    expectations : dict, optional
        Defaults to the bundled registry with user overrides.

    Returns
    -------
    record : ResultRecord
        With `rundir` set to the directory written.
    """
    if expectations is None:
        expectations = load_expectations()
    record = execute(config, expectations)
    record.write(out_dir(config, outdir), config['output']['prefix'])
    return record


def _exit_code(record, check=True):
    if not check or record.passed:
        return EXIT_OK
    for failure in record.failures:
        _LOGGER.warning("Expectation failed: {}".format(failure['case']))
    return EXIT_FAILED


def run_verb(args):
    raw = raw_from_args(args)
    _seed_random_net(raw)
    config = config_from_dict(raw, args.config or '<cli>')
    record = run(config, args.out)
    _LOGGER.info("{} done: {} rows, {} of {} checks failed".format(
        record.name, len(record.rows), len(record.failures),
        len(record.checks)))
    return _exit_code(record, config['check'])


def check_all(args):
    """Run every bundled example config with --check; worst exit code wins."""
    expectations = load_expectations()
    code = EXIT_OK
    for path in sorted(glob.glob(os.path.join(EXAMPLES_DIR, '*.yml'))):
        with open(path) as cfgfp:
            raw = load_config_text(cfgfp.read(), path)
        raw['check'] = True
        if args.jobs is not None:
            raw['jobs'] = args.jobs
        if args.ladder:
            raw['ladder'] = _ladder_record(args.ladder)
        config = config_from_dict(raw, path)
        _LOGGER.info("check-all: {}".format(os.path.basename(path)))
        record = run(config, args.out, expectations)
        code = max(code, _exit_code(record))
    return code


def show_registry(args):
    print(yaml.safe_dump({'verbs': VERB_OPERATIONS,
                          'experiments': sorted(EXPERIMENTS),
                          'nets': sorted(NET_CONSTRUCTORS)},
                         default_flow_style=False, sort_keys=True), end='')
    return EXIT_OK


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="Run config, YAML or .json")
    common.add_argument('--out', help="Output directory "
                        "(default: $ASYMPTOSPEC_OUT or the user data dir)")
    common.add_argument('--ladder', help="eps ladder 'eps0,q,count'")
    common.add_argument('--scale', help="Asymptotic scale: power|gevrey:sigma")
    common.add_argument('--seed', type=int, help="Seed for random nets")
    common.add_argument('--jobs', type=int, help="Worker threads")
    common.add_argument('--check', action='store_true',
                        help="Grade against bundled expectations")
    common.add_argument('-v', '--verbose', action='store_true',
                        help="Debug logging")
    return common


def build_parser():
    common = _common_parser()
    cmdln_prsr = argparse.ArgumentParser(
        prog='asymptospec',
        description="Asymptotic spectra of generalized functions")
    subparsers = cmdln_prsr.add_subparsers(dest='verb', help='sub-command help')
    subparsers.required = True

    parser_spec = subparsers.add_parser('spectrum', parents=[common],
                                        help='Singular parametric spectrum')
    parser_spec.set_defaults(func=run_verb)
    parser_spec.add_argument('--net', help="Net 'name:key=value,...'")
    parser_spec.add_argument('--topology', help="C0, C1, Cp:p or Dprime")
    parser_spec.add_argument('--points', help="Comma-separated points")

    parser_wf = subparsers.add_parser('wavefront', parents=[common],
                                      help='Generalized wave front set')
    parser_wf.set_defaults(func=run_verb)
    parser_wf.add_argument('--net', help="Net 'name:key=value,...'")
    parser_wf.add_argument('--points', help="Comma-separated points")
    parser_wf.add_argument('--family', help="bounded, all or affine:a,b")
    parser_wf.add_argument('--q-max', type=int, dest='q_max',
                           help="Highest decay order tested")

    parser_cls = subparsers.add_parser('classify', parents=[common],
                                       help='Regularity class membership')
    parser_cls.set_defaults(func=run_verb)
    parser_cls.add_argument('--net', help="Net 'name:key=value,...'")
    parser_cls.add_argument('--box', help="Box 'lo,hi'")
    parser_cls.add_argument('--l-max', type=int, dest='l_max',
                            help="Highest derivative order")
    parser_cls.add_argument('--family', help="bounded, all or affine:a,b")

    parser_exp = subparsers.add_parser('experiment', parents=[common],
                                       help='Worked example')
    parser_exp.set_defaults(func=run_verb)
    parser_exp.add_argument('name', choices=EXPERIMENT_NAMES,
                            help="Experiment name")
    parser_exp.add_argument('--param', action='append',
                            help="Experiment parameter key=value")
    parser_exp.add_argument('--s', type=float,
                            help="Blow-up cutoff exponent")

    parser_all = subparsers.add_parser('check-all', parents=[common],
                                       help='Run and grade bundled examples')
    parser_all.set_defaults(func=check_all)

    parser_reg = subparsers.add_parser('registry', parents=[common],
                                       help='List verbs, nets, experiments')
    parser_reg.set_defaults(func=show_registry)
    return cmdln_prsr


def main_cli(argv=None):
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger('asymptospec').setLevel(logging.DEBUG)
    try:
        return args.func(args)
    except (RuntimeError, ValueError, OSError) as err:
        _LOGGER.error("{}: {}".format(args.verb, err))
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main_cli())
