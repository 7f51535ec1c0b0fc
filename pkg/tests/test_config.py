import glob
import os

import pytest
import yaml

from asymptospec.nets.scales import EpsLadder
from asymptospec.runner.cli import EXAMPLES_DIR
from asymptospec.runner.config import (DEFAULTS, config_from_dict,
                                       dump_config, load_config_text,
                                       normalize, parse_config)

SPECTRUM = {'net': 'delta:m=2', 'analysis': {'kind': 'spectrum'}}


def test_only_analysis_is_required():
    config = config_from_dict({'analysis': {'kind': 'experiment',
                                            'name': 'blowup'}})
    assert config.name == 'blowup'
    assert config.ladder == EpsLadder()
    assert config['jobs'] == 1 and config['check'] is False
    assert config['analysis']['params'] == {}


def test_missing_analysis_kind():
    with pytest.raises(ValueError, match='analysis.kind: required'):
        config_from_dict({})


def test_net_string_is_normalized():
    config = config_from_dict(SPECTRUM)
    assert config['net'] == {'constructor': 'delta', 'params': {'m': 2}}
    assert config.topology.name == 'C0'
    assert config.points == [0.0]


def test_every_violation_is_reported():
    raw = {'analysis': {'kind': 'spectrum', 'topology': 'L2', 'colour': 1},
           'ladder': {'eps0': 2.0}, 'jobs': 0, 'bogus': 1,
           'tolerances': {'radius': 1.5}, 'output': {'prefix': 'a/b'}}
    with pytest.raises(ValueError) as err:
        config_from_dict(raw, 'bad.yml')
    msg = str(err.value)
    assert msg.startswith('Invalid config bad.yml')
    for path in ('bogus: unknown key', 'analysis.colour: unknown key',
                 'ladder.eps0', 'analysis.topology', 'net: required',
                 'jobs:', 'tolerances.radius', 'output.prefix'):
        assert path in msg


def test_unknown_net_constructor():
    with pytest.raises(ValueError, match='net.constructor'):
        config_from_dict({'net': 'nosuch', 'analysis': {'kind': 'classify'}})


def test_unknown_experiment():
    with pytest.raises(ValueError, match='unknown experiment'):
        config_from_dict({'analysis': {'kind': 'experiment',
                                       'name': 'heat'}})


def test_gevrey_scale_needs_sigma_above_half():
    raw = dict(SPECTRUM, scale={'kind': 'gevrey', 'sigma': 0.5})
    with pytest.raises(ValueError, match='scale.sigma'):
        config_from_dict(raw)
    raw['scale']['sigma'] = 2
    assert config_from_dict(raw).scale.kind == 'gevrey'


def test_grid_points():
    raw = {'net': 'delta:m=1',
           'analysis': {'kind': 'wavefront',
                        'grid': {'lo': -0.5, 'hi': 0.5, 'num': 5}}}
    assert config_from_dict(raw).points == [-0.5, -0.25, 0.0, 0.25, 0.5]
    raw['analysis']['points'] = [0.0]
    with pytest.raises(ValueError, match='points or grid'):
        config_from_dict(raw)


def test_space_time_points():
    raw = {'net': {'constructor': 'blowup'},
           'analysis': {'kind': 'spectrum', 'points': [[0.0, 0.5], 0.25]}}
    assert config_from_dict(raw).points == [(0.0, 0.5), 0.25]


def test_yaml_syntax_error_has_position():
    with pytest.raises(ValueError, match=r'^run\.yml:\d+:\d+:'):
        load_config_text('analysis:\n  kind: [spectrum\n', 'run.yml')


def test_json_syntax_error_has_position():
    with pytest.raises(ValueError, match=r'^run\.json:1:\d+:'):
        load_config_text('{"analysis": }', 'run.json')


def test_document_must_be_a_mapping():
    with pytest.raises(ValueError, match='must be a mapping'):
        load_config_text('- 1\n- 2\n')
    assert load_config_text('') == {}


def test_normalize_keeps_defaults_intact():
    normalize({'ladder': {'count': 20}})
    assert DEFAULTS['ladder']['count'] != 20


def test_parse_config_and_dump(tmp_path):
    path = tmp_path/'run.yml'
    path.write_text(yaml.safe_dump(SPECTRUM))
    config = parse_config(str(path))
    assert config.source == str(path)
    dumped = yaml.safe_load(dump_config(config))
    assert dumped == config.as_dict()
    assert config_from_dict(dumped).as_dict() == config.as_dict()


def test_parse_json_config(tmp_path):
    path = tmp_path/'run.json'
    path.write_text('{"net": "heaviside", "analysis": {"kind": "classify"}}')
    assert parse_config(str(path))['net']['constructor'] == 'heaviside'


def test_missing_file():
    with pytest.raises(OSError):
        parse_config('/nonexistent/run.yml')


@pytest.mark.parametrize(
    'path', sorted(glob.glob(os.path.join(EXAMPLES_DIR, '*.yml'))),
    ids=os.path.basename)
def test_bundled_examples_are_valid(path):
    config = parse_config(path)
    assert config['output']['prefix'].startswith('example')
