import datetime
import json
import math

import h5py
import numpy
import pytest

from asymptospec.runner import DATETIMESTRFMT
from asymptospec.runner.records import (PLOTDATA_FILE, SUMMARY_FILE,
                                        TABLE_FILE, ResultRecord, _cell,
                                        _jsonable, table_frame)

ROWS = [
    {'point': [0.5], 'radius': None, 'status': 'diverges', 'pass': True},
    {'point': [0.0], 'radius': 2.0000000000001, 'status': 'converges-to-zero',
     'pass': False},
]


@pytest.mark.parametrize('value, cell', [
    (None, ''),
    ([0.0, 1.0], '0;1'),
    ((0.25, 'x'), '0.25;x'),
    (numpy.float64(1.0/3.0), '0.3333333333'),
    (numpy.int64(4), 4),
    (numpy.bool_(True), True),
    ('open', 'open'),
])
def test_cells(value, cell):
    assert _cell(value) == cell


def test_table_keeps_row_order():
    rows = [{'a': 1, 'b': 'x'}, {'a': 0}, {'a': 1, 'b': 'z'}]
    frame = table_frame(rows)
    assert frame['a'].tolist() == [1, 0, 1]
    assert frame['b'].tolist() == ['x', '', 'z']


def test_created_is_utc():
    record = ResultRecord({}, 'spectrum', ROWS)
    created = datetime.datetime.strptime(record.created, DATETIMESTRFMT)
    now = datetime.datetime.now(datetime.timezone.utc).replace(tzinfo=None)
    assert abs((now - created).total_seconds()) < 60


def test_json_friendly_values():
    record = _jsonable({'r': numpy.inf, 'v': numpy.arange(2),
                        1: (numpy.bool_(False),)})
    assert record == {'r': 'inf', 'v': [0, 1], '1': [False]}
    json.dumps(record)


def test_failures_and_repr():
    checks = [{'case': 'a', 'pass': True}, {'case': 'b', 'pass': False}]
    record = ResultRecord({}, 'spectrum', ROWS, checks=checks)
    assert not record.passed
    assert [chk['case'] for chk in record.failures] == ['b']
    assert repr(record) == "ResultRecord('spectrum', rows=2, failed=1)"
    assert ResultRecord({}, 'spectrum', ROWS).passed


def test_write_outputs(tmp_path):
    checks = [{'case': 'a', 'pass': True}]
    record = ResultRecord({'seed': None}, 'spectrum', ROWS, {'x': math.inf},
                          checks)
    rundir = record.write(str(tmp_path), 'demo')
    assert rundir == str(tmp_path/'demo_spectrum')
    assert record.rundir == rundir
    lines = (tmp_path/'demo_spectrum'/TABLE_FILE).read_text().splitlines()
    assert lines[0] == 'point,radius,status,pass'
    assert lines[1] == '0.5,,diverges,True'
    assert lines[2] == '0,2,converges-to-zero,False'
    with open(tmp_path/'demo_spectrum'/SUMMARY_FILE) as sumfp:
        summary = json.load(sumfp)
    assert summary['name'] == 'spectrum'
    assert summary['summary'] == {'x': 'inf'}
    assert summary['expectations']['checked'] == 1
    assert summary['expectations']['pass'] is True
    assert summary['nr_rows'] == 2
    with h5py.File(tmp_path/'demo_spectrum'/PLOTDATA_FILE, 'r') as hf:
        assert hf.attrs['name'] == 'spectrum'
        assert hf['point'].dtype == float
        radius = hf['radius'][:]
        assert numpy.isnan(radius[0]) and radius[1] == 2.0
        assert hf['status'][0].decode() == 'diverges'


def test_tables_are_reproducible(tmp_path):
    texts = []
    for outdir in ('one', 'two'):
        record = ResultRecord({}, 'classify', ROWS)
        rundir = record.write(str(tmp_path/outdir))
        with open('{}/{}'.format(rundir, TABLE_FILE), 'rb') as tabfp:
            texts.append(tabfp.read())
    assert texts[0] == texts[1]
