"""\
Result records: primary CSV table, JSON summary and HDF5 plot data

Tables are byte-reproducible for a given config; only the summary carries
a timestamp.
"""
import datetime
import json
import logging
import math
import os

import h5py
import numpy
import pandas

from . import DATETIMESTRFMT
from .. import __version__

_LOGGER = logging.getLogger(__name__)

TABLE_FILE = 'table.csv'
SUMMARY_FILE = 'summary.json'
PLOTDATA_FILE = 'plotdata.h5'
FLOAT_FORMAT = '%.10g'


def _cell(value):
    """Scalar CSV cell; lists are ';'-joined, None is empty."""
    if value is None:
        return ''
    if isinstance(value, (list, tuple)):
        return ';'.join(_cell(v) for v in value)
    if isinstance(value, (bool, numpy.bool_)):
        return bool(value)
    if isinstance(value, (int, numpy.integer)):
        return int(value)
    if isinstance(value, (float, numpy.floating)):
        return FLOAT_FORMAT % float(value)
    return str(value)


def table_frame(rows):
    """DataFrame of result rows with scalar cells, in row order."""
    return pandas.DataFrame([{key: _cell(val) for key, val in row.items()}
                             for row in rows]).fillna('')


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (numpy.bool_, bool)):
        return bool(value)
    if isinstance(value, numpy.integer):
        return int(value)
    if isinstance(value, (float, numpy.floating)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, numpy.ndarray):
        return _jsonable(value.tolist())
    return value


class ResultRecord(object):
    """\
    Outcome of one run

    Attributes
    ----------
    config : dict
        Normalized config echo.
    name : str
        Analysis or experiment name.
    rows : list of dict
        Primary table rows.
    summary : dict
        Analysis-specific results beyond the table.
    checks : list of dict
        Graded expectations, each with 'case' and 'pass'.
    """

    def __init__(self, config, name, rows, summary=None, checks=None):
        self.config = config
        self.name = name
        self.rows = list(rows)
        self.summary = summary or {}
        self.checks = list(checks or [])
        self.rundir = None
        self.created = datetime.datetime.now(datetime.timezone.utc).strftime(
            DATETIMESTRFMT)

    def __repr__(self):
        return "ResultRecord('{}', rows={}, failed={})".format(
            self.name, len(self.rows), len(self.failures))

    @property
    def failures(self):
        return [chk for chk in self.checks if not chk['pass']]

    @property
    def passed(self):
        return not self.failures

    def as_dict(self):
        return _jsonable({
            'name': self.name, 'version': __version__,
            'created': self.created, 'config': self.config,
            'summary': self.summary,
            'expectations': {'checked': len(self.checks),
                             'failed': len(self.failures),
                             'pass': self.passed, 'cases': self.checks},
            'nr_rows': len(self.rows)})

    def frame(self):
        return table_frame(self.rows)

    def run_dir(self, outdir, prefix):
        return os.path.join(outdir, '{}_{}'.format(prefix, self.name))

    def write(self, outdir, prefix='run'):
        """
        Write table.csv, summary.json and plotdata.h5 to <outdir>/<prefix>_<name>

        Returns
        -------
        rundir : str
        """
        rundir = self.run_dir(outdir, prefix)
        self.rundir = rundir
        os.makedirs(rundir, exist_ok=True)
        frame = self.frame()
        frame.to_csv(os.path.join(rundir, TABLE_FILE), index=False,
                     float_format=FLOAT_FORMAT, encoding='utf-8',
                     lineterminator='\n')
        with open(os.path.join(rundir, SUMMARY_FILE), 'w',
                  encoding='utf-8') as sumfp:
            json.dump(self.as_dict(), sumfp, indent=2, sort_keys=True)
            sumfp.write('\n')
        write_plotdata(frame, os.path.join(rundir, PLOTDATA_FILE),
                       {'name': self.name, 'version': __version__})
        _LOGGER.info("Wrote {} rows to {}".format(len(frame), rundir))
        return rundir


def write_plotdata(frame, path, attrs=None):
    """One dataset per column; numeric columns as float64, others as text."""
    with h5py.File(path, 'w') as hf:
        for key, value in (attrs or {}).items():
            hf.attrs[key] = value
        for column in frame.columns:
            values = frame[column]
            filled = values != ''
            numeric = pandas.to_numeric(values.where(filled), errors='coerce')
            if values.dtype == bool or numeric.notna().sum() == filled.sum():
                hf.create_dataset(column, data=numeric.to_numpy(dtype=float))
            else:
                hf.create_dataset(column, data=values.astype(str).tolist(),
                                  dtype=h5py.string_dtype())
            hf[column].attrs['column'] = column
