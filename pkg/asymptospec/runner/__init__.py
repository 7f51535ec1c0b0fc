"""Config-driven runs of analyses and experiments, with result records."""
import os
import time
import logging

USER_CONF_DIR = os.path.expanduser('~/.config/asymptospec/')
USER_DATA_DIR = os.path.expanduser('~/.local/share/asymptospec/')

DATETIMESTRFMT = '%Y-%m-%dT%H:%M:%S'
OUT_ENV_VAR = 'ASYMPTOSPEC_OUT'

SHARE_DIR = os.path.join(os.path.dirname(__file__), 'share')


def default_out_dir():
    """
    Directory where run records are written by default

    Returns
    -------
    outdir : str
        $ASYMPTOSPEC_OUT when set, else the runs directory under
        USER_DATA_DIR.
    """
    outdir = os.environ.get(OUT_ENV_VAR)
    if outdir:
        return outdir
    return os.path.join(USER_DATA_DIR, 'runs')


logging.Formatter.converter = time.gmtime
_LOGGER_ROOT = logging.getLogger('asymptospec')
_LOGGER_ROOT.setLevel(logging.INFO)
__CH = logging.StreamHandler()
__CH.setFormatter(logging.Formatter(
    '%(asctime)s.%(msecs)03d | %(name)s | %(levelname)s | %(message)s',
    datefmt=DATETIMESTRFMT))
_LOGGER_ROOT.addHandler(__CH)
