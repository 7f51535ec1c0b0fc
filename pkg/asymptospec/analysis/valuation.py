"""Valuation fits: growth exponents of scalar nets s_eps ~ C*eps**b."""
import logging

import numpy
from scipy import stats

_LOGGER = logging.getLogger(__name__)

DEFAULT_TAIL = 8
MIN_SAMPLES = 4
DRIFT_THRESHOLD = 0.05
POWER_RESIDUAL = 0.1
VERDICTS = ('power-like', 'log-corrected', 'irregular')


class ScaleFit(object):
    """\
    Fitted exponent b in s_eps ~ exp(intercept)*eps**slope

    Attributes
    ----------
    slope, intercept : float
        Theil-Sen line through (log eps, log s).
    residual : float
        Max absolute log deviation from the line on the fit tail.
    verdict : str
        'power-like', 'log-corrected' or 'irregular'.
    drift : float
        Spread between first and last consecutive slopes on the tail.
    """

    def __init__(self, slope, intercept, residual, verdict, drift=0.0,
                 nr_samples=0):
        self.slope = float(slope)
        self.intercept = float(intercept)
        self.residual = float(residual)
        self.verdict = verdict
        self.drift = float(drift)
        self.nr_samples = nr_samples

    @property
    def exponent(self):
        """Growth exponent N = -slope, s_eps = O(eps**-N)."""
        return -self.slope

    def __repr__(self):
        return "ScaleFit(slope={:.6g}, residual={:.3g}, verdict='{}')".format(
            self.slope, self.residual, self.verdict)

    def as_dict(self):
        return {'slope': self.slope, 'intercept': self.intercept,
                'residual': self.residual, 'verdict': self.verdict,
                'drift': self.drift}


def fit_valuation(samples, tail=DEFAULT_TAIL):
    """
    Estimate the valuation of a positive scalar net

    Parameters
    ----------
    samples : iterable of (eps, s)
        Positive finite values; the `tail` smallest eps are fitted.
    tail : int
        Number of rungs used.

    Returns
    -------
    fit : ScaleFit

    Raises
    ------
    ValueError
        Fewer than 4 usable samples in the tail.

    Examples
    --------
    >>> from asymptospec.analysis.valuation import fit_valuation
    >>> eps = 2.0**-numpy.arange(4, 17)
    >>> fit = fit_valuation(zip(eps, eps**2))
    >>> round(fit.slope, 10), fit.verdict
    (2.0, 'power-like')
    """
    pairs = sorted(((float(e), float(s)) for e, s in samples), reverse=True)
    pairs = pairs[-tail:]
    usable = [(e, s) for e, s in pairs
              if e > 0.0 and s > 0.0 and numpy.isfinite(s)]
    if len(usable) < MIN_SAMPLES:
        raise ValueError("Insufficient data: {} usable samples of {}, need {}"
                         .format(len(usable), len(pairs), MIN_SAMPLES))
    logeps = numpy.log([e for e, _ in usable])
    logs = numpy.log([s for _, s in usable])
    res = stats.theilslopes(logs, logeps)
    slope, intercept = float(res[0]), float(res[1])
    residual = float(numpy.max(numpy.abs(logs - (intercept + slope*logeps))))
    steps = numpy.diff(logs)/numpy.diff(logeps)
    bends = numpy.diff(steps)
    monotone = bool(numpy.all(bends >= -1e-9) or numpy.all(bends <= 1e-9))
    drift = float(abs(steps[-1] - steps[0]))
    if monotone and drift > DRIFT_THRESHOLD:
        verdict = 'log-corrected'
    elif residual <= POWER_RESIDUAL:
        verdict = 'power-like'
    else:
        verdict = 'irregular'
    fit = ScaleFit(slope, intercept, residual, verdict, drift, len(usable))
    _LOGGER.debug("fit_valuation: {!r}".format(fit))
    return fit


def fit_ladder(eps_values, values, tail=DEFAULT_TAIL):
    """fit_valuation on parallel eps and value sequences."""
    return fit_valuation(zip(eps_values, values), tail)
