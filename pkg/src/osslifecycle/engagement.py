"""
Developer engagement as repeated Bass diffusion.

With F the cumulative engagement fraction, f its density and m lifetime developer-months,
engagement follows f / (1 - F) = p + q F. Writing the monthly count as a quadratic in
cumulative engagement,

    L(t) = beta0 + beta1 * cumL + beta2 * cumL^2,  beta0 = p m, beta1 = q - p, beta2 = -q / m,

turns the estimate into an ordinary least squares problem followed by a root solve for m.

Time is measured in months; month index k (first observed month k = 0) covers [k, k + 1].
"""
import math
import logging

import numpy as np

from osslifecycle.errors import ModelError
from osslifecycle.models import BassParams, Peak, NormalizedCurve

__all__ = [
    'REGRESSORS', 'fit_bass', 'solve_pqm', 'bass_F', 'bass_f', 'bass_rate',
    'predict_monthly_L', 'fitted_counts', 'peak', 'normalize']

log = logging.getLogger(__name__)

MIN_MONTHS = 6
REGRESSORS = ('midpoint', 'lagged', 'current')


def _scalar_or_array(x, t):
    return float(x) if np.ndim(t) == 0 else x


def _decay(params, t):
    return np.exp(-params.rate * np.asarray(t, dtype=float))


def bass_F(params, t):
    """
    Cumulative engagement fraction p (e^{(p+q)t} - 1) / (p e^{(p+q)t} + q).
    """
    e = _decay(params, t)
    return _scalar_or_array(params.p * (1 - e) / (params.p + params.q * e), t)


def _survival(params, t):
    e = _decay(params, t)
    return params.rate * e / (params.p + params.q * e)


def bass_f(params, t):
    """
    Engagement density e^{(p+q)t} p (p+q)^2 / (p e^{(p+q)t} + q)^2.

    Evaluated with e^{-(p+q)t} so that long horizons do not overflow.
    """
    e = _decay(params, t)
    return _scalar_or_array(
        params.p * params.rate ** 2 * e / (params.p + params.q * e) ** 2, t)


def bass_rate(params, t):
    """
    Continuous engagement rate m f(t) in developers per month.
    """
    return _scalar_or_array(params.m * np.asarray(bass_f(params, t)), t)


def predict_monthly_L(params, t):
    """
    Expected developers in month index `t`: m (F(t + 1) - F(t)).
    """
    t = np.asarray(t, dtype=float)
    res = params.m * (_survival(params, t) - _survival(params, t + 1))
    return _scalar_or_array(res, t)


def fitted_counts(params, n):
    return predict_monthly_L(params, np.arange(n, dtype=float))


def peak(params):
    """
    Time and height of peak engagement density.

    For q <= p the density is non-increasing and the peak sits at the origin.
    """
    if params.q <= params.p:
        return Peak(t0=0.0, f0=params.p, at_origin=True)
    return Peak(
        t0=math.log(params.q / params.p) / params.rate,
        f0=params.rate ** 2 / (4 * params.q))


def normalize(params, grid):
    """
    Rescale the density to peak time and peak height: f/f0 = sech^2((alpha/2)(1 - t/t0)).
    """
    if params.q <= params.p:
        raise ModelError('normalization undefined, alpha <= 0 (q={0}, p={1})'.format(
            params.q, params.p))
    pk = peak(params)
    grid = np.asarray(grid, dtype=float)
    f = np.asarray(bass_f(params, grid)).reshape(-1)
    return NormalizedCurve(
        t0=pk.t0,
        f0=pk.f0,
        alpha=math.log(params.q / params.p),
        samples=[(float(t / pk.t0), float(v / pk.f0)) for t, v in zip(grid.reshape(-1), f)])


def _regressor(series, regressor):
    if regressor == 'midpoint':
        return series.cumL - series.L / 2
    if regressor == 'lagged':
        return series.cumL - series.L
    if regressor == 'current':
        return series.cumL
    raise ValueError('unknown regressor {0!r}, expected one of {1}'.format(
        regressor, ', '.join(REGRESSORS)))


def ols_quadratic(x, y):
    """
    Least squares y = b0 + b1 x + b2 x^2 via the normal equations.

    x is centred and scaled before squaring; cumulative engagement spans several orders of
    magnitude and the raw design is badly conditioned.

    :return: ((b0, b1, b2), r_squared)
    """
    mu, scale = x.mean(), x.std()
    if not scale > 0:
        raise ModelError('degenerate design: regressor is constant')
    z = (x - mu) / scale
    X = np.column_stack([np.ones_like(z), z, z ** 2])
    try:
        a0, a1, a2 = np.linalg.solve(X.T @ X, X.T @ y)
    except np.linalg.LinAlgError:
        raise ModelError('degenerate design: normal equations are singular')

    residuals = y - X @ np.array([a0, a1, a2])
    ss_res, ss_tot = float(residuals @ residuals), float(((y - y.mean()) ** 2).sum())
    r_squared = (1.0 - ss_res / ss_tot) if ss_tot > 0 else float(ss_res == 0)

    b2 = a2 / scale ** 2
    b1 = a1 / scale - 2 * a2 * mu / scale ** 2
    b0 = a0 - a1 * mu / scale + a2 * mu ** 2 / scale ** 2
    return (b0, b1, b2), min(max(r_squared, 0.0), 1.0)


def solve_pqm(beta0, beta1, beta2, observed=0.0):
    """
    Recover (p, q, m) from regression coefficients.

    m is a root of beta2 m^2 + beta1 m + beta0 = 0; p = beta0 / m and q = -m beta2.
    Among roots giving m, p, q > 0 those exceeding the `observed` developer-months are
    preferred, then the larger one.

    :return: (p, q, m, valid)
    """
    if beta2 == 0:
        roots = [-beta0 / beta1] if beta1 != 0 else []
    else:
        disc = beta1 ** 2 - 4 * beta2 * beta0
        if disc < 0:
            return math.nan, math.nan, math.nan, False
        sq = math.sqrt(disc)
        roots = [(-beta1 + sq) / (2 * beta2), (-beta1 - sq) / (2 * beta2)]
    roots = [r for r in roots if r != 0]
    if not roots:
        return math.nan, math.nan, math.nan, False

    def pqm(m):
        return beta0 / m, -m * beta2, m

    admissible = [r for r in roots if all(v > 0 for v in pqm(r))]
    if admissible:
        beyond = [r for r in admissible if r > observed]
        return pqm(max(beyond or admissible)) + (True,)
    positive = [r for r in roots if r > 0]
    return pqm(max(positive or roots)) + (False,)


def fit_bass(series, regressor='midpoint'):
    """
    Fit the engagement model to a monthly series.

    Fits that do not yield positive p, q and m are returned with `valid=False`.
    """
    if len(series) < MIN_MONTHS:
        raise ModelError('series too short: {0} months, need at least {1}'.format(
            len(series), MIN_MONTHS))
    if len(np.unique(series.cumL)) < 3:
        raise ModelError('degenerate design: fewer than 3 distinct cumulative values')

    x, y = _regressor(series, regressor), series.L
    (b0, b1, b2), r_squared = ols_quadratic(x, y)
    p, q, m, valid = solve_pqm(b0, b1, b2, observed=float(series.cumL[-1]))
    if not valid:
        log.warning('{0}: engagement data does not fit the model (p={1}, q={2}, m={3})'.format(
            series.project, p, q, m))
    return BassParams(
        p=p, q=q, m=m,
        beta0=float(b0), beta1=float(b1), beta2=float(b2),
        r_squared=r_squared,
        valid=valid,
        regressor=regressor,
        n_obs=len(series))
