"""
Series generated from known parameters.

Used as oracles for the estimators and to build fixture projects when live commit data is not
available.
"""
import numpy as np

from osslifecycle.models import MonthlySeries
from osslifecycle.engagement import fitted_counts, bass_rate
from osslifecycle.growth import integrate_A, DEFAULT_STEP
from osslifecycle.util import month_range, parse_month

__all__ = ['bass_counts', 'growth_curve', 'lifecycle_series']


def _months(start, n):
    year, month = parse_month(start)
    month += n - 1
    year, month = year + (month - 1) // 12, (month - 1) % 12 + 1
    return month_range(start, '{0:04d}-{1:02d}'.format(year, month))


def _noisy(values, noise, rng):
    if not noise:
        return values
    return np.clip(values * rng.normal(1.0, noise, size=len(values)), 0, None)


def bass_counts(bass, n, noise=0.0, seed=None, rng=None):
    """
    Monthly developer counts m (F(k + 1) - F(k)) for months 0..n-1, optionally with
    multiplicative gaussian noise.
    """
    rng = rng or np.random.default_rng(seed)
    return _noisy(fitted_counts(bass, n), noise, rng)


def growth_curve(bass, growth, n, step=DEFAULT_STEP):
    """
    Cumulative lines at months 0..n-1 integrated from `growth.A0` with the engagement rate as
    driver.
    """
    path = integrate_A(
        growth, lambda t: bass_rate(bass, t), max(n - 1, 1), A0=growth.A0, step=step)
    return path.at(np.arange(n, dtype=float))


def lifecycle_series(bass, growth, n, project='synthetic', start='2000-01', noise=0.0,
                     seed=None, integer=False, step=DEFAULT_STEP):
    """
    A `MonthlySeries` whose developer counts follow `bass` and whose cumulative growth
    follows the ODE with parameters `growth`.

    Noise multiplies monthly developers and monthly lines changed independently, so
    cumulative growth stays non-decreasing.
    """
    rng = np.random.default_rng(seed)
    L = bass_counts(bass, n, noise=noise, rng=rng)
    A = growth_curve(bass, growth, n, step=step)
    dA = _noisy(np.diff(A, prepend=0.0), noise, rng)
    if integer:
        L, dA = np.round(L), np.round(dA)
    return MonthlySeries(project, _months(start, n), L, dA)
