"""
Projection of fitted models beyond the observed months.
"""
import math
import logging

import numpy as np
from scipy.optimize import bisect

from osslifecycle.errors import ModelError
from osslifecycle.models import Maturation, LifecycleForecast, StabilityResult, PolyTrend
from osslifecycle.engagement import bass_rate, peak, fit_bass, ols_quadratic
from osslifecycle.growth import integrate_A, calibrate_growth, DEFAULT_STEP

__all__ = [
    'DEFAULT_THRESHOLD', 'maturation_time', 'maturation_crossing', 'project_lifecycle',
    'poly_trend', 'divergence', 'stability_experiment']

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.5
BRACKET_WIDTH = 200
TARGETS = ('cumulative_growth', 'developers')


def maturation_time(bass, threshold=DEFAULT_THRESHOLD, t_current=None):
    """
    Month at which the engagement rate m f(t) falls to `threshold` developers per month on the
    declining branch.

    If the peak rate never exceeds the threshold the project is reported as already mature at
    `t_current`.
    """
    if not bass.valid:
        raise ModelError('cannot forecast from an invalid engagement fit')
    if not threshold > 0:
        raise ValueError('threshold must be positive')
    pk = peak(bass)
    if bass.m * pk.f0 <= threshold:
        return Maturation(
            T=float(t_current if t_current is not None else pk.t0),
            threshold=threshold,
            already_mature=True,
            peak_at_origin=pk.at_origin)

    T = bisect(
        lambda t: bass_rate(bass, t) - threshold,
        pk.t0,
        pk.t0 + BRACKET_WIDTH / bass.rate,
        xtol=1e-6)
    return Maturation(
        T=T,
        threshold=threshold,
        already_mature=t_current is not None and T <= t_current,
        peak_at_origin=pk.at_origin)


def maturation_crossing(bass, threshold=DEFAULT_THRESHOLD):
    """
    Latest t with m f(t) = threshold, solved in closed form for any p, q, m.

    Unlike `maturation_time` this accepts invalid fits, where the crossing may fall before the
    first observed month. Returns None when the rate never reaches the threshold.
    """
    if not threshold > 0:
        raise ValueError('threshold must be positive')
    p, q, m, b = bass.p, bass.q, bass.m, bass.rate
    if b == 0 or p == 0 or not all(map(math.isfinite, (p, q, m))):
        return None
    # theta (p + q x)^2 = m p b^2 x with x = e^{-bt}
    roots = np.roots(
        [threshold * q ** 2, 2 * threshold * p * q - m * p * b ** 2, threshold * p ** 2])
    x = [r.real for r in roots if abs(r.imag) < 1e-12 and r.real > 0]
    if not x:
        return None
    return max(-math.log(v) / b for v in x)


def _grid(horizon):
    t = np.arange(0, math.floor(horizon + 1e-9) + 1, dtype=float)
    if horizon - t[-1] > 1e-9:
        t = np.append(t, horizon)
    return t


def project_lifecycle(bass, growth, series, threshold=DEFAULT_THRESHOLD, step=DEFAULT_STEP):
    """
    Extrapolate engagement and growth to maturity.

    Model time 0 is the first observed month, so the last observed month sits at
    `t_current - 1`. Lifetime growth never falls below observed growth.
    """
    if len(series) < 2:
        raise ModelError('series too short to project')
    t_current = series.t_current
    mat = maturation_time(bass, threshold=threshold, t_current=t_current)
    current = float(series.A[-1])
    last = t_current - 1

    horizon = max(mat.T, last) if not mat.already_mature else last
    path = integrate_A(growth, lambda t: bass_rate(bass, t), horizon, A0=growth.A0, step=step)
    if mat.already_mature:
        lifetime = current
    else:
        lifetime = max(float(path.at(mat.T)), current)

    grid = _grid(horizon)
    phase = [(float(L), float(A)) for L, A in zip(bass_rate(bass, grid), path.at(grid))]
    return LifecycleForecast(
        t_current=t_current,
        T_maturation=mat.T,
        remaining_years=(mat.T - t_current) / 12,
        lifetime_dev_months=bass.m,
        lifetime_growth=lifetime,
        current_growth=current,
        phase=phase,
        already_mature=mat.already_mature)


def poly_trend(series, target='cumulative_growth'):
    """
    Quadratic trend in months since the first month; a diagnostic for the growth plots.
    """
    if target not in TARGETS:
        raise ValueError('unknown target {0!r}, expected one of {1}'.format(
            target, ', '.join(TARGETS)))
    if len(series) < 3:
        raise ModelError('need at least 3 months for a quadratic trend')
    y = series.A if target == 'cumulative_growth' else series.L
    (c0, c1, c2), r_squared = ols_quadratic(np.arange(len(series), dtype=float), y)
    return PolyTrend(c2=float(c2), c1=float(c1), c0=float(c0), r_squared=r_squared)


def divergence(reference, other, eps=1e-9):
    """
    max |reference - other| / max(reference, eps) over a common grid.
    """
    reference, other = np.asarray(reference, dtype=float), np.asarray(other, dtype=float)
    return float(np.max(np.abs(reference - other) / np.maximum(reference, eps)))


def _fit(series, regressor, step):
    bass = fit_bass(series, regressor=regressor)
    return bass, calibrate_growth(series, bass, step=step)


def _paths(fit, grid, horizon, step):
    bass, growth = fit
    path = integrate_A(growth, lambda t: bass_rate(bass, t), horizon, A0=growth.A0, step=step)
    return bass_rate(bass, grid), path.at(grid)


def stability_experiment(series, fraction=0.75, threshold=DEFAULT_THRESHOLD,
                         regressor='midpoint', step=DEFAULT_STEP, full_fit=None):
    """
    Refit on the first `fraction` of months (rounded down) and compare the projections of
    both fits up to the full-data maturation horizon.

    :param full_fit: optional precomputed (BassParams, GrowthParams) for the full series.
    """
    if not 0 < fraction <= 1:
        raise ValueError('fraction must be in (0, 1], got {0}'.format(fraction))
    n = len(series)
    n_truncated = int(math.floor(fraction * n))
    full = full_fit or _fit(series, regressor, step)
    truncated = full if n_truncated == n else _fit(series.truncate(n_truncated), regressor, step)

    res = StabilityResult(
        fraction=fraction,
        full_fit=full,
        truncated_fit=truncated,
        months_full=n,
        months_truncated=n_truncated)
    if not res.valid:
        log.warning('{0}: stability experiment has an invalid engagement fit'.format(
            series.project))
        return res

    res.horizon = max(maturation_time(full[0], threshold, t_current=n).T, n - 1)
    res.grid = _grid(res.horizon)
    res.L_full, res.A_full = _paths(full, res.grid, res.horizon, step)
    if truncated is full:
        res.L_truncated, res.A_truncated = res.L_full, res.A_full
    else:
        res.L_truncated, res.A_truncated = _paths(truncated, res.grid, res.horizon, step)
    res.engagement_divergence = divergence(res.L_full, res.L_truncated)
    res.growth_divergence = divergence(res.A_full, res.A_truncated)
    return res
