"""
Endogenous growth of cumulative code change: dA/dt = gamma * L^lam * A^phi.

Closed forms exist for exponential labor L0 e^{nt} and for constant labor; for labor driven by
the fitted engagement curve the ODE is integrated with fixed-step Runge-Kutta, which is also
what the calibration runs inside its optimizer loop.
"""
import math
import logging

import numpy as np
from scipy.optimize import minimize

from osslifecycle.errors import ModelError, IntegrationError
from osslifecycle.models import GrowthParams, GrowthPath
from osslifecycle.engagement import bass_rate

__all__ = [
    'EPS_L', 'DEFAULT_STEP', 'BOUNDS', 'SEEDS', 'growth_rate', 'closed_form_L',
    'closed_form_A', 'closed_form_A_constL', 'integrate_A', 'labor_rate',
    'GrowthCalibration', 'calibrate_growth']

log = logging.getLogger(__name__)

EPS_L = 1e-6
DEFAULT_STEP = 0.25
MIN_MONTHS = 12
# log(gamma), lambda, phi
BOUNDS = ((-10.0, 20.0), (-5.0, 5.0), (-3.0, 0.99))
# (lambda, phi) starting points; gamma is seeded from the observed early slope.
SEEDS = [
    (-0.5, -0.5), (-0.5, 0.3),
    (0.5, -0.5), (0.5, 0.3),
    (1.5, -0.5), (1.5, 0.3),
    (1.0, 0.0), (1.0, -1.0),
]
SIMPLEX_STEPS = (1.0, 0.25, 0.1)


def growth_rate(params, L, A):
    """
    Right-hand side gamma * max(L, eps)^lam * A^phi.
    """
    return params.gamma * np.maximum(L, EPS_L) ** params.lam * np.asarray(A, dtype=float) \
        ** params.phi


def closed_form_L(params, t):
    return params.L0 * np.exp(params.n * np.asarray(t, dtype=float))


def _check_phi(params):
    if params.phi == 1:
        raise ModelError('closed form undefined for phi = 1')


def _power(base, params, t):
    if np.any(base <= 0):
        raise ModelError('solution left real domain ({0})'.format(params))
    res = base ** (1 / (1 - params.phi))
    return float(res) if np.ndim(t) == 0 else res


def closed_form_A(params, t):
    """
    Growth under exponential labor L0 e^{nt}:

    A(t) = (k e^{lam n t} + A0^{1-phi} - k)^{1/(1-phi)},  k = (1-phi) gamma L0^lam / (lam n)
    """
    _check_phi(params)
    if not params.n > 0:
        raise ModelError('closed form needs a positive labor rate n')
    if params.lam == 0:
        raise ModelError('closed form undefined for lambda = 0')
    t = np.asarray(t, dtype=float)
    k = (1 - params.phi) * params.gamma * params.L0 ** params.lam / (params.lam * params.n)
    base = k * np.exp(params.lam * params.n * t) + params.A0 ** (1 - params.phi) - k
    return _power(base, params, t)


def closed_form_A_constL(params, L, t):
    """
    Growth under constant labor L: A(t) = [(1-phi)(gamma L^lam t + A0^{1-phi}/(1-phi))]^{1/(1-phi)}
    """
    _check_phi(params)
    t = np.asarray(t, dtype=float)
    base = (1 - params.phi) * params.gamma * L ** params.lam * t \
        + params.A0 ** (1 - params.phi)
    return _power(base, params, t)


def _sample(L_hat, times):
    try:
        values = np.asarray(L_hat(times), dtype=float)
    except TypeError:
        values = None
    if values is None or values.shape != times.shape:
        values = np.array([float(L_hat(t)) for t in times])
    return values


def _rk4(drive, phi, a0, h, floor, params=None):
    """
    Classic RK4 for dA/dt = g(t) A^phi where `drive` holds g at t_i, t_i + h/2, t_{i+1}, ...
    """
    g = drive.tolist()
    a = a0
    out = [a]
    try:
        for i in range(0, len(g) - 1, 2):
            g0, g1, g2 = g[i], g[i + 1], g[i + 2]
            k1 = g0 * a ** phi
            k2 = g1 * (a + 0.5 * h * k1) ** phi
            k3 = g1 * (a + 0.5 * h * k2) ** phi
            k4 = g2 * (a + h * k3) ** phi
            a = a + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
            if a < floor:
                a = floor
            out.append(a)
    except (OverflowError, ZeroDivisionError):
        raise IntegrationError(len(out), params)
    res = np.array(out)
    bad = np.flatnonzero(~np.isfinite(res))
    if len(bad):
        raise IntegrationError(int(bad[0]), params)
    return res


def integrate_A(params, L_hat, horizon, A0=None, step=DEFAULT_STEP):
    """
    Integrate the growth ODE on [0, horizon] driven by `L_hat` (month -> developers).

    :param A0: initial cumulative lines, defaults to `params.A0`.
    :param step: RK4 step in months; shortened so that it divides the horizon.
    """
    if not horizon > 0:
        raise ModelError('horizon must be positive')
    A0 = params.A0 if A0 is None else float(A0)
    if A0 < 1:
        raise ModelError('A0 must be at least 1 line, got {0}'.format(A0))
    n = max(1, math.ceil(horizon / step - 1e-9))
    h = horizon / n
    times = np.arange(2 * n + 1) * (h / 2)
    L = _sample(L_hat, times)
    if (L < 0).any():
        raise ModelError('driving labor must be non-negative')
    drive = params.gamma * np.maximum(L, EPS_L) ** params.lam
    A = _rk4(drive, params.phi, A0, h, A0, params=params)
    return GrowthPath(months=times[::2], A_hat=A, L_hat=L[::2])


def labor_rate(series):
    """
    Exponential labor rate n of the simple model: log-linear slope of developer counts up to
    the month with the most developers.
    """
    L = series.L[:int(np.argmax(series.L)) + 1] if len(series) else series.L
    t = np.flatnonzero(L > 0)
    if len(t) < 2:
        return 0.0
    return float(np.polyfit(t, np.log(L[t]), 1)[0])


class GrowthCalibration(object):
    """
    Least squares calibration of (gamma, lambda, phi) to observed cumulative growth.

    The objective is the mean squared error between the integrated path and observed A over
    the observed months; it is minimized with bounded Nelder-Mead over (log gamma, lambda, phi)
    from several starting points.
    """
    def __init__(self, series, bass, step=DEFAULT_STEP, seeds=None, bounds=BOUNDS,
                 maxiter=2000, maxfev=2000):
        if len(series) < MIN_MONTHS:
            raise ModelError('series too short for growth calibration: {0} months'.format(
                len(series)))
        self.series = series
        self.observed = series.A
        self.A0 = max(float(self.observed[0]), 1.0)
        self.per_month = max(1, int(round(1 / step)))
        self.h = 1.0 / self.per_month
        self.seeds = seeds or SEEDS
        self.bounds = bounds
        self.options = dict(maxiter=maxiter, maxfev=maxfev, xatol=1e-6, fatol=1e-10)

        n = (len(series) - 1) * self.per_month
        self.times = np.arange(2 * n + 1) * (self.h / 2)
        if bass is not None and bass.valid:
            self.L_hat = np.asarray(bass_rate(bass, self.times))
        else:
            log.warning('{0}: no valid engagement fit, driving growth with observed '
                        'developer counts'.format(series.project))
            self.L_hat = np.interp(self.times, np.arange(len(series)), series.L)
        self.log_L = np.log(np.maximum(self.L_hat, EPS_L))
        self.scale = max(float(np.mean(self.observed ** 2)), 1.0)

        self.history = []
        self.starts = []
        self._best = math.inf

    def params(self, x, objective=None):
        return GrowthParams(
            gamma=math.exp(x[0]),
            lam=x[1],
            phi=x[2],
            A0=self.A0,
            L0=max(float(self.L_hat[0]), EPS_L),
            objective=objective,
            rmse=math.sqrt(objective) if objective is not None else None)

    def path(self, x):
        drive = math.exp(x[0]) * np.exp(x[1] * self.log_L)
        A = _rk4(drive, x[2], self.A0, self.h, self.A0, params=tuple(x))
        return A[::self.per_month]

    def objective(self, x):
        try:
            A = self.path(x)
        except IntegrationError:
            return math.inf
        res = float(np.mean((A - self.observed) ** 2))
        if not math.isfinite(res):
            return math.inf
        self._best = min(self._best, res)
        return res

    def _scaled(self, x):
        return self.objective(x) / self.scale

    def _callback(self, *args):
        self.history.append(self._best)

    def seed_points(self):
        slope = max(float(self.observed[1] - self.observed[0]), 1.0)
        (lo, hi) = self.bounds[0]
        for lam, phi in self.seeds:
            log_gamma = math.log(slope) - lam * self.log_L[0] - phi * math.log(self.A0)
            yield np.array([min(max(log_gamma, lo), hi), lam, phi])

    def _simplex(self, x0):
        simplex = [x0]
        for i, delta in enumerate(SIMPLEX_STEPS):
            x = x0.copy()
            lo, hi = self.bounds[i]
            x[i] = x[i] + delta if x[i] + delta <= hi else x[i] - delta
            x[i] = min(max(x[i], lo), hi)
            simplex.append(x)
        return np.array(simplex)

    def run(self):
        best = None
        for x0 in self.seed_points():
            res = minimize(
                self._scaled,
                x0,
                method='Nelder-Mead',
                bounds=self.bounds,
                callback=self._callback,
                options=dict(self.options, initial_simplex=self._simplex(x0)))
            value = self.objective(res.x)
            self.starts.append((x0, res.x, value))
            if math.isfinite(value) and (best is None or value < best[1]):
                best = (res.x, value)
        if best is None:
            raise ModelError('growth calibration failed: no start produced a finite objective')
        return self.params(best[0], objective=best[1])


def calibrate_growth(series, bass, step=DEFAULT_STEP, **kw):
    """
    Calibrate (gamma, lambda, phi) so that the ODE path driven by the fitted engagement rate
    m f(t) tracks observed cumulative growth.

    If `bass` is not a valid fit, observed developer counts drive the ODE instead.
    """
    res = GrowthCalibration(series, bass, step=step, **kw).run()
    n = labor_rate(series)
    log.info('{0}: gamma={1:.4g} lambda={2:.4f} phi={3:.4f} rmse={4:.4g}'.format(
        series.project, res.gamma, res.lam, res.phi, res.rmse))
    return GrowthParams(
        gamma=res.gamma, lam=res.lam, phi=res.phi, n=n, A0=res.A0, L0=res.L0,
        objective=res.objective, rmse=res.rmse)
