import math

import attr
import numpy as np

from osslifecycle.util import finite_or_none

__all__ = [
    'CommitRecord', 'MonthlySeries', 'BassParams', 'Peak', 'NormalizedCurve',
    'GrowthParams', 'GrowthPath', 'Maturation', 'LifecycleForecast', 'StabilityResult',
    'PolyTrend', 'ValuationConfig', 'ValuationReport', 'LifecycleReport']


def non_negative(_, attribute, value):
    if value < 0:
        raise ValueError('{0} must be non-negative, got {1}'.format(attribute.name, value))


def positive(_, attribute, value):
    if not value > 0:
        raise ValueError('{0} must be positive, got {1}'.format(attribute.name, value))


def float_array(v):
    return np.asarray(v, dtype=float).reshape(-1)


@attr.s(frozen=True)
class CommitRecord(object):
    """
    One commit as reported by the source, with line statistics.

    `author_id` is the canonical identity (see `ingest.canonicalize_author`), `bot` flags
    identities matching the configured bot suffixes.
    """
    sha = attr.ib(validator=attr.validators.instance_of(str))
    author_id = attr.ib()
    timestamp = attr.ib()
    additions = attr.ib(converter=int, validator=non_negative)
    deletions = attr.ib(converter=int, validator=non_negative)
    author_name = attr.ib(default='')
    author_email = attr.ib(default='')
    bot = attr.ib(default=False)
    parents = attr.ib(default=1, converter=int, validator=non_negative)

    @property
    def lines_changed(self):
        return self.additions + self.deletions

    @property
    def is_merge(self):
        return self.parents > 1


@attr.s(eq=False)
class MonthlySeries(object):
    """
    Per-month developer counts and lines changed for one project.

    - `L`: developers committing in the month
    - `dA`: lines changed (additions + deletions) in the month
    - `A`: cumulative lines changed
    - `cumL`: cumulative developer-months
    """
    project = attr.ib()
    months = attr.ib(converter=list)
    L = attr.ib(converter=float_array)
    dA = attr.ib(converter=float_array)

    def __attrs_post_init__(self):
        if not (len(self.months) == len(self.L) == len(self.dA)):
            raise ValueError('months, L and dA must have equal length')
        if (self.L < 0).any() or (self.dA < 0).any():
            raise ValueError('monthly counts must be non-negative')

    @classmethod
    def empty(cls, project=''):
        return cls(project, [], [], [])

    @property
    def A(self):
        return np.cumsum(self.dA)

    @property
    def cumL(self):
        return np.cumsum(self.L)

    def __len__(self):
        return len(self.months)

    @property
    def t_current(self):
        return len(self.months)

    @property
    def current_growth(self):
        return float(self.dA.sum())

    @property
    def total_dev_months(self):
        return float(self.L.sum())

    def truncate(self, n):
        return MonthlySeries(self.project, self.months[:n], self.L[:n], self.dA[:n])

    def rows(self):
        for month, dev, lines, cum_lines, cum_dm in zip(
                self.months, self.L, self.dA, self.A, self.cumL):
            yield month, dev, lines, cum_lines, cum_dm


@attr.s(frozen=True)
class BassParams(object):
    """
    Engagement model: independent rate `p`, imitation rate `q`, lifetime developer-months `m`,
    together with the regression the estimate came from.
    """
    p = attr.ib(converter=float)
    q = attr.ib(converter=float)
    m = attr.ib(converter=float)
    beta0 = attr.ib(default=None)
    beta1 = attr.ib(default=None)
    beta2 = attr.ib(default=None)
    r_squared = attr.ib(default=None)
    valid = attr.ib(default=True)
    regressor = attr.ib(default=None)
    n_obs = attr.ib(default=None)

    @classmethod
    def from_pqm(cls, p, q, m, **kw):
        kw.setdefault('valid', bool(p > 0 and q > 0 and m > 0))
        return cls(p=p, q=q, m=m, beta0=p * m, beta1=q - p, beta2=-q / m, **kw)

    @property
    def rate(self):
        return self.p + self.q

    def as_dict(self):
        return {
            'p': finite_or_none(self.p),
            'q': finite_or_none(self.q),
            'm': finite_or_none(self.m),
            'beta0': finite_or_none(self.beta0),
            'beta1': finite_or_none(self.beta1),
            'beta2': finite_or_none(self.beta2),
            'r_squared': finite_or_none(self.r_squared),
            'valid': bool(self.valid),
        }


@attr.s(frozen=True)
class Peak(object):
    t0 = attr.ib()
    f0 = attr.ib()
    at_origin = attr.ib(default=False)


@attr.s(frozen=True)
class NormalizedCurve(object):
    t0 = attr.ib()
    f0 = attr.ib()
    alpha = attr.ib()
    samples = attr.ib(converter=list)


@attr.s(frozen=True)
class GrowthParams(object):
    """
    Parameters of dA/dt = gamma * L^lam * A^phi, plus the labor rate `n` and initial
    conditions used by the closed-form solutions.
    """
    gamma = attr.ib(converter=float, validator=positive)
    lam = attr.ib(converter=float)
    phi = attr.ib(converter=float)
    n = attr.ib(default=0.0, converter=float)
    A0 = attr.ib(default=1.0, converter=float)
    L0 = attr.ib(default=1.0, converter=float)
    objective = attr.ib(default=None)
    rmse = attr.ib(default=None)

    def as_dict(self):
        return {
            'gamma': self.gamma,
            'lambda': self.lam,
            'phi': self.phi,
            'n': self.n,
            'A0': self.A0,
            'L0': self.L0,
            'objective': finite_or_none(self.objective),
            'rmse': finite_or_none(self.rmse),
        }


@attr.s(eq=False)
class GrowthPath(object):
    months = attr.ib(converter=float_array)
    A_hat = attr.ib(converter=float_array)
    L_hat = attr.ib(converter=float_array)

    def at(self, t):
        return np.interp(t, self.months, self.A_hat)

    def monthly(self):
        """
        Path sampled at whole months within the integrated horizon.

        :return: (months, A_hat, L_hat) arrays.
        """
        t = np.arange(0, math.floor(self.months[-1] + 1e-9) + 1, dtype=float)
        return t, self.at(t), np.interp(t, self.months, self.L_hat)


@attr.s(frozen=True)
class Maturation(object):
    T = attr.ib()
    threshold = attr.ib(default=0.5)
    already_mature = attr.ib(default=False)
    peak_at_origin = attr.ib(default=False)


@attr.s
class LifecycleForecast(object):
    t_current = attr.ib()
    T_maturation = attr.ib()
    remaining_years = attr.ib()
    lifetime_dev_months = attr.ib()
    lifetime_growth = attr.ib()
    current_growth = attr.ib(default=None)
    phase = attr.ib(default=attr.Factory(list))
    already_mature = attr.ib(default=False)

    def as_dict(self):
        return {
            't_current': int(self.t_current),
            'T_maturation': finite_or_none(self.T_maturation),
            'remaining_years': finite_or_none(self.remaining_years),
            'lifetime_dev_months': finite_or_none(self.lifetime_dev_months),
            'lifetime_growth': finite_or_none(self.lifetime_growth),
        }


@attr.s
class StabilityResult(object):
    fraction = attr.ib()
    full_fit = attr.ib()
    truncated_fit = attr.ib()
    months_full = attr.ib(default=None)
    months_truncated = attr.ib(default=None)
    horizon = attr.ib(default=None)
    growth_divergence = attr.ib(default=None)
    engagement_divergence = attr.ib(default=None)
    # Both fits projected on the comparison grid, set for valid experiments.
    grid = attr.ib(default=None)
    L_full = attr.ib(default=None)
    L_truncated = attr.ib(default=None)
    A_full = attr.ib(default=None)
    A_truncated = attr.ib(default=None)

    @property
    def valid(self):
        return bool(self.full_fit[0].valid and self.truncated_fit[0].valid)

    def as_dict(self):
        return {
            'fraction': self.fraction,
            'months_full': self.months_full,
            'months_truncated': self.months_truncated,
            'horizon': finite_or_none(self.horizon),
            'valid': self.valid,
            'truncated_valid': bool(self.truncated_fit[0].valid),
            'growth_divergence': finite_or_none(self.growth_divergence),
            'engagement_divergence': finite_or_none(self.engagement_divergence),
            'truncated': {
                'bass': self.truncated_fit[0].as_dict(),
                'growth': self.truncated_fit[1].as_dict() if self.truncated_fit[1] else None,
            },
        }


@attr.s(frozen=True)
class PolyTrend(object):
    c2 = attr.ib()
    c1 = attr.ib()
    c0 = attr.ib()
    r_squared = attr.ib()


@attr.s(frozen=True)
class ValuationConfig(object):
    monthly_salary = attr.ib(default=10000.0, converter=float, validator=positive)
    time_fraction = attr.ib(default=0.5, converter=float, validator=positive)
    maturation_threshold = attr.ib(default=0.5, converter=float, validator=positive)
    window_months = attr.ib(default=6, converter=int, validator=positive)
    currency = attr.ib(default='USD')
    value_per_download = attr.ib(
        default=None, converter=attr.converters.optional(float))

    @time_fraction.validator
    def _check_fraction(self, attribute, value):
        if value > 1:
            raise ValueError('time_fraction must be in (0, 1], got {0}'.format(value))


@attr.s
class ValuationReport(object):
    currency = attr.ib()
    innov_per_devmonth = attr.ib()
    cum_dev_months = attr.ib()
    current_growth = attr.ib()
    lifetime_growth = attr.ib()
    supply_current = attr.ib()
    supply_lifetime = attr.ib()
    downloads_6mo = attr.ib(default=None)
    lines_changed_window = attr.ib(default=None)
    downloads_ratio = attr.ib(default=None)
    lifetime_downloads = attr.ib(default=None)
    remaining_downloads = attr.ib(default=None)
    demand_value_lifetime = attr.ib(default=None)
    demand_status = attr.ib(default='no download data')

    def as_dict(self):
        return {k: (finite_or_none(v) if isinstance(v, float) else v)
                for k, v in attr.asdict(self).items()}


@attr.s
class LifecycleReport(object):
    project = attr.ib()
    bass = attr.ib(default=None)
    growth = attr.ib(default=None)
    forecast = attr.ib(default=None)
    # Nominal maturation from an invalid engagement fit, reported but not projected.
    maturation = attr.ib(default=None)
    stability = attr.ib(default=None)
    valuation = attr.ib(default=None)
    series = attr.ib(default=None, repr=False)
    status = attr.ib(default='ok')
    warnings = attr.ib(default=attr.Factory(list))

    def as_dict(self):
        return {
            'project': self.project,
            'fitted': {
                'bass': self.bass.as_dict() if self.bass else None,
                'growth': self.growth.as_dict() if self.growth else None,
            },
            'forecast': self.forecast.as_dict() if self.forecast else None,
            'maturation': {
                'T': finite_or_none(self.maturation.T),
                'threshold': self.maturation.threshold,
            } if self.maturation else None,
            'stability': self.stability.as_dict() if self.stability else None,
            'valuation': self.valuation.as_dict() if self.valuation else None,
        }
