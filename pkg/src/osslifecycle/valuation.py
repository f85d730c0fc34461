"""
Supply-side (cost to build) and demand-side (downloads) valuation.
"""
import math
import pathlib
import logging
import decimal

import attr
from csvw.dsv import reader, UnicodeWriter

from osslifecycle.errors import DataError
from osslifecycle.models import ValuationConfig, ValuationReport
from osslifecycle.providers import pypistats
from osslifecycle.util import log_dump

__all__ = [
    'NO_DOWNLOAD_DATA', 'Downloads', 'supply_side', 'supply_valuation', 'demand_side',
    'lines_changed_window', 'load_downloads', 'lookup_downloads', 'value_project',
    'VALUATION_HEADER', 'write_valuation_table']

log = logging.getLogger(__name__)

NO_DOWNLOAD_DATA = 'no download data'
RATIO_UNDEFINED = 'ratio undefined: no lines changed in window'
VALUATION_HEADER = [
    'project', 'dev_months', 'current_growth_mm', 'lifetime_growth_mm', 'innov_per_devmonth',
    'supply_current_mm', 'supply_lifetime_mm']


@attr.s(frozen=True)
class Downloads(object):
    project = attr.ib()
    package = attr.ib()
    downloads_6mo = attr.ib(converter=int)

    @downloads_6mo.validator
    def _check(self, attribute, value):
        if value < 0:
            raise DataError('negative download count for {0}: {1}'.format(self.project, value))


def supply_valuation(dev_months, ratio, lifetime_growth, cfg=None, current_growth=None):
    """
    Current and lifetime supply-side value from cumulative developer-months and the frozen
    lines-per-developer-month ratio.

    When `current_growth` is given it must agree with `dev_months` through the ratio.

    :return: (supply_current, supply_lifetime)
    """
    cfg = cfg or ValuationConfig()
    unit = cfg.time_fraction * cfg.monthly_salary
    direct = dev_months * unit
    if ratio > 0:
        if current_growth is not None \
                and not math.isclose(current_growth / ratio * unit, direct, rel_tol=1e-9):
            raise DataError(
                'current growth {0} at {1} lines per developer-month does not match {2} '
                'developer-months'.format(current_growth, ratio, dev_months))
        return direct, lifetime_growth / ratio * unit
    # No growth at all: the labor was spent, and there is nothing to extrapolate.
    return direct, direct


def supply_side(series, forecast, cfg=None):
    """
    :return: (supply_current, supply_lifetime, innov_per_devmonth)
    """
    dev_months = series.total_dev_months
    if not dev_months > 0:
        raise DataError('{0}: zero developer-months, supply side undefined'.format(
            series.project))
    ratio = series.current_growth / dev_months
    current, lifetime = supply_valuation(
        dev_months, ratio, forecast.lifetime_growth, cfg, current_growth=series.current_growth)
    return current, lifetime, ratio


def remaining_months(forecast):
    return max(int(round(forecast.T_maturation)) - int(forecast.t_current), 0)


def demand_side(downloads_6mo, lines_changed_6mo, forecast, window=6):
    """
    Downloads per line changed over the trailing window, extrapolated to the lifetime growth,
    and the downloads expected until maturity at the current rate.

    :return: (downloads_ratio, lifetime_downloads, remaining_downloads); the first two are None
        when no lines changed in the window.
    """
    if downloads_6mo < 0:
        raise DataError('negative download count: {0}'.format(downloads_6mo))
    remaining = int((
        decimal.Decimal(int(downloads_6mo)) * remaining_months(forecast) / decimal.Decimal(window)
    ).quantize(decimal.Decimal(1), rounding=decimal.ROUND_HALF_UP))
    if not lines_changed_6mo > 0:
        log.warning(RATIO_UNDEFINED)
        return None, None, remaining
    ratio = downloads_6mo / lines_changed_6mo
    return ratio, ratio * forecast.lifetime_growth, remaining


def lines_changed_window(series, months=6):
    return float(series.dA[-months:].sum()) if len(series) else 0.0


def _is_url(s):
    return str(s).startswith(('http://', 'https://'))


def load_downloads(source, projects=None, session=None, window=6):
    """
    Six-month download counts keyed by project.

    :param source: path of a CSV file with columns `project,package,downloads_6mo`, or the
        URL of the statistics endpoint, in which case `projects` maps project to package name.
    :return: `dict` mapping project to `Downloads`, or `NO_DOWNLOAD_DATA` for requested
        projects without data.
    """
    res = {}
    if _is_url(source):
        for project, package in (projects or {}).items():
            try:
                count = pypistats.fetch_downloads(package, months=window, session=session)
            except DataError as e:
                log.warning(str(e))
                res[project] = NO_DOWNLOAD_DATA
                continue
            res[project] = Downloads(project, package, count)
        return res

    path = pathlib.Path(source)
    for i, row in enumerate(reader(path, dicts=True), start=2):
        try:
            res[row['project']] = Downloads(
                row['project'], row.get('package') or row['project'], row['downloads_6mo'])
        except (KeyError, ValueError) as e:
            raise DataError('{0}:{1}: {2}'.format(path, i, e))
    for project in (projects or []):
        if lookup_downloads(res, project) is None:
            res[project] = NO_DOWNLOAD_DATA
    return res


def lookup_downloads(downloads, project):
    """
    Find the download record for a project given as `owner/name`, its cache slug or `name`.
    """
    if not downloads:
        return None
    for key in [project, project.replace('/', '-'), project.split('/')[-1]]:
        res = downloads.get(key)
        if isinstance(res, Downloads):
            return res


def value_project(series, forecast, cfg=None, downloads=None):
    cfg = cfg or ValuationConfig()
    current, lifetime, ratio = supply_side(series, forecast, cfg)
    report = ValuationReport(
        currency=cfg.currency,
        innov_per_devmonth=ratio,
        cum_dev_months=series.total_dev_months,
        current_growth=series.current_growth,
        lifetime_growth=forecast.lifetime_growth,
        supply_current=current,
        supply_lifetime=lifetime)
    if not isinstance(downloads, Downloads):
        log.info('{0}: {1}, supply side only'.format(series.project, NO_DOWNLOAD_DATA))
        return report

    report.downloads_6mo = downloads.downloads_6mo
    report.lines_changed_window = lines_changed_window(series, cfg.window_months)
    (report.downloads_ratio, report.lifetime_downloads, report.remaining_downloads) = \
        demand_side(
            downloads.downloads_6mo, report.lines_changed_window, forecast,
            window=cfg.window_months)
    report.demand_status = 'ok' if report.downloads_ratio is not None else RATIO_UNDEFINED
    if cfg.value_per_download is not None and report.lifetime_downloads is not None:
        report.demand_value_lifetime = report.lifetime_downloads * cfg.value_per_download
    return report


def valuation_row(project, report):
    return [
        project,
        report.cum_dev_months,
        round(report.current_growth / 1e6, 2),
        round(report.lifetime_growth / 1e6, 2),
        round(report.innov_per_devmonth, 2),
        round(report.supply_current / 1e6, 2),
        round(report.supply_lifetime / 1e6, 2),
    ]


def write_valuation_table(items, path, log=None):
    """
    :param items: iterable of (project, ValuationReport) pairs.
    """
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with UnicodeWriter(path) as w:
        w.writerow(VALUATION_HEADER)
        for project, report in items:
            w.writerow(valuation_row(project, report))
    log_dump(path, log=log)
    return path
