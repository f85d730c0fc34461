"""
Serialization of lifecycle reports: JSON, plot data CSVs, batch tables and a markdown summary.
"""
import pathlib

import numpy as np
from csvw.dsv import UnicodeWriter
from clldutils.markup import Table

from osslifecycle.engagement import predict_monthly_L, bass_rate, normalize
from osslifecycle.growth import integrate_A
from osslifecycle.forecast import poly_trend, TARGETS
from osslifecycle.valuation import valuation_row, VALUATION_HEADER
from osslifecycle.util import jsondump, log_dump

__all__ = [
    'ENGAGEMENT_HEADER', 'GROWTH_HEADER', 'NORMALIZED_HEADER', 'PHASE_HEADER',
    'STABILITY_HEADER', 'TABLES', 'write_json', 'write_csv', 'engagement_curve_rows',
    'growth_curve_rows', 'normalized_curve_rows', 'phase_rows', 'stability_rows', 'table_rows',
    'write_tables', 'fmt', 'markdown']

ENGAGEMENT_HEADER = ['month', 'developers', 'fitted', 'rate']
GROWTH_HEADER = ['month', 'A', 'A_hat', 'L_hat']
NORMALIZED_HEADER = ['t_prime', 'f_prime']
PHASE_HEADER = ['month', 'L_hat', 'A_hat']
STABILITY_HEADER = ['month', 'L_full', 'L_truncated', 'A_full', 'A_truncated', 'A']
ENGAGEMENT_TABLE_HEADER = [
    'project', 'start', 'end', 'p', 'q', 'm', 'r_squared', 't', 'T', 'yrs', 'status']
DEMAND_TABLE_HEADER = [
    'project', 'downloads_6mo', 'lines_changed_6mo', 'downloads_ratio', 'lifetime_downloads',
    'remaining_downloads', 'status']
TABLES = {
    'engagement': ENGAGEMENT_TABLE_HEADER,
    'valuation': VALUATION_HEADER + ['status'],
    'demand': DEMAND_TABLE_HEADER,
}


def project_dir(outdir, project):
    return pathlib.Path(outdir) / project.replace('/', '-')


def write_json(report, outdir, log=None):
    return jsondump(
        report.as_dict(), project_dir(outdir, report.project) / 'report.json', log=log)


def write_csv(path, header, rows, log=None):
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with UnicodeWriter(path) as w:
        w.writerow(header)
        w.writerows(rows)
    log_dump(path, log=log)
    return path


def engagement_curve_rows(series, bass):
    fitted = predict_monthly_L(bass, np.arange(len(series), dtype=float))
    rate = bass_rate(bass, np.arange(len(series), dtype=float) + 0.5)
    for month, L, f, r in zip(series.months, series.L, fitted, rate):
        yield month, L, f, r


def growth_curve_rows(series, bass, growth, step=0.25):
    path = integrate_A(
        growth, lambda t: bass_rate(bass, t), max(len(series) - 1, 1), A0=growth.A0, step=step)
    _, A_hat, L_hat = path.monthly()
    for month, A, a, l_ in zip(series.months, series.A, A_hat, L_hat):
        yield month, A, a, l_


def normalized_curve_rows(bass, upto=3.0, n=301):
    """
    Normalized density samples on t' in [0, upto]; the peak is at (1, 1).
    """
    curve = normalize(bass, np.array([0.0]))
    grid = np.linspace(0, upto * curve.t0, n)
    if not np.isclose(grid, curve.t0).any():
        grid = np.sort(np.append(grid, curve.t0))
    return normalize(bass, grid).samples


def phase_rows(forecast):
    for i, (L, A) in enumerate(forecast.phase):
        yield i, L, A


def stability_rows(report):
    """
    Full-data and truncated projections on the comparison grid, with observed growth where the
    grid is inside the observed months.
    """
    st, A = report.stability, report.series.A
    for i, t in enumerate(st.grid):
        k = int(t)
        observed = float(A[k]) if k == t and k < len(A) else None
        yield (
            k if k == t else float(t),
            st.L_full[i], st.L_truncated[i], st.A_full[i], st.A_truncated[i], observed)


def _r(v, ndigits=5):
    return None if v is None or not np.isfinite(v) else round(float(v), ndigits)


def fmt(v, pattern='.5g'):
    """
    Cell text for summary tables; floats are formatted here so that any table backend will do.
    """
    if v is None:
        return ''
    if isinstance(v, (float, np.floating)):
        return format(float(v), pattern)
    return str(v)


def _maturity(report):
    if report.forecast:
        return report.forecast.T_maturation
    if report.maturation:
        return report.maturation.T


def table_rows(report):
    """
    One row per batch table for a project report, keyed like `TABLES`.
    """
    series, bass, val = report.series, report.bass, report.valuation
    T = _maturity(report)
    res = {}
    res['engagement'] = [
        report.project,
        series.months[0] if series is not None and len(series) else None,
        series.months[-1] if series is not None and len(series) else None,
        _r(bass.p) if bass else None,
        _r(bass.q) if bass else None,
        _r(bass.m, 3) if bass else None,
        _r(bass.r_squared, 4) if bass else None,
        series.t_current if series is not None else None,
        _r(T) if T is not None else None,
        _r((T - series.t_current) / 12) if T is not None and series is not None else None,
        report.status,
    ]
    if val:
        res['valuation'] = valuation_row(report.project, val) + [report.status]
        res['demand'] = [
            report.project,
            val.downloads_6mo,
            val.lines_changed_window,
            _r(val.downloads_ratio, 2),
            _r(val.lifetime_downloads, 0),
            val.remaining_downloads,
            val.demand_status,
        ]
    else:
        res['valuation'] = [report.project] + [None] * (len(VALUATION_HEADER) - 1) \
            + [report.status]
        res['demand'] = [report.project] + [None] * (len(DEMAND_TABLE_HEADER) - 2) \
            + [report.status]
    return res


def write_tables(reports, outdir, log=None):
    """
    Write one CSV per batch table, with one row per input project.
    """
    rows = {name: [] for name in TABLES}
    for report in reports:
        for name, row in table_rows(report).items():
            rows[name].append(row)
    return [
        write_csv(pathlib.Path(outdir) / '{0}.csv'.format(name), header, rows[name], log=log)
        for name, header in TABLES.items()]


def markdown(report):
    lines = ['# {0}\n'.format(report.project)]
    if report.status != 'ok':
        lines.append('**Status:** {0}\n'.format(report.status))
    for w in report.warnings:
        lines.append('- {0}'.format(w))
    if report.warnings:
        lines.append('')

    if report.bass:
        lines.append('## Engagement\n')
        t = Table('p', 'q', 'm', 'R²', 'valid')
        b = report.bass
        t.append([
            fmt(b.p, '.5f'), fmt(b.q, '.5f'), fmt(b.m, '.3f'), fmt(b.r_squared, '.4f'), b.valid])
        lines.append(t.render() + '\n')
    if report.growth:
        lines.append('## Growth\n')
        t = Table('gamma', 'lambda', 'phi', 'RMSE')
        g = report.growth
        t.append([fmt(v, '.4g') for v in (g.gamma, g.lam, g.phi, g.rmse)])
        lines.append(t.render() + '\n')
    if report.series is not None and len(report.series) >= 3:
        lines.append('## Trend\n')
        t = Table('target', 'c2', 'c1', 'c0', 'R²')
        for target in TARGETS:
            tr = poly_trend(report.series, target=target)
            t.append([target] + [fmt(v, '.4g') for v in (tr.c2, tr.c1, tr.c0, tr.r_squared)])
        lines.append(t.render() + '\n')
    if report.forecast:
        fc = report.forecast
        lines.append('## Forecast\n')
        lines.append('- months observed: {0}'.format(fc.t_current))
        lines.append('- months to maturity: {0:.2f} ({1:.2f} years remaining)'.format(
            fc.T_maturation, fc.remaining_years))
        lines.append('- lifetime developer-months: {0:,.0f}'.format(fc.lifetime_dev_months))
        lines.append('- lifetime growth: {0:,.0f} lines\n'.format(fc.lifetime_growth))
    if report.stability and report.stability.growth_divergence is not None:
        st = report.stability
        lines.append('## Stability\n')
        lines.append('- refit on {0} of {1} months'.format(
            st.months_truncated, st.months_full))
        lines.append('- growth divergence: {0:.2%}'.format(st.growth_divergence))
        lines.append('- engagement divergence: {0:.2%}\n'.format(st.engagement_divergence))
    if report.valuation:
        v = report.valuation
        lines.append('## Valuation\n')
        t = Table('', v.currency)
        t.append(['supply side, current', '{0:,.2f}'.format(v.supply_current)])
        t.append(['supply side, lifetime', '{0:,.2f}'.format(v.supply_lifetime)])
        if v.demand_value_lifetime is not None:
            t.append(['demand side, lifetime', '{0:,.2f}'.format(v.demand_value_lifetime)])
        lines.append(t.render() + '\n')
        if v.remaining_downloads is not None:
            lines.append('- downloads until maturity: {0:,}'.format(v.remaining_downloads))
    return '\n'.join(lines)
