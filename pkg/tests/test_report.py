import re

import pytest
import numpy as np
from csvw.dsv import reader
from clldutils import jsonlib

from osslifecycle.config import RunConfig
from osslifecycle.models import LifecycleReport, Maturation
from osslifecycle.pipeline import analyze
from osslifecycle.report import (
    TABLES, STABILITY_HEADER, write_json, table_rows, write_tables, markdown, fmt,
    engagement_curve_rows, growth_curve_rows, normalized_curve_rows, phase_rows,
    stability_rows, project_dir,
)


@pytest.fixture(scope='module')
def report(small_series):
    return analyze(small_series, RunConfig(), stages=('fit', 'project', 'value'))


def test_write_json(tmp_path, report):
    p = project_dir(tmp_path, 'o/small') / 'report.json'
    assert p.parent.name == 'o-small'

    write_json(report, tmp_path)
    d = jsonlib.load(tmp_path / 'small' / 'report.json')
    assert set(d) == {'project', 'fitted', 'forecast', 'maturation', 'stability', 'valuation'}
    assert set(d['fitted']) == {'bass', 'growth'}
    assert set(d['forecast']) == {
        't_current', 'T_maturation', 'remaining_years', 'lifetime_dev_months', 'lifetime_growth'}
    assert d['stability'] is None and d['maturation'] is None
    assert d['forecast']['t_current'] == 36
    assert d['valuation']['currency'] == 'USD'


def test_curve_rows(report, small_series):
    rows = list(engagement_curve_rows(small_series, report.bass))
    assert len(rows) == 36
    assert rows[0][0] == '2020-01'

    rows = list(growth_curve_rows(small_series, report.bass, report.growth))
    assert len(rows) == 36
    assert rows[0][2] == pytest.approx(report.growth.A0)
    assert all(a <= b for a, b in zip([r[2] for r in rows], [r[2] for r in rows[1:]]))

    rows = list(phase_rows(report.forecast))
    assert rows[0][0] == 0 and len(rows) == len(report.forecast.phase)


def test_normalized_curve_rows(small_bass):
    samples = normalized_curve_rows(small_bass)
    assert any(s == pytest.approx((1.0, 1.0)) for s in samples)
    assert samples[0][0] == 0
    assert max(f for _, f in samples) == pytest.approx(1.0)
    assert np.all(np.diff([t for t, _ in samples]) > 0)


def test_table_rows(report):
    rows = table_rows(report)
    assert set(rows) == set(TABLES)
    for name, header in TABLES.items():
        assert len(rows[name]) == len(header)
    assert rows['engagement'][0] == 'small'
    assert rows['engagement'][-1] == 'ok'
    assert rows['demand'][-1] == 'no download data'

    failed = table_rows(LifecycleReport('x', status='error: no cached commits'))
    for name, header in TABLES.items():
        assert len(failed[name]) == len(header)
        assert failed[name][0] == 'x'
        assert failed[name][-1] == 'error: no cached commits'


def test_write_tables(tmp_path, report):
    paths = write_tables([report, LifecycleReport('x', status='invalid fit')], tmp_path)
    assert sorted(p.name for p in paths) == ['demand.csv', 'engagement.csv', 'valuation.csv']
    rows = list(reader(tmp_path / 'valuation.csv', dicts=True))
    assert [r['status'] for r in rows] == ['ok', 'invalid fit']


def test_markdown(report):
    md = markdown(report)
    assert md.startswith('# small')
    for section in ['## Engagement', '## Growth', '## Forecast', '## Valuation']:
        assert section in md
    assert 'supply side, lifetime' in md
    assert '## Stability' not in md

    md = markdown(LifecycleReport('x', status='invalid fit', warnings=['negative p']))
    assert '**Status:** invalid fit' in md
    assert '- negative p' in md
    assert '## Trend' not in md


def test_markdown_numbers(report):
    md = markdown(report)
    engagement = md.split('## Engagement')[1].split('##')[0]
    numbers = [float(n) for n in re.findall(r'-?\d+\.\d+', engagement)]
    assert any(n == pytest.approx(report.bass.p, rel=1e-3) for n in numbers)
    assert any(n == pytest.approx(report.bass.m, rel=1e-3) for n in numbers)

    assert '## Trend' in md
    trend = md.split('## Trend')[1].split('##')[0]
    assert 'cumulative_growth' in trend and 'developers' in trend


def test_fmt():
    assert fmt(None) == ''
    assert fmt(0.000840123) == '0.00084012'
    assert fmt(np.float64(9448.6152), '.3f') == '9448.615'
    assert fmt(36) == '36'
    assert fmt('ok') == 'ok'


def test_table_rows_invalid_fit(accelerating_series):
    report = LifecycleReport(
        'jax', series=accelerating_series, status='invalid fit',
        maturation=Maturation(T=-12.5))
    row = dict(zip(TABLES['engagement'], table_rows(report)['engagement']))
    assert row['T'] == -12.5
    assert row['yrs'] == pytest.approx((-12.5 - 15) / 12, abs=1e-5)
    assert report.as_dict()['maturation'] == {'T': -12.5, 'threshold': 0.5}


def test_stability_rows(small_series):
    report = analyze(small_series, RunConfig(), stages=('fit', 'stability'))
    st = report.stability
    rows = list(stability_rows(report))
    assert len(rows) == len(st.grid)
    assert all(len(r) == len(STABILITY_HEADER) for r in rows)
    assert rows[0][0] == 0
    assert rows[0][-1] == small_series.A[0]
    assert rows[35][-1] == small_series.A[35]
    if len(rows) > 36:
        assert rows[36][-1] is None
    assert [r[3] for r in rows] == list(st.A_full)
