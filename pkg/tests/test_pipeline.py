import pytest

from osslifecycle.config import RunConfig
from osslifecycle.errors import DataError
from osslifecycle.models import MonthlySeries
from osslifecycle.ingest import dump_commit_log
from osslifecycle.providers.github import cache_path
from osslifecycle.pipeline import (
    load_series, analyze, analyze_safe, analyze_many, project_name, INVALID_FIT,
)
from osslifecycle.forecast import maturation_crossing
from osslifecycle.valuation import Downloads


@pytest.fixture
def cfg(tmp_path):
    return RunConfig(cache_dir=tmp_path / 'cache', output_dir=tmp_path / 'out')


def test_load_series_csv(series_dir, cfg):
    s = load_series(str(series_dir / 'alpha.csv'), cfg)
    assert s.project == 'alpha'
    assert len(s) == 36

    cfg = RunConfig(cutoff_month='2021-06')
    assert load_series(str(series_dir / 'alpha.csv'), cfg).months[-1] == '2021-06'


def test_load_series_commits(tmp_path, cfg, commits):
    p = dump_commit_log(commits, tmp_path / 'p.jsonl')
    s = load_series(str(p), cfg)
    assert s.project == 'p'
    assert list(s.L) == [2, 0, 1]

    dump_commit_log(commits, cache_path(cfg.cache_dir, 'o/r'))
    s = load_series('o/r', cfg)
    assert s.project == 'o/r'
    assert list(s.dA) == [24, 0, 10]

    with pytest.raises(DataError, match='run fetch first'):
        load_series('o/missing', cfg)


def test_analyze(small_series, cfg):
    downloads = {'small': Downloads('small', 'small', 6000)}
    report = analyze(small_series, cfg, stages=('fit', 'value'), downloads=downloads)
    assert report.status == 'ok'
    assert report.bass.valid
    assert report.forecast is not None and not report.forecast.already_mature
    assert report.valuation.downloads_6mo == 6000
    assert report.stability is None

    report = analyze(small_series, cfg, stages=('fit',))
    assert report.forecast is None and report.valuation is None


def test_analyze_mature(synthetic_series, cfg):
    report = analyze(synthetic_series, cfg, stages=('fit', 'project'))
    assert report.forecast.already_mature
    assert 'project already mature' in report.warnings


def test_analyze_invalid_fit(accelerating_series, cfg):
    report = analyze(accelerating_series, cfg)
    assert report.status == INVALID_FIT
    assert not report.bass.valid
    assert report.forecast is None
    assert report.warnings and 'engagement fit invalid' in report.warnings[0]
    assert report.as_dict()['fitted']['bass']['valid'] is False

    T = maturation_crossing(report.bass, threshold=cfg.threshold)
    if T is None:
        assert report.maturation is None
    else:
        assert report.maturation.T == T
        assert any('from an invalid engagement fit' in w for w in report.warnings)


def test_analyze_empty(cfg):
    with pytest.raises(DataError, match='empty'):
        analyze(MonthlySeries.empty('x'), cfg)


def test_analyze_safe_and_many(series_dir, cfg):
    report = analyze_safe('o/missing', cfg)
    assert report.status.startswith('error')
    assert report.bass is None

    projects = [str(series_dir / '{0}.csv'.format(n)) for n in ['gamma', 'alpha']] + ['o/x']
    reports = analyze_many(projects, cfg, stages=('fit',))
    assert [r.project for r in reports] == ['gamma', 'alpha', 'o/x']
    assert [r.status for r in reports][:2] == ['ok', 'ok']


def test_analyze_safe_file_name(tmp_path, cfg):
    p = tmp_path / 'empty.csv'
    p.write_text('month,developers,lines_changed\n', encoding='utf8')
    report = analyze_safe(str(p), cfg)
    assert report.project == 'empty'
    assert 'empty series' in report.status

    report = analyze_safe(str(tmp_path / 'missing.jsonl'), cfg)
    assert report.project == 'missing'
    assert project_name('o/r') == 'o/r'
