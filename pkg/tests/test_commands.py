import re
import shlex
import logging
import argparse

import pytest
from csvw import dsv
from clldutils import jsonlib

from osslifecycle.__main__ import main
from osslifecycle import cli_util
from osslifecycle.ingest import write_series, load_commit_log
from osslifecycle.providers.github import cache_path


def test_warning(caplog):
    warnings = []
    cli_util.warning(
        argparse.Namespace(log=logging.getLogger(__name__)),
        'message in a bottle',
        project='o/r',
        warnings=warnings,
    )
    assert caplog.records[-1].levelname == 'WARNING'
    assert len(warnings) == 1 and 'message in a bottle' in warnings[0]


def _main(cmd, **kw):
    return main(shlex.split(cmd), log=logging.getLogger(__name__), **kw)


@pytest.fixture
def out(tmp_path):
    return tmp_path / 'out'


def test_help(capsys):
    assert main([], log=logging.getLogger(__name__)) == 1
    assert 'usage' in capsys.readouterr().out


def test_fit(series_dir, out, capsys):
    assert _main('fit {0} --output {1}'.format(series_dir / 'alpha.csv', out)) == 0
    assert 'alpha' in capsys.readouterr().out
    for name in ['report.json', 'series.csv', 'engagement.csv', 'growth.csv', 'report.md']:
        assert out.joinpath('alpha', name).exists()
    d = jsonlib.load(out / 'alpha' / 'report.json')
    assert d['fitted']['bass']['valid'] is True
    assert d['forecast'] is None
    # single projects get no batch tables
    assert not out.joinpath('engagement.csv').exists()


def test_fit_invalid(tmp_path, accelerating_series, out):
    p = write_series(accelerating_series, tmp_path / 'jax.csv')
    assert _main('fit {0} --output {1}'.format(p, out)) == 2
    assert jsonlib.load(out / 'jax' / 'report.json')['fitted']['bass']['valid'] is False
    assert not out.joinpath('jax', 'engagement.csv').exists()
    d = jsonlib.load(out / 'jax' / 'report.json')
    assert d['forecast'] is None
    assert 'maturation' in d


def test_fit_empty(tmp_path, out):
    p = tmp_path / 'empty.csv'
    p.write_text('month,developers,lines_changed\n', encoding='utf8')
    assert _main('fit {0} --output {1}'.format(p, out)) == 2
    assert jsonlib.load(out / 'empty' / 'report.json')['fitted']['bass'] is None


def test_bad_arguments(series_dir, out, capsys):
    assert _main('fit --output {0}'.format(out)) == 1
    assert 'no project' in capsys.readouterr().out
    assert _main('fit {0} --cutoff 2020-13'.format(series_dir / 'alpha.csv')) == 1
    assert '2020-13' in capsys.readouterr().out


def test_internal_errors_propagate(series_dir, out, mocker):
    mocker.patch('osslifecycle.cli_util.print_summary', side_effect=ValueError('boom'))
    with pytest.raises(ValueError, match='boom'):
        _main('fit {0} --output {1}'.format(series_dir / 'alpha.csv', out))


def test_fit_pandas(tmp_path, pandas_series, out, capsys):
    p = write_series(pandas_series, tmp_path / 'pandas.csv')
    assert _main('fit {0} --output {1}'.format(p, out)) == 0
    line = [li for li in capsys.readouterr().out.splitlines() if 'pandas' in li][0]
    numbers = [float(n) for n in re.findall(r'\d+(?:\.\d+)?', line)]
    assert any(n == pytest.approx(0.00084, rel=0.05) for n in numbers)
    assert any(n == pytest.approx(9448.6, rel=0.05) for n in numbers)
    bass = jsonlib.load(out / 'pandas' / 'report.json')['fitted']['bass']
    assert bass['p'] == pytest.approx(0.00084, rel=0.05)
    assert bass['q'] == pytest.approx(0.02686, rel=0.05)
    assert bass['m'] == pytest.approx(9448.6, rel=0.05)


def test_project(series_dir, out, capsys):
    cmd = 'project {0} --output {1} --threshold 1.0'.format(series_dir / 'alpha.csv', out)
    assert _main(cmd) == 0
    d = jsonlib.load(out / 'alpha' / 'report.json')
    assert d['forecast']['t_current'] == 36
    assert d['forecast']['T_maturation'] > 0
    assert out.joinpath('alpha', 'phase.csv').exists()


def test_value_batch(series_dir, tmp_path, out):
    downloads = tmp_path / 'downloads.csv'
    downloads.write_text(
        'project,package,downloads_6mo\nalpha,alpha,6000\n', encoding='utf8')
    batch = tmp_path / 'projects.txt'
    batch.write_text(
        '# series\n{0}\n{1}\n'.format(series_dir / 'beta.csv', series_dir / 'gamma.csv'),
        encoding='utf8')
    assert _main('value {0} --batch {1} --output {2} --downloads {3}'.format(
        series_dir / 'alpha.csv', batch, out, downloads)) == 0

    rows = list(dsv.reader(out / 'valuation.csv', dicts=True))
    assert [r['project'] for r in rows] == ['alpha', 'beta', 'gamma']
    assert all(r['status'] == 'ok' for r in rows)
    demand = {r['project']: r for r in dsv.reader(out / 'demand.csv', dicts=True)}
    assert demand['alpha']['downloads_6mo'] == '6000'
    assert demand['beta']['status'] == 'no download data'

    d = jsonlib.load(out / 'beta' / 'report.json')
    assert d['valuation']['downloads_6mo'] is None
    assert d['valuation']['supply_current'] > 0


def test_report(series_dir, out):
    cmd = 'report {0} --output {1} --normalized --fraction 0.8'.format(
        series_dir / 'alpha.csv', out)
    assert _main(cmd) == 0
    d = jsonlib.load(out / 'alpha' / 'report.json')
    assert d['stability']['fraction'] == 0.8
    assert d['stability']['months_truncated'] == 28
    assert d['valuation']['supply_lifetime'] >= d['valuation']['supply_current']

    samples = [
        (float(r['t_prime']), float(r['f_prime']))
        for r in dsv.reader(out / 'alpha' / 'normalized.csv', dicts=True)]
    assert any(s == pytest.approx((1.0, 1.0)) for s in samples)
    assert '## Valuation' in out.joinpath('alpha', 'report.md').read_text(encoding='utf8')

    rows = list(dsv.reader(out / 'alpha' / 'stability.csv', dicts=True))
    assert list(rows[0]) == ['month', 'L_full', 'L_truncated', 'A_full', 'A_truncated', 'A']
    assert rows[0]['month'] == '0' and float(rows[0]['A']) > 0
    assert len(rows) >= 36


def test_stability(series_dir, out, capsys):
    assert _main('stability {0} --output {1}'.format(series_dir / 'alpha.csv', out)) == 0
    assert 'growth divergence' in capsys.readouterr().out
    assert jsonlib.load(out / 'alpha' / 'report.json')['stability']['months_truncated'] == 27


def test_missing_cache(tmp_path, out):
    assert _main('fit o/r --cache-dir {0} --output {1}'.format(tmp_path, out)) == 2
    assert jsonlib.load(out / 'o-r' / 'report.json')['project'] == 'o/r'


def test_fetch(mocker, tmp_path, fake_session, capsys, monkeypatch):
    monkeypatch.delenv('GITHUB_TOKEN', raising=False)
    mocker.patch('osslifecycle.providers.github.requests.Session', return_value=fake_session)
    assert _main('fetch o/r --cache-dir {0}'.format(tmp_path)) == 0
    assert 'o/r: 6 commits, 3 months' in capsys.readouterr().out
    cached = cache_path(tmp_path, 'o/r')
    content = cached.read_text(encoding='utf8')
    assert len(load_commit_log(cached)) == 6

    assert _main('fetch o/r --cache-dir {0}'.format(tmp_path)) == 0
    assert cached.read_text(encoding='utf8') == content

    # the cached commits feed the analysis
    assert _main('fit o/r --cache-dir {0} --output {1}'.format(tmp_path, tmp_path / 'out')) == 2


def test_fetch_unauthorized(mocker, tmp_path, make_session, make_response, monkeypatch):
    monkeypatch.delenv('GITHUB_TOKEN', raising=False)
    session = make_session(
        {'https://api.github.com/repos/o/r/commits': make_response(status_code=401)})
    mocker.patch('osslifecycle.providers.github.requests.Session', return_value=session)
    assert _main('fetch o/r --cache-dir {0}'.format(tmp_path)) == 3
