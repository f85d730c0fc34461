import math
import datetime

import pytest

from osslifecycle.models import BassParams, GrowthParams, MonthlySeries
from osslifecycle.ingest import make_commit, write_series
from osslifecycle.synthetic import lifecycle_series
from osslifecycle.engagement import fit_bass
from osslifecycle.growth import calibrate_growth
from osslifecycle.util import month_range

API = 'https://api.github.com'


@pytest.fixture(scope='session')
def pandas_bass():
    return BassParams.from_pqm(0.00084, 0.02686, 9448.615)


@pytest.fixture(scope='session')
def pandas_growth():
    return GrowthParams(gamma=601657.05, lam=1.301, phi=-0.552, A0=10000)


@pytest.fixture(scope='session')
def pandas_series(pandas_bass, pandas_growth):
    """
    199 months generated from the published pandas parameters with 2% noise.
    """
    return lifecycle_series(
        pandas_bass, pandas_growth, 199,
        project='pandas', start='2009-07', noise=0.02, seed=2026, integer=True)


@pytest.fixture(scope='session')
def pandas_fit(pandas_series):
    bass = fit_bass(pandas_series)
    return bass, calibrate_growth(pandas_series, bass)


@pytest.fixture(scope='session')
def synthetic_bass():
    return BassParams.from_pqm(0.01, 0.10, 1000)


@pytest.fixture(scope='session')
def synthetic_growth():
    return GrowthParams(gamma=100, lam=0.5, phi=0.3, A0=10000)


@pytest.fixture(scope='session')
def synthetic_series(synthetic_bass, synthetic_growth):
    return lifecycle_series(synthetic_bass, synthetic_growth, 120, project='synthetic')


@pytest.fixture(scope='session')
def small_bass():
    return BassParams.from_pqm(0.02, 0.15, 400)


@pytest.fixture(scope='session')
def small_series(small_bass):
    return lifecycle_series(
        small_bass, GrowthParams(gamma=50, lam=0.6, phi=0.2, A0=200), 36,
        project='small', start='2020-01')


@pytest.fixture
def series_dir(tmp_path, small_bass):
    """
    Three monthly series files usable as command line projects.
    """
    d = tmp_path / 'series'
    for i, name in enumerate(['alpha', 'beta', 'gamma']):
        s = lifecycle_series(
            small_bass, GrowthParams(gamma=50 + 10 * i, lam=0.6, phi=0.2, A0=200), 36,
            project=name, start='2020-01', noise=0.02, seed=i, integer=True)
        write_series(s, d / '{0}.csv'.format(name))
    return d


@pytest.fixture
def accelerating_series():
    """
    Developer counts whose growth rate keeps increasing; no diffusion curve fits this.
    """
    L = [round(math.exp(0.05 * k * k)) for k in range(15)]
    months = month_range('2018-11', '2020-01')
    return MonthlySeries('jax', months, L, [100 * v for v in L])


@pytest.fixture
def commits():
    """
    Five commits: three by dev-a and one by dev-b in January, one by dev-a in March.
    """
    def ts(m, d):
        return datetime.datetime(2020, m, d, tzinfo=datetime.timezone.utc)

    return [
        make_commit('c1', 'Dev A', 'dev-a@example.org', ts(1, 2), 10, 5),
        make_commit('c2', 'Dev A', 'DEV-A@example.org', ts(1, 10), 1, 0),
        make_commit('c3', 'Dev B', 'dev-b@example.org', ts(1, 20), 0, 4),
        make_commit('c4', 'dev a', 'dev-a@example.org', ts(1, 31), 2, 2),
        make_commit('c5', 'Dev A', 'dev-a@example.org', ts(3, 1), 7, 3),
    ]


class FakeResponse(object):
    def __init__(self, status_code=200, json=None, headers=None, links=None):
        self.status_code = status_code
        self._json = json
        self.headers = headers or {}
        self.links = links or {}

    def json(self):
        return self._json


class FakeSession(object):
    """
    Serves canned responses by URL; a list of responses is consumed one per request.
    """
    def __init__(self, routes):
        self.routes = routes
        self.calls = []

    def get(self, url, params=None, headers=None, timeout=None):
        self.calls.append((url, params, headers))
        res = self.routes[url]
        if isinstance(res, list):
            return res.pop(0) if len(res) > 1 else res[0]
        return res


def commit_detail(sha, name='Dev', email=None, date='2020-01-15T00:00:00Z', add=10, delete=5,
                  parents=1):
    return {
        'sha': sha,
        'commit': {'author': {'name': name, 'email': email or '{0}@example.org'.format(
            name.lower()), 'date': date}},
        'stats': {'additions': add, 'deletions': delete, 'total': add + delete},
        'parents': [{'sha': 'p{0}'.format(i)} for i in range(parents)],
    }


@pytest.fixture
def github_routes():
    """
    Three pages of two commits each for o/r.
    """
    base = API + '/repos/o/r/commits'
    routes = {}
    shas = ['s{0}'.format(i) for i in range(6)]
    for page in range(3):
        url = base if page == 0 else '{0}?page={1}'.format(base, page + 1)
        links = {'next': {'url': '{0}?page={1}'.format(base, page + 2)}} if page < 2 else {}
        routes[url] = FakeResponse(
            json=[{'sha': sha} for sha in shas[2 * page:2 * page + 2]], links=links)
    for i, sha in enumerate(shas):
        routes['{0}/{1}'.format(base, sha)] = FakeResponse(json=commit_detail(
            sha,
            name='Dev {0}'.format(i % 2),
            email='dev{0}@example.org'.format(i % 2),
            date='2020-0{0}-15T12:00:00Z'.format(1 + i // 2)))
    return routes


@pytest.fixture
def fake_session(github_routes):
    return FakeSession(github_routes)


@pytest.fixture
def make_response():
    return FakeResponse


@pytest.fixture
def make_session():
    return FakeSession
