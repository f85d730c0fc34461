"""
Commit history from the GitHub REST API.

Commits are listed page by page; line statistics need one request per commit and are fetched
with bounded concurrency. Every new commit is appended to the local cache as soon as it is
complete, so an interrupted fetch resumes where it stopped.
"""
import os
import time
import logging
import pathlib
import datetime
from concurrent.futures import ThreadPoolExecutor

import requests

from osslifecycle.errors import (
    AuthenticationError, RateLimitError, RepositoryNotFound, NetworkError,
)
from osslifecycle.ingest import (
    load_commit_log, append_commit_log, make_commit, BOT_SUFFIXES,
)
from osslifecycle.util import progressbar

__all__ = ['TOKEN_ENV', 'GitHub', 'fetch_commits', 'cache_path']

log = logging.getLogger(__name__)

API_URL = 'https://api.github.com'
TOKEN_ENV = 'GITHUB_TOKEN'
PER_PAGE = 100
MAX_RETRIES = 3
MAX_BACKOFF = 60


def cache_path(cache_dir, repo):
    return pathlib.Path(cache_dir) / '{0}.jsonl'.format(repo.replace('/', '-'))


def split_repo(repo):
    owner, _, name = repo.strip().strip('/').partition('/')
    if not owner or not name or '/' in name:
        raise ValueError('invalid repository {0!r}, expected owner/name'.format(repo))
    return owner, name


class GitHub(object):
    def __init__(self, token=None, session=None, credential=None, sleep=time.sleep,
                 max_retries=MAX_RETRIES):
        self.token = token
        self.credential = credential or ('--token' if token else TOKEN_ENV)
        self.session = session or requests.Session()
        self.sleep = sleep
        self.max_retries = max_retries

    @property
    def headers(self):
        headers = {'Accept': 'application/vnd.github+json'}
        if self.token:
            headers['Authorization'] = 'Bearer {0}'.format(self.token)
        return headers

    @staticmethod
    def _reset_time(response):
        reset = response.headers.get('X-RateLimit-Reset')
        if reset:
            try:
                return datetime.datetime.fromtimestamp(int(reset), tz=datetime.timezone.utc)
            except ValueError:  # pragma: no cover
                return None

    @staticmethod
    def _rate_limited(response):
        if response.status_code == 429:
            return True
        return response.status_code == 403 \
            and response.headers.get('X-RateLimit-Remaining') == '0'

    def get(self, url, repo, params=None):
        """
        GET with bounded retries on rate limiting; returns the response or raises.
        """
        for attempt in range(self.max_retries + 1):
            try:
                response = self.session.get(
                    url, params=params, headers=self.headers, timeout=30)
            except requests.RequestException as e:
                raise NetworkError('request to {0} failed: {1}'.format(url, e))
            if self._rate_limited(response):
                reset = self._reset_time(response)
                if attempt == self.max_retries:
                    raise RateLimitError(reset)
                backoff = min(2 ** attempt, MAX_BACKOFF)
                if response.headers.get('Retry-After'):
                    backoff = min(float(response.headers['Retry-After']), MAX_BACKOFF)
                log.warning('rate limited by GitHub, retrying in {0}s'.format(backoff))
                self.sleep(backoff)
                continue
            if response.status_code == 401 or response.status_code == 403:
                raise AuthenticationError(self.credential, response.status_code)
            if response.status_code == 404:
                raise RepositoryNotFound(repo)
            if response.status_code >= 400 and response.status_code != 409:
                raise NetworkError('GitHub returned HTTP {0} for {1}'.format(
                    response.status_code, url))
            return response

    def iter_commit_pages(self, repo, since=None):
        owner, name = split_repo(repo)
        url = '{0}/repos/{1}/{2}/commits'.format(API_URL, owner, name)
        params = {'per_page': PER_PAGE}
        if since:
            params['since'] = '{0}-01T00:00:00Z'.format(since)
        while url:
            response = self.get(url, repo, params=params)
            if response.status_code == 409:
                # GitHub answers 409 for repositories without commits.
                return
            yield response.json()
            url = (response.links or {}).get('next', {}).get('url')
            params = None

    def commit_detail(self, repo, sha):
        owner, name = split_repo(repo)
        return self.get(
            '{0}/repos/{1}/{2}/commits/{3}'.format(API_URL, owner, name, sha), repo).json()


def _record(detail, bot_suffixes):
    author = detail['commit']['author'] or {}
    stats = detail.get('stats') or {}
    return make_commit(
        detail['sha'],
        author.get('name'),
        author.get('email'),
        author['date'],
        stats.get('additions', 0),
        stats.get('deletions', 0),
        parents=len(detail.get('parents') or []) or 1,
        bot_suffixes=bot_suffixes)


def fetch_commits(repo, cache_dir, token=None, since=None, concurrency=4, session=None,
                  bot_suffixes=BOT_SUFFIXES, sleep=time.sleep, progress=False):
    """
    Yield all commits of `repo`: the cached ones first, then newly fetched ones.

    :param token: API token; falls back to the `GITHUB_TOKEN` environment variable.
    :param since: optional YYYY-MM; only commits from that month on are listed.
    """
    credential = '--token' if token else TOKEN_ENV
    token = token or os.environ.get(TOKEN_ENV)
    client = GitHub(token=token, session=session, credential=credential, sleep=sleep)

    path = cache_path(cache_dir, repo)
    path.parent.mkdir(parents=True, exist_ok=True)
    seen = set()
    if path.exists():
        for commit in load_commit_log(path, bot_suffixes=bot_suffixes):
            if commit.sha not in seen:
                seen.add(commit.sha)
                yield commit
    else:
        path.touch()

    pending = []
    for page in client.iter_commit_pages(repo, since=since):
        for item in page:
            if item['sha'] not in seen:
                seen.add(item['sha'])
                pending.append(item['sha'])
    log.info('{0}: {1} cached, {2} new commits'.format(
        repo, len(seen) - len(pending), len(pending)))

    if not pending:
        return
    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool, \
            path.open('a', encoding='utf8') as fp:
        details = pool.map(lambda sha: client.commit_detail(repo, sha), pending)
        if progress:
            details = progressbar(details, total=len(pending), desc=repo)
        # Results arrive in listing order; the cache is only written from this thread.
        for detail in details:
            commit = _record(detail, bot_suffixes)
            append_commit_log(fp, commit)
            yield commit
